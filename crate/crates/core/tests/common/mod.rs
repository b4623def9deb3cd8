//! Shared helpers for integration tests: a tiny evaluator turning closed-form
//! rational functions in `q_1, q_2, ...` into truncated series, so expected
//! values can be written exactly as printed.

#![allow(dead_code)]

use std::sync::Arc;

use mirrorseidel::series_ring::{Coordinates, DivisorSeries, NovikovSeries};
use mirrorseidel::{int, validate_fan, Error, FanInput, Grading, Rational, ToricData};
use rand::Rng;

pub struct Ctx<'a> {
    pub data: &'a ToricData,
    pub order: u32,
}

impl<'a> Ctx<'a> {
    pub fn new(data: &'a ToricData, order: u32) -> Self {
        Ctx { data, order }
    }

    pub fn grading(&self) -> &Arc<Grading> {
        self.data.grading()
    }

    /// `q_i = q^{γ_i}`, 1-based.
    pub fn var(&self, i: usize) -> NovikovSeries {
        let mut x = vec![int(0); self.data.rank()];
        x[i - 1] = int(1);
        let d = self.data.class_from_gamma(&x).expect("basis curve classes are integral");
        NovikovSeries::monomial(self.grading(), self.order, d, int(1))
    }

    pub fn constant(&self, c: i64) -> NovikovSeries {
        NovikovSeries::constant(self.grading(), self.order, int(c))
    }

    /// Evaluates an expression such as `"(1+q1)/(1-q1)^2 - 2 q1 q2"`.
    pub fn eval(&self, text: &str) -> NovikovSeries {
        let tokens = tokenize(text);
        let mut p = Parser { ctx: self, tokens, pos: 0 };
        let v = p.expr();
        assert_eq!(p.pos, p.tokens.len(), "trailing input in {text:?}");
        v
    }

    /// A divisor series from one expression per `p_k` component.
    pub fn vector(&self, comps: &[&str]) -> DivisorSeries {
        assert_eq!(comps.len(), self.data.rank());
        DivisorSeries { components: comps.iter().map(|c| self.eval(c)).collect(), coords: Coordinates::Q }
    }

    /// `f · D_j` (1-based `j`).
    pub fn times_divisor(&self, f: &str, j: usize) -> DivisorSeries {
        let f = self.eval(f);
        DivisorSeries {
            components: self.data.divisor(j - 1).iter().map(|m| f.scale(m)).collect(),
            coords: Coordinates::Q,
        }
    }

    /// `log(y_i / q_i)` from a closed form of the unit `y_i / q_i`.
    pub fn log_of(&self, unit: &str) -> NovikovSeries {
        self.eval(unit).log_unit().expect("closed form is a unit")
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(i64),
    Var(usize),
    Op(char),
}

fn tokenize(text: &str) -> Vec<Tok> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            out.push(Tok::Num(chars[start..i].iter().collect::<String>().parse().unwrap()));
        } else if c == 'q' {
            i += 1;
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            out.push(Tok::Var(chars[start..i].iter().collect::<String>().parse().unwrap()));
        } else if "+-*/^()".contains(c) {
            out.push(Tok::Op(c));
            i += 1;
        } else {
            panic!("unexpected character {c:?} in {text:?}");
        }
    }
    out
}

struct Parser<'c, 'a> {
    ctx: &'c Ctx<'a>,
    tokens: Vec<Tok>,
    pos: usize,
}

impl Parser<'_, '_> {
    fn peek(&self) -> Option<&Tok> {
        self.tokens.get(self.pos)
    }

    fn eat(&mut self, op: char) -> bool {
        if self.peek() == Some(&Tok::Op(op)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> NovikovSeries {
        let mut acc = if self.eat('-') { -&self.term() } else { self.term() };
        loop {
            if self.eat('+') {
                acc = &acc + &self.term();
            } else if self.eat('-') {
                acc = &acc - &self.term();
            } else {
                return acc;
            }
        }
    }

    fn term(&mut self) -> NovikovSeries {
        let mut acc = self.power();
        loop {
            if self.eat('*') {
                acc = &acc * &self.power();
            } else if self.eat('/') {
                let d = self.power().invert_unit().expect("denominator is a unit");
                acc = &acc * &d;
            } else if matches!(self.peek(), Some(Tok::Num(_) | Tok::Var(_) | Tok::Op('('))) {
                acc = &acc * &self.power();
            } else {
                return acc;
            }
        }
    }

    fn power(&mut self) -> NovikovSeries {
        let base = self.atom();
        if self.eat('^') {
            let Some(Tok::Num(k)) = self.peek().cloned() else { panic!("exponent must be an integer") };
            self.pos += 1;
            let mut acc = self.ctx.constant(1);
            for _ in 0..k {
                acc = &acc * &base;
            }
            acc
        } else {
            base
        }
    }

    fn atom(&mut self) -> NovikovSeries {
        match self.peek().cloned() {
            Some(Tok::Num(n)) => {
                self.pos += 1;
                self.ctx.constant(n)
            }
            Some(Tok::Var(i)) => {
                self.pos += 1;
                self.ctx.var(i)
            }
            Some(Tok::Op('(')) => {
                self.pos += 1;
                let v = self.expr();
                assert!(self.eat(')'), "unbalanced parentheses");
                v
            }
            other => panic!("unexpected token {other:?}"),
        }
    }
}

/// First differing `(component, exponent, expected, actual)`, if any.
pub fn first_difference(expected: &DivisorSeries, actual: &DivisorSeries) -> Option<String> {
    for (k, (e, a)) in expected.components.iter().zip(&actual.components).enumerate() {
        if e != a {
            let diff = e - a;
            let (d, _) = diff.leading_term().expect("nonzero difference");
            return Some(format!("p_{} at {d}: expected {}, got {}", k + 1, e.coeff(d), a.coeff(d)));
        }
    }
    None
}

pub fn series_difference(expected: &NovikovSeries, actual: &NovikovSeries) -> Option<String> {
    if expected == actual {
        return None;
    }
    let diff = expected - actual;
    let (d, _) = diff.leading_term().expect("nonzero difference");
    Some(format!("at {d}: expected {}, got {}", expected.coeff(d), actual.coeff(d)))
}

pub fn rational(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

/// Random smooth nef complete fans in the plane: blow-ups of a seed fan
/// followed by a unimodular change of basis.
pub fn random_surface(rng: &mut impl Rng) -> ToricData {
    let seeds: [&[[i64; 2]]; 3] = [
        &[[1, 0], [0, 1], [-1, -1]],
        &[[1, 0], [0, 1], [-1, 0], [0, -1]],
        &[[0, -1], [1, 1], [0, 1], [-1, 1]],
    ];
    let mut rays: Vec<[i64; 2]> = seeds[rng.gen_range(0..seeds.len())].to_vec();
    let steps = rng.gen_range(0..7);
    let mut current = surface(&rays).expect("seed fans are valid");
    for _ in 0..steps {
        let i = rng.gen_range(0..rays.len());
        let k = (i + 1) % rays.len();
        let mut grown = rays.clone();
        grown.insert(i + 1, [rays[i][0] + rays[k][0], rays[i][1] + rays[k][1]]);
        if let Ok(data) = surface(&grown) {
            rays = grown;
            current = data;
        }
    }
    // A random unimodular change of lattice basis.
    let mut g = [[1i64, 0], [0, 1]];
    for _ in 0..rng.gen_range(0..5) {
        let step = if rng.gen_bool(0.5) { [[1, 1], [0, 1]] } else { [[0, -1], [1, 0]] };
        g = [
            [step[0][0] * g[0][0] + step[0][1] * g[1][0], step[0][0] * g[0][1] + step[0][1] * g[1][1]],
            [step[1][0] * g[0][0] + step[1][1] * g[1][0], step[1][0] * g[0][1] + step[1][1] * g[1][1]],
        ];
    }
    let moved: Vec<[i64; 2]> =
        rays.iter().map(|v| [g[0][0] * v[0] + g[0][1] * v[1], g[1][0] * v[0] + g[1][1] * v[1]]).collect();
    surface(&moved).unwrap_or(current)
}

/// Rays in counterclockwise order; consecutive pairs span the maximal cones.
pub fn surface(rays: &[[i64; 2]]) -> Result<ToricData, Error> {
    let mut sorted = rays.to_vec();
    sorted.sort_by(|a, b| {
        let half = |v: &[i64; 2]| if v[1] > 0 || (v[1] == 0 && v[0] > 0) { 0 } else { 1 };
        half(a).cmp(&half(b)).then_with(|| 0.cmp(&(a[0] * b[1] - a[1] * b[0])))
    });
    let m = sorted.len();
    validate_fan(FanInput {
        name: "random surface".into(),
        dimension: 2,
        rays: sorted.iter().map(|r| r.to_vec()).collect(),
        max_cones: (0..m).map(|i| vec![i, (i + 1) % m]).collect(),
        curve_basis: None,
        ample: None,
    })
}
