//! Exact linear feasibility by Fourier–Motzkin elimination.
//!
//! Equalities are eliminated first by Gaussian elimination; the remaining
//! inequalities are projected one variable at a time. Each projection stage is
//! kept so that a feasible point can be recovered by back-substitution.

use std::collections::BTreeSet;

use num_traits::{One, Signed, Zero};

use crate::linalg::{lcm_of_denominators, rref};
use crate::Rational;

/// `coeffs · x <= rhs`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Inequality {
    pub coeffs: Vec<Rational>,
    pub rhs: Rational,
}

/// `coeffs · x == rhs`.
#[derive(Clone, Debug)]
pub struct Equality {
    pub coeffs: Vec<Rational>,
    pub rhs: Rational,
}

#[derive(Clone, Debug, Default)]
pub struct LinearSystem {
    pub vars: usize,
    pub inequalities: Vec<Inequality>,
    pub equalities: Vec<Equality>,
}

impl LinearSystem {
    pub fn new(vars: usize) -> Self {
        LinearSystem { vars, ..Default::default() }
    }

    pub fn le(&mut self, coeffs: Vec<Rational>, rhs: Rational) -> &mut Self {
        self.inequalities.push(Inequality { coeffs, rhs });
        self
    }

    pub fn ge(&mut self, coeffs: Vec<Rational>, rhs: Rational) -> &mut Self {
        self.le(coeffs.into_iter().map(|c| -c).collect(), -rhs)
    }

    pub fn eq(&mut self, coeffs: Vec<Rational>, rhs: Rational) -> &mut Self {
        self.equalities.push(Equality { coeffs, rhs });
        self
    }

    pub fn is_feasible(&self) -> bool {
        self.feasible_point().is_some()
    }

    /// Some point satisfying every constraint, or `None` if there is none.
    pub fn feasible_point(&self) -> Option<Vec<Rational>> {
        let n = self.vars;
        // Solve the equalities: pivot variables become affine in the free ones.
        let mut aug: Vec<Vec<Rational>> = self
            .equalities
            .iter()
            .map(|e| {
                let mut r = e.coeffs.clone();
                r.push(e.rhs.clone());
                r
            })
            .collect();
        let pivots = rref(&mut aug);
        if pivots.contains(&n) {
            return None;
        }
        let free: Vec<usize> = (0..n).filter(|v| !pivots.contains(v)).collect();
        // x_pivot = rhs - sum_f a_f x_f
        let substitute = |coeffs: &[Rational], rhs: &Rational| -> Inequality {
            let mut c: Vec<Rational> = free.iter().map(|&f| coeffs[f].clone()).collect();
            let mut b = rhs.clone();
            for (row, &p) in aug.iter().zip(&pivots) {
                let a = &coeffs[p];
                if a.is_zero() {
                    continue;
                }
                b -= a * &row[n];
                for (k, &f) in free.iter().enumerate() {
                    c[k] -= a * &row[f];
                }
            }
            Inequality { coeffs: c, rhs: b }
        };
        let reduced: Vec<Inequality> =
            self.inequalities.iter().map(|q| substitute(&q.coeffs, &q.rhs)).collect();

        let free_values = eliminate_and_solve(reduced, free.len())?;

        let mut x = vec![Rational::zero(); n];
        for (k, &f) in free.iter().enumerate() {
            x[f] = free_values[k].clone();
        }
        for (row, &p) in aug.iter().zip(&pivots) {
            let mut v = row[n].clone();
            for &f in &free {
                v -= &row[f] * &x[f];
            }
            x[p] = v;
        }
        Some(x)
    }
}

fn normalize(q: Inequality) -> Inequality {
    // Scale to integer coefficients with positive leading magnitude so that
    // duplicates coincide.
    let l = lcm_of_denominators(q.coeffs.iter().chain(std::iter::once(&q.rhs)));
    let scale = Rational::from_integer(l);
    let coeffs: Vec<Rational> = q.coeffs.iter().map(|c| c * &scale).collect();
    let rhs = &q.rhs * &scale;
    let g = coeffs
        .iter()
        .chain(std::iter::once(&rhs))
        .fold(num_bigint::BigInt::zero(), |acc, c| num_integer::Integer::gcd(&acc, c.numer()));
    if g.is_zero() || g.is_one() {
        return Inequality { coeffs, rhs };
    }
    let g = Rational::from_integer(g);
    Inequality { coeffs: coeffs.iter().map(|c| c / &g).collect(), rhs: rhs / &g }
}

/// Eliminates variables `0..vars` in order and back-substitutes.
fn eliminate_and_solve(system: Vec<Inequality>, vars: usize) -> Option<Vec<Rational>> {
    let mut stages: Vec<Vec<Inequality>> = Vec::with_capacity(vars);
    let mut current: BTreeSet<Inequality> = system.into_iter().map(normalize).collect();
    for v in 0..vars {
        let mut pos = Vec::new();
        let mut neg = Vec::new();
        let mut next = BTreeSet::new();
        for q in &current {
            match q.coeffs[v].numer().sign() {
                num_bigint::Sign::Plus => pos.push(q.clone()),
                num_bigint::Sign::Minus => neg.push(q.clone()),
                num_bigint::Sign::NoSign => {
                    next.insert(q.clone());
                }
            }
        }
        for p in &pos {
            for n in &neg {
                // p.c[v] > 0, n.c[v] < 0: combine to cancel v.
                let a = p.coeffs[v].clone();
                let b = -n.coeffs[v].clone();
                let coeffs: Vec<Rational> =
                    p.coeffs.iter().zip(&n.coeffs).map(|(x, y)| x * &b + y * &a).collect();
                let rhs = &p.rhs * &b + &n.rhs * &a;
                next.insert(normalize(Inequality { coeffs, rhs }));
            }
        }
        stages.push(current.into_iter().collect());
        // Drop constraints with no variables left, checking them on the way.
        let mut kept = BTreeSet::new();
        for q in next {
            if q.coeffs.iter().all(Zero::is_zero) {
                if q.rhs.is_negative() {
                    return None;
                }
            } else {
                kept.insert(q);
            }
        }
        current = kept;
    }
    if current.iter().any(|q| q.rhs.is_negative()) {
        return None;
    }

    let mut x = vec![Rational::zero(); vars];
    for v in (0..vars).rev() {
        let mut lower: Option<Rational> = None;
        let mut upper: Option<Rational> = None;
        for q in &stages[v] {
            let c = &q.coeffs[v];
            if c.is_zero() {
                continue;
            }
            let mut rest = q.rhs.clone();
            for (k, xk) in x.iter().enumerate().skip(v + 1) {
                rest -= &q.coeffs[k] * xk;
            }
            let bound = rest / c;
            if c.is_positive() {
                upper = Some(match upper {
                    Some(u) if u < bound => u,
                    _ => bound,
                });
            } else {
                lower = Some(match lower {
                    Some(l) if l > bound => l,
                    _ => bound,
                });
            }
        }
        x[v] = match (lower, upper) {
            (Some(l), Some(u)) => {
                if l > u {
                    return None;
                }
                l
            }
            (Some(l), None) => l,
            (None, Some(u)) => u,
            (None, None) => Rational::zero(),
        };
    }
    Some(x)
}

/// Is `point` in the convex hull of `points`?
pub fn in_convex_hull(point: &[i64], points: &[&[i64]]) -> bool {
    let k = points.len();
    let mut sys = LinearSystem::new(k);
    for i in 0..k {
        let mut c = vec![Rational::zero(); k];
        c[i] = -Rational::one();
        sys.le(c, Rational::zero());
    }
    sys.eq(vec![Rational::one(); k], Rational::one());
    for (a, &target) in point.iter().enumerate() {
        let c = points.iter().map(|p| Rational::from_integer(p[a].into())).collect();
        sys.eq(c, Rational::from_integer(target.into()));
    }
    sys.is_feasible()
}
