//! Truncated formal power series with curve-class exponents.
//!
//! A [`NovikovSeries`] is a finite map from [`CurveClass`] to exact rational
//! coefficients, truncated at ample degree `N`. Every series carries the
//! [`Grading`] it was built over; binary operations require equal gradings and
//! equal truncation orders. The operator impls panic on a mismatch, the
//! `checked_*` methods report [`Error::ContextMismatch`].

use std::collections::{BTreeMap, BTreeSet};
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::linalg::{LeftSolver, QMatrix};
use crate::toric_lattice::{CurveClass, Grading};
use crate::{int, Rational};

#[derive(Clone, Debug)]
pub struct NovikovSeries {
    grading: Arc<Grading>,
    order: u32,
    terms: BTreeMap<CurveClass, Rational>,
}

impl PartialEq for NovikovSeries {
    fn eq(&self, other: &Self) -> bool {
        self.same_context(other) && self.terms == other.terms
    }
}

impl Eq for NovikovSeries {}

impl NovikovSeries {
    pub fn zero(grading: &Arc<Grading>, order: u32) -> Self {
        NovikovSeries { grading: Arc::clone(grading), order, terms: BTreeMap::new() }
    }

    pub fn constant(grading: &Arc<Grading>, order: u32, c: Rational) -> Self {
        Self::monomial(grading, order, CurveClass::zero(grading.rank()), c)
    }

    pub fn one(grading: &Arc<Grading>, order: u32) -> Self {
        Self::constant(grading, order, Rational::one())
    }

    /// `c q^d`; zero if `d` lies beyond the truncation. `d` must be effective.
    pub fn monomial(grading: &Arc<Grading>, order: u32, d: CurveClass, c: Rational) -> Self {
        let mut s = Self::zero(grading, order);
        s.add_term(d, c);
        s
    }

    /// Builds a series from arbitrary terms, rejecting exponents outside the
    /// support region (negative degree or negative nef pairing).
    pub fn from_terms(
        grading: &Arc<Grading>,
        order: u32,
        terms: impl IntoIterator<Item = (CurveClass, Rational)>,
    ) -> Result<Self> {
        let mut s = Self::zero(grading, order);
        for (d, c) in terms {
            if d.coords().len() != grading.rank() {
                return Err(Error::InvalidInput(format!("exponent {d} has the wrong length")));
            }
            if (0..grading.rank()).any(|a| grading.nef_pairing(a, &d) < Rational::zero()) {
                return Err(Error::InvalidInput(format!("exponent {d} is not effective")));
            }
            s.add_term(d, c);
        }
        Ok(s)
    }

    /// Adds `c q^d` in place, dropping it past the truncation order.
    pub(crate) fn add_term(&mut self, d: CurveClass, c: Rational) {
        if c.is_zero() || self.grading.scaled_degree(&d) > self.bound() {
            return;
        }
        debug_assert!(self.grading.scaled_degree(&d) >= 0);
        match self.terms.entry(d) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn grading(&self) -> &Arc<Grading> {
        &self.grading
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    fn bound(&self) -> i64 {
        self.grading.degree_bound(self.order)
    }

    pub fn same_context(&self, other: &Self) -> bool {
        self.order == other.order && (Arc::ptr_eq(&self.grading, &other.grading) || self.grading == other.grading)
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.same_context(other) {
            Ok(())
        } else {
            Err(Error::ContextMismatch)
        }
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, d: &CurveClass) -> Rational {
        self.terms.get(d).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn constant_term(&self) -> Rational {
        self.coeff(&CurveClass::zero(self.grading.rank()))
    }

    pub fn terms(&self) -> impl Iterator<Item = (&CurveClass, &Rational)> {
        self.terms.iter()
    }

    /// Terms in canonical order: ample degree, then canonical coordinates.
    pub fn sorted_terms(&self) -> Vec<(&CurveClass, &Rational)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by_key(|(d, _)| self.grading.sort_key(d));
        v
    }

    /// Lowest-degree monomial in canonical order, if any.
    pub fn leading_term(&self) -> Option<(&CurveClass, &Rational)> {
        self.terms.iter().min_by_key(|(d, _)| self.grading.sort_key(d))
    }

    /// Same terms, truncated at a new order.
    pub fn with_order(&self, order: u32) -> Self {
        let mut s = Self::zero(&self.grading, order);
        for (d, c) in &self.terms {
            s.add_term(d.clone(), c.clone());
        }
        s
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let mut s = self.clone();
        for (d, c) in &other.terms {
            s.add_term(d.clone(), c.clone());
        }
        Ok(s)
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let mut s = self.clone();
        for (d, c) in &other.terms {
            s.add_term(d.clone(), -c.clone());
        }
        Ok(s)
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(self.mul_bounded(other, self.bound()))
    }

    fn by_degree(&self) -> Vec<(i64, &CurveClass, &Rational)> {
        let mut v: Vec<_> = self.terms.iter().map(|(d, c)| (self.grading.scaled_degree(d), d, c)).collect();
        v.sort_by_key(|t| t.0);
        v
    }

    /// Product keeping only monomials of scaled degree at most `bound`.
    fn mul_bounded(&self, other: &Self, bound: i64) -> Self {
        let mut s = Self::zero(&self.grading, self.order);
        let a = self.by_degree();
        let b = other.by_degree();
        for &(da, xa, ca) in &a {
            for &(db, xb, cb) in &b {
                if da + db > bound {
                    break;
                }
                s.add_term(xa.add(xb), ca * cb);
            }
        }
        s
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero(&self.grading, self.order);
        }
        NovikovSeries {
            grading: Arc::clone(&self.grading),
            order: self.order,
            terms: self.terms.iter().map(|(d, x)| (d.clone(), x * c)).collect(),
        }
    }

    /// Multiplies every term by `q^d`.
    pub fn shift(&self, d: &CurveClass) -> Self {
        let mut s = Self::zero(&self.grading, self.order);
        for (e, c) in &self.terms {
            s.add_term(e.add(d), c.clone());
        }
        s
    }

    /// Multiplies the coefficient of `q^d` by `f(d)`.
    pub fn map_terms(&self, f: impl Fn(&CurveClass, &Rational) -> Rational) -> Self {
        let mut s = Self::zero(&self.grading, self.order);
        for (d, c) in &self.terms {
            s.add_term(d.clone(), f(d, c));
        }
        s
    }

    /// `q_a ∂/∂q_a` in the nef-basis direction `a`: scales `q^d` by `⟨p_a, d⟩`.
    pub fn log_derivative(&self, a: usize) -> Self {
        let g = Arc::clone(&self.grading);
        self.map_terms(|d, c| c * g.nef_pairing(a, d))
    }

    /// Sum of `self^k / k!`-style powers, `Σ_k coeffs(k) t^k` for nilpotent `t`.
    fn power_series(t: &Self, coeff: impl Fn(u64) -> Rational) -> Self {
        let mut result = Self::constant(&t.grading, t.order, coeff(0));
        let mut power = Self::one(&t.grading, t.order);
        let mut k = 0u64;
        loop {
            power = power.mul_bounded(t, t.bound());
            if power.is_zero() {
                break;
            }
            k += 1;
            let c = coeff(k);
            if !c.is_zero() {
                result = result.checked_add(&power.scale(&c)).expect("same context");
            }
        }
        result
    }

    pub fn exp(&self) -> Result<Self> {
        if !self.constant_term().is_zero() {
            return Err(Error::NonzeroConstantTerm);
        }
        let mut factorial = Rational::one();
        let mut table = vec![Rational::one()];
        let max = self.bound().max(0) as usize + 1;
        for k in 1..=max {
            factorial *= int(k as i64);
            table.push(factorial.recip());
        }
        Ok(Self::power_series(self, |k| table.get(k as usize).cloned().unwrap_or_else(Rational::zero)))
    }

    /// Logarithm of a series with constant term 1.
    pub fn log_unit(&self) -> Result<Self> {
        let c = self.constant_term();
        if !c.is_one() {
            return Err(Error::NonUnit(format!("constant term is {c}, expected 1")));
        }
        let t = self.checked_sub(&Self::one(&self.grading, self.order))?;
        Ok(Self::power_series(&t, |k| {
            if k == 0 {
                Rational::zero()
            } else {
                let sign = if k % 2 == 1 { 1 } else { -1 };
                Rational::new(sign.into(), (k as i64).into())
            }
        }))
    }

    /// Multiplicative inverse of a series with nonzero constant term.
    pub fn invert_unit(&self) -> Result<Self> {
        let c = self.constant_term();
        if c.is_zero() {
            return Err(Error::NonUnit("constant term is zero".into()));
        }
        let ci = c.recip();
        // self = c (1 + t); self^{-1} = c^{-1} Σ (-t)^k.
        let t = self.scale(&ci).checked_sub(&Self::one(&self.grading, self.order))?;
        let inv = Self::power_series(&t, |k| if k % 2 == 0 { Rational::one() } else { -Rational::one() });
        Ok(inv.scale(&ci))
    }
}

impl Add for &NovikovSeries {
    type Output = NovikovSeries;
    fn add(self, rhs: &NovikovSeries) -> NovikovSeries {
        self.checked_add(rhs).expect("series context mismatch")
    }
}

impl Sub for &NovikovSeries {
    type Output = NovikovSeries;
    fn sub(self, rhs: &NovikovSeries) -> NovikovSeries {
        self.checked_sub(rhs).expect("series context mismatch")
    }
}

impl Mul for &NovikovSeries {
    type Output = NovikovSeries;
    fn mul(self, rhs: &NovikovSeries) -> NovikovSeries {
        self.checked_mul(rhs).expect("series context mismatch")
    }
}

impl Neg for &NovikovSeries {
    type Output = NovikovSeries;
    fn neg(self) -> NovikovSeries {
        self.scale(&-Rational::one())
    }
}

/// Which variables a series is written in.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Coordinates {
    /// Mirror coordinates `y`.
    Y,
    /// Novikov variables `q`.
    Q,
}

impl Coordinates {
    pub fn as_str(self) -> &'static str {
        match self {
            Coordinates::Y => "y",
            Coordinates::Q => "q",
        }
    }
}

/// An `H^2`-valued series `Σ_k c_k p_k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DivisorSeries {
    pub components: Vec<NovikovSeries>,
    pub coords: Coordinates,
}

impl DivisorSeries {
    pub fn zero(grading: &Arc<Grading>, order: u32, coords: Coordinates) -> Self {
        DivisorSeries { components: vec![NovikovSeries::zero(grading, order); grading.rank()], coords }
    }

    /// The constant class `Σ_k v_k p_k`.
    pub fn constant(grading: &Arc<Grading>, order: u32, v: &[Rational], coords: Coordinates) -> Self {
        DivisorSeries {
            components: v.iter().map(|c| NovikovSeries::constant(grading, order, c.clone())).collect(),
            coords,
        }
    }

    pub fn grading(&self) -> &Arc<Grading> {
        self.components[0].grading()
    }

    pub fn order(&self) -> u32 {
        self.components[0].order()
    }

    pub fn component(&self, k: usize) -> &NovikovSeries {
        &self.components[k]
    }

    pub fn constant_part(&self) -> Vec<Rational> {
        self.components.iter().map(NovikovSeries::constant_term).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(NovikovSeries::is_zero)
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        let components =
            self.components.iter().zip(&other.components).map(|(a, b)| a.checked_add(b)).collect::<Result<_>>()?;
        Ok(DivisorSeries { components, coords: self.coords })
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        let components =
            self.components.iter().zip(&other.components).map(|(a, b)| a.checked_sub(b)).collect::<Result<_>>()?;
        Ok(DivisorSeries { components, coords: self.coords })
    }

    pub fn scale(&self, c: &Rational) -> Self {
        DivisorSeries { components: self.components.iter().map(|s| s.scale(c)).collect(), coords: self.coords }
    }

    /// Componentwise product with a scalar series.
    pub fn times(&self, f: &NovikovSeries) -> Result<Self> {
        let components = self.components.iter().map(|s| s.checked_mul(f)).collect::<Result<_>>()?;
        Ok(DivisorSeries { components, coords: self.coords })
    }

    pub fn with_order(&self, order: u32) -> Self {
        DivisorSeries { components: self.components.iter().map(|s| s.with_order(order)).collect(), coords: self.coords }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MapDirection {
    /// `log q = log y + g(y)`.
    Forward,
    /// `log y = log q + h(q)`.
    Inverse,
}

/// A mirror-type coordinate change: `r` series with zero constant term, each
/// supported on classes of vanishing first Chern degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MirrorMap {
    components: Vec<NovikovSeries>,
    direction: MapDirection,
}

impl MirrorMap {
    pub fn new(components: Vec<NovikovSeries>, direction: MapDirection) -> Result<Self> {
        for s in &components {
            if !s.constant_term().is_zero() {
                return Err(Error::NonzeroConstantTerm);
            }
            if let Some((d, _)) = s.terms().find(|(d, _)| s.grading().c1_degree(d) != 0) {
                return Err(Error::InvalidInput(format!("monomial {d} has nonzero first Chern degree")));
            }
        }
        Ok(MirrorMap { components, direction })
    }

    pub fn zero(grading: &Arc<Grading>, order: u32, direction: MapDirection) -> Self {
        MirrorMap { components: vec![NovikovSeries::zero(grading, order); grading.rank()], direction }
    }

    pub fn components(&self) -> &[NovikovSeries] {
        &self.components
    }

    pub fn component(&self, a: usize) -> &NovikovSeries {
        &self.components[a]
    }

    pub fn direction(&self) -> MapDirection {
        self.direction
    }

    pub fn grading(&self) -> &Arc<Grading> {
        self.components[0].grading()
    }

    pub fn order(&self) -> u32 {
        self.components[0].order()
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(NovikovSeries::is_zero)
    }
}

/// Unique `x` with `A x = rhs` up to the truncation order, solved degree by
/// degree against the constant part of `A`.
pub fn solve_linear_series(a: &[Vec<NovikovSeries>], rhs: &[NovikovSeries]) -> Result<Vec<NovikovSeries>> {
    let rows = a.len();
    if rows == 0 || rhs.len() != rows {
        return Err(Error::InvalidInput("system shape mismatch".into()));
    }
    let cols = a[0].len();
    let reference = &rhs[0];
    for row in a {
        if row.len() != cols {
            return Err(Error::InvalidInput("ragged coefficient matrix".into()));
        }
        for s in row {
            reference.check(s)?;
        }
    }
    for s in rhs {
        reference.check(s)?;
    }
    let grading = Arc::clone(reference.grading());
    let order = reference.order();
    let bound = reference.bound();

    let a0: QMatrix = a.iter().map(|row| row.iter().map(NovikovSeries::constant_term).collect()).collect();
    let solver = LeftSolver::new(&a0, cols).ok_or(Error::SingularConstantPart)?;

    // Non-constant parts of A, grouped by exponent.
    let mut higher: BTreeMap<CurveClass, Vec<(usize, usize, Rational)>> = BTreeMap::new();
    for (i, row) in a.iter().enumerate() {
        for (j, s) in row.iter().enumerate() {
            for (d, c) in s.terms() {
                if !d.is_zero() {
                    higher.entry(d.clone()).or_default().push((i, j, c.clone()));
                }
            }
        }
    }

    let mut x: Vec<BTreeMap<CurveClass, Rational>> = vec![BTreeMap::new(); cols];
    let mut pending: BTreeSet<(i64, CurveClass)> = BTreeSet::new();
    for s in rhs {
        for (d, _) in s.terms() {
            pending.insert(grading.sort_key(d));
        }
    }
    let mut solved: BTreeSet<CurveClass> = BTreeSet::new();
    while let Some((deg, d)) = pending.pop_first() {
        let mut b: Vec<Rational> = rhs.iter().map(|s| s.coeff(&d)).collect();
        for (d1, entries) in &higher {
            let rest = d.sub(d1);
            if !solved.contains(&rest) {
                continue;
            }
            for (i, j, c) in entries {
                if let Some(xv) = x[*j].get(&rest) {
                    b[*i] -= c * xv;
                }
            }
        }
        let sol = solver.solve(&b).ok_or_else(|| Error::InconsistentAtOrder(grading.degree(&d)))?;
        solved.insert(d.clone());
        if sol.iter().all(Zero::is_zero) {
            continue;
        }
        for (j, v) in sol.into_iter().enumerate() {
            if !v.is_zero() {
                x[j].insert(d.clone(), v);
            }
        }
        for d1 in higher.keys() {
            let next = d.add(d1);
            let nd = grading.scaled_degree(&next);
            if nd <= bound && nd > deg {
                pending.insert((nd, next));
            }
        }
    }
    Ok(x
        .into_iter()
        .map(|terms| {
            let mut s = NovikovSeries::zero(&grading, order);
            for (d, c) in terms {
                s.add_term(d, c);
            }
            s
        })
        .collect())
}

/// Rewrites a series in `y` in terms of `q` via `y^d = q^d exp(Σ_a ⟨p_a, d⟩ h_a(q))`.
pub fn substitute(f: &NovikovSeries, h: &MirrorMap) -> Result<NovikovSeries> {
    for c in h.components() {
        f.check(c)?;
    }
    let grading = f.grading();
    let bound = f.bound();
    let mut out = NovikovSeries::zero(grading, f.order());
    for (d, c) in f.terms() {
        let room = bound - grading.scaled_degree(d);
        let mut exponent = NovikovSeries::zero(grading, f.order());
        for (a, ha) in h.components().iter().enumerate() {
            let xa = grading.nef_pairing(a, d);
            if xa.is_zero() {
                continue;
            }
            for (e, ce) in ha.terms() {
                if grading.scaled_degree(e) <= room {
                    exponent.add_term(e.clone(), ce * &xa);
                }
            }
        }
        let factor = exponent.exp()?;
        for (e, ce) in factor.terms() {
            if grading.scaled_degree(e) <= room {
                out.add_term(e.add(d), ce * c);
            }
        }
    }
    Ok(out)
}

/// [`substitute`] applied to each component of a divisor-valued series.
pub fn substitute_divisor(f: &DivisorSeries, h: &MirrorMap) -> Result<DivisorSeries> {
    let components = f.components.iter().map(|s| substitute(s, h)).collect::<Result<_>>()?;
    Ok(DivisorSeries { components, coords: Coordinates::Q })
}

/// Inverse `h` of a forward map `g`: the fixed point of `h = -g(y(q))`.
pub fn invert_coordinate_change(g: &MirrorMap) -> Result<MirrorMap> {
    if g.components().iter().any(|s| !s.constant_term().is_zero()) {
        return Err(Error::NonzeroConstantTerm);
    }
    let grading = Arc::clone(g.grading());
    let order = g.order();
    let mut h = MirrorMap::zero(&grading, order, MapDirection::Inverse);
    // Each pass fixes at least one more degree layer.
    let passes = grading.degree_bound(order).max(0) as usize + 2;
    for _ in 0..passes {
        let next: Vec<NovikovSeries> =
            g.components().iter().map(|ga| substitute(ga, &h).map(|s| -&s)).collect::<Result<_>>()?;
        let next = MirrorMap { components: next, direction: MapDirection::Inverse };
        if next == h {
            return Ok(h);
        }
        h = next;
    }
    Ok(h)
}
