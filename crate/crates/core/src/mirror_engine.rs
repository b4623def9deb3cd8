//! Leading `z`-asymptotics of toric I-functions, the mirror map and the
//! correction terms `g_0^{(j)}`.
//!
//! Only the coefficient of `z^{-1}` is ever needed, so I-functions are never
//! expanded. A class `d` contributes at `z^{-1}` iff its asymptotic order is 1;
//! with `-K_X` nef these are exactly the classes with `⟨c_1, d⟩ = 0` and one
//! negative toric pairing.

use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::series_ring::{MapDirection, MirrorMap, NovikovSeries};
use crate::toric_lattice::{
    build_associated_bundle, correction_constraints, enumerate_classes, Comparison, Constraint, CurveClass,
    ToricData,
};
use crate::Rational;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AsymptoticTerm {
    pub curve_class: CurveClass,
    /// Power of `z^{-1}` in the leading term.
    pub order: i64,
    pub constant: Rational,
    /// 0-based indices `i` with `⟨D_i, d⟩ < 0`.
    pub negative_indices: Vec<usize>,
}

fn factorial(n: i64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * k)
}

/// Leading term of the product factor of the I-function at class `d`.
pub fn leading_asymptotics(data: &ToricData, d: &CurveClass) -> AsymptoticTerm {
    let pairings = data.grading().pairings(d);
    asymptotics_from_pairings(d.clone(), &pairings)
}

fn asymptotics_from_pairings(curve_class: CurveClass, pairings: &[i64]) -> AsymptoticTerm {
    let mut numer = BigInt::one();
    let mut denom = BigInt::one();
    let mut negative_indices = Vec::new();
    for (i, &v) in pairings.iter().enumerate() {
        if v < 0 {
            negative_indices.push(i);
            let f = factorial(-v - 1);
            numer *= if (-v - 1) % 2 == 0 { f } else { -f };
        } else {
            denom *= factorial(v);
        }
    }
    let order = pairings.iter().sum::<i64>() + negative_indices.len() as i64;
    AsymptoticTerm { curve_class, order, constant: Rational::new(numer, denom), negative_indices }
}

/// A class contributing to the `z^{-1}` coefficient: `C_d D_{i(d)} y^d`.
#[derive(Clone, Debug)]
pub(crate) struct MirrorContribution {
    pub class: CurveClass,
    pub constant: Rational,
    pub divisor: usize,
}

pub(crate) fn mirror_contributions(data: &ToricData, order: u32) -> Result<Vec<MirrorContribution>> {
    check_scalar_term(data, order)?;
    let classes = enumerate_classes(data, &[Constraint::c1(data, Comparison::Eq, 0)], order)?;
    Ok(classes
        .into_iter()
        .filter_map(|d| {
            let term = leading_asymptotics(data, &d);
            (term.order == 1 && term.negative_indices.len() == 1).then(|| MirrorContribution {
                divisor: term.negative_indices[0],
                constant: term.constant,
                class: d,
            })
        })
        .collect())
}

/// The `H^0` part of the `z^{-1}` coefficient comes from classes with
/// `⟨c_1, d⟩ = 1` and no negative pairing; there must be none.
fn check_scalar_term(data: &ToricData, order: u32) -> Result<()> {
    let mut cs = vec![Constraint::c1(data, Comparison::Eq, 1)];
    for i in 0..data.num_rays() {
        cs.push(Constraint::toric(data, i, Comparison::Ge, 0));
    }
    match enumerate_classes(data, &cs, order)?.first() {
        Some(d) => Err(Error::UnexpectedScalarTerm(data.grading().pairings(d))),
        None => Ok(()),
    }
}

/// Forward mirror map `g`: `log q_k = log y_k + g_k(y)`.
pub fn mirror_map(data: &ToricData, order: u32) -> Result<MirrorMap> {
    let grading = data.grading();
    let mut comps = vec![NovikovSeries::zero(grading, order); data.rank()];
    for c in mirror_contributions(data, order)? {
        for (k, comp) in comps.iter_mut().enumerate() {
            let m = data.divisor_matrix_entry(k, c.divisor);
            if !m.is_zero() {
                comp.add_term(c.class.clone(), &c.constant * m);
            }
        }
    }
    MirrorMap::new(comps, MapDirection::Forward)
}

/// `g_0^{(j)}(y)`: the sum over classes with `⟨c_1, d⟩ = 0`, `⟨D_j, d⟩ < 0` and
/// all other toric pairings nonnegative.
pub fn correction_term_g0(data: &ToricData, j: usize, order: u32) -> NovikovSeries {
    let grading = data.grading();
    let classes = enumerate_classes(data, &correction_constraints(data, j), order)
        .expect("validated data has an ample degree");
    let mut s = NovikovSeries::zero(grading, order);
    for d in classes {
        // The coefficient is minus the asymptotic constant.
        s.add_term(d.clone(), -leading_asymptotics(data, &d).constant);
    }
    s
}

/// `g_0^{(j)}` read off as the `p_0` component of the mirror map of the
/// associated bundle `E_j`, checking that the bundle's mirror map lives on
/// fibre classes and restricts to the mirror map of `X`.
pub fn correction_via_bundle(data: &ToricData, j: usize, order: u32) -> Result<NovikovSeries> {
    let bundle = build_associated_bundle(data, j)?;
    let bundle_map = mirror_map(&bundle, order)?;
    let bg = bundle.grading();
    let m = data.num_rays();
    let grading = Arc::clone(data.grading());

    let to_fibre = |d: &CurveClass| -> Result<CurveClass> {
        if !bg.nef_pairing(0, d).is_zero() {
            return Err(Error::BundleMirrorMismatch(format!(
                "monomial with pairings {:?} depends on the base variable",
                bg.pairings(d)
            )));
        }
        let v = bg.pairings(d);
        if v[m] != 0 || v[m + 1] != 0 {
            return Err(Error::BundleMirrorMismatch(format!("class with pairings {v:?} is not a fibre class")));
        }
        data.class_from_pairings(&v[..m])
            .ok_or_else(|| Error::BundleMirrorMismatch(format!("pairings {:?} are not a class of X", &v[..m])))
    };

    let mut restricted = Vec::with_capacity(bundle.rank());
    for comp in bundle_map.components() {
        let mut s = NovikovSeries::zero(&grading, order);
        for (d, c) in comp.terms() {
            s.add_term(to_fibre(d)?, c.clone());
        }
        restricted.push(s);
    }
    let base = mirror_map(data, order)?;
    for (k, comp) in base.components().iter().enumerate() {
        if restricted[k + 1] != *comp {
            return Err(Error::BundleMirrorMismatch(format!("component p_{} differs from the mirror map of X", k + 1)));
        }
    }
    Ok(restricted.swap_remove(0))
}
