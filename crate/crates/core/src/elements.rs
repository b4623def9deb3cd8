//! The logarithmic frame `p̃_i`, Batyrev elements `D̃_j` and Seidel elements
//! `S̃_j`.
//!
//! Batyrev elements are produced in the mirror coordinates `y`; Seidel
//! elements in the Novikov variables `q`, through the inverse mirror map.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::mirror_engine::{correction_term_g0, mirror_contributions, mirror_map};
use crate::series_ring::{
    invert_coordinate_change, substitute, substitute_divisor, Coordinates, DivisorSeries, MirrorMap, NovikovSeries,
};
use crate::toric_lattice::{CurveClass, ToricData};
use crate::{int, Rational};

/// `p̃_i = p_i + Σ_k (θ_i g_k) p_k` where `θ_i` scales `y^d` by `⟨p_i, d⟩`.
pub fn logarithmic_frame(data: &ToricData, order: u32) -> Result<Vec<DivisorSeries>> {
    let g = mirror_map(data, order)?;
    Ok(frame_from_map(data, &g))
}

fn frame_from_map(data: &ToricData, g: &MirrorMap) -> Vec<DivisorSeries> {
    let r = data.rank();
    (0..r)
        .map(|i| {
            let components = (0..r)
                .map(|k| {
                    let mut s = g.component(k).log_derivative(i);
                    if i == k {
                        s.add_term(CurveClass::zero(r), Rational::from_integer(1.into()));
                    }
                    s
                })
                .collect();
            DivisorSeries { components, coords: Coordinates::Y }
        })
        .collect()
}

fn combine_frame(data: &ToricData, frame: &[DivisorSeries], j: usize) -> DivisorSeries {
    let mut acc = DivisorSeries::zero(data.grading(), frame[0].order(), Coordinates::Y);
    for (i, p) in frame.iter().enumerate() {
        let m = data.divisor_matrix_entry(i, j);
        acc = acc.checked_add(&p.scale(m)).expect("same context");
    }
    acc
}

/// Batyrev elements in `y`, computed as `Σ_i m_{ij} p̃_i` and cross-checked
/// against the closed form `D_j + Σ_d ⟨D_j, d⟩ C_d y^d D_{i(d)}`.
pub fn batyrev_elements(data: &ToricData, order: u32) -> Result<Vec<DivisorSeries>> {
    let g = mirror_map(data, order)?;
    let frame = frame_from_map(data, &g);
    let route_a: Vec<DivisorSeries> = (0..data.num_rays()).map(|j| combine_frame(data, &frame, j)).collect();

    let contributions = mirror_contributions(data, order)?;
    let grading = data.grading();
    for (j, a) in route_a.iter().enumerate() {
        let mut b = DivisorSeries::constant(grading, order, &data.divisor(j), Coordinates::Y);
        for c in &contributions {
            let w = grading.pairing(j, &c.class);
            if w == 0 {
                continue;
            }
            let coeff = &c.constant * int(w);
            for (k, comp) in b.components.iter_mut().enumerate() {
                comp.add_term(c.class.clone(), &coeff * data.divisor_matrix_entry(k, c.divisor));
            }
        }
        if b != *a {
            return Err(Error::RouteMismatch(j + 1));
        }
    }
    Ok(route_a)
}

/// Every forward quantity at one truncation order.
#[derive(Clone, Debug)]
pub struct ForwardData {
    pub mirror_map: MirrorMap,
    pub inverse_map: MirrorMap,
    pub frame: Vec<DivisorSeries>,
    /// `D̃_j` in `y`.
    pub batyrev: Vec<DivisorSeries>,
    /// `g_0^{(j)}` in `y`.
    pub corrections: Vec<NovikovSeries>,
    /// `S̃_j` in `q`.
    pub seidel: Vec<DivisorSeries>,
}

impl ForwardData {
    /// `D̃_j` rewritten in `q`.
    pub fn batyrev_in_q(&self) -> Result<Vec<DivisorSeries>> {
        self.batyrev.iter().map(|d| substitute_divisor(d, &self.inverse_map)).collect()
    }

    /// `exp(g_0^{(j)})` rewritten in `q`.
    pub fn correction_factors_in_q(&self) -> Result<Vec<NovikovSeries>> {
        self.corrections.iter().map(|g| substitute(&g.exp()?, &self.inverse_map)).collect()
    }
}

/// Runs the whole forward pipeline once.
pub fn forward(data: &ToricData, order: u32) -> Result<ForwardData> {
    let batyrev = batyrev_elements(data, order)?;
    let mirror_map = mirror_map(data, order)?;
    let inverse_map = invert_coordinate_change(&mirror_map)?;
    let frame = frame_from_map(data, &mirror_map);
    let corrections: Vec<NovikovSeries> =
        (0..data.num_rays()).into_par_iter().map(|j| correction_term_g0(data, j, order)).collect();
    let seidel = batyrev
        .par_iter()
        .zip(&corrections)
        .map(|(d, g0)| {
            let factor = (-g0).exp()?;
            substitute_divisor(&d.times(&factor)?, &inverse_map)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ForwardData { mirror_map, inverse_map, frame, batyrev, corrections, seidel })
}

/// Seidel elements `S̃_j = exp(-g_0^{(j)}) D̃_j`, expressed in `q`.
pub fn seidel_elements(data: &ToricData, order: u32) -> Result<Vec<DivisorSeries>> {
    Ok(forward(data, order)?.seidel)
}

/// Outcome of one linear relation `Σ_j ⟨e_a, b_j⟩ w_j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelationCheck {
    /// Coordinate functional `a` (0-based).
    pub functional: usize,
    /// First offending term `(p_k component, exponent, coefficient)`.
    pub first_offending: Option<(usize, CurveClass, Rational)>,
}

impl RelationCheck {
    pub fn holds(&self) -> bool {
        self.first_offending.is_none()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearRelationReport {
    pub checks: Vec<RelationCheck>,
}

impl LinearRelationReport {
    pub fn all_hold(&self) -> bool {
        self.checks.iter().all(RelationCheck::holds)
    }
}

/// Evaluates `Σ_j ⟨v, b_j⟩ w_j` for each coordinate functional `v` of `M`.
pub fn check_linear_relations(elements: &[DivisorSeries], data: &ToricData) -> LinearRelationReport {
    linear_relations(elements, data.rays())
}

pub(crate) fn linear_relations(elements: &[DivisorSeries], rays: &[Vec<i64>]) -> LinearRelationReport {
    let n = rays[0].len();
    let checks = (0..n)
        .map(|a| {
            let mut acc = DivisorSeries::zero(elements[0].grading(), elements[0].order(), elements[0].coords);
            for (w, b) in elements.iter().zip(rays) {
                if b[a] != 0 {
                    acc = acc.checked_add(&w.scale(&int(b[a]))).expect("elements share a context");
                }
            }
            let first_offending = acc.components.iter().enumerate().find_map(|(k, s)| {
                s.leading_term().map(|(d, c)| (k, d.clone(), c.clone()))
            });
            RelationCheck { functional: a, first_offending }
        })
        .collect();
    LinearRelationReport { checks }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    #[test]
    fn fano_elements_are_constant() {
        let p2 = catalog::projective_plane();
        let fw = forward(&p2, 5).unwrap();
        for j in 0..3 {
            let d = DivisorSeries::constant(p2.grading(), 5, &p2.divisor(j), Coordinates::Y);
            assert_eq!(fw.batyrev[j], d);
            assert_eq!(fw.seidel[j].components, d.components);
        }
        assert_eq!(fw.frame[0].constant_part(), vec![int(1)]);
    }

    #[test]
    fn f2_batyrev_relations_hold_and_seidel_ones_fail() {
        let f2 = catalog::hirzebruch_f2();
        let fw = forward(&f2, 4).unwrap();
        assert!(check_linear_relations(&fw.batyrev, &f2).all_hold());
        let report = check_linear_relations(&fw.seidel, &f2);
        assert!(!report.all_hold());
        let constants: Vec<DivisorSeries> =
            (0..4).map(|j| DivisorSeries::constant(f2.grading(), 4, &f2.divisor(j), Coordinates::Q)).collect();
        assert!(check_linear_relations(&constants, &f2).all_hold());
    }

    #[test]
    fn vertex_seidel_elements_equal_batyrev() {
        let f2 = catalog::hirzebruch_f2();
        let fw = forward(&f2, 4).unwrap();
        let bq = fw.batyrev_in_q().unwrap();
        for j in [0, 2, 3] {
            assert_eq!(fw.seidel[j], bq[j]);
        }
        assert_ne!(fw.seidel[1], bq[1]);
    }
}
