//! Recovering Batyrev elements and the mirror map from Seidel elements.
//!
//! With `D̃_j = H_j S̃_j` and `H_j = 1` on vertex rays, the linear relations
//! `Σ_j b_j ⊗ D̃_j = 0` become a linear system for the remaining `H_j` whose
//! constant part has full column rank. The Batyrev elements then give the
//! Jacobian of the mirror map, which is integrated termwise.

use std::sync::Arc;

use num_traits::Zero;

use crate::elements::{forward, linear_relations, LinearRelationReport};
use crate::error::{Error, Result};
use crate::series_ring::{
    invert_coordinate_change, solve_linear_series, Coordinates, DivisorSeries, MapDirection, MirrorMap,
    NovikovSeries,
};
use crate::toric_lattice::{CurveClass, Grading, ToricData};
use crate::{int, Rational};

/// The part of [`ToricData`] reconstruction may read: rays, vertex flags,
/// divisor matrix and grading. No mirror-map data.
#[derive(Clone, Debug)]
pub struct FanCombinatorics {
    rays: Vec<Vec<i64>>,
    vertex_flags: Vec<bool>,
    /// `divisors[j]` is `D_j` in the nef basis.
    divisors: Vec<Vec<Rational>>,
    grading: Arc<Grading>,
}

impl FanCombinatorics {
    pub fn new(data: &ToricData) -> Self {
        FanCombinatorics {
            rays: data.rays().to_vec(),
            vertex_flags: data.vertex_flags().to_vec(),
            divisors: (0..data.num_rays()).map(|j| data.divisor(j)).collect(),
            grading: Arc::clone(data.grading()),
        }
    }

    /// Overrides the vertex flags; used to feed deliberately wrong data.
    pub fn with_vertex_flags(mut self, flags: Vec<bool>) -> Self {
        self.vertex_flags = flags;
        self
    }

    pub fn num_rays(&self) -> usize {
        self.rays.len()
    }

    pub fn rank(&self) -> usize {
        self.grading.rank()
    }
}

impl From<&ToricData> for FanCombinatorics {
    fn from(data: &ToricData) -> Self {
        FanCombinatorics::new(data)
    }
}

#[derive(Clone, Debug)]
pub struct Diagnostics {
    pub linear_relations: LinearRelationReport,
    /// Set once the mirror map has been integrated; the integration fails
    /// with an error rather than returning a nonzero residual.
    pub integrable: Option<bool>,
    pub homogeneous: Option<bool>,
}

#[derive(Clone, Debug)]
pub struct ReconstructionResult {
    /// `H_j` in `q`; identically 1 on vertex rays.
    pub correction_factors: Vec<NovikovSeries>,
    pub batyrev_in_q: Vec<DivisorSeries>,
    pub recovered_inverse_map: Option<MirrorMap>,
    pub diagnostics: Diagnostics,
}

/// Solves for the correction factors `H_j` from Seidel elements in `q`.
pub fn reconstruct_correction_factors(
    comb: &FanCombinatorics,
    seidel: &[DivisorSeries],
    order: u32,
) -> Result<ReconstructionResult> {
    let m = comb.num_rays();
    let r = comb.rank();
    if seidel.len() != m {
        return Err(Error::InvalidInput(format!("expected {m} Seidel elements, got {}", seidel.len())));
    }
    let seidel: Vec<DivisorSeries> = seidel.iter().map(|s| s.with_order(order)).collect();
    for (j, s) in seidel.iter().enumerate() {
        if s.components.len() != r {
            return Err(Error::InvalidInput(format!("Seidel element {} has {} components", j + 1, s.components.len())));
        }
        if s.constant_part() != comb.divisors[j] {
            return Err(Error::InvalidInput(format!("Seidel element {} does not reduce to D_{} at q = 0", j + 1, j + 1)));
        }
    }
    let grading = &comb.grading;
    let n = comb.rays[0].len();
    let unknowns: Vec<usize> = (0..m).filter(|&j| !comb.vertex_flags[j]).collect();
    let one = NovikovSeries::one(grading, order);

    let mut factors = vec![one.clone(); m];
    if !unknowns.is_empty() {
        let mut rows = Vec::with_capacity(n * r);
        let mut rhs = Vec::with_capacity(n * r);
        for a in 0..n {
            for k in 0..r {
                let row: Vec<NovikovSeries> =
                    unknowns.iter().map(|&j| seidel[j].component(k).scale(&int(comb.rays[j][a]))).collect();
                let mut b = NovikovSeries::zero(grading, order);
                for j in (0..m).filter(|&j| comb.vertex_flags[j]) {
                    b = &b - &seidel[j].component(k).scale(&int(comb.rays[j][a]));
                }
                rows.push(row);
                rhs.push(b);
            }
        }
        let solution = solve_linear_series(&rows, &rhs)?;
        for (&j, h) in unknowns.iter().zip(solution) {
            factors[j] = h;
        }
    }
    let batyrev_in_q = seidel
        .iter()
        .zip(&factors)
        .map(|(s, h)| s.times(h))
        .collect::<Result<Vec<_>>>()?;
    let linear = linear_relations(&batyrev_in_q, &comb.rays);
    Ok(ReconstructionResult {
        correction_factors: factors,
        batyrev_in_q,
        recovered_inverse_map: None,
        diagnostics: Diagnostics { linear_relations: linear, integrable: None, homogeneous: None },
    })
}

/// Integrates the logarithmic Jacobian carried by Batyrev elements in `q`
/// into the inverse mirror map `h`, `log y = log q + h(q)`.
pub fn recover_mirror_coordinates(
    batyrev_in_q: &[DivisorSeries],
    comb: &FanCombinatorics,
    order: u32,
) -> Result<MirrorMap> {
    let m = comb.num_rays();
    let r = comb.rank();
    let grading = &comb.grading;
    let batyrev: Vec<DivisorSeries> = batyrev_in_q.iter().map(|d| d.with_order(order)).collect();
    if batyrev.len() != m {
        return Err(Error::InvalidInput(format!("expected {m} Batyrev elements, got {}", batyrev.len())));
    }

    // Frame: Σ_i m_{ij} p̃_i = D̃_j, one p_k-component at a time.
    let coeff_matrix: Vec<Vec<NovikovSeries>> = (0..m)
        .map(|j| (0..r).map(|i| NovikovSeries::constant(grading, order, comb.divisors[j][i].clone())).collect())
        .collect();
    // frame[k][i]: p_k-coefficient of p̃_i, i.e. ∂ log q_k / ∂ log y_i.
    let mut jacobian = Vec::with_capacity(r);
    for k in 0..r {
        let rhs: Vec<NovikovSeries> = batyrev.iter().map(|d| d.component(k).clone()).collect();
        jacobian.push(solve_linear_series(&coeff_matrix, &rhs).map_err(|e| match e {
            Error::InconsistentAtOrder(deg) => {
                Error::NotClosed(format!("Batyrev elements are not a frame combination at degree {deg}"))
            }
            other => other,
        })?);
    }

    // inverse[i][k] = ∂ log y_i / ∂ log q_k; column k solves jacobian · x = e_k.
    let mut inverse = vec![vec![NovikovSeries::zero(grading, order); r]; r];
    for k in 0..r {
        let e: Vec<NovikovSeries> = (0..r)
            .map(|row| if row == k { NovikovSeries::one(grading, order) } else { NovikovSeries::zero(grading, order) })
            .collect();
        let col = solve_linear_series(&jacobian, &e)?;
        for (i, s) in col.into_iter().enumerate() {
            inverse[i][k] = s;
        }
    }

    let mut h = Vec::with_capacity(r);
    for (i, row) in inverse.iter().enumerate() {
        let mut diff: Vec<NovikovSeries> = row.clone();
        diff[i] = &diff[i] - &NovikovSeries::one(grading, order);
        h.push(integrate(grading, order, i, &diff)?);
    }
    MirrorMap::new(h, MapDirection::Inverse).map_err(|e| match e {
        Error::InvalidInput(msg) => Error::NotClosed(msg),
        other => other,
    })
}

/// `h` with `q_k ∂h/∂q_k = dh[k]` for every `k`.
fn integrate(grading: &Arc<Grading>, order: u32, index: usize, dh: &[NovikovSeries]) -> Result<NovikovSeries> {
    let mut support: Vec<&CurveClass> = dh.iter().flat_map(|s| s.terms().map(|(d, _)| d)).collect();
    support.sort();
    support.dedup();
    let mut terms = Vec::with_capacity(support.len());
    for d in support {
        let mut value: Option<Rational> = None;
        for (k, s) in dh.iter().enumerate() {
            let c = s.coeff(d);
            let w = grading.nef_pairing(k, d);
            if w.is_zero() {
                if !c.is_zero() {
                    return Err(Error::NotClosed(format!(
                        "h_{} has a q_{}-derivative at {d} where the exponent is constant",
                        index + 1,
                        k + 1
                    )));
                }
                continue;
            }
            let candidate = c / w;
            match &value {
                Some(v) if *v != candidate => {
                    return Err(Error::NotClosed(format!("partial derivatives of h_{} disagree at {d}", index + 1)));
                }
                Some(_) => {}
                None => value = Some(candidate),
            }
        }
        match value {
            Some(v) => {
                if !v.is_zero() {
                    if grading.c1_degree(d) != 0 {
                        return Err(Error::NotClosed(format!("h_{} is not homogeneous at {d}", index + 1)));
                    }
                    terms.push((d.clone(), v));
                }
            }
            None => return Err(Error::DegreeZeroAmbiguity(d.coords().to_vec())),
        }
    }
    NovikovSeries::from_terms(grading, order, terms)
}

/// Full backward pass: correction factors, Batyrev elements and the mirror map.
pub fn reconstruct(comb: &FanCombinatorics, seidel: &[DivisorSeries], order: u32) -> Result<ReconstructionResult> {
    let mut result = reconstruct_correction_factors(comb, seidel, order)?;
    let h = recover_mirror_coordinates(&result.batyrev_in_q, comb, order)?;
    result.recovered_inverse_map = Some(h);
    result.diagnostics.integrable = Some(true);
    result.diagnostics.homogeneous = Some(true);
    Ok(result)
}

#[derive(Clone, Debug)]
pub struct StageResidual {
    pub stage: &'static str,
    /// Indices (0-based) whose residual is nonzero.
    pub failures: Vec<usize>,
    pub error: Option<Error>,
}

impl StageResidual {
    pub fn is_zero(&self) -> bool {
        self.failures.is_empty() && self.error.is_none()
    }
}

#[derive(Clone, Debug)]
pub struct RoundtripReport {
    pub stages: Vec<StageResidual>,
}

impl RoundtripReport {
    pub fn all_zero(&self) -> bool {
        self.stages.iter().all(StageResidual::is_zero)
    }
}

/// Forward pipeline, then reconstruction from the Seidel elements alone,
/// comparing every recovered quantity with its forward counterpart.
pub fn roundtrip_verify(data: &ToricData, order: u32) -> RoundtripReport {
    let mut stages = Vec::new();
    let fail = |stage, e: Error| StageResidual { stage, failures: Vec::new(), error: Some(e) };
    let fw = match forward(data, order) {
        Ok(fw) => fw,
        Err(e) => return RoundtripReport { stages: vec![fail("forward", e)] },
    };
    let comb = FanCombinatorics::new(data);
    let rec = match reconstruct(&comb, &fw.seidel, order) {
        Ok(r) => r,
        Err(e) => return RoundtripReport { stages: vec![fail("reconstruction", e)] },
    };

    let mismatches = |pairs: Vec<bool>| pairs.iter().enumerate().filter(|(_, ok)| !**ok).map(|(i, _)| i).collect();

    match fw.correction_factors_in_q() {
        Ok(expected) => stages.push(StageResidual {
            stage: "correction factors",
            failures: mismatches(expected.iter().zip(&rec.correction_factors).map(|(a, b)| a == b).collect()),
            error: None,
        }),
        Err(e) => stages.push(fail("correction factors", e)),
    }
    match fw.batyrev_in_q() {
        Ok(expected) => stages.push(StageResidual {
            stage: "batyrev elements",
            failures: mismatches(
                expected.iter().zip(&rec.batyrev_in_q).map(|(a, b)| a.components == b.components).collect(),
            ),
            error: None,
        }),
        Err(e) => stages.push(fail("batyrev elements", e)),
    }
    stages.push(StageResidual {
        stage: "linear relations",
        failures: rec.diagnostics.linear_relations.checks.iter().filter(|c| !c.holds()).map(|c| c.functional).collect(),
        error: None,
    });
    let recovered = rec.recovered_inverse_map.expect("reconstruct integrates the map");
    match invert_coordinate_change(&fw.mirror_map) {
        Ok(expected) => stages.push(StageResidual {
            stage: "inverse mirror map",
            failures: mismatches(
                expected.components().iter().zip(recovered.components()).map(|(a, b)| a == b).collect(),
            ),
            error: None,
        }),
        Err(e) => stages.push(fail("inverse mirror map", e)),
    }
    RoundtripReport { stages }
}

/// The constant class `D_j` as a divisor series in `q`.
pub fn constant_elements(comb: &FanCombinatorics, order: u32) -> Vec<DivisorSeries> {
    comb.divisors.iter().map(|d| DivisorSeries::constant(&comb.grading, order, d, Coordinates::Q)).collect()
}
