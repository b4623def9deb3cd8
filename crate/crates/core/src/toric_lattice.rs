//! Fans, their lattice sequences, curve classes and bounded enumeration.
//!
//! A [`ToricData`] is built from a [`FanInput`] by [`validate_fan`]. It owns
//! an integral basis of `H_2(X, Z)` (the kernel of `Z^m -> N`), the divisor
//! matrix in a nef basis `p_1..p_r`, and the Mori cone generators.
//!
//! Curve classes are stored in the canonical integral basis so that monomial
//! arithmetic stays integral even when the user-facing basis `γ_1..γ_r` only
//! spans a finite-index sublattice.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::linalg::{self, column_hnf, det, integer_kernel, inverse, LeftSolver, QMatrix};
use crate::polyhedral::{in_convex_hull, LinearSystem};
use crate::{int, Rational};

/// Raw description of a smooth complete fan, with 0-based ray indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FanInput {
    pub name: String,
    pub dimension: usize,
    pub rays: Vec<Vec<i64>>,
    pub max_cones: Vec<Vec<usize>>,
    /// Row `a` holds the pairings `(⟨D_i, γ_a⟩)_i`.
    pub curve_basis: Option<Vec<Vec<Rational>>>,
    /// Ample class in the nef basis dual to the curve basis.
    pub ample: Option<Vec<Rational>>,
}

/// An element of `H_2(X, Z)` in the canonical integral basis.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CurveClass(pub(crate) Vec<i64>);

impl CurveClass {
    pub fn new(coords: Vec<i64>) -> Self {
        CurveClass(coords)
    }

    pub fn zero(rank: usize) -> Self {
        CurveClass(vec![0; rank])
    }

    pub fn coords(&self) -> &[i64] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&x| x == 0)
    }

    pub fn add(&self, other: &CurveClass) -> CurveClass {
        CurveClass(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &CurveClass) -> CurveClass {
        CurveClass(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn scale(&self, k: i64) -> CurveClass {
        CurveClass(self.0.iter().map(|a| a * k).collect())
    }
}

impl fmt::Display for CurveClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, "]")
    }
}

/// Linear data needed to grade and compare curve classes. Shared by every
/// series built over the same [`ToricData`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Grading {
    rank: usize,
    /// `pairing[i][c] = ⟨D_i, e_c⟩` for the canonical basis vector `e_c`.
    pairing: Vec<Vec<i64>>,
    c1: Vec<i64>,
    eta_scaled: Vec<i64>,
    eta_den: i64,
    to_gamma: QMatrix,
    from_gamma: QMatrix,
}

impl Grading {
    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn num_divisors(&self) -> usize {
        self.pairing.len()
    }

    /// `⟨D_i, d⟩`.
    pub fn pairing(&self, i: usize, d: &CurveClass) -> i64 {
        self.pairing[i].iter().zip(&d.0).map(|(a, b)| a * b).sum()
    }

    pub fn pairings(&self, d: &CurveClass) -> Vec<i64> {
        (0..self.pairing.len()).map(|i| self.pairing(i, d)).collect()
    }

    /// `⟨c_1(X), d⟩`.
    pub fn c1_degree(&self, d: &CurveClass) -> i64 {
        self.c1.iter().zip(&d.0).map(|(a, b)| a * b).sum()
    }

    /// `⟨η, d⟩` multiplied by [`Grading::degree_denominator`]; an integer.
    pub fn scaled_degree(&self, d: &CurveClass) -> i64 {
        self.eta_scaled.iter().zip(&d.0).map(|(a, b)| a * b).sum()
    }

    pub fn degree_denominator(&self) -> i64 {
        self.eta_den
    }

    pub fn degree(&self, d: &CurveClass) -> Rational {
        Rational::new(self.scaled_degree(d).into(), self.eta_den.into())
    }

    pub fn degree_bound(&self, order: u32) -> i64 {
        i64::from(order) * self.eta_den
    }

    /// Coordinates `(⟨p_a, d⟩)_a` in the user-facing curve basis.
    pub fn gamma_coords(&self, d: &CurveClass) -> Vec<Rational> {
        self.to_gamma
            .iter()
            .map(|row| row.iter().zip(&d.0).map(|(t, &x)| t * int(x)).sum())
            .collect()
    }

    /// `⟨p_a, d⟩`.
    pub fn nef_pairing(&self, a: usize, d: &CurveClass) -> Rational {
        self.to_gamma[a].iter().zip(&d.0).map(|(t, &x)| t * int(x)).sum()
    }

    /// Inverse of [`Grading::gamma_coords`]; `None` if the point is not integral.
    pub fn class_from_gamma(&self, x: &[Rational]) -> Option<CurveClass> {
        let mut coords = Vec::with_capacity(self.rank);
        for row in &self.from_gamma {
            let v: Rational = row.iter().zip(x).map(|(a, b)| a * b).sum();
            if !v.is_integer() {
                return None;
            }
            coords.push(v.to_integer().to_i64()?);
        }
        Some(CurveClass(coords))
    }

    /// The class with pairings `(⟨D_i, d⟩)_i = v`, if one exists.
    pub fn class_from_pairings(&self, v: &[i64]) -> Option<CurveClass> {
        let a: QMatrix = self.pairing.iter().map(|row| row.iter().map(|&x| int(x)).collect()).collect();
        let solver = LeftSolver::new(&a, self.rank)?;
        let b: Vec<Rational> = v.iter().map(|&x| int(x)).collect();
        let x = solver.solve(&b)?;
        let mut coords = Vec::with_capacity(self.rank);
        for c in x {
            if !c.is_integer() {
                return None;
            }
            coords.push(c.to_integer().to_i64()?);
        }
        Some(CurveClass(coords))
    }

    /// Canonical display order: η-degree, then canonical coordinates.
    pub fn sort_key(&self, d: &CurveClass) -> (i64, CurveClass) {
        (self.scaled_degree(d), d.clone())
    }
}

/// A validated smooth projective toric variety with nef anticanonical class.
#[derive(Clone, Debug)]
pub struct ToricData {
    input: FanInput,
    kernel: Vec<Vec<i64>>,
    curve_basis: QMatrix,
    c1: Vec<Rational>,
    ample: Vec<Rational>,
    walls: Vec<CurveClass>,
    vertex_flags: Vec<bool>,
    grading: Arc<Grading>,
}

impl ToricData {
    pub fn name(&self) -> &str {
        &self.input.name
    }

    pub fn input(&self) -> &FanInput {
        &self.input
    }

    pub fn dimension(&self) -> usize {
        self.input.dimension
    }

    pub fn num_rays(&self) -> usize {
        self.input.rays.len()
    }

    /// Picard rank `r = m - n`.
    pub fn rank(&self) -> usize {
        self.grading.rank
    }

    pub fn rays(&self) -> &[Vec<i64>] {
        &self.input.rays
    }

    pub fn max_cones(&self) -> &[Vec<usize>] {
        &self.input.max_cones
    }

    /// Canonical integral basis of `H_2`, each row a pairing vector in `Z^m`.
    pub fn canonical_h2_basis(&self) -> &[Vec<i64>] {
        &self.kernel
    }

    /// Rows `(⟨D_i, γ_a⟩)_i` of the curve basis in use.
    pub fn curve_basis(&self) -> &QMatrix {
        &self.curve_basis
    }

    /// `m_{aj}` with `D_j = Σ_a m_{aj} p_a`.
    pub fn divisor_matrix_entry(&self, a: usize, j: usize) -> &Rational {
        &self.curve_basis[a][j]
    }

    /// `D_j` in the nef basis.
    pub fn divisor(&self, j: usize) -> Vec<Rational> {
        self.curve_basis.iter().map(|row| row[j].clone()).collect()
    }

    pub fn c1(&self) -> &[Rational] {
        &self.c1
    }

    pub fn ample_class(&self) -> &[Rational] {
        &self.ample
    }

    pub fn wall_classes(&self) -> &[CurveClass] {
        &self.walls
    }

    pub fn vertex_flags(&self) -> &[bool] {
        &self.vertex_flags
    }

    pub fn is_vertex(&self, j: usize) -> bool {
        self.vertex_flags[j]
    }

    pub fn grading(&self) -> &Arc<Grading> {
        &self.grading
    }

    pub fn class_from_pairings(&self, v: &[i64]) -> Option<CurveClass> {
        self.grading.class_from_pairings(v)
    }

    pub fn class_from_gamma(&self, x: &[Rational]) -> Option<CurveClass> {
        self.grading.class_from_gamma(x)
    }

    /// Same fan with a different ample class.
    pub fn with_ample(&self, ample: Vec<Rational>) -> Result<ToricData> {
        let mut input = self.input.clone();
        input.ample = Some(ample);
        input.curve_basis = Some(self.curve_basis.clone());
        validate_fan(input)
    }
}

/// Validates a fan and assembles its [`ToricData`].
pub fn validate_fan(input: FanInput) -> Result<ToricData> {
    let n = input.dimension;
    let m = input.rays.len();
    check_shape(&input)?;

    for cone in &input.max_cones {
        let rows: Vec<Vec<i64>> = cone.iter().map(|&i| input.rays[i].clone()).collect();
        let d = det(&rows);
        if d.abs() != BigInt::one() {
            return Err(Error::NonSmooth { cone: one_based(cone), det: d.to_string() });
        }
    }

    let walls_raw = check_complete(&input)?;

    // Fan sequence: L = ker(Z^m -> N).
    let ray_matrix: Vec<Vec<i64>> = (0..n).map(|a| input.rays.iter().map(|b| b[a]).collect()).collect();
    let kernel = integer_kernel(&ray_matrix, m);
    if kernel.len() != m - n {
        return Err(Error::InvalidInput("rays do not span N".into()));
    }
    let r = kernel.len();
    let kernel_t: QMatrix = (0..m).map(|i| kernel.iter().map(|row| int(row[i])).collect()).collect();
    let kernel_solver = LeftSolver::new(&kernel_t, r).expect("kernel basis is independent");
    let to_canonical = |v: &[i64]| -> Vec<i64> {
        let b: Vec<Rational> = v.iter().map(|&x| int(x)).collect();
        kernel_solver
            .solve(&b)
            .expect("relation lies in the kernel")
            .into_iter()
            .map(|x| x.to_integer().to_i64().expect("saturated lattice"))
            .collect()
    };

    let extremal = extremal_relations(walls_raw);

    let curve_basis = match &input.curve_basis {
        Some(rows) => {
            check_curve_basis(rows, &input.rays, n, r)?;
            rows.clone()
        }
        None => default_curve_basis(&extremal, &kernel, r),
    };

    // to_gamma: column c holds the γ-coordinates of canonical basis vector c.
    let basis_t: QMatrix = (0..m).map(|i| curve_basis.iter().map(|row| row[i].clone()).collect()).collect();
    let gamma_solver = LeftSolver::new(&basis_t, r).ok_or_else(|| Error::BadCurveBasis("rank deficient".into()))?;
    let cols: Vec<Vec<Rational>> = kernel
        .iter()
        .map(|k| {
            let b: Vec<Rational> = k.iter().map(|&x| int(x)).collect();
            gamma_solver.solve(&b).expect("curve basis spans the kernel")
        })
        .collect();
    let to_gamma = linalg::transpose(&cols, r);
    let from_gamma = inverse(&to_gamma).ok_or_else(|| Error::BadCurveBasis("singular".into()))?;

    let pairing: Vec<Vec<i64>> = (0..m).map(|i| kernel.iter().map(|row| row[i]).collect()).collect();
    let c1_int: Vec<i64> = (0..r).map(|c| pairing.iter().map(|row| row[c]).sum()).collect();
    let c1: Vec<Rational> = (0..r).map(|a| curve_basis[a].iter().sum()).collect();

    let walls_canonical: Vec<CurveClass> = extremal.iter().map(|v| CurveClass(to_canonical(v))).collect();

    let gamma_of = |d: &CurveClass| -> Vec<Rational> {
        to_gamma.iter().map(|row| row.iter().zip(&d.0).map(|(t, &x)| t * int(x)).sum()).collect()
    };
    for (w, v) in walls_canonical.iter().zip(&extremal) {
        let x = gamma_of(w);
        if let Some(a) = x.iter().position(|xa| xa.is_negative()) {
            return Err(Error::NotNef(format!(
                "p_{} pairs to {} with the wall class with pairings {:?}",
                a + 1,
                x[a],
                v
            )));
        }
        let c1w: i64 = v.iter().sum();
        if c1w < 0 {
            return Err(Error::NotNef(format!("c_1 pairs to {c1w} with the wall class with pairings {v:?}")));
        }
    }

    check_boundary(&input)?;

    let ample = match &input.ample {
        Some(eta) => {
            if eta.len() != r {
                return Err(Error::InvalidInput(format!("ample class needs {r} entries, got {}", eta.len())));
            }
            eta.clone()
        }
        None => vec![Rational::one(); r],
    };
    for (w, v) in walls_canonical.iter().zip(&extremal) {
        let deg: Rational = gamma_of(w).iter().zip(&ample).map(|(x, e)| x * e).sum();
        if !deg.is_positive() {
            return Err(Error::UnboundedRegion(format!(
                "ample class pairs to {deg} with the wall class with pairings {v:?}"
            )));
        }
    }

    // η as a functional on canonical coordinates, scaled to integers.
    let eta_q: Vec<Rational> =
        (0..r).map(|c| (0..r).map(|a| &ample[a] * &to_gamma[a][c]).sum()).collect();
    let den = linalg::lcm_of_denominators(eta_q.iter());
    let eta_scaled: Vec<i64> = eta_q
        .iter()
        .map(|e| (e * Rational::from_integer(den.clone())).to_integer().to_i64().expect("degree fits"))
        .collect();
    let eta_den = den.to_i64().expect("degree denominator fits");

    let grading = Arc::new(Grading { rank: r, pairing, c1: c1_int, eta_scaled, eta_den, to_gamma, from_gamma });

    let mut walls = walls_canonical;
    walls.sort_by_key(|w| grading.sort_key(w));

    let vertex_flags = (0..m)
        .map(|j| {
            let others: Vec<&[i64]> =
                input.rays.iter().enumerate().filter(|&(i, _)| i != j).map(|(_, b)| b.as_slice()).collect();
            !in_convex_hull(&input.rays[j], &others)
        })
        .collect();

    Ok(ToricData { input, kernel, curve_basis, c1, ample, walls, vertex_flags, grading })
}

fn one_based(cone: &[usize]) -> Vec<usize> {
    cone.iter().map(|i| i + 1).collect()
}

fn check_shape(input: &FanInput) -> Result<()> {
    let n = input.dimension;
    let m = input.rays.len();
    if n == 0 {
        return Err(Error::InvalidInput("dimension must be positive".into()));
    }
    if m <= n {
        return Err(Error::InvalidInput(format!("a complete fan in dimension {n} needs more than {n} rays")));
    }
    for (i, b) in input.rays.iter().enumerate() {
        if b.len() != n {
            return Err(Error::InvalidInput(format!("ray {} has {} entries, expected {n}", i + 1, b.len())));
        }
        let g = b.iter().fold(0i64, |g, &x| g.gcd(&x));
        if g == 0 {
            return Err(Error::InvalidInput(format!("ray {} is zero", i + 1)));
        }
        if g != 1 {
            return Err(Error::InvalidInput(format!("ray {} is not primitive", i + 1)));
        }
    }
    let distinct: BTreeSet<&Vec<i64>> = input.rays.iter().collect();
    if distinct.len() != m {
        return Err(Error::InvalidInput("repeated ray".into()));
    }
    let mut seen = BTreeSet::new();
    let mut used = vec![false; m];
    for cone in &input.max_cones {
        let set: BTreeSet<usize> = cone.iter().copied().collect();
        if cone.len() != n || set.len() != n {
            return Err(Error::InvalidInput(format!("maximal cone {:?} must have {n} distinct rays", one_based(cone))));
        }
        if let Some(&bad) = cone.iter().find(|&&i| i >= m) {
            return Err(Error::InvalidInput(format!("maximal cone references ray {}", bad + 1)));
        }
        if !seen.insert(set) {
            return Err(Error::InvalidInput(format!("maximal cone {:?} listed twice", one_based(cone))));
        }
        for &i in cone {
            used[i] = true;
        }
    }
    if let Some(i) = used.iter().position(|u| !u) {
        return Err(Error::InvalidInput(format!("ray {} lies on no maximal cone", i + 1)));
    }
    Ok(())
}

/// Checks wall incidence and connectivity; returns the primitive relation
/// (pairing vector) attached to each wall.
fn check_complete(input: &FanInput) -> Result<Vec<Vec<i64>>> {
    let m = input.rays.len();
    let cones: Vec<BTreeSet<usize>> = input.max_cones.iter().map(|c| c.iter().copied().collect()).collect();
    let mut incidence: BTreeMap<Vec<usize>, Vec<usize>> = BTreeMap::new();
    for (k, cone) in cones.iter().enumerate() {
        for &i in cone {
            let wall: Vec<usize> = cone.iter().copied().filter(|&x| x != i).collect();
            incidence.entry(wall).or_default().push(k);
        }
    }
    for (wall, on) in &incidence {
        if on.len() != 2 {
            return Err(Error::Incomplete { wall: one_based(wall), count: on.len() });
        }
    }
    // Connectivity of the adjacency graph.
    let mut reached = vec![false; cones.len()];
    let mut stack = vec![0usize];
    reached[0] = true;
    while let Some(k) = stack.pop() {
        for on in incidence.values() {
            if on.contains(&k) {
                for &o in on {
                    if !reached[o] {
                        reached[o] = true;
                        stack.push(o);
                    }
                }
            }
        }
    }
    if reached.iter().any(|x| !x) {
        return Err(Error::Incomplete { wall: Vec::new(), count: 0 });
    }

    let mut relations = Vec::with_capacity(incidence.len());
    for (wall, on) in &incidence {
        let sigma = &cones[on[0]];
        let i = *sigma.difference(&wall.iter().copied().collect()).next().expect("cone has a ray off the wall");
        let k = *cones[on[1]].difference(&wall.iter().copied().collect()).next().expect("cone has a ray off the wall");
        // b_k = Σ_{l∈σ} c_l b_l, integral since σ is unimodular.
        let basis: Vec<usize> = sigma.iter().copied().collect();
        let a: QMatrix = (0..input.dimension)
            .map(|row| basis.iter().map(|&l| int(input.rays[l][row])).collect())
            .collect();
        let solver = LeftSolver::new(&a, basis.len()).expect("smooth cone is a basis");
        let target: Vec<Rational> = input.rays[k].iter().map(|&x| int(x)).collect();
        let c = solver.solve(&target).expect("basis spans N");
        let mut v = vec![0i64; m];
        v[k] = 1;
        for (l, cl) in basis.iter().zip(&c) {
            v[*l] -= cl.to_integer().to_i64().expect("small coefficient");
        }
        if v[i] != 1 {
            return Err(Error::InvalidInput(format!(
                "cones {:?} and {:?} overlap",
                one_based(&input.max_cones[on[0]]),
                one_based(&input.max_cones[on[1]])
            )));
        }
        relations.push(v);
    }
    Ok(relations)
}

/// Drops duplicate relations and those in the cone of the others, leaving
/// the extremal rays of the Mori cone.
fn extremal_relations(mut relations: Vec<Vec<i64>>) -> Vec<Vec<i64>> {
    relations.sort();
    relations.dedup();
    let mut kept: Vec<Vec<i64>> = Vec::new();
    for (idx, v) in relations.iter().enumerate() {
        let others: Vec<&Vec<i64>> = relations
            .iter()
            .enumerate()
            .filter(|&(k, _)| k != idx)
            .map(|(_, w)| w)
            .collect();
        let mut sys = LinearSystem::new(others.len());
        for k in 0..others.len() {
            let mut c = vec![Rational::zero(); others.len()];
            c[k] = -Rational::one();
            sys.le(c, Rational::zero());
        }
        for i in 0..v.len() {
            sys.eq(others.iter().map(|w| int(w[i])).collect(), int(v[i]));
        }
        if !sys.is_feasible() {
            kept.push(v.clone());
        }
    }
    kept
}

fn check_curve_basis(rows: &[Vec<Rational>], rays: &[Vec<i64>], n: usize, r: usize) -> Result<()> {
    let m = rays.len();
    if rows.len() != r {
        return Err(Error::BadCurveBasis(format!("expected {r} rows, got {}", rows.len())));
    }
    for (a, row) in rows.iter().enumerate() {
        if row.len() != m {
            return Err(Error::BadCurveBasis(format!("row {} has {} entries, expected {m}", a + 1, row.len())));
        }
        for coord in 0..n {
            let s: Rational = row.iter().zip(rays).map(|(x, b)| x * int(b[coord])).sum();
            if !s.is_zero() {
                return Err(Error::BadCurveBasis(format!(
                    "row {} is not a relation among the rays (coordinate {} sums to {s})",
                    a + 1,
                    coord + 1
                )));
            }
        }
    }
    if linalg::rank(&rows.to_vec()) != r {
        return Err(Error::BadCurveBasis(format!("rows do not have full rank {r}")));
    }
    Ok(())
}

/// Prefers `r` extremal wall classes whose simplicial cone contains the
/// whole Mori cone; otherwise falls back to the canonical integral basis.
fn default_curve_basis(extremal: &[Vec<i64>], kernel: &[Vec<i64>], r: usize) -> QMatrix {
    let as_q = |rows: &[&Vec<i64>]| -> QMatrix { rows.iter().map(|v| v.iter().map(|&x| int(x)).collect()).collect() };
    let mut chosen: Vec<usize> = Vec::with_capacity(r);
    if let Some(found) = search_simplicial_basis(extremal, r, 0, &mut chosen) {
        let rows: Vec<&Vec<i64>> = found.iter().map(|&i| &extremal[i]).collect();
        return as_q(&rows);
    }
    let rows: Vec<&Vec<i64>> = kernel.iter().collect();
    as_q(&rows)
}

fn search_simplicial_basis(walls: &[Vec<i64>], r: usize, start: usize, chosen: &mut Vec<usize>) -> Option<Vec<usize>> {
    if chosen.len() == r {
        let basis: QMatrix = chosen.iter().map(|&i| walls[i].iter().map(|&x| int(x)).collect()).collect();
        let m = walls[0].len();
        let bt: QMatrix = (0..m).map(|i| basis.iter().map(|row| row[i].clone()).collect()).collect();
        let solver = LeftSolver::new(&bt, r)?;
        let contains_all = walls.iter().all(|w| {
            let b: Vec<Rational> = w.iter().map(|&x| int(x)).collect();
            solver.solve(&b).is_some_and(|x| x.iter().all(|c| !c.is_negative()))
        });
        return contains_all.then(|| chosen.clone());
    }
    for i in start..walls.len() {
        chosen.push(i);
        if let Some(found) = search_simplicial_basis(walls, r, i + 1, chosen) {
            return Some(found);
        }
        chosen.pop();
    }
    None
}

/// Every ray lies on the boundary of the fan polytope and the origin in its
/// interior: on each maximal cone the functional taking the value 1 on its
/// rays is at most 1 on every ray.
fn check_boundary(input: &FanInput) -> Result<()> {
    let n = input.dimension;
    for cone in &input.max_cones {
        let a: QMatrix = cone.iter().map(|&i| input.rays[i].iter().map(|&x| int(x)).collect()).collect();
        let solver = LeftSolver::new(&a, n).expect("smooth cone");
        let u = solver.solve(&vec![Rational::one(); n]).expect("square system");
        for (k, b) in input.rays.iter().enumerate() {
            let val: Rational = u.iter().zip(b).map(|(x, &y)| x * int(y)).sum();
            if val > Rational::one() {
                return Err(Error::NotNef(format!(
                    "ray {} lies beyond the supporting hyperplane of cone {:?}",
                    k + 1,
                    one_based(cone)
                )));
            }
        }
    }
    Ok(())
}

/// Mori cone generators: one primitive relation per extremal wall, sorted by
/// degree.
pub fn wall_curve_classes(data: &ToricData) -> Vec<CurveClass> {
    data.walls.clone()
}

/// Indices `j` (0-based) with `b_j` a vertex of `conv(b_1, ..., b_m)`.
pub fn fan_polytope_vertices(data: &ToricData) -> Vec<usize> {
    (0..data.num_rays()).filter(|&j| data.vertex_flags[j]).collect()
}

/// Fan of the `X`-bundle over `P^1` clutched by the circle action rotating
/// about `D_j`. Rays `(b_i, 0)`, `(0, 1)`, `(b_j, -1)`; nef basis
/// `p_0, p_1, ..., p_r` with `p_0` first.
pub fn build_associated_bundle(data: &ToricData, j: usize) -> Result<ToricData> {
    let n = data.dimension();
    let m = data.num_rays();
    if j >= m {
        return Err(Error::InvalidInput(format!("ray index {} out of range", j + 1)));
    }
    let mut rays: Vec<Vec<i64>> = data
        .rays()
        .iter()
        .map(|b| {
            let mut v = b.clone();
            v.push(0);
            v
        })
        .collect();
    let mut up = vec![0; n];
    up.push(1);
    rays.push(up);
    let mut down = data.rays()[j].clone();
    down.push(-1);
    rays.push(down);

    let mut max_cones = Vec::with_capacity(2 * data.max_cones().len());
    for cone in data.max_cones() {
        for extra in [m, m + 1] {
            let mut c = cone.clone();
            c.push(extra);
            max_cones.push(c);
        }
    }

    let mut basis: QMatrix = Vec::with_capacity(data.rank() + 1);
    let mut section = vec![Rational::zero(); m + 2];
    section[j] = -Rational::one();
    section[m] = Rational::one();
    section[m + 1] = Rational::one();
    basis.push(section);
    for row in data.curve_basis() {
        let mut v = row.clone();
        v.push(Rational::zero());
        v.push(Rational::zero());
        basis.push(v);
    }
    let mut ample = vec![Rational::one()];
    ample.extend(data.ample_class().iter().cloned());

    validate_fan(FanInput {
        name: format!("{} bundle E_{}", data.name(), j + 1),
        dimension: n + 1,
        rays,
        max_cones,
        curve_basis: Some(basis),
        ample: Some(ample),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Comparison {
    Lt,
    Le,
    Eq,
    Ge,
    Gt,
}

impl Comparison {
    fn holds(self, lhs: &BigInt, rhs: &BigInt) -> bool {
        match self {
            Comparison::Lt => lhs < rhs,
            Comparison::Le => lhs <= rhs,
            Comparison::Eq => lhs == rhs,
            Comparison::Ge => lhs >= rhs,
            Comparison::Gt => lhs > rhs,
        }
    }
}

/// `⟨divisor, d⟩ cmp value`, with the divisor class in the nef basis.
#[derive(Clone, Debug)]
pub struct Constraint {
    pub divisor: Vec<Rational>,
    pub cmp: Comparison,
    pub value: i64,
}

impl Constraint {
    pub fn toric(data: &ToricData, i: usize, cmp: Comparison, value: i64) -> Self {
        Constraint { divisor: data.divisor(i), cmp, value }
    }

    pub fn c1(data: &ToricData, cmp: Comparison, value: i64) -> Self {
        Constraint { divisor: data.c1().to_vec(), cmp, value }
    }
}

/// The constraints selecting the classes that feed `g_0^{(j)}`:
/// `⟨c_1, d⟩ = 0`, `⟨D_j, d⟩ < 0` and `⟨D_i, d⟩ >= 0` otherwise.
pub fn correction_constraints(data: &ToricData, j: usize) -> Vec<Constraint> {
    let mut cs = vec![Constraint::c1(data, Comparison::Eq, 0)];
    for i in 0..data.num_rays() {
        let cmp = if i == j { Comparison::Lt } else { Comparison::Ge };
        cs.push(Constraint::toric(data, i, cmp, 0));
    }
    cs
}

/// Integral classes `d` with `0 < ⟨η, d⟩ <= max_degree` satisfying every
/// constraint, sorted by degree then canonical coordinates.
///
/// Completeness relies on the constrained classes being effective; the scan
/// covers every lattice point of the Mori cone truncated at `max_degree`.
pub fn enumerate_classes(data: &ToricData, constraints: &[Constraint], max_degree: u32) -> Result<Vec<CurveClass>> {
    let grading = data.grading();
    for w in data.wall_classes() {
        if grading.scaled_degree(w) <= 0 {
            return Err(Error::UnboundedRegion(format!("wall class {w} has non-positive degree")));
        }
    }
    // Constraints as integer functionals on canonical coordinates.
    let scaled: Vec<(Vec<BigInt>, Comparison, BigInt)> = constraints
        .iter()
        .map(|c| {
            let f: Vec<Rational> = (0..grading.rank)
                .map(|col| (0..grading.rank).map(|a| &c.divisor[a] * &grading.to_gamma[a][col]).sum())
                .collect();
            let den = linalg::lcm_of_denominators(f.iter());
            let q = Rational::from_integer(den.clone());
            let coeffs = f.iter().map(|x| (x * &q).to_integer()).collect();
            (coeffs, c.cmp, BigInt::from(c.value) * den)
        })
        .collect();
    let accept = |d: &CurveClass| {
        scaled.iter().all(|(coeffs, cmp, rhs)| {
            let lhs: BigInt = coeffs.iter().zip(&d.0).map(|(a, &x)| a * x).sum();
            cmp.holds(&lhs, rhs)
        })
    };
    let mut out = Vec::new();
    lattice_points(data, max_degree, |d| {
        if accept(d) {
            out.push(d.clone());
        }
    });
    out.sort_by_key(|d| grading.sort_key(d));
    Ok(out)
}

/// Visits every nonzero class with nonnegative γ-coordinates, inside the
/// bounding box of the degree-truncated Mori cone, with `0 < ⟨η, d⟩ <= N`.
pub(crate) fn lattice_points(data: &ToricData, max_degree: u32, mut visit: impl FnMut(&CurveClass)) {
    let g = data.grading();
    let r = g.rank;
    let big_n = int(i64::from(max_degree));

    // Per-coordinate upper bounds from the vertices N/⟨η,w⟩ · w.
    let mut upper = vec![Rational::zero(); r];
    for w in data.wall_classes() {
        let x = g.gamma_coords(w);
        let scale = &big_n / g.degree(w);
        for a in 0..r {
            let v = &x[a] * &scale;
            if v > upper[a] {
                upper[a] = v;
            }
        }
    }
    let ample = data.ample_class();
    // slack[a]: most negative contribution coordinates a.. can still make.
    let mut slack = vec![Rational::zero(); r + 1];
    for a in (0..r).rev() {
        let low = &ample[a] * &upper[a];
        slack[a] = &slack[a + 1] + if low.is_negative() { low } else { Rational::zero() };
    }

    // Lattice in γ-coordinates: x = H c' / D (H lower triangular), d = U c'.
    let den = linalg::lcm_of_denominators(g.to_gamma.iter().flatten());
    let dq = Rational::from_integer(den.clone());
    let scaled: Vec<Vec<BigInt>> =
        g.to_gamma.iter().map(|row| row.iter().map(|t| (t * &dq).to_integer()).collect()).collect();
    let (h, u, rank) = column_hnf(&scaled, r);
    debug_assert_eq!(rank, r);
    let h: Vec<Vec<Rational>> = h.iter().map(|row| row.iter().map(|x| Rational::from_integer(x.clone()) / &dq).collect()).collect();
    let u: Vec<Vec<i64>> = u.iter().map(|row| row.iter().map(|x| x.to_i64().expect("small transform")).collect()).collect();

    let mut prefix = vec![0i64; r];
    let mut x = vec![Rational::zero(); r];
    let bound = g.degree_bound(max_degree);
    descend(&Ctx { h: &h, u: &u, upper: &upper, ample, slack: &slack, big_n: &big_n, grading: g, bound }, 0, &Rational::zero(), &mut prefix, &mut x, &mut visit);
}

struct Ctx<'a> {
    h: &'a [Vec<Rational>],
    u: &'a [Vec<i64>],
    upper: &'a [Rational],
    ample: &'a [Rational],
    slack: &'a [Rational],
    big_n: &'a Rational,
    grading: &'a Grading,
    bound: i64,
}

fn descend(
    ctx: &Ctx<'_>,
    a: usize,
    partial_degree: &Rational,
    prefix: &mut Vec<i64>,
    x: &mut Vec<Rational>,
    visit: &mut impl FnMut(&CurveClass),
) {
    let r = prefix.len();
    if a == r {
        let d = CurveClass((0..r).map(|i| ctx.u[i].iter().zip(prefix.iter()).map(|(p, q)| p * q).sum()).collect());
        let deg = ctx.grading.scaled_degree(&d);
        if deg > 0 && deg <= ctx.bound {
            visit(&d);
        }
        return;
    }
    if partial_degree + &ctx.slack[a] > *ctx.big_n {
        return;
    }
    let offset: Rational = (0..a).map(|k| &ctx.h[a][k] * int(prefix[k])).sum();
    let pivot = &ctx.h[a][a];
    let lo = (-&offset / pivot).ceil().to_integer().to_i64().expect("bounded");
    let hi = ((&ctx.upper[a] - &offset) / pivot).floor().to_integer().to_i64().expect("bounded");
    for c in lo..=hi {
        prefix[a] = c;
        x[a] = &offset + pivot * int(c);
        let next = partial_degree + &ctx.ample[a] * &x[a];
        descend(ctx, a + 1, &next, prefix, x, visit);
    }
    prefix[a] = 0;
}
