//! Exact linear algebra over `Z` and `Q`.
//!
//! Matrices are plain `Vec<Vec<_>>` in row-major order. Everything here is
//! small (a handful of rows and columns) so clarity wins over cache layout.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::Rational;

pub type QMatrix = Vec<Vec<Rational>>;
pub type ZMatrix = Vec<Vec<BigInt>>;

pub fn to_q(m: &[Vec<i64>]) -> QMatrix {
    m.iter()
        .map(|row| row.iter().map(|&x| Rational::from_integer(x.into())).collect())
        .collect()
}

pub fn transpose<T: Clone>(m: &[Vec<T>], cols: usize) -> Vec<Vec<T>> {
    (0..cols).map(|j| m.iter().map(|row| row[j].clone()).collect()).collect()
}

/// Reduced row echelon form in place; returns the pivot column of each
/// nonzero row.
pub fn rref(m: &mut QMatrix) -> Vec<usize> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].recip();
        for x in m[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in 0..cols {
                    let delta = &f * &m[r][j];
                    m[i][j] -= delta;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank(m: &QMatrix) -> usize {
    let mut work = m.clone();
    rref(&mut work).len()
}

/// Determinant of a square integer matrix by fraction-free elimination.
pub fn det(m: &[Vec<i64>]) -> BigInt {
    let n = m.len();
    let mut a: ZMatrix = m.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(p) => {
                    a.swap(k, p);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    if n == 0 {
        BigInt::one()
    } else {
        sign * &a[n - 1][n - 1]
    }
}

/// Solver for `A x = b` where `A` (rows × cols) has full column rank.
///
/// Stores the row transformation `T` with `T A = [I; 0]`, so solving is a
/// matrix-vector product plus a consistency check on the trailing rows.
#[derive(Clone, Debug)]
pub struct LeftSolver {
    transform: QMatrix,
    cols: usize,
}

impl LeftSolver {
    /// Returns `None` when `A` is column-rank deficient.
    pub fn new(a: &QMatrix, cols: usize) -> Option<Self> {
        let rows = a.len();
        let mut aug: QMatrix = a
            .iter()
            .enumerate()
            .map(|(i, row)| {
                let mut r = row.clone();
                r.extend((0..rows).map(|j| if i == j { Rational::one() } else { Rational::zero() }));
                r
            })
            .collect();
        let pivots = rref(&mut aug);
        let full = pivots.iter().filter(|&&p| p < cols).count();
        if full != cols || pivots.iter().take(cols).enumerate().any(|(i, &p)| p != i) {
            return None;
        }
        let transform = aug.into_iter().map(|r| r[cols..].to_vec()).collect();
        Some(LeftSolver { transform, cols })
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Exact solution, or `None` if `b` is not in the column span.
    pub fn solve(&self, b: &[Rational]) -> Option<Vec<Rational>> {
        let mut out = Vec::with_capacity(self.cols);
        for (i, row) in self.transform.iter().enumerate() {
            let mut acc = Rational::zero();
            for (t, x) in row.iter().zip(b) {
                if !t.is_zero() && !x.is_zero() {
                    acc += t * x;
                }
            }
            if i < self.cols {
                out.push(acc);
            } else if !acc.is_zero() {
                return None;
            }
        }
        Some(out)
    }
}

/// Inverse of a square rational matrix.
pub fn inverse(a: &QMatrix) -> Option<QMatrix> {
    let n = a.len();
    let solver = LeftSolver::new(a, n)?;
    let cols: Vec<Vec<Rational>> = (0..n)
        .map(|j| {
            let e: Vec<Rational> =
                (0..n).map(|i| if i == j { Rational::one() } else { Rational::zero() }).collect();
            solver.solve(&e).expect("square full-rank system is consistent")
        })
        .collect();
    Some(transpose(&cols, n))
}

/// Column Hermite reduction: returns `(H, U)` with `A U = H`, `U`
/// unimodular and `H` in column echelon form. The number of pivots is the
/// rank; columns of `U` past the last pivot span the integer kernel of `A`.
pub fn column_hnf(a: &ZMatrix, cols: usize) -> (ZMatrix, ZMatrix, usize) {
    let rows = a.len();
    let mut h = a.to_vec();
    let mut u: ZMatrix = (0..cols)
        .map(|i| (0..cols).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
        .collect();
    let mut p = 0;
    for i in 0..rows {
        if p == cols {
            break;
        }
        for c in p + 1..cols {
            if h[i][c].is_zero() {
                continue;
            }
            let x = h[i][p].clone();
            let y = h[i][c].clone();
            let eg = x.extended_gcd(&y);
            let (g, s, t) = (eg.gcd, eg.x, eg.y);
            let xg = &x / &g;
            let yg = &y / &g;
            // [col_p, col_c] <- [s col_p + t col_c, -y/g col_p + x/g col_c]
            combine_columns(&mut h, p, c, &s, &t, &yg, &xg);
            combine_columns(&mut u, p, c, &s, &t, &yg, &xg);
        }
        if h[i][p].is_zero() {
            continue;
        }
        if h[i][p].is_negative() {
            negate_column(&mut h, p);
            negate_column(&mut u, p);
        }
        // Reduce entries left of the pivot into [0, pivot).
        for c in 0..p {
            let q = h[i][c].div_floor(&h[i][p]);
            if !q.is_zero() {
                sub_column(&mut h, c, p, &q);
                sub_column(&mut u, c, p, &q);
            }
        }
        p += 1;
    }
    (h, u, p)
}

fn combine_columns(m: &mut ZMatrix, p: usize, c: usize, s: &BigInt, t: &BigInt, yg: &BigInt, xg: &BigInt) {
    for row in m.iter_mut() {
        let a = row[p].clone();
        let b = row[c].clone();
        row[p] = s * &a + t * &b;
        row[c] = xg * &b - yg * &a;
    }
}

fn negate_column(m: &mut ZMatrix, c: usize) {
    for row in m.iter_mut() {
        row[c] = -row[c].clone();
    }
}

fn sub_column(m: &mut ZMatrix, target: usize, src: usize, q: &BigInt) {
    for row in m.iter_mut() {
        let d = q * &row[src];
        row[target] -= d;
    }
}

/// Canonical integer basis (row Hermite normal form) of the kernel of the
/// `n × m` integer matrix `b`. Returned as rows of length `m`.
pub fn integer_kernel(b: &[Vec<i64>], m: usize) -> Vec<Vec<i64>> {
    let a: ZMatrix = b.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
    let (_, u, rank) = column_hnf(&a, m);
    let basis: ZMatrix = (rank..m).map(|j| u.iter().map(|row| row[j].clone()).collect()).collect();
    if basis.is_empty() {
        return Vec::new();
    }
    // Row HNF of the basis = transpose of the column HNF of its transpose.
    let bt = transpose(&basis, m);
    let (h, _, _) = column_hnf(&bt, basis.len());
    transpose(&h, basis.len())
        .into_iter()
        .map(|r| r.iter().map(|x| x.to_i64().expect("kernel entry fits in i64")).collect())
        .collect()
}

pub fn lcm_of_denominators<'a>(xs: impl IntoIterator<Item = &'a Rational>) -> BigInt {
    xs.into_iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> Rational {
        Rational::from_integer(n.into())
    }

    #[test]
    fn determinant_matches_cofactor_expansion() {
        assert_eq!(det(&[vec![2, 1], vec![1, 1]]), BigInt::from(1));
        assert_eq!(det(&[vec![0, 1, 0], vec![1, 0, 0], vec![0, 0, 3]]), BigInt::from(-3));
        assert_eq!(det(&[vec![1, 2], vec![2, 4]]), BigInt::from(0));
    }

    #[test]
    fn kernel_of_p2_rays() {
        // b1 + b2 + b3 = 0.
        let rays = vec![vec![1, 0, -1], vec![0, 1, -1]];
        assert_eq!(integer_kernel(&rays, 3), vec![vec![1, 1, 1]]);
    }

    #[test]
    fn kernel_vectors_are_relations() {
        // F_2 rays as columns.
        let b = vec![vec![0, 0, -1, 1], vec![-1, 1, 1, 1]];
        let k = integer_kernel(&b, 4);
        assert_eq!(k.len(), 2);
        for row in &k {
            for bi in &b {
                assert_eq!(bi.iter().zip(row).map(|(x, y)| x * y).sum::<i64>(), 0);
            }
        }
        // Unimodular: the 2x2 minors have gcd 1.
        let mut g = 0i64;
        for i in 0..4 {
            for j in i + 1..4 {
                g = num_integer::gcd(g, k[0][i] * k[1][j] - k[0][j] * k[1][i]);
            }
        }
        assert_eq!(g, 1);
    }

    #[test]
    fn left_solver_detects_inconsistency() {
        let a = vec![vec![q(1)], vec![q(2)]];
        let s = LeftSolver::new(&a, 1).unwrap();
        assert_eq!(s.solve(&[q(3), q(6)]), Some(vec![q(3)]));
        assert_eq!(s.solve(&[q(3), q(5)]), None);
        assert!(LeftSolver::new(&vec![vec![q(1), q(2)], vec![q(2), q(4)]], 2).is_none());
    }

    #[test]
    fn hnf_is_lower_triangular_for_full_rank() {
        let a: ZMatrix = vec![vec![3.into(), 1.into()], vec![0.into(), 3.into()]];
        let (h, u, rank) = column_hnf(&a, 2);
        assert_eq!(rank, 2);
        assert!(h[0][1].is_zero());
        // A U = H
        for i in 0..2 {
            for j in 0..2 {
                let v: BigInt = (0..2).map(|k| &a[i][k] * &u[k][j]).sum();
                assert_eq!(v, h[i][j]);
            }
        }
    }
}
