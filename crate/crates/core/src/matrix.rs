//! Exact square matrices over `Q(zeta_p)` and the torsion translation
//! matrices of the two curve families.
//!
//! For the p-torsion action on the ambient projective space the two
//! generators are the diagonal matrix `D = diag(1, zeta, ..., zeta^(p-1))`
//! and the twisted cyclic shift `M_a` with `M_a^p = a * I`. They satisfy
//! `M_a D = zeta * D M_a`, so the commutator `M_a D M_a^-1 D^-1` is `zeta I`.

use serde::{Deserialize, Serialize};

use crate::cyclo::{CycloElement, Prime};
use crate::error::{Error, Result};
use crate::kummer::{KummerAlgebra, KummerElement};
use crate::rational::Rational;

/// Dense square matrix over `K`, row major.
#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Matrix {
    n: usize,
    entries: Vec<CycloElement>,
}

impl Matrix {
    /// Build from rows; all rows must have length `rows.len()`.
    #[must_use]
    pub fn from_rows(rows: Vec<Vec<CycloElement>>) -> Self {
        let n = rows.len();
        assert!(n > 0, "empty matrix");
        let mut entries = Vec::with_capacity(n * n);
        for row in rows {
            assert!(row.len() == n, "matrix must be square");
            entries.extend(row);
        }
        Matrix { n, entries }
    }

    /// Identity of size `n`.
    #[must_use]
    pub fn identity(prime: Prime, n: usize) -> Self {
        let mut m = Matrix {
            n,
            entries: vec![CycloElement::zero(prime); n * n],
        };
        for i in 0..n {
            *m.at_mut(i, i) = CycloElement::one(prime);
        }
        m
    }

    /// Matrix size.
    #[must_use]
    pub fn size(&self) -> usize {
        self.n
    }

    /// Ambient prime, taken from the first entry.
    #[must_use]
    pub fn prime(&self) -> Prime {
        self.entries[0].prime()
    }

    /// Entry at `(row, col)`.
    #[must_use]
    pub fn at(&self, row: usize, col: usize) -> &CycloElement {
        &self.entries[row * self.n + col]
    }

    fn at_mut(&mut self, row: usize, col: usize) -> &mut CycloElement {
        &mut self.entries[row * self.n + col]
    }

    /// Rows as slices.
    pub fn rows(&self) -> impl Iterator<Item = &[CycloElement]> {
        self.entries.chunks(self.n)
    }

    /// Matrix product `self * rhs`.
    #[must_use]
    pub fn mul(&self, rhs: &Matrix) -> Matrix {
        assert!(self.n == rhs.n, "size mismatch");
        let prime = self.prime();
        let mut out = Matrix {
            n: self.n,
            entries: vec![CycloElement::zero(prime); self.n * self.n],
        };
        for i in 0..self.n {
            for k in 0..self.n {
                let a = self.at(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..self.n {
                    let b = rhs.at(k, j);
                    if !b.is_zero() {
                        *out.at_mut(i, j) = &*out.at(i, j) + &(a * b);
                    }
                }
            }
        }
        out
    }

    /// Apply to a column vector over `K`.
    #[must_use]
    pub fn apply(&self, v: &[CycloElement]) -> Vec<CycloElement> {
        assert!(v.len() == self.n, "size mismatch");
        let prime = self.prime();
        (0..self.n)
            .map(|i| {
                let mut acc = CycloElement::zero(prime);
                for j in 0..self.n {
                    let a = self.at(i, j);
                    if !a.is_zero() && !v[j].is_zero() {
                        acc = &acc + &(a * &v[j]);
                    }
                }
                acc
            })
            .collect()
    }

    /// Apply to a column vector over a Kummer algebra (entries of `self`
    /// act as scalars).
    #[must_use]
    pub fn apply_kummer(&self, alg: &KummerAlgebra, v: &[KummerElement]) -> Vec<KummerElement> {
        assert!(v.len() == self.n, "size mismatch");
        (0..self.n)
            .map(|i| {
                let mut acc = alg.zero();
                for j in 0..self.n {
                    let a = self.at(i, j);
                    if !a.is_zero() {
                        acc = alg.add(&acc, &alg.scale(&v[j], a));
                    }
                }
                acc
            })
            .collect()
    }

    /// Scale every entry.
    #[must_use]
    pub fn scale(&self, c: &CycloElement) -> Matrix {
        Matrix {
            n: self.n,
            entries: self.entries.iter().map(|e| e * c).collect(),
        }
    }

    /// `self^e` by repeated squaring.
    #[must_use]
    pub fn pow(&self, e: u32) -> Matrix {
        let mut acc = Matrix::identity(self.prime(), self.n);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    /// Determinant by fraction-free style Gaussian elimination over `K`.
    #[must_use]
    pub fn det(&self) -> CycloElement {
        let prime = self.prime();
        let mut m = self.clone();
        let mut det = CycloElement::one(prime);
        for col in 0..self.n {
            let pivot_row = (col..self.n).find(|&r| !m.at(r, col).is_zero());
            let Some(pr) = pivot_row else {
                return CycloElement::zero(prime);
            };
            if pr != col {
                for j in 0..self.n {
                    let tmp = m.at(pr, j).clone();
                    *m.at_mut(pr, j) = m.at(col, j).clone();
                    *m.at_mut(col, j) = tmp;
                }
                det = -&det;
            }
            let pivot = m.at(col, col).clone();
            det = &det * &pivot;
            let pivot_inv = pivot.inv().expect("pivot is nonzero");
            for r in (col + 1)..self.n {
                let factor = &*m.at(r, col) * &pivot_inv;
                if factor.is_zero() {
                    continue;
                }
                for j in col..self.n {
                    let sub = &factor * m.at(col, j);
                    *m.at_mut(r, j) = &*m.at(r, j) - &sub;
                }
            }
        }
        det
    }

    /// Inverse by Gauss-Jordan elimination; fails when singular.
    pub fn inverse(&self) -> Result<Matrix> {
        let prime = self.prime();
        let mut m = self.clone();
        let mut inv = Matrix::identity(prime, self.n);
        for col in 0..self.n {
            let pivot_row = (col..self.n).find(|&r| !m.at(r, col).is_zero());
            let Some(pr) = pivot_row else {
                return Err(Error::NonUnit);
            };
            if pr != col {
                for j in 0..self.n {
                    let tmp = m.at(pr, j).clone();
                    *m.at_mut(pr, j) = m.at(col, j).clone();
                    *m.at_mut(col, j) = tmp;
                    let tmp = inv.at(pr, j).clone();
                    *inv.at_mut(pr, j) = inv.at(col, j).clone();
                    *inv.at_mut(col, j) = tmp;
                }
            }
            let pivot_inv = m.at(col, col).inv().expect("pivot is nonzero");
            for j in 0..self.n {
                *m.at_mut(col, j) = &*m.at(col, j) * &pivot_inv;
                *inv.at_mut(col, j) = &*inv.at(col, j) * &pivot_inv;
            }
            for r in 0..self.n {
                if r == col || m.at(r, col).is_zero() {
                    continue;
                }
                let factor = m.at(r, col).clone();
                for j in 0..self.n {
                    let s = &factor * m.at(col, j);
                    *m.at_mut(r, j) = &*m.at(r, j) - &s;
                    let s = &factor * inv.at(col, j);
                    *inv.at_mut(r, j) = &*inv.at(r, j) - &s;
                }
            }
        }
        Ok(inv)
    }

    /// Group commutator `a b a^-1 b^-1`; both matrices must be invertible.
    pub fn commutator(a: &Matrix, b: &Matrix) -> Result<Matrix> {
        Ok(a.mul(b).mul(&a.inverse()?).mul(&b.inverse()?))
    }

    /// `Some(c)` when the matrix is `c * I`.
    #[must_use]
    pub fn as_scalar(&self) -> Option<CycloElement> {
        let c = self.at(0, 0).clone();
        for i in 0..self.n {
            for j in 0..self.n {
                let expect_diag = i == j;
                let e = self.at(i, j);
                if expect_diag && e != &c {
                    return None;
                }
                if !expect_diag && !e.is_zero() {
                    return None;
                }
            }
        }
        Some(c)
    }

    /// Rank over `K` by Gaussian elimination. Consumes a copy.
    #[must_use]
    pub fn rank_of(rows: Vec<Vec<CycloElement>>) -> usize {
        if rows.is_empty() {
            return 0;
        }
        let ncols = rows[0].len();
        let mut m = rows;
        let mut rank = 0;
        for col in 0..ncols {
            let Some(pr) = (rank..m.len()).find(|&r| !m[r][col].is_zero()) else {
                continue;
            };
            m.swap(rank, pr);
            let inv = m[rank][col].inv().expect("pivot is nonzero");
            for r in (rank + 1)..m.len() {
                if m[r][col].is_zero() {
                    continue;
                }
                let factor = &m[r][col] * &inv;
                for c in col..ncols {
                    let s = &factor * &m[rank][c];
                    m[r][c] = &m[r][c] - &s;
                }
            }
            rank += 1;
            if rank == m.len() {
                break;
            }
        }
        rank
    }

    /// Entrywise sum.
    #[must_use]
    pub fn add(&self, rhs: &Matrix) -> Matrix {
        assert!(self.n == rhs.n, "size mismatch");
        Matrix {
            n: self.n,
            entries: self
                .entries
                .iter()
                .zip(&rhs.entries)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    /// Basis of the right kernel `{ v : rows * v = 0 }` of a rectangular
    /// system given by rows. Deterministic: one basis vector per free
    /// column in ascending column order, each with a 1 in its free slot.
    #[must_use]
    pub fn kernel_basis(rows: &[Vec<CycloElement>]) -> Vec<Vec<CycloElement>> {
        assert!(!rows.is_empty(), "kernel of an empty system is ambiguous");
        let ncols = rows[0].len();
        let prime = rows[0][0].prime();
        let mut m = rows.to_vec();
        let pivots = rref(&mut m, ncols);
        let mut basis = Vec::new();
        for free in 0..ncols {
            if pivots.contains(&free) {
                continue;
            }
            let mut v = vec![CycloElement::zero(prime); ncols];
            v[free] = CycloElement::one(prime);
            for (pi, &pc) in pivots.iter().enumerate() {
                v[pc] = -&m[pi][free];
            }
            basis.push(v);
        }
        basis
    }

    /// Coefficients `c` with `sum c_i basis_i = target` when the target lies
    /// in the span, `None` otherwise. Free coefficients are set to 0, so the
    /// answer is unique for an independent basis.
    #[must_use]
    pub fn solve_in_span(
        basis: &[Vec<CycloElement>],
        target: &[CycloElement],
    ) -> Option<Vec<CycloElement>> {
        let k = basis.len();
        if k == 0 {
            return target.iter().all(CycloElement::is_zero).then(Vec::new);
        }
        let prime = basis[0][0].prime();
        let mut m: Vec<Vec<CycloElement>> = (0..target.len())
            .map(|r| {
                let mut row: Vec<CycloElement> = basis.iter().map(|b| b[r].clone()).collect();
                row.push(target[r].clone());
                row
            })
            .collect();
        let pivots = rref(&mut m, k);
        if m[pivots.len()..].iter().any(|row| !row[k].is_zero()) {
            return None;
        }
        let mut x = vec![CycloElement::zero(prime); k];
        for (pi, &pc) in pivots.iter().enumerate() {
            x[pc] = m[pi][k].clone();
        }
        Some(x)
    }
}

/// In-place reduced row echelon form with pivots restricted to the first
/// `ncols` columns (rows may be longer, e.g. augmented); returns the pivot
/// columns in order.
fn rref(m: &mut [Vec<CycloElement>], ncols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut rank = 0;
    for col in 0..ncols {
        let Some(pr) = (rank..m.len()).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(rank, pr);
        let inv = m[rank][col].inv().expect("pivot is nonzero");
        let width = m[rank].len();
        for j in col..width {
            m[rank][j] = &m[rank][j] * &inv;
        }
        for r in 0..m.len() {
            if r == rank || m[r][col].is_zero() {
                continue;
            }
            let factor = m[r][col].clone();
            for j in col..width {
                let s = &factor * &m[rank][j];
                m[r][j] = &m[r][j] - &s;
            }
        }
        pivots.push(col);
        rank += 1;
        if rank == m.len() {
            break;
        }
    }
    pivots
}

impl std::fmt::Debug for Matrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.n, self.n)?;
        for row in self.rows() {
            let cells: Vec<String> = row.iter().map(|e| format!("{e}")).collect();
            writeln!(f, "  [{}]", cells.join(", "))?;
        }
        write!(f, "]")
    }
}

/// A translation matrix together with its determinant, cached at build time.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TorsionMatrix {
    matrix: Matrix,
    det: CycloElement,
}

impl TorsionMatrix {
    /// Wrap a matrix, computing and caching its determinant.
    #[must_use]
    pub fn new(matrix: Matrix) -> Self {
        let det = matrix.det();
        TorsionMatrix { matrix, det }
    }

    /// The underlying matrix.
    #[must_use]
    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    /// Cached determinant.
    #[must_use]
    pub fn det(&self) -> &CycloElement {
        &self.det
    }

    /// Recompute the determinant and compare with the cache.
    #[must_use]
    pub fn det_consistent(&self) -> bool {
        self.matrix.det() == self.det
    }
}

/// Diagonal torsion generator `D = diag(1, zeta, ..., zeta^(p-1))`.
#[must_use]
pub fn translation_diag(prime: Prime) -> TorsionMatrix {
    let p = prime.p();
    let mut m = Matrix::identity(prime, p);
    for i in 0..p {
        *m.at_mut(i, i) = CycloElement::zeta_pow(prime, i as i64);
    }
    TorsionMatrix::new(m)
}

/// Twisted shift `M_a`: `e_0 -> e_(p-1)` picks up the factor `a`, every other
/// basis vector shifts down by one, so `M_a^p = a * I`.
#[must_use]
pub fn translation_shift(prime: Prime, a: &CycloElement) -> TorsionMatrix {
    assert!(a.prime() == prime, "parameter lives in the wrong field");
    let p = prime.p();
    let mut m = Matrix {
        n: p,
        entries: vec![CycloElement::zero(prime); p * p],
    };
    // Row i reads coordinate i+1 of the input; the last row reads a * x_0.
    for i in 0..p - 1 {
        *m.at_mut(i, i + 1) = CycloElement::one(prime);
    }
    *m.at_mut(p - 1, 0) = a.clone();
    TorsionMatrix::new(m)
}

/// Scalar multiple of the identity as a matrix.
#[must_use]
pub fn scalar_matrix(prime: Prime, n: usize, c: &CycloElement) -> Matrix {
    Matrix::identity(prime, n).scale(c)
}

/// Rational scalar multiple of the identity.
#[must_use]
pub fn rational_scalar_matrix(prime: Prime, n: usize, c: &Rational) -> Matrix {
    scalar_matrix(prime, n, &CycloElement::from_rational(prime, c.clone()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k3(n: i64) -> CycloElement {
        CycloElement::from_int(Prime::Three, n)
    }

    #[test]
    fn shift_cubes_to_scalar() {
        let a = k3(7);
        let m = translation_shift(Prime::Three, &a);
        let cube = m.matrix().pow(3);
        assert_eq!(cube.as_scalar().unwrap(), a);
        assert_eq!(m.det(), &a);
    }

    #[test]
    fn diag_det_is_one() {
        for prime in [Prime::Three, Prime::Five] {
            let d = translation_diag(prime);
            assert!(d.det().is_one());
            assert!(d.det_consistent());
        }
    }

    #[test]
    fn commutator_of_generators_is_zeta() {
        for prime in [Prime::Three, Prime::Five] {
            let a = CycloElement::from_int(prime, 4);
            let m = translation_shift(prime, &a);
            let d = translation_diag(prime);
            let c = Matrix::commutator(m.matrix(), d.matrix()).unwrap();
            assert_eq!(c.as_scalar().unwrap(), CycloElement::zeta(prime));
        }
    }

    #[test]
    fn inverse_round_trips() {
        fn k5(n: i64) -> CycloElement {
            CycloElement::from_int(Prime::Five, n)
        }
        let z = CycloElement::zeta(Prime::Five);
        let rows = vec![
            vec![k5(1), z.clone(), k5(0)],
            vec![k5(2), k5(1), k5(1)],
            vec![k5(0), &z * &z, k5(3)],
        ];
        let m = Matrix::from_rows(rows);
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv), Matrix::identity(Prime::Five, 3));
        assert_eq!(&m.det() * &inv.det(), CycloElement::one(Prime::Five));
    }

    #[test]
    fn singular_matrix_has_no_inverse() {
        let row = vec![k3(1), k3(2)];
        let m = Matrix::from_rows(vec![row.clone(), row]);
        assert!(m.det().is_zero());
        assert!(m.inverse().is_err());
    }

    #[test]
    fn rank_counts_independent_rows() {
        let rows = vec![
            vec![k3(1), k3(0), k3(1)],
            vec![k3(0), k3(1), k3(1)],
            vec![k3(1), k3(1), k3(2)],
        ];
        assert_eq!(Matrix::rank_of(rows), 2);
    }

    #[test]
    fn add_is_entrywise() {
        let a = Matrix::from_rows(vec![vec![k3(1), k3(2)], vec![k3(3), k3(4)]]);
        let b = Matrix::from_rows(vec![vec![k3(5), k3(-2)], vec![k3(0), k3(1)]]);
        let s = a.add(&b);
        assert_eq!(s.at(0, 0), &k3(6));
        assert_eq!(s.at(0, 1), &k3(0));
        assert_eq!(s.at(1, 1), &k3(5));
    }

    #[test]
    fn kernel_vectors_annihilate_the_rows() {
        let rows = vec![
            vec![k3(1), k3(1), k3(0), k3(2)],
            vec![k3(0), k3(0), k3(1), k3(1)],
            vec![k3(1), k3(1), k3(1), k3(3)],
        ];
        let kernel = Matrix::kernel_basis(&rows);
        let rank = Matrix::rank_of(rows.clone());
        assert_eq!(kernel.len(), 4 - rank);
        for v in &kernel {
            for row in &rows {
                let mut acc = CycloElement::zero(Prime::Three);
                for (r, x) in row.iter().zip(v) {
                    acc = &acc + &(r * x);
                }
                assert!(acc.is_zero());
            }
        }
    }

    #[test]
    fn full_rank_system_has_trivial_kernel() {
        let rows = vec![vec![k3(1), k3(2)], vec![k3(0), k3(1)]];
        assert!(Matrix::kernel_basis(&rows).is_empty());
    }

    #[test]
    fn solve_in_span_finds_unique_coefficients() {
        let basis = vec![
            vec![k3(1), k3(0), k3(1)],
            vec![k3(0), k3(1), k3(1)],
        ];
        let target = vec![k3(2), k3(3), k3(5)];
        assert_eq!(
            Matrix::solve_in_span(&basis, &target),
            Some(vec![k3(2), k3(3)])
        );
        let outside = vec![k3(1), k3(1), k3(1)];
        assert_eq!(Matrix::solve_in_span(&basis, &outside), None);
    }
}
