//! Dense complex linear algebra on top of `nalgebra`.

use alloc::vec::Vec;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

pub type CMatrix = DMatrix<Complex64>;
pub type CVector = DVector<Complex64>;
pub type RMatrix = DMatrix<f64>;

pub const ONE: Complex64 = Complex64::new(1.0, 0.0);
pub const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Singular values in descending order.
pub fn singular_values(m: &CMatrix) -> Vec<f64> {
    if m.nrows() == 0 || m.ncols() == 0 {
        return Vec::new();
    }
    let mut s: Vec<f64> = m.clone().singular_values().iter().copied().collect();
    s.sort_by(|a, b| b.total_cmp(a));
    s
}

/// Number of singular values above `tol` times the largest one.
pub fn numerical_rank(m: &CMatrix, tol: f64) -> usize {
    let s = singular_values(m);
    match s.first() {
        Some(&top) if top > 0.0 => s.iter().filter(|&&x| x > tol * top).count(),
        _ => 0,
    }
}

/// Dimension of the kernel of `m`, relative tolerance `tol`.
pub fn nullity(m: &CMatrix, tol: f64) -> usize {
    m.ncols() - numerical_rank(m, tol)
}

pub fn operator_norm(m: &CMatrix) -> f64 {
    singular_values(m).first().copied().unwrap_or(0.0)
}

/// Largest entrywise modulus of `a − b`.
pub fn max_abs_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    assert_eq!(a.shape(), b.shape());
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

/// `max |U*U − 1|`.
pub fn unitarity_defect(u: &CMatrix) -> f64 {
    let n = u.ncols();
    max_abs_diff(&(u.adjoint() * u), &CMatrix::identity(n, n))
}

/// Cholesky factor `L` with `L·L* = h`, or `None` if `h` is not positive definite.
pub fn hermitian_cholesky(h: &CMatrix) -> Option<CMatrix> {
    // nalgebra's complex square root never fails, so definiteness is checked on the spectrum
    if hermitian_eigenvalues(h).first().is_some_and(|&e| e <= 0.0) {
        return None;
    }
    nalgebra::Cholesky::new(h.clone()).map(nalgebra::Cholesky::unpack)
}

/// Eigenvalues of a Hermitian matrix in ascending order.
pub fn hermitian_eigenvalues(h: &CMatrix) -> Vec<f64> {
    let mut e: Vec<f64> = h.clone().symmetric_eigenvalues().iter().copied().collect();
    e.sort_by(f64::total_cmp);
    e
}

/// Eigenvalues of a real symmetric matrix in ascending order.
pub fn symmetric_eigenvalues(m: &RMatrix) -> Vec<f64> {
    let mut e: Vec<f64> = m.clone().symmetric_eigenvalues().iter().copied().collect();
    e.sort_by(f64::total_cmp);
    e
}

/// Kronecker product.
pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kronecker(b)
}

/// Block-diagonal sum.
pub fn direct_sum(a: &CMatrix, b: &CMatrix) -> CMatrix {
    let (n, m) = (a.nrows(), b.nrows());
    let mut out = CMatrix::zeros(n + m, a.ncols() + b.ncols());
    out.view_mut((0, 0), a.shape()).copy_from(a);
    out.view_mut((n, a.ncols()), b.shape()).copy_from(b);
    out
}

/// Build from row-major nested vectors.
pub fn from_rows(rows: &[Vec<Complex64>]) -> CMatrix {
    let n = rows.len();
    let m = rows.first().map_or(0, Vec::len);
    CMatrix::from_fn(n, m, |i, j| rows[i][j])
}

/// Row-major nested vectors of real and imaginary parts.
pub fn split_parts(m: &CMatrix) -> (Vec<Vec<f64>>, Vec<Vec<f64>>) {
    let re = (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| m[(i, j)].re).collect())
        .collect();
    let im = (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| m[(i, j)].im).collect())
        .collect();
    (re, im)
}

/// A permutation times a diagonal of phases: column `k` has a single
/// nonzero entry `phases[k]` in row `perm[k]`.
#[derive(Clone, Debug, PartialEq)]
pub struct MonomialMatrix {
    pub perm: Vec<usize>,
    pub phases: Vec<Complex64>,
}

impl MonomialMatrix {
    pub fn identity(n: usize) -> Self {
        MonomialMatrix {
            perm: (0..n).collect(),
            phases: alloc::vec![ONE; n],
        }
    }

    pub fn dim(&self) -> usize {
        self.perm.len()
    }

    /// `self · other`.
    pub fn compose(&self, other: &MonomialMatrix) -> MonomialMatrix {
        let perm = other.perm.iter().map(|&j| self.perm[j]).collect();
        let phases = other
            .perm
            .iter()
            .zip(&other.phases)
            .map(|(&j, p)| self.phases[j] * p)
            .collect();
        MonomialMatrix { perm, phases }
    }

    pub fn trace(&self) -> Complex64 {
        self.perm
            .iter()
            .enumerate()
            .filter(|(k, &p)| *k == p)
            .map(|(k, _)| self.phases[k])
            .sum()
    }

    pub fn to_dense(&self) -> CMatrix {
        let n = self.dim();
        let mut m = CMatrix::zeros(n, n);
        for (k, (&p, &ph)) in self.perm.iter().zip(&self.phases).enumerate() {
            m[(p, k)] = ph;
        }
        m
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn rank_and_nullity() {
        let m = from_rows(&[vec![ONE, c(2.0, 0.0)], vec![c(2.0, 0.0), c(4.0, 0.0)]]);
        assert_eq!(numerical_rank(&m, 1e-10), 1);
        assert_eq!(nullity(&m, 1e-10), 1);
        assert_eq!(numerical_rank(&CMatrix::identity(3, 3), 1e-10), 3);
    }

    #[test]
    fn cholesky_roundtrip() {
        let h = from_rows(&[vec![c(2.0, 0.0), c(0.0, 1.0)], vec![c(0.0, -1.0), c(2.0, 0.0)]]);
        let l = hermitian_cholesky(&h).unwrap();
        assert!(max_abs_diff(&(&l * l.adjoint()), &h) < 1e-12);
        let bad = from_rows(&[vec![ONE, c(2.0, 0.0)], vec![c(2.0, 0.0), ONE]]);
        assert!(hermitian_cholesky(&bad).is_none());
    }

    #[test]
    fn monomial_composition_matches_dense() {
        let a = MonomialMatrix {
            perm: vec![1, 2, 0],
            phases: vec![ONE, c(0.0, 1.0), c(-1.0, 0.0)],
        };
        let b = MonomialMatrix {
            perm: vec![2, 0, 1],
            phases: vec![c(0.0, -1.0), ONE, c(0.0, 1.0)],
        };
        let dense = a.to_dense() * b.to_dense();
        assert!(max_abs_diff(&a.compose(&b).to_dense(), &dense) < 1e-15);
        assert!((a.compose(&b).trace() - dense.trace()).norm() < 1e-15);
    }

    #[test]
    fn symmetric_spectrum() {
        let m = RMatrix::from_row_slice(2, 2, &[2.0, 1.0, 1.0, 2.0]);
        let e = symmetric_eigenvalues(&m);
        assert!((e[0] - 1.0).abs() < 1e-12 && (e[1] - 3.0).abs() < 1e-12);
    }
}
