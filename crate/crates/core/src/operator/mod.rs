//! Dense complex linear algebra for Hermitian operators.
//!
//! Matrices are `nalgebra` dense matrices of `Complex64`. [`HermitianOperator`]
//! wraps one that has been checked (and exactly symmetrized) on construction,
//! so every downstream spectrum is real.

mod eig;
mod hermitian;
mod partial;
mod svd;

pub use eig::{eig_hermitian, Spectrum};
pub use hermitian::HermitianOperator;
pub use partial::{partial_trace, partial_transpose, tensor, Subsystem};
pub use svd::{svd, Svd};

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

pub type C64 = Complex64;
pub type CMatrix = DMatrix<C64>;
pub type CVector = DVector<C64>;

#[inline]
pub(crate) fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// Largest `|A_ij - conj(A_ji)|` over all entries.
pub fn max_asymmetry(m: &CMatrix) -> f64 {
    let n = m.nrows();
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in i..n {
            worst = worst.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    worst
}

/// Computational basis vector `|index⟩` in dimension `dim`.
pub fn basis_vector(dim: usize, index: usize) -> CVector {
    let mut v = CVector::zeros(dim);
    v[index] = c(1.0, 0.0);
    v
}

/// Kronecker product of two vectors, first factor most significant.
pub fn kron_vec(a: &CVector, b: &CVector) -> CVector {
    let mut out = CVector::zeros(a.len() * b.len());
    for i in 0..a.len() {
        for j in 0..b.len() {
            out[i * b.len() + j] = a[i] * b[j];
        }
    }
    out
}

/// Kronecker product of two general matrices.
pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kronecker(b)
}

/// `U A U†`.
pub fn conjugate(u: &CMatrix, a: &CMatrix) -> CMatrix {
    u * a * u.adjoint()
}

/// Reshape a bipartite vector into its `d_a × d_b` coefficient matrix.
pub fn coefficient_matrix(psi: &CVector, dims: (usize, usize)) -> CMatrix {
    let (da, db) = dims;
    CMatrix::from_fn(da, db, |i, j| psi[i * db + j])
}

/// Inverse of [`coefficient_matrix`].
pub fn vectorize(m: &CMatrix) -> CVector {
    let (da, db) = m.shape();
    CVector::from_fn(da * db, |k, _| m[(k / db, k % db)])
}
