use std::ops::{Add, Mul, Neg, Sub};

use super::{c, eig::jacobi, max_asymmetry, CMatrix, CVector, Spectrum, C64};
use crate::error::{Error, Result};
use crate::tol;

/// A square complex matrix equal to its conjugate transpose.
#[derive(Clone, Debug, PartialEq)]
pub struct HermitianOperator {
    matrix: CMatrix,
}

impl HermitianOperator {
    /// Validates Hermiticity within [`tol::HERMITIAN`] (scaled by the largest
    /// entry when that exceeds one) and stores the exactly symmetrized matrix.
    pub fn new(matrix: CMatrix) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::NotSquare {
                rows: matrix.nrows(),
                cols: matrix.ncols(),
            });
        }
        if matrix.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        let scale = matrix.iter().fold(1.0f64, |m, z| m.max(z.norm()));
        let asym = max_asymmetry(&matrix);
        if asym > tol::HERMITIAN * scale {
            return Err(Error::NotHermitian {
                max_asymmetry: asym,
            });
        }
        Ok(Self::symmetrized(matrix))
    }

    /// `(M + M†) / 2` without any check. Callers use this for matrices that
    /// are Hermitian by construction up to rounding.
    pub fn symmetrized(matrix: CMatrix) -> Self {
        let adj = matrix.adjoint();
        let mut m = (matrix + adj) * c(0.5, 0.0);
        for i in 0..m.nrows() {
            m[(i, i)].im = 0.0;
        }
        Self { matrix: m }
    }

    pub fn zeros(dim: usize) -> Self {
        Self {
            matrix: CMatrix::zeros(dim, dim),
        }
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            matrix: CMatrix::identity(dim, dim),
        }
    }

    pub fn from_real_diagonal(diag: &[f64]) -> Self {
        let mut m = CMatrix::zeros(diag.len(), diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = c(d, 0.0);
        }
        Self { matrix: m }
    }

    /// Rank-one operator `|v⟩⟨v|` (not normalized).
    pub fn projector(v: &CVector) -> Self {
        Self::symmetrized(v * v.adjoint())
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> CMatrix {
        self.matrix
    }

    pub fn trace(&self) -> f64 {
        self.matrix.diagonal().iter().map(|z| z.re).sum()
    }

    /// `tr(A B)`, real for Hermitian arguments.
    pub fn inner(&self, other: &Self) -> f64 {
        self.matrix
            .iter()
            .zip(other.matrix.transpose().iter())
            .map(|(a, b)| (a * b).re)
            .sum()
    }

    pub fn expectation(&self, v: &CVector) -> f64 {
        (v.adjoint() * &self.matrix * v)[(0, 0)].re
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.matrix.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn eig(&self) -> Spectrum {
        jacobi(&self.matrix)
    }

    /// Eigenvalues in descending order.
    pub fn eigenvalues(&self) -> Vec<f64> {
        self.eig().eigenvalues
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues().last().copied().unwrap_or(0.0)
    }

    pub fn max_eigenvalue(&self) -> f64 {
        self.eigenvalues().first().copied().unwrap_or(0.0)
    }

    /// Sum of absolute eigenvalues.
    pub fn trace_norm(&self) -> f64 {
        self.eigenvalues().iter().map(|l| l.abs()).sum()
    }

    /// Largest absolute eigenvalue.
    pub fn operator_norm(&self) -> f64 {
        self.eigenvalues().iter().fold(0.0f64, |m, l| m.max(l.abs()))
    }

    /// Positive and negative parts `(A₊, A₋)` with `A = A₊ − A₋`, `A₊A₋ = 0`.
    pub fn jordan_parts(&self) -> (Self, Self) {
        let spec = self.eig();
        let n = self.dim();
        let mut pos = CMatrix::zeros(n, n);
        let mut neg = CMatrix::zeros(n, n);
        for (k, &l) in spec.eigenvalues.iter().enumerate() {
            let v = spec.eigenvectors.column(k);
            let p = v * v.adjoint();
            if l > 0.0 {
                pos += p * c(l, 0.0);
            } else if l < 0.0 {
                neg += p * c(-l, 0.0);
            }
        }
        (Self::symmetrized(pos), Self::symmetrized(neg))
    }

    /// Applies a real function to the spectrum.
    pub fn map_spectrum(&self, f: impl Fn(f64) -> f64) -> Self {
        let spec = self.eig();
        let n = self.dim();
        let mut out = CMatrix::zeros(n, n);
        for (k, &l) in spec.eigenvalues.iter().enumerate() {
            let v = spec.eigenvectors.column(k);
            out += v * v.adjoint() * c(f(l), 0.0);
        }
        Self::symmetrized(out)
    }

    /// `U A U†`.
    pub fn conjugate_by(&self, u: &CMatrix) -> Self {
        Self::symmetrized(u * &self.matrix * u.adjoint())
    }

    pub fn scale(&self, s: f64) -> Self {
        Self {
            matrix: &self.matrix * c(s, 0.0),
        }
    }

    /// Complex conjugate (equivalently the transpose).
    pub fn conj(&self) -> Self {
        Self {
            matrix: self.matrix.map(|z| z.conj()),
        }
    }

    /// Maximum entrywise distance.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        (&self.matrix - &other.matrix)
            .iter()
            .fold(0.0f64, |m, z| m.max(z.norm()))
    }

    pub fn entry(&self, i: usize, j: usize) -> C64 {
        self.matrix[(i, j)]
    }
}

impl Add for &HermitianOperator {
    type Output = HermitianOperator;
    fn add(self, rhs: Self) -> HermitianOperator {
        HermitianOperator {
            matrix: &self.matrix + &rhs.matrix,
        }
    }
}

impl Sub for &HermitianOperator {
    type Output = HermitianOperator;
    fn sub(self, rhs: Self) -> HermitianOperator {
        HermitianOperator {
            matrix: &self.matrix - &rhs.matrix,
        }
    }
}

impl Neg for &HermitianOperator {
    type Output = HermitianOperator;
    fn neg(self) -> HermitianOperator {
        self.scale(-1.0)
    }
}

impl Mul<f64> for &HermitianOperator {
    type Output = HermitianOperator;
    fn mul(self, rhs: f64) -> HermitianOperator {
        self.scale(rhs)
    }
}

impl Add for HermitianOperator {
    type Output = HermitianOperator;
    fn add(self, rhs: Self) -> HermitianOperator {
        &self + &rhs
    }
}

impl Sub for HermitianOperator {
    type Output = HermitianOperator;
    fn sub(self, rhs: Self) -> HermitianOperator {
        &self - &rhs
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_non_hermitian() {
        let m = CMatrix::from_row_slice(2, 2, &[c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)]);
        match HermitianOperator::new(m) {
            Err(Error::NotHermitian { max_asymmetry }) => assert!((max_asymmetry - 1.0).abs() < 1e-15),
            other => panic!("expected rejection, got {other:?}"),
        }
    }

    #[test]
    fn rejects_rectangular() {
        assert!(matches!(
            HermitianOperator::new(CMatrix::zeros(2, 3)),
            Err(Error::NotSquare { rows: 2, cols: 3 })
        ));
    }

    #[test]
    fn norms_of_simple_operators() {
        let a = HermitianOperator::from_real_diagonal(&[1.0, -1.0]);
        assert!((a.trace_norm() - 2.0).abs() < 1e-14);
        assert!((HermitianOperator::identity(3).operator_norm() - 1.0).abs() < 1e-14);
        let b = HermitianOperator::from_real_diagonal(&[0.4, 1.6]);
        assert!((b.operator_norm() - 1.6).abs() < 1e-14);
    }

    #[test]
    fn jordan_parts_recombine() {
        let a = HermitianOperator::new(CMatrix::from_row_slice(
            2,
            2,
            &[c(0.3, 0.0), c(0.2, -0.7), c(0.2, 0.7), c(-0.5, 0.0)],
        ))
        .unwrap();
        let (p, n) = a.jordan_parts();
        assert!((&p - &n).max_abs_diff(&a) < 1e-12);
        assert!(p.min_eigenvalue() > -1e-12 && n.min_eigenvalue() > -1e-12);
        assert!((p.trace() + n.trace() - a.trace_norm()).abs() < 1e-12);
    }
}
