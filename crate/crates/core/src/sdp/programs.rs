//! Small programs built on [`solve`]: guessing probabilities, trace norms,
//! minimum eigenvalues, and the Hermitian bases used to write equality
//! constraints on operators.

use super::problem::{Block, BlockData, SdpProblem, Sense};
use super::solver::{solve, SdpSolution, SdpStatus, SolverOptions};
use crate::error::{Error, Result};
use crate::operator::{c, CMatrix, HermitianOperator};

/// Orthonormal (Hilbert–Schmidt) basis of `d × d` Hermitian matrices.
pub fn hermitian_basis(d: usize) -> Vec<HermitianOperator> {
    let mut out = Vec::with_capacity(d * d);
    for i in 0..d {
        let mut m = CMatrix::zeros(d, d);
        m[(i, i)] = c(1.0, 0.0);
        out.push(HermitianOperator::symmetrized(m));
    }
    out.extend(off_diagonal_basis(d));
    out
}

fn off_diagonal_basis(d: usize) -> Vec<HermitianOperator> {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let mut out = Vec::new();
    for i in 0..d {
        for j in i + 1..d {
            let mut re = CMatrix::zeros(d, d);
            re[(i, j)] = c(s, 0.0);
            re[(j, i)] = c(s, 0.0);
            out.push(HermitianOperator::symmetrized(re));
            let mut im = CMatrix::zeros(d, d);
            im[(i, j)] = c(0.0, -s);
            im[(j, i)] = c(0.0, s);
            out.push(HermitianOperator::symmetrized(im));
        }
    }
    out
}

/// Orthonormal basis of the traceless `d × d` Hermitian matrices (`d² − 1` elements).
pub fn traceless_hermitian_basis(d: usize) -> Vec<HermitianOperator> {
    let mut out = Vec::with_capacity(d * d - 1);
    for l in 1..d {
        // diag(1, …, 1, −l, 0, …) with l ones, normalized.
        let norm = ((l * (l + 1)) as f64).sqrt();
        let mut diag = vec![0.0; d];
        for v in diag.iter_mut().take(l) {
            *v = 1.0 / norm;
        }
        diag[l] = -(l as f64) / norm;
        out.push(HermitianOperator::from_real_diagonal(&diag));
    }
    out.extend(off_diagonal_basis(d));
    out
}

pub(crate) fn require_optimal(sol: SdpSolution) -> Result<SdpSolution> {
    match sol.status {
        SdpStatus::Optimal => Ok(sol),
        status => Err(Error::Solver { status }),
    }
}

/// `max Σ_i tr(M_i ρ̃_i)` over POVMs `{M_i}`; returns the value and the POVM.
pub fn guessing_probability_sdp(
    states: &[HermitianOperator],
    opts: &SolverOptions,
) -> Result<(f64, Vec<HermitianOperator>)> {
    let Some(first) = states.first() else {
        return Err(Error::InvalidParameter("no states given".into()));
    };
    let d = first.dim();
    if states.iter().any(|s| s.dim() != d) {
        return Err(Error::DimensionMismatch("states differ in dimension".into()));
    }
    let n = states.len();
    let mut p = SdpProblem::new(vec![Block::Hermitian(d); n], Sense::Max);
    for (i, s) in states.iter().enumerate() {
        p.set_objective(i, BlockData::Hermitian(s.clone()));
    }
    let identity = HermitianOperator::identity(d);
    for e in hermitian_basis(d) {
        let terms = (0..n).map(|i| (i, BlockData::Hermitian(e.clone()))).collect();
        p.add_constraint(terms, e.inner(&identity));
    }
    let sol = require_optimal(solve(&p, opts)?)?;
    let povm = (0..n).map(|i| sol.hermitian_block(i).clone()).collect();
    Ok((sol.primal_value, povm))
}

/// `‖A‖₁ = min tr(P + Q)` subject to `P − Q = A`, `P, Q ⪰ 0`.
pub fn trace_norm_sdp(a: &HermitianOperator, opts: &SolverOptions) -> Result<f64> {
    let d = a.dim();
    let mut p = SdpProblem::new(vec![Block::Hermitian(d); 2], Sense::Min);
    p.set_objective(0, BlockData::Hermitian(HermitianOperator::identity(d)));
    p.set_objective(1, BlockData::Hermitian(HermitianOperator::identity(d)));
    for e in hermitian_basis(d) {
        let rhs = e.inner(a);
        p.add_constraint(
            vec![(0, BlockData::Hermitian(e.clone())), (1, BlockData::Hermitian(-&e))],
            rhs,
        );
    }
    Ok(require_optimal(solve(&p, opts)?)?.primal_value)
}

/// `λ_min(A) = min ⟨A, X⟩` over density operators `X`.
pub fn min_eigenvalue_sdp(a: &HermitianOperator, opts: &SolverOptions) -> Result<f64> {
    let d = a.dim();
    let mut p = SdpProblem::new(vec![Block::Hermitian(d)], Sense::Min);
    p.set_objective(0, BlockData::Hermitian(a.clone()));
    p.add_constraint(
        vec![(0, BlockData::Hermitian(HermitianOperator::identity(d)))],
        1.0,
    );
    Ok(require_optimal(solve(&p, opts)?)?.primal_value)
}
