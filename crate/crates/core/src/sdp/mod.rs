//! Small dense semidefinite programs.
//!
//! Problems are posed in standard primal form
//!
//! ```text
//! min (or max)  Σ_b ⟨C_b, X_b⟩   s.t.  Σ_b ⟨A_ib, X_b⟩ = b_i,   X_b ⪰ 0
//! ```
//!
//! over Hermitian blocks and non-negative diagonal ("LP") blocks. The dual
//! of the minimization form is `max bᵀy s.t. C − Σ y_i A_i ⪰ 0`, so programs
//! that are naturally stated over a free Hermitian variable are written down
//! as duals and read back through [`SdpSolution::dual`].

mod problem;
mod programs;
mod solver;

pub use problem::{Block, BlockData, Constraint, Sense, SdpProblem};
pub use programs::{
    guessing_probability_sdp, hermitian_basis, min_eigenvalue_sdp, trace_norm_sdp,
    traceless_hermitian_basis,
};
pub(crate) use programs::require_optimal;
pub use solver::{solve, IterateRecord, SdpSolution, SdpStatus, SolverOptions};
