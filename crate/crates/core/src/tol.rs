//! Numerical tolerances shared across the crate.
//!
//! Every comparison threshold lives here so that tests and reports agree on
//! what "equal" means.

use serde::{Deserialize, Serialize};

/// Hermiticity check on raw matrix entries.
pub const HERMITIAN: f64 = 1e-10;
/// Default comparison tolerance for traces, residuals and postconditions.
pub const COMPARE: f64 = 1e-9;
/// Off-diagonal Frobenius norm (relative) at which Jacobi sweeps stop.
pub const JACOBI: f64 = 1e-12;
/// Default gap / feasibility tolerance of the SDP solver.
pub const SDP: f64 = 1e-8;
/// Singular values at or below this fraction of the largest do not count
/// toward the Schmidt rank.
pub const SCHMIDT_RANK: f64 = 1e-8;
/// Witness feasibility floor: an oracle value `>= -WITNESS_EPS` counts as
/// non-negative on the Schmidt-number set.
pub const WITNESS_EPS: f64 = 1e-7;
/// Eigenvalue floor used for positivity-level detection.
pub const POSITIVITY: f64 = 1e-10;

/// Bundle of tolerances that can be overridden from the command line.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    pub compare: f64,
    pub sdp: f64,
    pub witness_eps: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            compare: COMPARE,
            sdp: SDP,
            witness_eps: WITNESS_EPS,
        }
    }
}
