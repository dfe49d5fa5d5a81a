use serde::{Deserialize, Serialize};

use super::oracle::min_schmidt_k_expectation;
use crate::error::{Error, Result};
use crate::operator::HermitianOperator;
use crate::quantum::BipartiteState;
use crate::tol;

/// How a witness was certified non-negative on the Schmidt-number set.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FeasibilityRecord {
    /// Smallest expectation the oracle found; an upper bound on the true one.
    pub value: f64,
    pub restarts: usize,
    pub seed: u64,
}

/// A Hermitian `W ⪯ 1` whose expectation on Schmidt-rank-≤k states the
/// oracle could not push below `−ε`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SchmidtWitness {
    pub operator: HermitianOperator,
    pub k: usize,
    pub dims: (usize, usize),
    pub feasibility: FeasibilityRecord,
}

impl SchmidtWitness {
    pub fn certify(
        operator: HermitianOperator,
        dims: (usize, usize),
        k: usize,
        restarts: usize,
        seed: u64,
        eps: f64,
    ) -> Result<Self> {
        let top = operator.max_eigenvalue();
        if top > 1.0 + tol::COMPARE {
            return Err(Error::WitnessNotBounded {
                max_eigenvalue: top,
            });
        }
        let r = min_schmidt_k_expectation(&operator, dims, k, restarts, seed)?;
        if r.value < -eps {
            return Err(Error::UncertifiedWitness { value: r.value, eps });
        }
        Ok(Self {
            operator,
            k,
            dims,
            feasibility: FeasibilityRecord {
                value: r.value,
                restarts: r.restarts,
                seed,
            },
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct WitnessVerdict {
    /// `tr(Wρ) < −ε`, i.e. the Schmidt number of `ρ` exceeds `k`.
    pub detected: bool,
    pub expectation: f64,
    /// `|tr(Wρ)|` when detected, else zero.
    pub margin: f64,
}

/// Applies a certified witness to `ρ`.
pub fn sn_witness_lower_bound(
    rho: &BipartiteState,
    k: usize,
    witness: &SchmidtWitness,
    eps: f64,
) -> Result<WitnessVerdict> {
    if witness.k != k {
        return Err(Error::InvalidParameter(format!(
            "witness certified for k = {}, asked about k = {k}",
            witness.k
        )));
    }
    if witness.dims != rho.dims() {
        return Err(Error::DimensionMismatch("witness and state dimensions differ".into()));
    }
    let expectation = witness.operator.inner(rho.operator());
    let detected = expectation < -eps;
    Ok(WitnessVerdict {
        detected,
        expectation,
        margin: if detected { -expectation } else { 0.0 },
    })
}
