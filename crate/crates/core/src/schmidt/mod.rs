//! Schmidt decomposition, the reduction-map family, the Schmidt-rank
//! constrained minimization oracle and witness certification.

mod decompose;
mod oracle;
mod reduction;
mod witness;

pub use decompose::{schmidt_decompose, SchmidtDecomposition};
pub use oracle::{
    local_minimize, min_schmidt_k_candidates, min_schmidt_k_expectation, min_schmidt_k_expectation_from, OracleResult,
};
pub(crate) use oracle::candidates_capped;
pub use reduction::{reduction_family, PositivityReport, ReductionFamilyMap};
pub use witness::{sn_witness_lower_bound, FeasibilityRecord, SchmidtWitness, WitnessVerdict};
