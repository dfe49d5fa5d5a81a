//! Schmidt-number robustness with two-sided certified bounds, witness
//! compression onto marginal supports, and witness padding.

mod bounds;
mod embed;
mod pad;
mod ppt;

pub use bounds::{robustness_bounds, LowerSource, RobustnessCertificate, RobustnessConfig};
pub use embed::{embed_witness, Embedding};
pub use pad::{pad_state, pad_witness, PaddedWitness};
pub use ppt::ppt_lower_bound;
