//! Binary state and channel discrimination, k-norms of Hermitian maps and the
//! channel pair built from a trace-preserving k-positive map.

mod helstrom;
mod knorm;
mod pipeline;

pub use helstrom::{helstrom, helstrom_with_prior, BinaryTask};
pub use knorm::{diamond_norm, knorm_estimate, knorm_profile, KnormEstimate, KnormProfile};
pub use pipeline::{
    binary_advantage, channel_pair_from_ta, k_positivity_value, ta_from_ktp, AdvantageReport, ChannelPair,
};
