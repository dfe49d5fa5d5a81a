//! States, channels, instruments and the Weyl/Bell structures.
//!
//! Channels are stored by their trace-one Choi operator
//! `χ_Λ = (id ⊗ Λ)(|φ⁺⟩⟨φ⁺|)` on `input ⊗ output`.

mod channel;
mod instrument;
pub mod random;
mod state;
mod weyl;

pub use channel::{Check, ChannelRep, Normalization};
pub use instrument::Instrument;
pub use state::{max_entangled, max_entangled_vector, BipartiteState};
pub use weyl::{bell_povm, weyl, WeylOperators};
