//! Seeded fixtures shared by the benchmarks.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use etk_core::operator::HermitianOperator;
use etk_core::quantum::{max_entangled, random, BipartiteState};
use etk_core::robustness::RobustnessConfig;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_hermitian(d: usize, seed: u64) -> HermitianOperator {
    let g = random::gaussian_matrix(&mut rng(seed), d, d);
    HermitianOperator::symmetrized(&g + g.adjoint())
}

pub fn random_state(dims: (usize, usize), seed: u64) -> BipartiteState {
    random::random_state(&mut rng(seed), dims)
}

/// `1 − (d/k)φ⁺_d`, the optimal witness for the maximally entangled state.
pub fn bell_witness(d: usize, k: usize) -> HermitianOperator {
    &HermitianOperator::identity(d * d) - &max_entangled(d).operator().scale(d as f64 / k as f64)
}

/// Lighter settings so that one iteration stays in the millisecond range.
pub fn quick_config() -> RobustnessConfig {
    RobustnessConfig {
        restarts: 8,
        final_restarts: 32,
        ..RobustnessConfig::default()
    }
}
