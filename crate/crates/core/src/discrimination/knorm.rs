//! Lower bounds on `‖Θ‖^(k) = max_{SR(ψ) ≤ k} ‖(id ⊗ Θ)(ψ)‖₁` by see-saw, and
//! the diamond norm (`k = d_in`) by semidefinite programming.
//!
//! The objective is convex in the input, so the maximum over the
//! Schmidt-number set is reached on pure vectors of Schmidt rank at most `k`.
//! The see-saw alternates between the optimal Helstrom observable for the
//! current input and the best rank-`k` input for that observable.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::operator::{tensor, CVector, HermitianOperator};
use crate::quantum::{random, ChannelRep};
use crate::schmidt::min_schmidt_k_expectation_from;
use crate::sdp::{
    hermitian_basis, require_optimal, solve, traceless_hermitian_basis, Block, BlockData, SdpProblem, Sense,
    SolverOptions,
};

const MAX_SWEEPS: usize = 200;

#[derive(Clone, Debug)]
pub struct KnormEstimate {
    pub k: usize,
    /// Achieved `‖(id ⊗ Θ)(ψ)‖₁`, a lower bound on the k-norm.
    pub value: f64,
    /// Input on ancilla ⊗ channel input, ancilla of dimension `d_in`.
    pub input: CVector,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct KnormProfile {
    /// Entry `k − 1` is the estimate for Schmidt rank `k`.
    pub values: Vec<f64>,
    pub restarts: usize,
    pub seed: u64,
}

fn output(theta: &ChannelRep, psi: &CVector) -> Result<HermitianOperator> {
    theta.apply_partial_op(&HermitianOperator::projector(psi), theta.d_in())
}

/// See-saw from one starting input; returns the last (best) value and input.
fn see_saw(theta: &ChannelRep, dual: &ChannelRep, k: usize, start: CVector) -> Result<(f64, CVector)> {
    let d = theta.d_in();
    let dims = (d, d);
    let mut psi = start;
    let mut value = output(theta, &psi)?.trace_norm();
    for _ in 0..MAX_SWEEPS {
        let out = output(theta, &psi)?;
        let h = out.map_spectrum(|x| if x > 0.0 { 1.0 } else if x < 0.0 { -1.0 } else { 0.0 });
        let g = dual.apply_partial_op(&h, d)?;
        let (_, next) = min_schmidt_k_expectation_from(&-&g, dims, k, &psi)?;
        let next_value = output(theta, &next)?.trace_norm();
        if next_value <= value + 1e-13 * (1.0 + value) {
            if next_value > value {
                value = next_value;
                psi = next;
            }
            break;
        }
        value = next_value;
        psi = next;
    }
    Ok((value, psi))
}

fn check_k(theta: &ChannelRep, k: usize) -> Result<()> {
    if k == 0 || k > theta.d_in() {
        return Err(Error::InvalidParameter(format!(
            "k = {k} outside 1..={}",
            theta.d_in()
        )));
    }
    Ok(())
}

fn best_of(
    theta: &ChannelRep,
    k: usize,
    restarts: usize,
    seed: u64,
    warm: Option<&CVector>,
) -> Result<KnormEstimate> {
    check_k(theta, k)?;
    let d = theta.d_in();
    let dual = theta.dual();
    let mut starts: Vec<CVector> = (0..restarts.max(1))
        .map(|r| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(r as u64);
            random::random_schmidt_rank(&mut rng, (d, d), k)
        })
        .collect();
    if let Some(w) = warm {
        starts.push(w.clone());
    }
    let runs: Vec<(f64, usize, CVector)> = starts
        .into_par_iter()
        .enumerate()
        .map(|(i, s)| see_saw(theta, &dual, k, s).map(|(v, psi)| (v, i, psi)))
        .collect::<Result<_>>()?;
    let (value, _, input) = runs
        .into_iter()
        .max_by(|a, b| a.0.total_cmp(&b.0).then(b.1.cmp(&a.1)))
        .expect("at least one start");
    Ok(KnormEstimate { k, value, input })
}

/// Best see-saw value over `restarts` seeded random starts of Schmidt rank `k`.
pub fn knorm_estimate(theta: &ChannelRep, k: usize, restarts: usize, seed: u64) -> Result<KnormEstimate> {
    best_of(theta, k, restarts, seed, None)
}

/// Estimates for every `k = 1..=d_in`. Each level is also started from the
/// previous level's optimizer, so the profile is non-decreasing.
pub fn knorm_profile(theta: &ChannelRep, restarts: usize, seed: u64) -> Result<KnormProfile> {
    let mut values = Vec::with_capacity(theta.d_in());
    let mut warm: Option<CVector> = None;
    for k in 1..=theta.d_in() {
        let est = best_of(theta, k, restarts, seed, warm.as_ref())?;
        values.push(est.value);
        warm = Some(est.input);
    }
    Ok(KnormProfile {
        values,
        restarts,
        seed,
    })
}

/// `‖Θ‖◇ = max ⟨J, W⟩` over `−ρ ⊗ 1 ⪯ W ⪯ ρ ⊗ 1` and density operators `ρ`,
/// for a Hermiticity-preserving `Θ` with unnormalized Choi operator `J`.
///
/// Written with `S± = ρ ⊗ 1 ∓ W ⪰ 0`: the objective is `⟨J, S₋ − S₊⟩/2` and
/// `S₊ + S₋` is pinned to the form `2ρ ⊗ 1`.
pub fn diamond_norm(theta: &ChannelRep, opts: &SolverOptions) -> Result<f64> {
    let (di, dout) = (theta.d_in(), theta.d_out());
    let n = di * dout;
    let j = theta.unnormalized_choi();
    let mut p = SdpProblem::new(vec![Block::Hermitian(n); 2], Sense::Max);
    p.set_objective(0, BlockData::Hermitian(j.scale(-0.5)));
    p.set_objective(1, BlockData::Hermitian(j.scale(0.5)));
    let both = |e: HermitianOperator| vec![(0, BlockData::Hermitian(e.clone())), (1, BlockData::Hermitian(e))];
    p.add_constraint(both(HermitianOperator::identity(n)), 2.0 * dout as f64);
    for g in hermitian_basis(di) {
        for t in traceless_hermitian_basis(dout) {
            p.add_constraint(both(tensor(&g, &t)), 0.0);
        }
    }
    Ok(require_optimal(solve(&p, opts)?)?.primal_value.max(0.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operator::{c, CMatrix};

    fn pauli_z() -> CMatrix {
        CMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![c(1.0, 0.0), c(-1.0, 0.0)]))
    }

    #[test]
    fn zero_map() {
        let id = ChannelRep::identity(2);
        let zero = id.sub(&id).unwrap();
        assert!(knorm_estimate(&zero, 1, 4, 0).unwrap().value.abs() < 1e-12);
        assert!(diamond_norm(&zero, &SolverOptions::default()).unwrap().abs() < 1e-6);
    }

    #[test]
    fn z_versus_identity() {
        let theta = ChannelRep::unitary(&pauli_z()).unwrap().sub(&ChannelRep::identity(2)).unwrap();
        let dn = diamond_norm(&theta, &SolverOptions::with_tol(1e-10)).unwrap();
        assert!((dn - 2.0).abs() < 1e-6, "{dn}");
        let k2 = knorm_estimate(&theta, 2, 8, 1).unwrap().value;
        assert!((k2 - 2.0).abs() < 1e-8, "{k2}");
        // Z and 1 are also perfectly distinguishable with |+⟩, no entanglement.
        let k1 = knorm_estimate(&theta, 1, 8, 1).unwrap().value;
        assert!((k1 - 2.0).abs() < 1e-8, "{k1}");
    }

    #[test]
    fn depolarizing_versus_identity() {
        // Known value: ‖id − D‖◇ = 2(1 − 1/d²) for the completely depolarizing D.
        for d in 2..4 {
            let theta = ChannelRep::identity(d).sub(&ChannelRep::depolarizing(d)).unwrap();
            let want = 2.0 * (1.0 - 1.0 / (d * d) as f64);
            let dn = diamond_norm(&theta, &SolverOptions::with_tol(1e-10)).unwrap();
            assert!((dn - want).abs() < 1e-6, "d={d}: {dn}");
            let prof = knorm_profile(&theta, 8, 2).unwrap();
            assert!((prof.values[d - 1] - want).abs() < 1e-6, "{:?}", prof.values);
            assert!(prof.values.windows(2).all(|w| w[0] <= w[1] + 1e-12));
        }
    }

    #[test]
    fn rejects_bad_k() {
        let theta = ChannelRep::identity(2);
        assert!(knorm_estimate(&theta, 0, 1, 0).is_err());
        assert!(knorm_estimate(&theta, 3, 1, 0).is_err());
    }
}
