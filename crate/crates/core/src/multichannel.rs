//! Multichannel discrimination task tailored to a Schmidt-number witness.
//!
//! A witness `W ⪯ 1` with `tr_A W ∝ 1_B` gives `F = 1 − W ⪰ 0`, read as the
//! Choi operator of `c·Λ†` for a channel `Λ: B → A`. Conjugating `Λ` by the
//! `d_A²` Weyl unitaries and measuring in the Bell basis wins with
//! probability `tr(Fρ)/c`, while no input in `S_k` beats `1/c`. The ratio is
//! `tr(Fρ) = 1 − tr(Wρ)`, which is `1 + R_{S_k}(ρ)` for an optimal witness.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::operator::{partial_trace, HermitianOperator, Subsystem};
use crate::quantum::{bell_povm, random, weyl, BipartiteState, ChannelRep};
use crate::robustness::{pad_state, pad_witness, robustness_bounds, RobustnessCertificate, RobustnessConfig};
use crate::sdp::{guessing_probability_sdp, SolverOptions};
use crate::tol;

/// Base channel and its Weyl conjugates `Γ_{k,l} = U_{kl} Λ(·) U_{kl}†`,
/// indexed `k·d_A + l`, with uniform priors.
#[derive(Clone, Debug)]
pub struct MultichannelTask {
    pub base: ChannelRep,
    pub channels: Vec<ChannelRep>,
    pub priors: Vec<f64>,
    pub c: f64,
}

impl MultichannelTask {
    pub fn d_a(&self) -> usize {
        self.base.d_out()
    }

    /// Weighted outputs `p_i (id ⊗ Γ_i)(ρ)`.
    pub fn weighted_outputs(&self, rho: &BipartiteState) -> Result<Vec<HermitianOperator>> {
        self.channels
            .par_iter()
            .zip(&self.priors)
            .map(|(g, p)| Ok(g.apply_partial(rho)?.scale(*p)))
            .collect()
    }
}

/// `F = 1 − W` as the Choi operator of `c·Λ†`; returns `(Λ, c)`.
///
/// With `tr_A F = (d_A − w)·1_B` the choice `c = tr(F)·d_A/d_B` makes `Λ†`
/// unital, hence `Λ` trace preserving.
pub fn witness_to_channel(w: &HermitianOperator, dims: (usize, usize)) -> Result<(ChannelRep, f64)> {
    let (da, db) = dims;
    if w.dim() != da * db {
        return Err(Error::DimensionMismatch(format!(
            "witness of dimension {} is not {da}x{db}",
            w.dim()
        )));
    }
    let f = &HermitianOperator::identity(da * db) - w;
    let low = f.min_eigenvalue();
    if low < -tol::COMPARE {
        return Err(Error::WitnessNotBounded {
            max_eigenvalue: 1.0 - low,
        });
    }
    let fb = partial_trace(&f, dims, Subsystem::A)?;
    let level = fb.trace() / db as f64;
    let spread = fb.max_abs_diff(&HermitianOperator::identity(db).scale(level));
    if spread > tol::COMPARE {
        return Err(Error::InvalidParameter(format!(
            "B marginal of the witness is not proportional to 1 (deviation {spread:.3e})"
        )));
    }
    let trace = f.trace();
    if trace <= tol::COMPARE {
        return Err(Error::InvalidParameter("1 − W vanishes, no channel to build".into()));
    }
    let c = trace * da as f64 / db as f64;
    let lambda = ChannelRep::from_choi(f.scale(1.0 / c), da, db)?.dual();
    lambda.require_cptp(1e-8)?;
    Ok((lambda, c))
}

pub fn build_task(base: ChannelRep, c: f64) -> Result<MultichannelTask> {
    base.require_cptp(1e-8)?;
    if !(c.is_finite() && c > 0.0) {
        return Err(Error::InvalidParameter(format!("constant c = {c} must be positive")));
    }
    let d = base.d_out();
    let ops = weyl(d)?;
    let mut channels = Vec::with_capacity(d * d);
    for k in 0..d {
        for l in 0..d {
            channels.push(base.conjugate_output(&ops.displacement(k, l))?);
        }
    }
    let priors = vec![1.0 / (d * d) as f64; d * d];
    Ok(MultichannelTask {
        base,
        channels,
        priors,
        c,
    })
}

fn check_input(task: &MultichannelTask, rho: &BipartiteState) -> Result<()> {
    let want = (task.d_a(), task.base.d_in());
    if rho.dims() != want {
        return Err(Error::DimensionMismatch(format!(
            "state is {:?}, task needs {want:?}",
            rho.dims()
        )));
    }
    Ok(())
}

/// Success probability of the Bell measurement on `(id ⊗ Γ_i)(ρ)`.
pub fn guess_with_bell(task: &MultichannelTask, rho: &BipartiteState) -> Result<f64> {
    check_input(task, rho)?;
    let povm = bell_povm(task.d_a())?;
    let outputs = task.weighted_outputs(rho)?;
    Ok(outputs.iter().zip(&povm).map(|(o, m)| o.inner(m)).sum())
}

/// Optimal success probability over all POVMs (semidefinite program).
pub fn guess_optimal(task: &MultichannelTask, rho: &BipartiteState, opts: &SolverOptions) -> Result<f64> {
    check_input(task, rho)?;
    Ok(guessing_probability_sdp(&task.weighted_outputs(rho)?, opts)?.0)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SkBound {
    /// The ceiling `1/c`.
    pub bound: f64,
    /// Best optimal-POVM probability found over sampled inputs in `S_k`.
    pub empirical: f64,
    pub samples: usize,
    pub holds: bool,
}

/// The ceiling `1/c` on inputs of Schmidt number at most `k`, checked against
/// `samples` random pure inputs of Schmidt rank `k` with optimal measurements.
pub fn bound_s_k(
    task: &MultichannelTask,
    k: usize,
    samples: usize,
    seed: u64,
    opts: &SolverOptions,
) -> Result<SkBound> {
    let dims = (task.d_a(), task.base.d_in());
    if k == 0 || k > dims.0.min(dims.1) {
        return Err(Error::InvalidParameter(format!("k = {k} out of range for {dims:?}")));
    }
    let bound = 1.0 / task.c;
    let mut empirical = f64::NEG_INFINITY;
    for s in 0..samples {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(s as u64);
        let sigma = BipartiteState::from_pure(&random::random_schmidt_rank(&mut rng, dims, k), dims)?;
        empirical = empirical.max(guess_optimal(task, &sigma, opts)?);
    }
    Ok(SkBound {
        bound,
        empirical,
        samples,
        holds: samples == 0 || empirical <= bound + 1e-7,
    })
}

/// The task built from a certificate's witness, padded so that its B
/// marginal is flat, together with the correspondingly padded state.
pub fn tailored_task(
    rho: &BipartiteState,
    cert: &RobustnessCertificate,
) -> Result<(MultichannelTask, BipartiteState)> {
    let padded = pad_witness(&cert.witness.operator, rho.dims())?;
    let (lambda, c) = witness_to_channel(&padded.operator, padded.dims)?;
    let task = build_task(lambda, c)?;
    Ok((task, pad_state(rho, padded.n)))
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct AdvantageRatio {
    /// Local dimension of A after padding.
    #[serde(rename = "d_A")]
    pub d_a: usize,
    pub k: usize,
    pub c: f64,
    pub p_guess_rho: f64,
    #[serde(rename = "bound_Sk")]
    pub bound_sk: f64,
    /// `p_guess_rho / bound_Sk`, a lower bound on the best ratio over tasks.
    pub ratio: f64,
    pub robustness_interval: [f64; 2],
    /// `lower ≤ ratio − 1 ≤ upper` within 1e-6.
    pub within_interval: bool,
}

/// Ratio achieved by the tailored task for a given certificate.
pub fn advantage_ratio_from(rho: &BipartiteState, cert: &RobustnessCertificate) -> Result<AdvantageRatio> {
    let (task, rho_pad) = tailored_task(rho, cert)?;
    let p_guess_rho = guess_with_bell(&task, &rho_pad)?;
    let bound_sk = 1.0 / task.c;
    let ratio = p_guess_rho / bound_sk;
    let within_interval = ratio >= 1.0 + cert.lower - 1e-6 && ratio <= 1.0 + cert.upper + 1e-6;
    Ok(AdvantageRatio {
        d_a: task.d_a(),
        k: cert.k,
        c: task.c,
        p_guess_rho,
        bound_sk,
        ratio,
        robustness_interval: [cert.lower, cert.upper],
        within_interval,
    })
}

/// Certifies `R_{S_k}(ρ)` and evaluates the tailored task's ratio.
pub fn advantage_ratio(
    rho: &BipartiteState,
    k: usize,
    cfg: &RobustnessConfig,
) -> Result<(AdvantageRatio, RobustnessCertificate)> {
    let cert = robustness_bounds(rho, k, cfg)?;
    Ok((advantage_ratio_from(rho, &cert)?, cert))
}

/// Converse check: on the tailored task no measurement does better than
/// `(1 + upper)/c`.
pub fn converse_holds(
    rho: &BipartiteState,
    cert: &RobustnessCertificate,
    opts: &SolverOptions,
) -> Result<(bool, f64)> {
    let (task, rho_pad) = tailored_task(rho, cert)?;
    let p = guess_optimal(&task, &rho_pad, opts)?;
    Ok((p <= (1.0 + cert.upper) / task.c + 1e-6, p))
}
