//! From a trace-preserving k-positive map to a pair of channels that an input
//! of Schmidt number above `k` discriminates better than any input in `S_k`.
//!
//! `Λ_TA(X) = Λ(X) ⊕ (−tr X)` annihilates traces, so `c·Λ_TA = Φ₁ − Φ₂` for
//! two channels. For `σ ∈ S_k` the output `(id ⊗ Λ)(σ)` is a state and the
//! trace norm of `(id ⊗ (Φ₁ − Φ₂))(σ)` is exactly `2c`; for other inputs it is
//! `c(‖(id ⊗ Λ)(ρ)‖₁ + 1)`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::operator::{c, partial_trace, tensor, CMatrix, HermitianOperator, Subsystem};
use crate::quantum::{BipartiteState, ChannelRep};
use crate::schmidt::min_schmidt_k_expectation;
use crate::tol;

/// Appends one output level (the last basis index) that absorbs `−tr X`.
pub fn ta_from_ktp(map: &ChannelRep) -> Result<ChannelRep> {
    let tp = map.is_tp();
    if tp.residual > tol::COMPARE {
        return Err(Error::NotTracePreserving {
            residual: tp.residual,
        });
    }
    let (di, dout) = (map.d_in(), map.d_out());
    let ext = dout + 1;
    let chi = map.choi().matrix();
    let flag = -1.0 / di as f64;
    let m = CMatrix::from_fn(di * ext, di * ext, |r, s| {
        let (i, p) = (r / ext, r % ext);
        let (j, q) = (s / ext, s % ext);
        if p < dout && q < dout {
            chi[(i * dout + p, j * dout + q)]
        } else if p == dout && q == dout && i == j {
            c(flag, 0.0)
        } else {
            c(0.0, 0.0)
        }
    });
    ChannelRep::from_choi(HermitianOperator::symmetrized(m), di, ext)
}

/// `Φ₁ − Φ₂ = c·Λ_TA` with `Φ₁`, `Φ₂` CPTP.
#[derive(Clone, Debug)]
pub struct ChannelPair {
    pub phi1: ChannelRep,
    pub phi2: ChannelRep,
    pub c: f64,
}

impl ChannelPair {
    pub fn difference(&self) -> ChannelRep {
        self.phi1.sub(&self.phi2).expect("same shape")
    }
}

/// Splits the Choi operator into its positive and negative parts and fills
/// both up to channels with the same measure-and-prepare map.
pub fn channel_pair_from_ta(ta: &ChannelRep) -> Result<ChannelPair> {
    let (di, dout) = (ta.d_in(), ta.d_out());
    let marginal = partial_trace(ta.choi(), (di, dout), Subsystem::B)?;
    let residual = marginal.operator_norm();
    if residual > tol::COMPARE {
        return Err(Error::InvalidParameter(format!(
            "map does not annihilate traces (residual {residual:.3e})"
        )));
    }
    let (pos, neg) = ta.choi().jordan_parts();
    let lambda_a = ChannelRep::from_choi(pos, di, dout)?;
    let lambda_b = ChannelRep::from_choi(neg, di, dout)?;
    let big_a = lambda_b.dual_of_identity();
    let a = big_a.operator_norm();
    if a <= tol::COMPARE {
        return Err(Error::InvalidParameter("trace-annihilating map is zero".into()));
    }
    let fill = (&HermitianOperator::identity(di).scale(a) - &big_a).conj();
    let omega = HermitianOperator::identity(dout).scale(1.0 / dout as f64);
    let theta = ChannelRep::from_choi(tensor(&fill, &omega).scale(1.0 / di as f64), di, dout)?;
    let phi1 = lambda_a.add(&theta)?.scale(1.0 / a);
    let phi2 = lambda_b.add(&theta)?.scale(1.0 / a);
    Ok(ChannelPair {
        phi1,
        phi2,
        c: 1.0 / a,
    })
}

/// Most negative value of `⟨ψ|χ|ψ⟩` over Schmidt rank ≤ `k` (clamped to the
/// smaller side), from the heuristic oracle. Non-negative means the map
/// passed the k-positivity test.
pub fn k_positivity_value(map: &ChannelRep, k: usize, restarts: usize, seed: u64) -> Result<f64> {
    let dims = (map.d_in(), map.d_out());
    let k = k.clamp(1, dims.0.min(dims.1));
    Ok(min_schmidt_k_expectation(map.choi(), dims, k, restarts, seed)?.value)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AdvantageReport {
    pub k: usize,
    pub c: f64,
    /// `‖(id ⊗ (Φ₁ − Φ₂))(ρ)‖₁`, computed from the channel pair.
    pub value_with_rho: f64,
    /// `c(‖(id ⊗ Λ)(ρ)‖₁ + 1)`, computed from the map alone.
    pub closed_form: f64,
    #[serde(rename = "bound_Sk")]
    pub bound_sk: f64,
    pub margin: f64,
    pub p_guess_rho: f64,
    #[serde(rename = "p_guess_Sk")]
    pub p_guess_sk: f64,
    /// Oracle value of the k-positivity test on the map's Choi operator.
    pub k_positivity: f64,
}

/// Equal-prior channel discrimination advantage of `ρ` over `S_k`, using the
/// pair built from the trace-preserving k-positive `map`.
pub fn binary_advantage(
    rho: &BipartiteState,
    k: usize,
    map: &ChannelRep,
    restarts: usize,
    seed: u64,
) -> Result<AdvantageReport> {
    if rho.dims().1 != map.d_in() {
        return Err(Error::DimensionMismatch(format!(
            "map input {} does not match d_B = {}",
            map.d_in(),
            rho.dims().1
        )));
    }
    if k == 0 || k > rho.dims().0.min(rho.dims().1) {
        return Err(Error::InvalidParameter(format!("k = {k} out of range")));
    }
    let k_positivity = k_positivity_value(map, k, restarts, seed)?;
    if k_positivity < -tol::WITNESS_EPS {
        return Err(Error::InvalidParameter(format!(
            "map is not {k}-positive (oracle value {k_positivity:.3e})"
        )));
    }
    let pair = channel_pair_from_ta(&ta_from_ktp(map)?)?;
    let value_with_rho = pair.difference().apply_partial(rho)?.trace_norm();
    let closed_form = pair.c * (map.apply_partial(rho)?.trace_norm() + 1.0);
    let bound_sk = 2.0 * pair.c;
    Ok(AdvantageReport {
        k,
        c: pair.c,
        value_with_rho,
        closed_form,
        bound_sk,
        margin: value_with_rho - bound_sk,
        p_guess_rho: 0.5 + 0.25 * value_with_rho,
        p_guess_sk: 0.5 + 0.25 * bound_sk,
        k_positivity,
    })
}
