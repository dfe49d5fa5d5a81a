use crate::error::{Error, Result};
use crate::operator::HermitianOperator;
use crate::quantum::{BipartiteState, ChannelRep};
use crate::tol;

fn check_subnormalized(r1: &HermitianOperator, r2: &HermitianOperator) -> Result<()> {
    if r1.dim() != r2.dim() {
        return Err(Error::DimensionMismatch(format!(
            "states of dimension {} and {}",
            r1.dim(),
            r2.dim()
        )));
    }
    for r in [r1, r2] {
        let low = r.min_eigenvalue();
        if low < -tol::COMPARE {
            return Err(Error::InvalidState(format!("negative eigenvalue {low:.3e}")));
        }
    }
    let total = r1.trace() + r2.trace();
    if (total - 1.0).abs() > tol::COMPARE {
        return Err(Error::InvalidState(format!(
            "weighted states have total trace {total}, expected 1"
        )));
    }
    Ok(())
}

/// Optimal success probability for telling `ρ̃₁` from `ρ̃₂`, where the priors
/// are folded into the traces: `½(1 + ‖ρ̃₁ − ρ̃₂‖₁)`.
pub fn helstrom(r1: &HermitianOperator, r2: &HermitianOperator) -> Result<f64> {
    check_subnormalized(r1, r2)?;
    Ok(0.5 * (1.0 + (r1 - r2).trace_norm()))
}

/// [`helstrom`] for normalized states with prior `p` on the first.
pub fn helstrom_with_prior(p: f64, s1: &HermitianOperator, s2: &HermitianOperator) -> Result<f64> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidParameter(format!("prior {p} outside [0, 1]")));
    }
    helstrom(&s1.scale(p), &s2.scale(1.0 - p))
}

/// Two channels with a prior, to be told apart with an entangled probe.
#[derive(Clone, Debug)]
pub struct BinaryTask {
    pub phi1: ChannelRep,
    pub phi2: ChannelRep,
    pub p: f64,
}

impl BinaryTask {
    pub fn new(phi1: ChannelRep, phi2: ChannelRep, p: f64) -> Result<Self> {
        if !(p > 0.0 && p < 1.0) {
            return Err(Error::InvalidParameter(format!("prior {p} outside (0, 1)")));
        }
        if (phi1.d_in(), phi1.d_out()) != (phi2.d_in(), phi2.d_out()) {
            return Err(Error::DimensionMismatch("channels differ in shape".into()));
        }
        phi1.require_cptp(tol::COMPARE)?;
        phi2.require_cptp(tol::COMPARE)?;
        Ok(Self { phi1, phi2, p })
    }

    /// Helstrom probability when the probe `ρ` has the channel on its B side.
    pub fn guessing_probability(&self, rho: &BipartiteState) -> Result<f64> {
        let o1 = self.phi1.apply_partial(rho)?;
        let o2 = self.phi2.apply_partial(rho)?;
        helstrom_with_prior(self.p, &o1, &o2)
    }
}
