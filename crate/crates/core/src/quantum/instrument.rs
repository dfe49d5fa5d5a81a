use super::channel::ChannelRep;
use super::state::BipartiteState;
use crate::error::{Error, Result};
use crate::operator::HermitianOperator;
use crate::sdp::{guessing_probability_sdp, SolverOptions};
use crate::tol;

/// A collection of CP trace-nonincreasing maps whose sum is trace preserving.
#[derive(Clone, Debug)]
pub struct Instrument {
    subchannels: Vec<ChannelRep>,
}

impl Instrument {
    pub fn new(subchannels: Vec<ChannelRep>) -> Result<Self> {
        let Some(first) = subchannels.first() else {
            return Err(Error::InvalidParameter("instrument has no branches".into()));
        };
        let (di, dout) = (first.d_in(), first.d_out());
        let mut total = ChannelRep::from_choi(HermitianOperator::zeros(di * dout), di, dout)?;
        for s in &subchannels {
            let cp = s.is_cp();
            if cp.residual > tol::COMPARE {
                return Err(Error::NotCompletelyPositive {
                    min_eigenvalue: -cp.residual,
                });
            }
            let tn = s.is_trace_nonincreasing();
            if !tn.holds {
                return Err(Error::InvalidParameter(format!(
                    "branch increases trace (excess {:.3e})",
                    tn.residual
                )));
            }
            total = total.add(s)?;
        }
        let tp = total.is_tp();
        if !tp.holds {
            return Err(Error::NotTracePreserving {
                residual: tp.residual,
            });
        }
        Ok(Self { subchannels })
    }

    /// `{p_i Λ_i}` for channels `Λ_i` and priors `p_i` summing to one.
    pub fn weighted(priors: &[f64], channels: &[ChannelRep]) -> Result<Self> {
        if priors.len() != channels.len() {
            return Err(Error::DimensionMismatch("one prior per channel".into()));
        }
        if priors.iter().any(|&p| p < 0.0) || (priors.iter().sum::<f64>() - 1.0).abs() > tol::COMPARE {
            return Err(Error::InvalidParameter("priors must be a probability vector".into()));
        }
        Self::new(priors.iter().zip(channels).map(|(&p, ch)| ch.scale(p)).collect())
    }

    pub fn subchannels(&self) -> &[ChannelRep] {
        &self.subchannels
    }

    /// Optimal probability of naming the branch that fired, when the input is
    /// `ρ` and the branch acts on its B factor.
    pub fn guessing_probability(&self, rho: &BipartiteState, opts: &SolverOptions) -> Result<f64> {
        let outputs = self
            .subchannels
            .iter()
            .map(|s| s.apply_partial(rho))
            .collect::<Result<Vec<_>>>()?;
        Ok(guessing_probability_sdp(&outputs, opts)?.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantum::{max_entangled, weyl};

    #[test]
    fn validation() {
        let id = ChannelRep::identity(2);
        assert!(Instrument::new(vec![id.scale(0.5), id.scale(0.5)]).is_ok());
        assert!(Instrument::new(vec![id.scale(0.5)]).is_err());
        assert!(Instrument::new(vec![id.scale(0.7), id.scale(0.7)]).is_err());
        assert!(Instrument::new(vec![ChannelRep::transpose(2)]).is_err());
    }

    #[test]
    fn pauli_branches_on_bell_state() {
        let w = weyl(2).unwrap();
        let chans: Vec<_> = (0..4)
            .map(|i| ChannelRep::unitary(&w.displacement(i / 2, i % 2)).unwrap())
            .collect();
        let inst = Instrument::weighted(&[0.25; 4], &chans).unwrap();
        let p = inst
            .guessing_probability(&max_entangled(2), &SolverOptions::default())
            .unwrap();
        assert!((p - 1.0).abs() < 1e-7);
    }
}
