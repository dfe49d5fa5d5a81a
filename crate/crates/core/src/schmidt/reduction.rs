use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::operator::{c, CMatrix, CVector, HermitianOperator};
use crate::quantum::ChannelRep;
use crate::tol;

/// `Λ_t(X) = (tr(X)·1 − tX)/(d − t)`, trace preserving for `t < d`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReductionFamilyMap {
    pub d: usize,
    pub t: f64,
}

impl ReductionFamilyMap {
    pub fn new(d: usize, t: f64) -> Result<Self> {
        if d == 0 || !(t > 0.0 && t < d as f64) {
            return Err(Error::InvalidParameter(format!(
                "reduction map needs 0 < t < d, got d={d}, t={t}"
            )));
        }
        Ok(Self { d, t })
    }

    pub fn apply(&self, x: &CMatrix) -> CMatrix {
        let d = self.d;
        (CMatrix::identity(d, d) * x.trace() - x * c(self.t, 0.0)) / c(d as f64 - self.t, 0.0)
    }

    pub fn channel(&self) -> ChannelRep {
        ChannelRep::choi_of_map(self.d, self.d, |x| self.apply(x)).expect("square action")
    }

    /// Predicted minimum eigenvalue of `(id_m ⊗ Λ_t)(φ⁺_m)`.
    pub fn predicted_min_eigenvalue(&self, m: usize) -> f64 {
        (1.0 / m as f64 - self.t) / (self.d as f64 - self.t)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PositivityReport {
    pub d: usize,
    pub t: f64,
    /// Entry `m − 1` is `λ_min((id_m ⊗ Λ_t)(φ⁺_m))`, with `φ⁺_m` on the
    /// first `m` basis vectors of `C^d`.
    pub min_eigenvalues: Vec<f64>,
    /// Largest `m` with all of `λ_min(1..=m) ≥ −1e-10`.
    pub level: usize,
}

/// The map `Λ_t` together with its measured positivity level.
pub fn reduction_family(d: usize, t: f64) -> Result<(ReductionFamilyMap, PositivityReport)> {
    let map = ReductionFamilyMap::new(d, t)?;
    let ch = map.channel();
    let mut min_eigenvalues = Vec::with_capacity(d);
    for m in 1..=d {
        let mut v = CVector::zeros(m * d);
        let s = 1.0 / (m as f64).sqrt();
        for i in 0..m {
            v[i * d + i] = c(s, 0.0);
        }
        let out = ch.apply_partial_op(&HermitianOperator::projector(&v), m)?;
        min_eigenvalues.push(out.min_eigenvalue());
    }
    let level = min_eigenvalues
        .iter()
        .take_while(|&&l| l >= -tol::POSITIVITY)
        .count();
    Ok((
        map,
        PositivityReport {
            d,
            t,
            min_eigenvalues,
            level,
        },
    ))
}
