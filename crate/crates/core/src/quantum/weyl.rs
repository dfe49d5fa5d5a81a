use std::f64::consts::PI;

use super::state::max_entangled_vector;
use crate::error::{Error, Result};
use crate::operator::{c, CMatrix, HermitianOperator, C64};

/// Shift `X|j⟩ = |j+1⟩` and phase `Z|j⟩ = ω^j|j⟩` with `ω = e^{2πi/d}`.
#[derive(Clone, Debug)]
pub struct WeylOperators {
    pub d: usize,
    pub x: CMatrix,
    pub z: CMatrix,
    pub omega: C64,
}

impl WeylOperators {
    /// `X^k Z^l`.
    pub fn displacement(&self, k: usize, l: usize) -> CMatrix {
        let d = self.d;
        CMatrix::from_fn(d, d, |r, s| {
            if r == (s + k) % d {
                self.omega.powu(((s * l) % d) as u32)
            } else {
                c(0.0, 0.0)
            }
        })
    }
}

pub fn weyl(d: usize) -> Result<WeylOperators> {
    if d < 2 {
        return Err(Error::InvalidParameter(format!("Weyl operators need d >= 2, got {d}")));
    }
    let omega = C64::from_polar(1.0, 2.0 * PI / d as f64);
    let x = CMatrix::from_fn(d, d, |r, s| if r == (s + 1) % d { c(1.0, 0.0) } else { c(0.0, 0.0) });
    let z = CMatrix::from_fn(d, d, |r, s| if r == s { omega.powu(r as u32) } else { c(0.0, 0.0) });
    Ok(WeylOperators { d, x, z, omega })
}

/// Bell projectors `M_{k,l} = (1 ⊗ X^kZ^l) φ⁺ (1 ⊗ X^kZ^l)†`, index `k·d + l`.
pub fn bell_povm(d: usize) -> Result<Vec<HermitianOperator>> {
    let w = weyl(d)?;
    let phi = max_entangled_vector(d);
    let mut out = Vec::with_capacity(d * d);
    for k in 0..d {
        for l in 0..d {
            let u = CMatrix::identity(d, d).kronecker(&w.displacement(k, l));
            out.push(HermitianOperator::projector(&(u * &phi)));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn commutation_and_order() {
        for d in 2..6 {
            let w = weyl(d).unwrap();
            let id = CMatrix::identity(d, d);
            assert!((w.x.pow(d as u32) - &id).norm() < 1e-10);
            assert!((w.z.pow(d as u32) - &id).norm() < 1e-10);
            assert!((&w.z * &w.x - &w.x * &w.z * w.omega).norm() < 1e-10);
            let u = w.displacement(2 % d, 1);
            assert!((u - w.x.pow((2 % d) as u32) * &w.z).norm() < 1e-12);
        }
        assert!(weyl(1).is_err());
    }

    #[test]
    fn qubit_bell_povm() {
        let m = bell_povm(2).unwrap();
        assert_eq!(m.len(), 4);
        let sum = m.iter().fold(HermitianOperator::zeros(4), |a, b| &a + b);
        assert!(sum.max_abs_diff(&HermitianOperator::identity(4)) < 1e-12);
        assert!(m[0].inner(&m[3]).abs() < 1e-12);
        for p in &m {
            assert!((p.trace() - 1.0).abs() < 1e-12);
        }
    }
}
