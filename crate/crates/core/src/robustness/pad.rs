use crate::error::{Error, Result};
use crate::operator::{partial_trace, CMatrix, HermitianOperator, Subsystem};
use crate::quantum::BipartiteState;

/// `W = W̃ ⊕ ΔW` on `(C^{d_A} ⊕ C^n) ⊗ C^{d_B}` with `tr_A W = w·1_B`.
#[derive(Clone, Debug)]
pub struct PaddedWitness {
    pub operator: HermitianOperator,
    pub dims: (usize, usize),
    /// `‖W̃_B‖_∞`; the padded marginal is `w·1_B`.
    pub w: f64,
    /// Number of added A levels.
    pub n: usize,
    /// `ΔW` embedded on the padded space.
    pub delta: HermitianOperator,
}

/// Pads `W̃` so that its B marginal becomes proportional to the identity:
/// `ΔW = (1⊥_n / n) ⊗ (w·1_B − W̃_B)` with `w = ‖W̃_B‖_∞` and `n = ⌈w⌉`
/// (or `⌈w − λ_min(W̃_B)⌉` if larger, which only happens when `W̃_B` is not
/// PSD). Then `0 ⪯ ΔW ⪯ 1`, and a state supported on the original A levels
/// sees no change in `tr(Wρ)`.
pub fn pad_witness(w_tilde: &HermitianOperator, dims: (usize, usize)) -> Result<PaddedWitness> {
    let (da, db) = dims;
    let wb = partial_trace(w_tilde, dims, Subsystem::A)?;
    let spec = wb.eigenvalues();
    let (top, bottom) = (spec[0], spec[spec.len() - 1]);
    let w = top.abs().max(bottom.abs());
    if w == 0.0 || top - bottom <= 1e-12 * w.max(1.0) {
        return Ok(PaddedWitness {
            operator: w_tilde.clone(),
            dims,
            w: if w == 0.0 { 0.0 } else { top },
            n: 0,
            delta: HermitianOperator::zeros(da * db),
        });
    }
    let n = (w.max(w - bottom) - 1e-12).ceil().max(1.0) as usize;
    if !n.checked_mul(db).is_some_and(|x| x <= 4096) {
        return Err(Error::InvalidParameter(format!("padding needs {n} extra levels")));
    }
    let block = (&HermitianOperator::identity(db).scale(w) - &wb).scale(1.0 / n as f64);
    let dp = da + n;
    let mut m = CMatrix::zeros(dp * db, dp * db);
    let mut dm = CMatrix::zeros(dp * db, dp * db);
    for a in 0..da {
        for a2 in 0..da {
            for b in 0..db {
                for b2 in 0..db {
                    m[(a * db + b, a2 * db + b2)] = w_tilde.entry(a * db + b, a2 * db + b2);
                }
            }
        }
    }
    for a in da..dp {
        for b in 0..db {
            for b2 in 0..db {
                let v = block.entry(b, b2);
                m[(a * db + b, a * db + b2)] = v;
                dm[(a * db + b, a * db + b2)] = v;
            }
        }
    }
    Ok(PaddedWitness {
        operator: HermitianOperator::symmetrized(m),
        dims: (dp, db),
        w,
        n,
        delta: HermitianOperator::symmetrized(dm),
    })
}

/// Zero-pads the A factor of `ρ` with `n` extra levels.
pub fn pad_state(rho: &BipartiteState, n: usize) -> BipartiteState {
    let (da, db) = rho.dims();
    let dp = da + n;
    let src = rho.operator();
    let m = CMatrix::from_fn(dp * db, dp * db, |r, s| {
        if r < da * db && s < da * db {
            src.entry(r, s)
        } else {
            crate::operator::C64::new(0.0, 0.0)
        }
    });
    BipartiteState::new_unchecked(HermitianOperator::symmetrized(m), (dp, db))
}
