use serde::{Deserialize, Serialize};

use super::state::BipartiteState;
use crate::error::{Error, Result};
use crate::operator::{c, partial_trace, CMatrix, HermitianOperator, Subsystem, C64};
use crate::tol;

/// Choi normalization convention. Only the trace-one convention
/// (`tr χ = 1` for trace-preserving maps) is used.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Normalization {
    TraceOne,
}

/// Outcome of a structural check together with how far it is from failing
/// (or how badly it fails).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub holds: bool,
    pub residual: f64,
}

/// A Hermiticity-preserving linear map `B(C^d_in) → B(C^d_out)`.
#[derive(Clone, Debug, PartialEq)]
pub struct ChannelRep {
    choi: HermitianOperator,
    d_in: usize,
    d_out: usize,
}

impl ChannelRep {
    pub fn from_choi(choi: HermitianOperator, d_in: usize, d_out: usize) -> Result<Self> {
        if d_in == 0 || d_out == 0 || choi.dim() != d_in * d_out {
            return Err(Error::DimensionMismatch(format!(
                "Choi operator of dimension {} does not match {d_in}x{d_out}",
                choi.dim()
            )));
        }
        Ok(Self { choi, d_in, d_out })
    }

    /// Builds the Choi operator from the action on matrix units `|i⟩⟨j|`.
    pub fn choi_of_map(
        d_in: usize,
        d_out: usize,
        map: impl Fn(&CMatrix) -> CMatrix,
    ) -> Result<Self> {
        let mut chi = CMatrix::zeros(d_in * d_out, d_in * d_out);
        let w = c(1.0 / d_in as f64, 0.0);
        for i in 0..d_in {
            for j in 0..d_in {
                let mut e = CMatrix::zeros(d_in, d_in);
                e[(i, j)] = c(1.0, 0.0);
                let out = map(&e);
                if out.shape() != (d_out, d_out) {
                    return Err(Error::DimensionMismatch(format!(
                        "map returned {}x{}, expected {d_out}x{d_out}",
                        out.nrows(),
                        out.ncols()
                    )));
                }
                for p in 0..d_out {
                    for q in 0..d_out {
                        chi[(i * d_out + p, j * d_out + q)] = out[(p, q)] * w;
                    }
                }
            }
        }
        Self::from_choi(HermitianOperator::new(chi)?, d_in, d_out)
    }

    pub fn from_kraus(kraus: &[CMatrix]) -> Result<Self> {
        let Some(k0) = kraus.first() else {
            return Err(Error::InvalidParameter("empty Kraus list".into()));
        };
        let (d_out, d_in) = k0.shape();
        if kraus.iter().any(|k| k.shape() != (d_out, d_in)) {
            return Err(Error::DimensionMismatch("Kraus operators differ in shape".into()));
        }
        Self::choi_of_map(d_in, d_out, |x| {
            kraus
                .iter()
                .fold(CMatrix::zeros(d_out, d_out), |acc, k| acc + k * x * k.adjoint())
        })
    }

    pub fn identity(d: usize) -> Self {
        Self::choi_of_map(d, d, |x| x.clone()).expect("identity map")
    }

    /// `X ↦ tr(X)·1/d`.
    pub fn depolarizing(d: usize) -> Self {
        Self::choi_of_map(d, d, |x| CMatrix::identity(d, d) * (x.trace() / c(d as f64, 0.0)))
            .expect("depolarizing map")
    }

    /// `X ↦ Xᵀ`.
    pub fn transpose(d: usize) -> Self {
        Self::choi_of_map(d, d, |x| x.transpose()).expect("transpose map")
    }

    /// `X ↦ U X U†`.
    pub fn unitary(u: &CMatrix) -> Result<Self> {
        Self::from_kraus(std::slice::from_ref(u))
    }

    pub fn choi(&self) -> &HermitianOperator {
        &self.choi
    }

    pub fn d_in(&self) -> usize {
        self.d_in
    }

    pub fn d_out(&self) -> usize {
        self.d_out
    }

    pub fn normalization(&self) -> Normalization {
        Normalization::TraceOne
    }

    /// `J(Λ) = d_in·χ_Λ`, the unnormalized Choi operator.
    pub fn unnormalized_choi(&self) -> HermitianOperator {
        self.choi.scale(self.d_in as f64)
    }

    /// `Λ(X) = d_in·tr_in[(Xᵀ ⊗ 1) χ]`.
    pub fn apply(&self, x: &CMatrix) -> Result<CMatrix> {
        if x.shape() != (self.d_in, self.d_in) {
            return Err(Error::DimensionMismatch(format!(
                "input is {}x{}, channel expects {}",
                x.nrows(),
                x.ncols(),
                self.d_in
            )));
        }
        let (di, dout) = (self.d_in, self.d_out);
        let chi = self.choi.matrix();
        let scale = di as f64;
        Ok(CMatrix::from_fn(dout, dout, |p, q| {
            let mut acc = C64::new(0.0, 0.0);
            for i in 0..di {
                for j in 0..di {
                    acc += x[(i, j)] * chi[(i * dout + p, j * dout + q)];
                }
            }
            acc * scale
        }))
    }

    pub fn apply_hermitian(&self, x: &HermitianOperator) -> Result<HermitianOperator> {
        Ok(HermitianOperator::symmetrized(self.apply(x.matrix())?))
    }

    /// `(id_A ⊗ Λ)(X)` for `X` on `C^d_a ⊗ C^d_in`.
    pub fn apply_partial_op(&self, x: &HermitianOperator, d_a: usize) -> Result<HermitianOperator> {
        if x.dim() != d_a * self.d_in {
            return Err(Error::DimensionMismatch(format!(
                "operator of dimension {} is not {d_a}x{}",
                x.dim(),
                self.d_in
            )));
        }
        let (di, dout) = (self.d_in, self.d_out);
        let chi = self.choi.matrix();
        let rho = x.matrix();
        let scale = di as f64;
        let n = d_a * dout;
        let mut out = CMatrix::zeros(n, n);
        for a in 0..d_a {
            for a2 in 0..d_a {
                for i in 0..di {
                    for j in 0..di {
                        let r = rho[(a * di + i, a2 * di + j)];
                        if r == C64::new(0.0, 0.0) {
                            continue;
                        }
                        let r = r * scale;
                        for p in 0..dout {
                            for q in 0..dout {
                                out[(a * dout + p, a2 * dout + q)] +=
                                    r * chi[(i * dout + p, j * dout + q)];
                            }
                        }
                    }
                }
            }
        }
        Ok(HermitianOperator::symmetrized(out))
    }

    /// `(id ⊗ Λ)(ρ)` acting on the B factor of `state`.
    pub fn apply_partial(&self, state: &BipartiteState) -> Result<HermitianOperator> {
        let (da, db) = state.dims();
        if db != self.d_in {
            return Err(Error::DimensionMismatch(format!(
                "channel input {} does not match d_B = {db}",
                self.d_in
            )));
        }
        self.apply_partial_op(state.operator(), da)
    }

    /// Hilbert–Schmidt adjoint `Λ†`, with `J(Λ†) = SWAP·conj(J(Λ))·SWAP`.
    pub fn dual(&self) -> Self {
        let (di, dout) = (self.d_in, self.d_out);
        let chi = self.choi.matrix();
        let f = di as f64 / dout as f64;
        let m = CMatrix::from_fn(di * dout, di * dout, |r, s| {
            let (p, i) = (r / di, r % di);
            let (q, j) = (s / di, s % di);
            chi[(i * dout + p, j * dout + q)].conj() * f
        });
        Self {
            choi: HermitianOperator::symmetrized(m),
            d_in: dout,
            d_out: di,
        }
    }

    /// `Λ†(1) = d_in·(tr_out χ)ᵀ`.
    pub fn dual_of_identity(&self) -> HermitianOperator {
        partial_trace(&self.choi, (self.d_in, self.d_out), Subsystem::B)
            .expect("dims consistent")
            .conj()
            .scale(self.d_in as f64)
    }

    /// `U Λ(·) U†` for a unitary on the output.
    pub fn conjugate_output(&self, u: &CMatrix) -> Result<Self> {
        if u.shape() != (self.d_out, self.d_out) {
            return Err(Error::DimensionMismatch("unitary does not act on the output".into()));
        }
        let full = CMatrix::identity(self.d_in, self.d_in).kronecker(u);
        Ok(Self {
            choi: self.choi.conjugate_by(&full),
            d_in: self.d_in,
            d_out: self.d_out,
        })
    }

    pub fn scale(&self, s: f64) -> Self {
        Self {
            choi: self.choi.scale(s),
            ..*self
        }
    }

    fn same_shape(&self, other: &Self) -> Result<()> {
        if (self.d_in, self.d_out) != (other.d_in, other.d_out) {
            return Err(Error::DimensionMismatch("maps differ in shape".into()));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_shape(other)?;
        Ok(Self {
            choi: &self.choi + &other.choi,
            ..*self
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.same_shape(other)?;
        Ok(Self {
            choi: &self.choi - &other.choi,
            ..*self
        })
    }

    fn out_marginal(&self) -> HermitianOperator {
        partial_trace(&self.choi, (self.d_in, self.d_out), Subsystem::B).expect("dims consistent")
    }

    /// `tr_out χ = 1/d_in`.
    pub fn is_tp(&self) -> Check {
        let target = HermitianOperator::identity(self.d_in).scale(1.0 / self.d_in as f64);
        let residual = self.out_marginal().max_abs_diff(&target);
        Check {
            holds: residual <= tol::COMPARE,
            residual,
        }
    }

    /// `Λ(1) = 1`, i.e. `tr_in χ = 1/d_in`.
    pub fn is_unital(&self) -> Check {
        let m = partial_trace(&self.choi, (self.d_in, self.d_out), Subsystem::A)
            .expect("dims consistent");
        let target = HermitianOperator::identity(self.d_out).scale(1.0 / self.d_in as f64);
        let residual = m.max_abs_diff(&target);
        Check {
            holds: residual <= tol::COMPARE,
            residual,
        }
    }

    /// `χ ⪰ 0`; the residual is the most negative eigenvalue clipped at 0.
    pub fn is_cp(&self) -> Check {
        let residual = (-self.choi.min_eigenvalue()).max(0.0);
        Check {
            holds: residual <= tol::COMPARE,
            residual,
        }
    }

    /// `tr_out χ ⪯ 1/d_in`.
    pub fn is_trace_nonincreasing(&self) -> Check {
        let top = self.out_marginal().max_eigenvalue();
        let residual = (top - 1.0 / self.d_in as f64).max(0.0);
        Check {
            holds: residual <= tol::COMPARE,
            residual,
        }
    }

    /// Errors unless the map is CPTP within `tol`.
    pub fn require_cptp(&self, tol: f64) -> Result<()> {
        let tp = self.is_tp();
        if tp.residual > tol {
            return Err(Error::NotTracePreserving {
                residual: tp.residual,
            });
        }
        let cp = self.is_cp();
        if cp.residual > tol {
            return Err(Error::NotCompletelyPositive {
                min_eigenvalue: -cp.residual,
            });
        }
        Ok(())
    }
}
