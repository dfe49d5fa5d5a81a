use crate::error::{Error, Result};
use crate::operator::{
    c, kron_vec, partial_trace, CVector, HermitianOperator, Subsystem,
};
use crate::tol;

/// Density operator on `H_A ⊗ H_B`.
#[derive(Clone, Debug, PartialEq)]
pub struct BipartiteState {
    op: HermitianOperator,
    dims: (usize, usize),
}

impl BipartiteState {
    /// Checks dimensions, unit trace and positivity (both to [`tol::COMPARE`]).
    pub fn new(op: HermitianOperator, dims: (usize, usize)) -> Result<Self> {
        if dims.0 == 0 || dims.1 == 0 || dims.0 * dims.1 != op.dim() {
            return Err(Error::DimensionMismatch(format!(
                "state of dimension {} does not factor as {}x{}",
                op.dim(),
                dims.0,
                dims.1
            )));
        }
        let tr = op.trace();
        if (tr - 1.0).abs() > tol::COMPARE {
            return Err(Error::InvalidState(format!("trace {tr} is not 1")));
        }
        let lmin = op.min_eigenvalue();
        if lmin < -tol::COMPARE {
            return Err(Error::InvalidState(format!(
                "negative eigenvalue {lmin:.3e}"
            )));
        }
        Ok(Self { op, dims })
    }

    /// Skips validation; for operators that are states by construction.
    pub(crate) fn new_unchecked(op: HermitianOperator, dims: (usize, usize)) -> Self {
        Self { op, dims }
    }

    /// `|ψ⟩⟨ψ|` for a unit vector `ψ`.
    pub fn from_pure(psi: &CVector, dims: (usize, usize)) -> Result<Self> {
        let n = psi.norm();
        if (n - 1.0).abs() > tol::COMPARE {
            return Err(Error::InvalidState(format!("vector norm {n} is not 1")));
        }
        Self::new(HermitianOperator::projector(psi), dims)
    }

    pub fn product(a: &CVector, b: &CVector) -> Result<Self> {
        Self::from_pure(&kron_vec(a, b), (a.len(), b.len()))
    }

    pub fn maximally_mixed(dims: (usize, usize)) -> Self {
        let d = dims.0 * dims.1;
        Self::new_unchecked(HermitianOperator::identity(d).scale(1.0 / d as f64), dims)
    }

    /// Isotropic state `f φ⁺ + (1 − f)(1 − φ⁺)/(d² − 1)`, `f ∈ [0, 1]`.
    pub fn isotropic(d: usize, f: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&f) || d < 2 {
            return Err(Error::InvalidParameter(format!(
                "isotropic state needs d >= 2 and f in [0,1], got d={d}, f={f}"
            )));
        }
        let phi = max_entangled(d).op;
        let rest = &HermitianOperator::identity(d * d) - &phi;
        let op = &phi.scale(f) + &rest.scale((1.0 - f) / (d * d - 1) as f64);
        Ok(Self::new_unchecked(op, (d, d)))
    }

    pub fn operator(&self) -> &HermitianOperator {
        &self.op
    }

    pub fn into_operator(self) -> HermitianOperator {
        self.op
    }

    pub fn dims(&self) -> (usize, usize) {
        self.dims
    }

    pub fn dim(&self) -> usize {
        self.op.dim()
    }

    /// Reduced state on the subsystem that is kept.
    pub fn marginal(&self, keep: Subsystem) -> HermitianOperator {
        let traced = match keep {
            Subsystem::A => Subsystem::B,
            Subsystem::B => Subsystem::A,
        };
        partial_trace(&self.op, self.dims, traced).expect("dims checked on construction")
    }
}

/// `(Σ_i |ii⟩)/√d`.
pub fn max_entangled_vector(d: usize) -> CVector {
    let mut v = CVector::zeros(d * d);
    let s = 1.0 / (d as f64).sqrt();
    for i in 0..d {
        v[i * d + i] = c(s, 0.0);
    }
    v
}

/// `|φ⁺_d⟩⟨φ⁺_d|`.
pub fn max_entangled(d: usize) -> BipartiteState {
    BipartiteState::new_unchecked(HermitianOperator::projector(&max_entangled_vector(d)), (d, d))
}
