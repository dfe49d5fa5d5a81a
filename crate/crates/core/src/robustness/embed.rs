use crate::error::{Error, Result};
use crate::operator::{CMatrix, HermitianOperator, Subsystem};
use crate::quantum::BipartiteState;

/// A witness and state compressed onto the supports of the state's marginals.
#[derive(Clone, Debug)]
pub struct Embedding {
    pub witness: HermitianOperator,
    pub state: BipartiteState,
    pub dims: (usize, usize),
    /// Isometries onto the marginal ranges (`d_A × r_A`, `d_B × r_B`).
    pub v_a: CMatrix,
    pub v_b: CMatrix,
}

fn range_isometry(marginal: &HermitianOperator) -> CMatrix {
    let spec = marginal.eig();
    let d = marginal.dim();
    let rank = spec.eigenvalues.iter().filter(|&&l| l > 1e-10).count();
    if rank == d {
        return CMatrix::identity(d, d);
    }
    spec.eigenvectors.columns(0, rank).into_owned()
}

/// `W′ = (V_A ⊗ V_B)† W (V_A ⊗ V_B)`; `tr(W′ρ′) = tr(Wρ)` because `ρ` lives
/// on the product of its marginal ranges, and a Schmidt-rank-≤k vector of the
/// small space maps to one of the large space, so feasibility is inherited.
pub fn embed_witness(w: &HermitianOperator, rho: &BipartiteState) -> Result<Embedding> {
    if w.dim() != rho.dim() {
        return Err(Error::DimensionMismatch("witness and state dimensions differ".into()));
    }
    let v_a = range_isometry(&rho.marginal(Subsystem::A));
    let v_b = range_isometry(&rho.marginal(Subsystem::B));
    let v = v_a.kronecker(&v_b);
    let witness = HermitianOperator::symmetrized(v.adjoint() * w.matrix() * &v);
    let state_op = HermitianOperator::symmetrized(v.adjoint() * rho.operator().matrix() * &v);
    let dims = (v_a.ncols(), v_b.ncols());
    let state = BipartiteState::new(state_op, dims)?;
    Ok(Embedding {
        witness,
        state,
        dims,
        v_a,
        v_b,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operator::{basis_vector, c, kron_vec, CVector};
    use crate::quantum::max_entangled;

    #[test]
    fn full_rank_is_unchanged() {
        let rho = max_entangled(3);
        let w = &HermitianOperator::identity(9) - &rho.operator().scale(3.0);
        let e = embed_witness(&w, &rho).unwrap();
        assert_eq!(e.witness, w);
        assert_eq!(e.dims, (3, 3));
    }

    #[test]
    fn qubit_bell_inside_qutrits() {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let mut v = CVector::zeros(9);
        v[0] = c(s, 0.0);
        v[4] = c(s, 0.0);
        let rho = BipartiteState::from_pure(&v, (3, 3)).unwrap();
        let w = &HermitianOperator::identity(9) - &max_entangled(3).operator().scale(3.0);
        let e = embed_witness(&w, &rho).unwrap();
        assert_eq!(e.witness.dim(), 4);
        assert!((e.witness.inner(e.state.operator()) - w.inner(rho.operator())).abs() < 1e-10);
    }

    #[test]
    fn product_state_gives_a_line() {
        let v = kron_vec(&basis_vector(3, 1), &basis_vector(2, 0));
        let rho = BipartiteState::from_pure(&v, (3, 2)).unwrap();
        let w = HermitianOperator::from_real_diagonal(&[0.1, 0.2, 0.3, 0.4, 0.5, 0.6]);
        let e = embed_witness(&w, &rho).unwrap();
        assert_eq!(e.dims, (1, 1));
        assert!((e.witness.entry(0, 0).re - 0.3).abs() < 1e-12);
    }
}
