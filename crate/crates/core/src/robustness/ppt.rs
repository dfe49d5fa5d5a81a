use crate::error::Result;
use crate::operator::{partial_transpose, HermitianOperator, Subsystem};
use crate::quantum::BipartiteState;
use crate::sdp::{hermitian_basis, solve, Block, BlockData, SdpProblem, Sense, SolverOptions};

/// Best decomposable witness `W = P + Q^{T_B}` (`P, Q ⪰ 0`, `W ⪯ 1`).
///
/// Such `W` is non-negative on every separable state, so `−tr(Wρ)` is a
/// rigorous lower bound on the `k = 1` robustness. Solver inaccuracy is
/// repaired before the value is returned: negative parts of `P` and `Q` are
/// absorbed by an identity shift and `W` is rescaled to `W ⪯ 1`.
pub fn ppt_lower_bound(rho: &BipartiteState, opts: &SolverOptions) -> Result<(f64, HermitianOperator)> {
    let dims = rho.dims();
    let d = rho.dim();
    let rho_pt = partial_transpose(rho.operator(), dims, Subsystem::B)?;
    let mut p = SdpProblem::new(vec![Block::Hermitian(d); 3], Sense::Max);
    p.set_objective(0, BlockData::Hermitian(-rho.operator()));
    p.set_objective(1, BlockData::Hermitian(-&rho_pt));
    for e in hermitian_basis(d) {
        let e_pt = partial_transpose(&e, dims, Subsystem::B)?;
        let rhs = e.trace();
        p.add_constraint(
            vec![
                (0, BlockData::Hermitian(e.clone())),
                (1, BlockData::Hermitian(e_pt)),
                (2, BlockData::Hermitian(e)),
            ],
            rhs,
        );
    }
    let sol = solve(&p, opts)?;
    let pp = sol.hermitian_block(0);
    let qq = sol.hermitian_block(1);
    let delta = (-pp.min_eigenvalue()).max(0.0) + (-qq.min_eigenvalue()).max(0.0);
    let w = pp + &partial_transpose(qq, dims, Subsystem::B)?;
    let w = &w + &HermitianOperator::identity(d).scale(delta);
    let w = w.scale(1.0 / w.max_eigenvalue().max(1.0));
    Ok((-w.inner(rho.operator()), w))
}
