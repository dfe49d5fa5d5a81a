//! Cutting-plane / column-generation pair for `R_{S_k}`.
//!
//! One SDP serves both directions. Its dual is the witness program
//! `max −tr(Wρ)` s.t. `W ⪯ 1`, `tr(Wσ_j) ≥ 0` over an active set of
//! Schmidt-rank-≤k pure states; its primal is
//! `min Σ_j x_j − 1` s.t. `Σ_j x_j σ_j ⪰ ρ`, `x ≥ 0`.
//! The oracle adds violated states to the active set until it finds none.

use serde::{Deserialize, Serialize};

use super::ppt::ppt_lower_bound;
use crate::error::{Error, Result};
use crate::operator::{basis_vector, c, kron_vec, CVector, HermitianOperator};
use crate::quantum::BipartiteState;
use crate::schmidt::{candidates_capped, min_schmidt_k_candidates, FeasibilityRecord, SchmidtWitness};
use crate::sdp::{hermitian_basis, solve, Block, BlockData, SdpProblem, Sense, SolverOptions};
use crate::tol;

/// Local-search budget inside cutting-plane rounds. Any violated state is a
/// useful cut, so searches need not run to convergence there.
const ROUND_ITERATIONS: usize = 60;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RobustnessConfig {
    /// Oracle restarts per cutting-plane round.
    pub restarts: usize,
    /// Oracle restarts for the final certification pass.
    pub final_restarts: usize,
    pub max_rounds: usize,
    /// At most this many violated states are added per round.
    pub max_cuts_per_round: usize,
    pub seed: u64,
    pub eps: f64,
    pub sdp_tol: f64,
    /// Stop cutting once the round's certified interval is this narrow.
    pub target_width: f64,
    /// Also solve the decomposable-witness relaxation when `k = 1`.
    pub ppt: bool,
}

impl Default for RobustnessConfig {
    fn default() -> Self {
        Self {
            restarts: 32,
            final_restarts: 128,
            max_rounds: 60,
            max_cuts_per_round: 16,
            seed: 0,
            eps: tol::WITNESS_EPS,
            sdp_tol: 1e-9,
            target_width: 1e-6,
            ppt: true,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LowerSource {
    CuttingPlane,
    Ppt,
    /// No witness beat the zero operator.
    Trivial,
}

/// Certified interval `[lower, upper] ∋ R_{S_k}(ρ)`.
///
/// `upper` is rigorous: `decomposition` lists weights and Schmidt-rank-≤k
/// unit vectors with `Σ w_j |ψ_j⟩⟨ψ_j| ⪰ ρ` and `Σ w_j = 1 + upper`.
/// `lower = −tr(Wρ)` for the witness, whose non-negativity on the
/// Schmidt-number set is only as good as the oracle (for `k = 1` the
/// decomposable witness is exact).
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RobustnessCertificate {
    pub k: usize,
    pub lower: f64,
    pub upper: f64,
    pub witness: SchmidtWitness,
    pub lower_source: LowerSource,
    pub active_set_size: usize,
    pub rounds: usize,
    /// Whether the oracle stopped finding violated states before the cap.
    pub converged: bool,
    /// Restricted relaxation value after each round (non-increasing).
    pub relaxation_history: Vec<f64>,
    #[serde(skip)]
    pub decomposition: Vec<(f64, CVector)>,
}

impl RobustnessCertificate {
    pub fn width(&self) -> f64 {
        self.upper - self.lower
    }

    /// `Y = Σ w_j |ψ_j⟩⟨ψ_j|`.
    pub fn decomposition_operator(&self) -> HermitianOperator {
        let d = self.witness.operator.dim();
        let mut m = crate::operator::CMatrix::zeros(d, d);
        for (w, v) in &self.decomposition {
            m += v * v.adjoint() * c(*w, 0.0);
        }
        HermitianOperator::symmetrized(m)
    }

    /// `ρ = (1 + R)σ − Rτ` with `R = upper`; `τ` is absent when `R = 0`.
    pub fn sigma_tau(&self, rho: &BipartiteState) -> (HermitianOperator, Option<HermitianOperator>) {
        let y = self.decomposition_operator();
        let t = y.trace();
        let sigma = y.scale(1.0 / t);
        let tau = (t - 1.0 > 1e-12).then(|| (&y - rho.operator()).scale(1.0 / (t - 1.0)));
        (sigma, tau)
    }
}

fn round_seed(seed: u64, round: usize) -> u64 {
    seed ^ (round as u64 + 1).wrapping_mul(0x9E37_79B9_7F4A_7C15)
}

fn contains(set: &[CVector], v: &CVector) -> bool {
    set.iter().any(|u| u.dotc(v).norm_sqr() > 1.0 - 1e-9)
}

fn k_subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

/// Product basis states plus `(Σ_{i∈S} |ii⟩)/√k` for every k-subset `S`.
fn initial_active_set(dims: (usize, usize), k: usize) -> Vec<CVector> {
    let (da, db) = dims;
    let mut set = Vec::new();
    for i in 0..da {
        for j in 0..db {
            set.push(kron_vec(&basis_vector(da, i), &basis_vector(db, j)));
        }
    }
    let s = 1.0 / (k as f64).sqrt();
    for sub in k_subsets(da.min(db), k) {
        let mut v = CVector::zeros(da * db);
        for &i in &sub {
            v[i * db + i] = c(s, 0.0);
        }
        if !contains(&set, &v) {
            set.push(v);
        }
    }
    set
}

fn witness_problem(basis: &[HermitianOperator], rho_coords: &[f64], active: &[CVector]) -> SdpProblem {
    let d = basis[0].dim();
    let mut p = SdpProblem::new(vec![Block::Hermitian(d), Block::Diagonal(active.len())], Sense::Min);
    p.set_objective(0, BlockData::Hermitian(HermitianOperator::identity(d)));
    for (e, &r) in basis.iter().zip(rho_coords) {
        let lp = active.iter().map(|v| -e.expectation(v)).collect();
        p.add_constraint(
            vec![(0, BlockData::Hermitian(e.clone())), (1, BlockData::Diagonal(lp))],
            -r,
        );
    }
    p
}

fn combine(basis: &[HermitianOperator], coords: &[f64]) -> HermitianOperator {
    let d = basis[0].dim();
    let mut m = crate::operator::CMatrix::zeros(d, d);
    for (e, &y) in basis.iter().zip(coords) {
        m += e.matrix() * c(y, 0.0);
    }
    HermitianOperator::symmetrized(m)
}

fn rescale(w: &HermitianOperator, v: f64) -> HermitianOperator {
    let delta = (-v).max(0.0);
    let scale = (1.0 + delta).max(w.max_eigenvalue() + delta);
    (w + &HermitianOperator::identity(w.dim()).scale(delta)).scale(1.0 / scale)
}

/// Lower bound obtained from `w` once its oracle minimum `v` is shifted away.
fn certified_value(w: &HermitianOperator, v: f64, rho: &BipartiteState) -> f64 {
    -rescale(w, v).inner(rho.operator())
}

pub fn robustness_bounds(
    rho: &BipartiteState,
    k: usize,
    cfg: &RobustnessConfig,
) -> Result<RobustnessCertificate> {
    let dims = rho.dims();
    let dmin = dims.0.min(dims.1);
    if k == 0 || k > dmin {
        return Err(Error::InvalidParameter(format!("k = {k} outside 1..={dmin}")));
    }
    let d = rho.dim();
    let basis = hermitian_basis(d);
    let rho_coords: Vec<f64> = basis.iter().map(|e| e.inner(rho.operator())).collect();
    let opts = SolverOptions::with_tol(cfg.sdp_tol);

    let mut active = initial_active_set(dims, k);
    let mut history = Vec::new();
    let mut converged = false;
    let mut rounds = 0;
    let sol = loop {
        let sol = solve(&witness_problem(&basis, &rho_coords, &active), &opts)?;
        history.push(sol.dual_value);
        rounds += 1;
        let w = combine(&basis, &sol.dual);
        let cands = candidates_capped(&w, dims, k, cfg.restarts, round_seed(cfg.seed, rounds), ROUND_ITERATIONS)?;
        let narrow = cands
            .first()
            .map(|(v, _)| sol.primal_value - certified_value(&w, *v, rho) <= cfg.target_width)
            .unwrap_or(false);
        if narrow {
            converged = true;
            break sol;
        }
        let mut added = 0;
        for (v, psi) in cands {
            if v >= -cfg.eps || added >= cfg.max_cuts_per_round {
                break;
            }
            if !contains(&active, &psi) {
                active.push(psi);
                added += 1;
            }
        }
        if added == 0 {
            converged = true;
            break sol;
        }
        if rounds >= cfg.max_rounds {
            break sol;
        }
    };

    // Upper bound: restricted primal point, repaired to dominate ρ exactly.
    let x: Vec<f64> = sol.diagonal_block(1)[..]
        .iter()
        .map(|v| v.max(0.0))
        .collect();
    let mut decomposition: Vec<(f64, CVector)> = x
        .iter()
        .zip(&active)
        .filter(|(w, _)| **w > 0.0)
        .map(|(w, v)| (*w, v.clone()))
        .collect();
    let mut ym = crate::operator::CMatrix::zeros(d, d);
    for (w, v) in &decomposition {
        ym += v * v.adjoint() * c(*w, 0.0);
    }
    let gap = HermitianOperator::symmetrized(ym) - rho.operator().clone();
    let shift = (-gap.min_eigenvalue()).max(0.0);
    if shift > 0.0 {
        for i in 0..d {
            decomposition.push((shift, basis_vector(d, i)));
        }
    }
    let upper = (decomposition.iter().map(|p| p.0).sum::<f64>() - 1.0).max(0.0);

    // Lower bound: certify the final witness with the escalated oracle.
    let w = combine(&basis, &sol.dual);
    let best = min_schmidt_k_candidates(&w, dims, k, cfg.final_restarts, cfg.seed)?;
    let v = best[0].0;
    let delta = (-v).max(0.0);
    let scale = (1.0 + delta).max(w.max_eigenvalue() + delta);
    let wc = rescale(&w, v);
    let mut witness = SchmidtWitness {
        operator: wc,
        k,
        dims,
        feasibility: FeasibilityRecord {
            value: (v + delta) / scale,
            restarts: cfg.final_restarts,
            seed: cfg.seed,
        },
    };
    let mut lower = -witness.operator.inner(rho.operator());
    let mut source = LowerSource::CuttingPlane;

    if k == 1 && cfg.ppt && dmin > 1 {
        let (ppt_value, ppt_w) = ppt_lower_bound(rho, &opts)?;
        if ppt_value > lower {
            let r = min_schmidt_k_candidates(&ppt_w, dims, 1, cfg.final_restarts, cfg.seed)?;
            lower = ppt_value;
            source = LowerSource::Ppt;
            witness = SchmidtWitness {
                operator: ppt_w,
                k,
                dims,
                feasibility: FeasibilityRecord {
                    value: r[0].0,
                    restarts: cfg.final_restarts,
                    seed: cfg.seed,
                },
            };
        }
    }
    if lower <= 0.0 {
        lower = 0.0;
        source = LowerSource::Trivial;
        witness = SchmidtWitness {
            operator: HermitianOperator::zeros(d),
            k,
            dims,
            feasibility: FeasibilityRecord {
                value: 0.0,
                restarts: 0,
                seed: cfg.seed,
            },
        };
    }
    // Rounding-level overlap of the two bounds is not a certificate failure.
    if lower > upper && lower - upper < 1e-10 {
        lower = upper;
    }

    Ok(RobustnessCertificate {
        k,
        lower,
        upper,
        witness,
        lower_source: source,
        active_set_size: active.len(),
        rounds,
        converged,
        relaxation_history: history,
        decomposition,
    })
}
