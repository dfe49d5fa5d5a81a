//! Infeasible-start primal-dual interior point method.
//!
//! HKM search direction with a Mehrotra predictor-corrector. Hermitian
//! blocks of size `n` are embedded as real symmetric blocks of size `2n`
//! through `A + iB ↦ ½[[A, −B], [B, A]]`, which preserves inner products and
//! positivity; the real iterate is folded back to a Hermitian matrix on exit.

use nalgebra::{Cholesky, DMatrix, DVector, SymmetricEigen};
use serde::{Deserialize, Serialize};

use super::problem::{Block, BlockData, SdpProblem, Sense};
use crate::error::Result;
use crate::operator::{CMatrix, HermitianOperator, C64};
use crate::tol;

type RMat = DMatrix<f64>;
type RVec = DVector<f64>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SdpStatus {
    Optimal,
    /// The primal constraints admit no PSD point (heuristic detection).
    Infeasible,
    /// The primal objective is unbounded (heuristic detection).
    Unbounded,
    /// Iteration cap hit or progress stalled; the best iterate is returned.
    MaxIterations,
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct SolverOptions {
    pub tol: f64,
    pub max_iterations: usize,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            tol: tol::SDP,
            max_iterations: 200,
        }
    }
}

impl SolverOptions {
    pub fn with_tol(tol: f64) -> Self {
        Self {
            tol,
            ..Self::default()
        }
    }
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct IterateRecord {
    pub primal_objective: f64,
    pub dual_objective: f64,
    pub primal_infeasibility: f64,
    pub dual_infeasibility: f64,
    pub mu: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SdpSolution {
    pub status: SdpStatus,
    /// Objective `Σ⟨C_b, X_b⟩` of the problem as posed.
    pub primal_value: f64,
    /// Dual objective `bᵀy`.
    pub dual_value: f64,
    pub primal: Vec<BlockData>,
    pub dual: Vec<f64>,
    /// Dual slack `C − Σ y_i A_i` (min) or `Σ y_i A_i − C` (max).
    pub slack: Vec<BlockData>,
    pub iterations: usize,
    pub primal_infeasibility: f64,
    pub dual_infeasibility: f64,
    /// Set when `Infeasible`/`Unbounded` came from the divergence heuristic.
    pub heuristic_status: bool,
    pub history: Vec<IterateRecord>,
}

impl SdpSolution {
    pub fn is_optimal(&self) -> bool {
        self.status == SdpStatus::Optimal
    }

    pub fn hermitian_block(&self, b: usize) -> &HermitianOperator {
        match &self.primal[b] {
            BlockData::Hermitian(h) => h,
            BlockData::Diagonal(_) => panic!("block {b} is diagonal"),
        }
    }

    pub fn diagonal_block(&self, b: usize) -> &[f64] {
        match &self.primal[b] {
            BlockData::Diagonal(v) => v,
            BlockData::Hermitian(_) => panic!("block {b} is Hermitian"),
        }
    }
}

type Entries = Vec<(usize, usize, f64)>;

struct Compiled {
    /// Real dimension of every PSD block.
    sdp_dims: Vec<usize>,
    /// For each problem block: `Ok(sdp index)` or `Err(lp offset)`.
    layout: Vec<std::result::Result<usize, usize>>,
    lp_len: usize,
    c_sdp: Vec<RMat>,
    c_lp: RVec,
    /// Per PSD block: constraints touching it with their sparse entries.
    a_sdp: Vec<Vec<(usize, Entries)>>,
    a_lp: RMat,
    b: RVec,
}

fn embed_entries(h: &HermitianOperator) -> Entries {
    let n = h.dim();
    let mut out = Vec::new();
    for p in 0..n {
        for q in 0..n {
            let z = h.entry(p, q);
            if z.re != 0.0 {
                out.push((p, q, 0.5 * z.re));
                out.push((p + n, q + n, 0.5 * z.re));
            }
            if z.im != 0.0 {
                out.push((p, q + n, -0.5 * z.im));
                out.push((p + n, q, 0.5 * z.im));
            }
        }
    }
    out
}

fn dense_from(entries: &Entries, n: usize) -> RMat {
    let mut m = RMat::zeros(n, n);
    for &(p, q, v) in entries {
        m[(p, q)] += v;
    }
    m
}

fn fold_hermitian(r: &RMat, scale: f64) -> HermitianOperator {
    let n = r.nrows() / 2;
    let m = CMatrix::from_fn(n, n, |p, q| {
        C64::new(
            0.5 * scale * (r[(p, q)] + r[(p + n, q + n)]),
            0.5 * scale * (r[(p + n, q)] - r[(p, q + n)]),
        )
    });
    HermitianOperator::symmetrized(m)
}

impl Compiled {
    fn new(p: &SdpProblem) -> Self {
        let sign = match p.sense {
            Sense::Min => 1.0,
            Sense::Max => -1.0,
        };
        let mut sdp_dims = Vec::new();
        let mut layout = Vec::new();
        let mut lp_len = 0;
        for b in &p.blocks {
            match *b {
                Block::Hermitian(n) => {
                    layout.push(Ok(sdp_dims.len()));
                    sdp_dims.push(2 * n);
                }
                Block::Diagonal(n) => {
                    layout.push(Err(lp_len));
                    lp_len += n;
                }
            }
        }
        let mut c_sdp: Vec<RMat> = sdp_dims.iter().map(|&n| RMat::zeros(n, n)).collect();
        let mut c_lp = RVec::zeros(lp_len);
        for (bi, data) in p.objective.iter().enumerate() {
            match (data, layout[bi]) {
                (Some(BlockData::Hermitian(h)), Ok(s)) => {
                    c_sdp[s] = dense_from(&embed_entries(h), sdp_dims[s]) * sign;
                }
                (Some(BlockData::Diagonal(v)), Err(off)) => {
                    for (k, &x) in v.iter().enumerate() {
                        c_lp[off + k] = sign * x;
                    }
                }
                _ => {}
            }
        }
        let m = p.constraints.len();
        let mut a_sdp: Vec<Vec<(usize, Entries)>> = vec![Vec::new(); sdp_dims.len()];
        let mut a_lp = RMat::zeros(m, lp_len);
        let mut b = RVec::zeros(m);
        for (i, con) in p.constraints.iter().enumerate() {
            b[i] = con.rhs;
            for (bi, data) in &con.terms {
                match (data, layout[*bi]) {
                    (BlockData::Hermitian(h), Ok(s)) => {
                        let e = embed_entries(h);
                        if !e.is_empty() {
                            a_sdp[s].push((i, e));
                        }
                    }
                    (BlockData::Diagonal(v), Err(off)) => {
                        for (k, &x) in v.iter().enumerate() {
                            a_lp[(i, off + k)] += x;
                        }
                    }
                    _ => unreachable!("validated"),
                }
            }
        }
        Self {
            sdp_dims,
            layout,
            lp_len,
            c_sdp,
            c_lp,
            a_sdp,
            a_lp,
            b,
        }
    }

    fn m(&self) -> usize {
        self.b.len()
    }

    fn apply_a(&self, xs: &[RMat], xl: &RVec) -> RVec {
        let mut out = &self.a_lp * xl;
        for (s, cons) in self.a_sdp.iter().enumerate() {
            for (i, e) in cons {
                out[*i] += e.iter().map(|&(p, q, v)| v * xs[s][(p, q)]).sum::<f64>();
            }
        }
        out
    }

    fn apply_at(&self, y: &RVec) -> (Vec<RMat>, RVec) {
        let mut mats: Vec<RMat> = self.sdp_dims.iter().map(|&n| RMat::zeros(n, n)).collect();
        for (s, cons) in self.a_sdp.iter().enumerate() {
            for (i, e) in cons {
                let yi = y[*i];
                for &(p, q, v) in e {
                    mats[s][(p, q)] += yi * v;
                }
            }
        }
        (mats, self.a_lp.transpose() * y)
    }

    /// HKM Schur complement `M_ij = ⟨A_i, X A_j Z⁻¹⟩`.
    fn schur(&self, xs: &[RMat], zinv: &[RMat], xl: &RVec, zl: &RVec) -> RMat {
        let m = self.m();
        let mut out = RMat::zeros(m, m);
        for (s, cons) in self.a_sdp.iter().enumerate() {
            let n = self.sdp_dims[s];
            let x = &xs[s];
            let zi = &zinv[s];
            for (li, (i, ei)) in cons.iter().enumerate() {
                let mut t = RMat::zeros(n, n);
                for &(p, q, v) in ei {
                    // t += v * X[:,p] Zinv[q,:]
                    for c in 0..n {
                        let f = v * zi[(q, c)];
                        if f != 0.0 {
                            for r in 0..n {
                                t[(r, c)] += f * x[(r, p)];
                            }
                        }
                    }
                }
                for (j, ej) in &cons[li..] {
                    let val: f64 = ej.iter().map(|&(r, c, w)| w * t[(r, c)]).sum();
                    out[(*i, *j)] += val;
                    if i != j {
                        out[(*j, *i)] += val;
                    }
                }
            }
        }
        if self.lp_len > 0 {
            let mut scaled = self.a_lp.clone();
            for k in 0..self.lp_len {
                let f = (xl[k] / zl[k]).sqrt();
                scaled.column_mut(k).scale_mut(f);
            }
            out += &scaled * scaled.transpose();
        }
        out
    }
}

fn inner(a: &RMat, b: &RMat) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| x * y).sum()
}

fn sym(m: RMat) -> RMat {
    let t = m.transpose();
    (m + t) * 0.5
}

/// Largest `α` with `X + αΔX ⪰ 0`, or infinity.
fn max_step_psd(x: &RMat, dx: &RMat) -> f64 {
    let Some(ch) = Cholesky::new(x.clone()) else {
        return 0.0;
    };
    let l = ch.l();
    let mut w = dx.clone();
    l.solve_lower_triangular_mut(&mut w);
    let mut w = w.transpose();
    l.solve_lower_triangular_mut(&mut w);
    let w = sym(w);
    let lmin = SymmetricEigen::new(w)
        .eigenvalues
        .iter()
        .fold(f64::INFINITY, |a, &b| a.min(b));
    if lmin >= 0.0 {
        f64::INFINITY
    } else {
        -1.0 / lmin
    }
}

fn max_step_lp(x: &RVec, dx: &RVec) -> f64 {
    x.iter()
        .zip(dx.iter())
        .filter(|(_, d)| **d < 0.0)
        .fold(f64::INFINITY, |a, (xv, d)| a.min(-xv / d))
}

#[derive(Clone)]
struct Iterate {
    xs: Vec<RMat>,
    xl: RVec,
    y: RVec,
    zs: Vec<RMat>,
    zl: RVec,
}

struct Direction {
    dxs: Vec<RMat>,
    dxl: RVec,
    dy: RVec,
    dzs: Vec<RMat>,
    dzl: RVec,
}

enum Factor {
    Chol(Cholesky<f64, nalgebra::Dyn>),
    Lu(nalgebra::LU<f64, nalgebra::Dyn, nalgebra::Dyn>),
}

impl Factor {
    fn new(mut m: RMat) -> Self {
        let scale = (0..m.nrows()).fold(0.0f64, |a, i| a.max(m[(i, i)].abs())).max(1e-300);
        let mut reg = 0.0;
        for _ in 0..6 {
            if let Some(ch) = Cholesky::new(m.clone()) {
                return Factor::Chol(ch);
            }
            let add = if reg == 0.0 { 1e-14 * scale } else { reg * 100.0 };
            for i in 0..m.nrows() {
                m[(i, i)] += add - reg;
            }
            reg = add;
        }
        Factor::Lu(m.lu())
    }

    fn solve(&self, rhs: &RVec) -> RVec {
        match self {
            Factor::Chol(c) => c.solve(rhs),
            Factor::Lu(l) => l.solve(rhs).unwrap_or_else(|| RVec::zeros(rhs.len())),
        }
    }
}

struct Residuals {
    rp: RVec,
    rds: Vec<RMat>,
    rdl: RVec,
}

impl Compiled {
    fn direction(
        &self,
        it: &Iterate,
        zinv: &[RMat],
        fac: &Factor,
        res: &Residuals,
        rcs: &[RMat],
        rcl: &RVec,
    ) -> Direction {
        // rhs = rp − A(Rc) + A(X Rd Z⁻¹)
        let mut t_s = Vec::with_capacity(rcs.len());
        for s in 0..self.sdp_dims.len() {
            t_s.push(&it.xs[s] * &res.rds[s] * &zinv[s] - &rcs[s]);
        }
        let t_l = it.xl.component_mul(&res.rdl).component_div(&it.zl) - rcl;
        let rhs = &res.rp + self.apply_a(&t_s, &t_l);
        let dy = fac.solve(&rhs);
        let (at_s, at_l) = self.apply_at(&dy);
        let dzs: Vec<RMat> = res.rds.iter().zip(&at_s).map(|(r, a)| r - a).collect();
        let dzl = &res.rdl - at_l;
        let dxs: Vec<RMat> = (0..self.sdp_dims.len())
            .map(|s| sym(&rcs[s] - &it.xs[s] * &dzs[s] * &zinv[s]))
            .collect();
        let dxl = rcl - it.xl.component_mul(&dzl).component_div(&it.zl);
        Direction {
            dxs,
            dxl,
            dy,
            dzs,
            dzl,
        }
    }

    fn steps(&self, it: &Iterate, d: &Direction) -> (f64, f64) {
        let mut ap = max_step_lp(&it.xl, &d.dxl);
        let mut ad = max_step_lp(&it.zl, &d.dzl);
        for s in 0..self.sdp_dims.len() {
            ap = ap.min(max_step_psd(&it.xs[s], &d.dxs[s]));
            ad = ad.min(max_step_psd(&it.zs[s], &d.dzs[s]));
        }
        (ap, ad)
    }

    fn complementarity(xs: &[RMat], xl: &RVec, zs: &[RMat], zl: &RVec) -> f64 {
        xs.iter().zip(zs).map(|(x, z)| inner(x, z)).sum::<f64>() + xl.dot(zl)
    }

    fn initial(&self) -> Iterate {
        let m = self.m();
        let mut xs = Vec::new();
        let mut zs = Vec::new();
        for (s, &n) in self.sdp_dims.iter().enumerate() {
            let nf = n as f64;
            let mut xi = 10f64.max(nf.sqrt());
            let mut eta = 10f64.max(nf.sqrt()).max(self.c_sdp[s].norm());
            for (i, e) in &self.a_sdp[s] {
                let an = e.iter().map(|t| t.2 * t.2).sum::<f64>().sqrt();
                xi = xi.max(nf * (1.0 + self.b[*i].abs()) / (1.0 + an));
                eta = eta.max(an);
            }
            xs.push(RMat::identity(n, n) * xi);
            zs.push(RMat::identity(n, n) * eta);
        }
        let l = self.lp_len;
        let (xl, zl) = if l > 0 {
            let lf = l as f64;
            let mut xi = 10f64.max(lf.sqrt());
            let mut eta = 10f64.max(lf.sqrt()).max(self.c_lp.norm());
            for i in 0..m {
                let an = self.a_lp.row(i).norm();
                if an > 0.0 {
                    xi = xi.max(lf * (1.0 + self.b[i].abs()) / (1.0 + an));
                    eta = eta.max(an);
                }
            }
            (RVec::from_element(l, xi), RVec::from_element(l, eta))
        } else {
            (RVec::zeros(0), RVec::zeros(0))
        };
        Iterate {
            xs,
            xl,
            y: RVec::zeros(m),
            zs,
            zl,
        }
    }
}

/// Solves `p` to relative tolerance `opts.tol`.
///
/// On `Optimal`: `|primal − dual| ≤ tol·(1 + |primal|)`, and the relative
/// primal and dual residuals are at most `tol`.
pub fn solve(p: &SdpProblem, opts: &SolverOptions) -> Result<SdpSolution> {
    p.validate()?;
    let sign = match p.sense {
        Sense::Min => 1.0,
        Sense::Max => -1.0,
    };
    let cp = Compiled::new(p);
    let tol = opts.tol;
    let nu = (cp.sdp_dims.iter().sum::<usize>() + cp.lp_len).max(1) as f64;
    let norm_b = cp.b.norm();
    let norm_c = (cp.c_sdp.iter().map(|c| c.norm_squared()).sum::<f64>()
        + cp.c_lp.norm_squared())
    .sqrt();

    let mut it = cp.initial();
    let mut history = Vec::new();
    let mut best: Option<(f64, Iterate, usize)> = None;
    let mut status = SdpStatus::MaxIterations;
    let mut heuristic = false;
    let mut stalls = 0;
    let mut iterations = 0;

    for iter in 0..=opts.max_iterations {
        iterations = iter;
        let ax = cp.apply_a(&it.xs, &it.xl);
        let rp = &cp.b - ax;
        let (at_s, at_l) = cp.apply_at(&it.y);
        let rds: Vec<RMat> = (0..cp.sdp_dims.len())
            .map(|s| &cp.c_sdp[s] - &it.zs[s] - &at_s[s])
            .collect();
        let rdl = &cp.c_lp - &it.zl - at_l;
        let pobj = it.xs.iter().zip(&cp.c_sdp).map(|(x, c)| inner(x, c)).sum::<f64>()
            + cp.c_lp.dot(&it.xl);
        let dobj = cp.b.dot(&it.y);
        let pinf = rp.norm() / (1.0 + norm_b);
        let dinf = (rds.iter().map(|r| r.norm_squared()).sum::<f64>() + rdl.norm_squared())
            .sqrt()
            / (1.0 + norm_c);
        let xz = Compiled::complementarity(&it.xs, &it.xl, &it.zs, &it.zl);
        let mu = xz / nu;
        history.push(IterateRecord {
            primal_objective: sign * pobj,
            dual_objective: sign * dobj,
            primal_infeasibility: pinf,
            dual_infeasibility: dinf,
            mu,
        });

        let gap = (pobj - dobj).abs() / (1.0 + pobj.abs());
        let merit = gap.max(pinf).max(dinf);
        if best.as_ref().is_none_or(|b| merit < b.0) {
            best = Some((merit, it.clone(), iter));
        }
        if gap <= tol && pinf <= tol && dinf <= tol {
            status = SdpStatus::Optimal;
            break;
        }
        // Divergence heuristics (no self-dual embedding).
        if dobj > 1e8 * (1.0 + norm_c) && dinf <= tol.max(1e-6) {
            status = SdpStatus::Infeasible;
            heuristic = true;
            break;
        }
        if -pobj > 1e8 * (1.0 + norm_b) && pinf <= tol.max(1e-6) {
            status = SdpStatus::Unbounded;
            heuristic = true;
            break;
        }
        if iter == opts.max_iterations || stalls >= 4 {
            break;
        }

        let mut zinv = Vec::with_capacity(cp.sdp_dims.len());
        for z in &it.zs {
            let inv = Cholesky::new(z.clone())
                .map(|c| c.inverse())
                .unwrap_or_else(|| z.clone().try_inverse().unwrap_or_else(|| RMat::identity(z.nrows(), z.nrows())));
            zinv.push(sym(inv));
        }
        let fac = Factor::new(cp.schur(&it.xs, &zinv, &it.xl, &it.zl));
        let res = Residuals { rp, rds, rdl };

        // Predictor.
        let rcs: Vec<RMat> = it.xs.iter().map(|x| -x).collect();
        let rcl = -&it.xl;
        let pred = cp.direction(&it, &zinv, &fac, &res, &rcs, &rcl);
        let (ap, ad) = cp.steps(&it, &pred);
        let (ap, ad) = (ap.min(1.0), ad.min(1.0));
        let xs_t: Vec<RMat> = it.xs.iter().zip(&pred.dxs).map(|(x, d)| x + d * ap).collect();
        let zs_t: Vec<RMat> = it.zs.iter().zip(&pred.dzs).map(|(z, d)| z + d * ad).collect();
        let xl_t = &it.xl + &pred.dxl * ap;
        let zl_t = &it.zl + &pred.dzl * ad;
        let ratio = (Compiled::complementarity(&xs_t, &xl_t, &zs_t, &zl_t) / xz).max(0.0);
        let expo = 1f64.max(3.0 * ap.min(ad).powi(2));
        let sigma = ratio.powf(expo).min(1.0);

        // Corrector.
        let rcs: Vec<RMat> = (0..cp.sdp_dims.len())
            .map(|s| {
                &zinv[s] * (sigma * mu) - &it.xs[s] - &pred.dxs[s] * &pred.dzs[s] * &zinv[s]
            })
            .collect();
        let rcl = it.zl.map(|z| sigma * mu / z)
            - &it.xl
            - pred.dxl.component_mul(&pred.dzl).component_div(&it.zl);
        let dir = cp.direction(&it, &zinv, &fac, &res, &rcs, &rcl);
        let (apm, adm) = cp.steps(&it, &dir);
        let gamma = 0.9 + 0.09 * apm.min(adm).min(1.0);
        let ap = (gamma * apm).min(1.0);
        let ad = (gamma * adm).min(1.0);
        if ap < 1e-10 && ad < 1e-10 {
            stalls += 1;
        } else {
            stalls = 0;
        }
        for s in 0..cp.sdp_dims.len() {
            it.xs[s] = sym(&it.xs[s] + &dir.dxs[s] * ap);
            it.zs[s] = sym(&it.zs[s] + &dir.dzs[s] * ad);
        }
        it.xl += &dir.dxl * ap;
        it.zl += &dir.dzl * ad;
        it.y += &dir.dy * ad;
    }

    let (final_it, pinf, dinf) = if status == SdpStatus::MaxIterations {
        let (_, b, k) = best.expect("at least one iterate");
        (b, history[k].primal_infeasibility, history[k].dual_infeasibility)
    } else {
        let last = history.last().expect("history");
        (it, last.primal_infeasibility, last.dual_infeasibility)
    };
    let pobj = final_it
        .xs
        .iter()
        .zip(&cp.c_sdp)
        .map(|(x, c)| inner(x, c))
        .sum::<f64>()
        + cp.c_lp.dot(&final_it.xl);
    let dobj = cp.b.dot(&final_it.y);

    let mut primal = Vec::new();
    let mut slack = Vec::new();
    for (bi, blk) in p.blocks.iter().enumerate() {
        match (blk, cp.layout[bi]) {
            (Block::Hermitian(_), Ok(s)) => {
                primal.push(BlockData::Hermitian(fold_hermitian(&final_it.xs[s], 1.0)));
                slack.push(BlockData::Hermitian(fold_hermitian(&final_it.zs[s], 2.0)));
            }
            (Block::Diagonal(n), Err(off)) => {
                primal.push(BlockData::Diagonal(final_it.xl.rows(off, *n).iter().copied().collect()));
                slack.push(BlockData::Diagonal(final_it.zl.rows(off, *n).iter().copied().collect()));
            }
            _ => unreachable!(),
        }
    }

    Ok(SdpSolution {
        status,
        primal_value: sign * pobj,
        dual_value: sign * dobj,
        primal,
        dual: final_it.y.iter().map(|v| sign * v).collect(),
        slack,
        iterations,
        primal_infeasibility: pinf,
        dual_infeasibility: dinf,
        heuristic_status: heuristic,
        history,
    })
}
