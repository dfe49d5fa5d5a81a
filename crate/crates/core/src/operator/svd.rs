//! One-sided (Hestenes) Jacobi SVD for small complex matrices.

use super::{c, CMatrix, C64};

/// `M = U·diag(s)·V†` with `s` descending and `r = min(rows, cols)` columns
/// in `U` and `V`. Columns of `U` belonging to zero singular values are zero.
#[derive(Clone, Debug)]
pub struct Svd {
    pub u: CMatrix,
    pub singular_values: Vec<f64>,
    pub v: CMatrix,
}

impl Svd {
    pub fn recompose(&self) -> CMatrix {
        let mut us = self.u.clone();
        for (j, &s) in self.singular_values.iter().enumerate() {
            us.column_mut(j).scale_mut(s);
        }
        us * self.v.adjoint()
    }
}

pub fn svd(m: &CMatrix) -> Svd {
    if m.ncols() > m.nrows() {
        let t = svd(&m.adjoint());
        return Svd {
            u: t.v,
            singular_values: t.singular_values,
            v: t.u,
        };
    }
    let n = m.ncols();
    let mut g = m.clone();
    let mut v = CMatrix::identity(n, n);
    for _ in 0..60 {
        let mut rotated = false;
        for p in 0..n {
            for q in p + 1..n {
                let alpha = g.column(p).norm_squared();
                let beta = g.column(q).norm_squared();
                let gamma: C64 = g.column(p).dotc(&g.column(q));
                let r = gamma.norm();
                if r <= 1e-15 * (alpha * beta).sqrt() || r == 0.0 {
                    continue;
                }
                rotated = true;
                let phase = gamma / r;
                let tau = (beta - alpha) / (2.0 * r);
                let t = tau.signum() / (tau.abs() + (1.0 + tau * tau).sqrt());
                let t = if tau == 0.0 { 1.0 } else { t };
                let cs = 1.0 / (1.0 + t * t).sqrt();
                let sn = t * cs;
                // J = diag(1, conj(phase))·[[c, s], [−s, c]]
                let j10 = -phase.conj() * sn;
                let j11 = phase.conj() * cs;
                rotate(&mut g, p, q, cs, sn, j10, j11);
                rotate(&mut v, p, q, cs, sn, j10, j11);
            }
        }
        if !rotated {
            break;
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    let norms: Vec<f64> = (0..n).map(|j| g.column(j).norm()).collect();
    order.sort_by(|&a, &b| norms[b].total_cmp(&norms[a]));
    let rows = m.nrows();
    let mut u = CMatrix::zeros(rows, n);
    let mut vs = CMatrix::zeros(n, n);
    let mut singular_values = Vec::with_capacity(n);
    for (k, &j) in order.iter().enumerate() {
        let s = norms[j];
        singular_values.push(s);
        if s > 0.0 {
            u.set_column(k, &(g.column(j) / c(s, 0.0)));
        }
        vs.set_column(k, &v.column(j));
    }
    Svd {
        u,
        singular_values,
        v: vs,
    }
}

fn rotate(m: &mut CMatrix, p: usize, q: usize, cs: f64, sn: f64, j10: C64, j11: C64) {
    for i in 0..m.nrows() {
        let a = m[(i, p)];
        let b = m[(i, q)];
        m[(i, p)] = a * cs + b * j10;
        m[(i, q)] = a * sn + b * j11;
    }
}
