//! Heuristic minimization of `⟨ψ|W|ψ⟩` over unit vectors of Schmidt rank ≤ k.
//!
//! Each local search writes `ψ = Σ_r |a_r⟩|b_r⟩` and alternates exact block
//! minimizations: with the `b_r` orthonormal the map `a ↦ ψ` is an isometry,
//! so the best `a` is the bottom eigenvector of a compressed `W`; then the
//! roles swap. Every step is non-increasing. The result is an upper bound on
//! the true minimum over the Schmidt-number set, never more.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::operator::{c, coefficient_matrix, eig_hermitian, svd, CMatrix, CVector, HermitianOperator};
use crate::quantum::random::gaussian_matrix;

const MAX_ITERATIONS: usize = 500;

#[derive(Clone, Debug)]
pub struct OracleResult {
    pub value: f64,
    pub argmin: CVector,
    pub restarts: usize,
    pub seed: u64,
}

fn check(w: &HermitianOperator, dims: (usize, usize), k: usize) -> Result<()> {
    if w.dim() != dims.0 * dims.1 {
        return Err(Error::DimensionMismatch(format!(
            "operator of dimension {} is not {}x{}",
            w.dim(),
            dims.0,
            dims.1
        )));
    }
    if k == 0 || k > dims.0.min(dims.1) {
        return Err(Error::InvalidParameter(format!(
            "k = {k} outside 1..={}",
            dims.0.min(dims.1)
        )));
    }
    Ok(())
}

fn orthonormal_columns(m: &CMatrix) -> CMatrix {
    m.clone().qr().q()
}

fn bottom(h: CMatrix) -> (f64, CVector) {
    let spec = eig_hermitian(&h).expect("compressed operator is Hermitian");
    let last = spec.eigenvalues.len() - 1;
    (spec.eigenvalues[last], spec.eigenvectors.column(last).into())
}

/// Compression of `W` onto vectors `Σ_r |a_r⟩|b_r⟩` with the `b_r` fixed
/// (`fixed_right`) or with the `a_r` fixed. Variable index is `x·k + r`.
fn compress(w: &CMatrix, dims: (usize, usize), basis: &CMatrix, fixed_right: bool) -> CMatrix {
    let (da, db) = dims;
    let k = basis.ncols();
    let free = if fixed_right { da } else { db };
    let mut l = CMatrix::zeros(da * db, free * k);
    for x in 0..free {
        for r in 0..k {
            let col = x * k + r;
            if fixed_right {
                for j in 0..db {
                    l[(x * db + j, col)] = basis[(j, r)];
                }
            } else {
                for i in 0..da {
                    l[(i * db + x, col)] = basis[(i, r)];
                }
            }
        }
    }
    let h = l.adjoint() * w * &l;
    (&h + h.adjoint()) * c(0.5, 0.0)
}

fn unstack(v: &CVector, rows: usize, k: usize) -> CMatrix {
    CMatrix::from_fn(rows, k, |x, r| v[x * k + r])
}

/// One local search from an initial right factor `b` (`d_b × k`).
pub fn local_minimize(w: &HermitianOperator, dims: (usize, usize), b: &CMatrix) -> (f64, CVector) {
    local_minimize_capped(w, dims, b, MAX_ITERATIONS)
}

fn local_minimize_capped(
    w: &HermitianOperator,
    dims: (usize, usize),
    b: &CMatrix,
    max_iterations: usize,
) -> (f64, CVector) {
    let (da, db) = dims;
    let k = b.ncols();
    let wm = w.matrix();
    let mut right = orthonormal_columns(b);
    let mut best = f64::INFINITY;
    let mut psi = CVector::zeros(da * db);
    for _ in 0..max_iterations {
        let (_, a) = bottom(compress(wm, dims, &right, true));
        let left = orthonormal_columns(&unstack(&a, da, k));
        let (v, bv) = bottom(compress(wm, dims, &left, false));
        let bmat = unstack(&bv, db, k);
        let coeff = &left * bmat.transpose();
        psi = CVector::from_fn(da * db, |idx, _| coeff[(idx / db, idx % db)]);
        right = orthonormal_columns(&bmat);
        let improved = best - v;
        best = best.min(v);
        if improved.is_finite() && improved < 1e-13 * (1.0 + v.abs()) {
            break;
        }
    }
    let n = psi.norm();
    psi /= c(n, 0.0);
    (w.expectation(&psi), psi)
}

fn exact(w: &HermitianOperator) -> (f64, CVector) {
    let spec = w.eig();
    let last = spec.eigenvalues.len() - 1;
    (spec.eigenvalues[last], spec.eigenvectors.column(last).into())
}

/// Best of `restarts` local searches from seeded random starts. Restart `r`
/// draws from stream `r` of a ChaCha8 generator keyed by `seed`, so the result
/// does not depend on scheduling. For `k = min(d_A, d_B)` the bottom
/// eigenpair is returned directly.
pub fn min_schmidt_k_expectation(
    w: &HermitianOperator,
    dims: (usize, usize),
    k: usize,
    restarts: usize,
    seed: u64,
) -> Result<OracleResult> {
    let (value, argmin) = min_schmidt_k_candidates(w, dims, k, restarts, seed)?
        .into_iter()
        .next()
        .expect("at least one restart");
    Ok(OracleResult {
        value,
        argmin,
        restarts,
        seed,
    })
}

/// Results of every restart, sorted by value (ties by restart index).
pub fn min_schmidt_k_candidates(
    w: &HermitianOperator,
    dims: (usize, usize),
    k: usize,
    restarts: usize,
    seed: u64,
) -> Result<Vec<(f64, CVector)>> {
    candidates_capped(w, dims, k, restarts, seed, MAX_ITERATIONS)
}

/// Same as [`min_schmidt_k_candidates`] with a smaller per-search iteration
/// budget; used where any violated state is useful, not only the minimum.
pub(crate) fn candidates_capped(
    w: &HermitianOperator,
    dims: (usize, usize),
    k: usize,
    restarts: usize,
    seed: u64,
    max_iterations: usize,
) -> Result<Vec<(f64, CVector)>> {
    check(w, dims, k)?;
    if k == dims.0.min(dims.1) {
        return Ok(vec![exact(w)]);
    }
    let mut all: Vec<(f64, usize, CVector)> = (0..restarts.max(1))
        .into_par_iter()
        .map(|r| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(r as u64);
            let b = gaussian_matrix(&mut rng, dims.1, k);
            let (v, psi) = local_minimize_capped(w, dims, &b, max_iterations);
            (v, r, psi)
        })
        .collect();
    all.sort_by(|x, y| x.0.total_cmp(&y.0).then(x.1.cmp(&y.1)));
    Ok(all.into_iter().map(|(v, _, psi)| (v, psi)).collect())
}

/// Local search warm-started from the best rank-`k` approximation of `start`.
pub fn min_schmidt_k_expectation_from(
    w: &HermitianOperator,
    dims: (usize, usize),
    k: usize,
    start: &CVector,
) -> Result<(f64, CVector)> {
    check(w, dims, k)?;
    if k == dims.0.min(dims.1) {
        return Ok(exact(w));
    }
    let f = svd(&coefficient_matrix(start, dims));
    let b = f.v.columns(0, k).map(|z| z.conj());
    Ok(local_minimize(w, dims, &b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operator::{basis_vector, kron_vec};
    use crate::quantum::{max_entangled, random};
    use proptest::prelude::*;

    fn w_bell() -> HermitianOperator {
        &HermitianOperator::identity(4) - &max_entangled(2).operator().scale(2.0)
    }

    #[test]
    fn bell_witness_values() {
        let r = min_schmidt_k_expectation(&w_bell(), (2, 2), 1, 16, 1).unwrap();
        assert!(r.value.abs() < 1e-10, "{}", r.value);
        let r = min_schmidt_k_expectation(&w_bell(), (2, 2), 2, 16, 1).unwrap();
        assert!((r.value + 1.0).abs() < 1e-12);
    }

    #[test]
    fn product_overlap_matches_grid() {
        // Brute-force the largest |⟨φ⁺|a⊗b⟩|² over a grid of real qubit pairs
        // and compare with the oracle minimum of −φ⁺.
        let w = max_entangled(2).operator().scale(-1.0);
        let mut best = 0.0f64;
        let steps = 200;
        for i in 0..steps {
            for j in 0..steps {
                let (t1, t2) = (i as f64 * std::f64::consts::PI / steps as f64, j as f64 * std::f64::consts::PI / steps as f64);
                let a = CVector::from_vec(vec![c(t1.cos(), 0.0), c(t1.sin(), 0.0)]);
                let b = CVector::from_vec(vec![c(t2.cos(), 0.0), c(t2.sin(), 0.0)]);
                best = best.max(-w.expectation(&kron_vec(&a, &b)));
            }
        }
        let r = min_schmidt_k_expectation(&w, (2, 2), 1, 16, 5).unwrap();
        assert!((best - 0.5).abs() < 1e-6);
        assert!((-r.value - 0.5).abs() < 1e-10);
    }

    #[test]
    fn deterministic_given_seed() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let w = random::random_density(&mut rng, 9).scale(-1.0);
        let a = min_schmidt_k_expectation(&w, (3, 3), 2, 8, 42).unwrap();
        let b = min_schmidt_k_expectation(&w, (3, 3), 2, 8, 42).unwrap();
        assert_eq!(a.value, b.value);
        assert_eq!(a.argmin, b.argmin);
    }

    #[test]
    fn argmin_has_low_rank() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let w = random::random_density(&mut rng, 16).scale(-1.0);
        let r = min_schmidt_k_expectation(&w, (4, 4), 2, 8, 0).unwrap();
        let sv = svd(&coefficient_matrix(&r.argmin, (4, 4))).singular_values;
        assert!(sv.iter().filter(|s| **s > 1e-8).count() <= 2);
        assert!((w.expectation(&r.argmin) - r.value).abs() < 1e-12);
    }

    #[test]
    fn range_checks() {
        assert!(min_schmidt_k_expectation(&w_bell(), (2, 2), 0, 4, 0).is_err());
        assert!(min_schmidt_k_expectation(&w_bell(), (2, 2), 3, 4, 0).is_err());
        assert!(min_schmidt_k_expectation(&w_bell(), (2, 3), 1, 4, 0).is_err());
    }

    #[test]
    fn warm_start_from_product() {
        let start = kron_vec(&basis_vector(2, 0), &basis_vector(2, 0));
        let (v, _) = min_schmidt_k_expectation_from(&w_bell(), (2, 2), 1, &start).unwrap();
        assert!(v.abs() < 1e-10);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]
        #[test]
        fn monotone_in_k(seed in 0u64..1000) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let g = random::gaussian_matrix(&mut rng, 9, 9);
            let w = HermitianOperator::symmetrized(&g + g.adjoint());
            let mut prev = f64::INFINITY;
            for k in 1..=3 {
                let r = min_schmidt_k_expectation(&w, (3, 3), k, 16, seed).unwrap();
                prop_assert!(r.value <= prev + 1e-9);
                prev = r.value;
            }
        }

        #[test]
        fn psd_stays_nonnegative(seed in 0u64..1000) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let w = random::random_density(&mut rng, 6);
            let r = min_schmidt_k_expectation(&w, (2, 3), 1, 4, seed).unwrap();
            prop_assert!(r.value >= -1e-12);
        }
    }
}
