//! Seeded random states, channels and unitaries.

use rand::Rng;
use rand_distr::StandardNormal;

use super::channel::ChannelRep;
use super::state::BipartiteState;
use crate::operator::{c, vectorize, CMatrix, CVector, HermitianOperator};

pub fn gaussian_matrix<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> CMatrix {
    CMatrix::from_fn(rows, cols, |_, _| {
        c(rng.sample(StandardNormal), rng.sample(StandardNormal))
    })
}

/// Haar-distributed unit vector.
pub fn random_pure<R: Rng + ?Sized>(rng: &mut R, d: usize) -> CVector {
    let g = gaussian_matrix(rng, d, 1);
    let n = g.norm();
    CVector::from_iterator(d, g.iter().map(|z| z / n))
}

/// Haar-distributed unitary (QR of a Ginibre matrix with phases fixed).
pub fn random_unitary<R: Rng + ?Sized>(rng: &mut R, d: usize) -> CMatrix {
    let qr = gaussian_matrix(rng, d, d).qr();
    let (mut q, r) = (qr.q(), qr.r());
    for j in 0..d {
        let p = r[(j, j)];
        let ph = if p.norm() > 0.0 { p / p.norm() } else { c(1.0, 0.0) };
        for i in 0..d {
            q[(i, j)] *= ph;
        }
    }
    q
}

/// Hilbert–Schmidt random density operator `GG†/tr(GG†)`.
pub fn random_density<R: Rng + ?Sized>(rng: &mut R, d: usize) -> HermitianOperator {
    let g = gaussian_matrix(rng, d, d);
    let m = &g * g.adjoint();
    let tr = m.trace().re;
    HermitianOperator::symmetrized(m / c(tr, 0.0))
}

pub fn random_state<R: Rng + ?Sized>(rng: &mut R, dims: (usize, usize)) -> BipartiteState {
    BipartiteState::new_unchecked(random_density(rng, dims.0 * dims.1), dims)
}

/// Unit vector whose coefficient matrix has rank at most `k`.
pub fn random_schmidt_rank<R: Rng + ?Sized>(rng: &mut R, dims: (usize, usize), k: usize) -> CVector {
    let k = k.clamp(1, dims.0.min(dims.1));
    let a = gaussian_matrix(rng, dims.0, k);
    let b = gaussian_matrix(rng, k, dims.1);
    let v = vectorize(&(a * b));
    let n = v.norm();
    v / c(n, 0.0)
}

/// Random CPTP map from a random isometry `C^d_in → C^d_out ⊗ C^env`
/// followed by the partial trace over the environment.
pub fn random_channel<R: Rng + ?Sized>(rng: &mut R, d_in: usize, d_out: usize) -> ChannelRep {
    let env = d_in * d_out;
    let rows = d_out * env;
    let v = gaussian_matrix(rng, rows, d_in).qr().q();
    let kraus: Vec<CMatrix> = (0..env)
        .map(|m| CMatrix::from_fn(d_out, d_in, |p, i| v[(p * env + m, i)]))
        .collect();
    ChannelRep::from_kraus(&kraus).expect("Kraus operators share a shape")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operator::coefficient_matrix;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn samples_are_valid() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..10 {
            let u = random_unitary(&mut rng, 3);
            assert!((u.adjoint() * &u - CMatrix::identity(3, 3)).norm() < 1e-12);
            let s = random_state(&mut rng, (2, 3));
            assert!((s.operator().trace() - 1.0).abs() < 1e-12);
            assert!(s.operator().min_eigenvalue() > -1e-12);
            let ch = random_channel(&mut rng, 2, 3);
            assert!(ch.is_tp().holds && ch.is_cp().holds);
            let v = random_schmidt_rank(&mut rng, (3, 4), 2);
            assert!((v.norm() - 1.0).abs() < 1e-12);
            let sv = crate::operator::svd(&coefficient_matrix(&v, (3, 4))).singular_values;
            assert!(sv.iter().filter(|s| **s > 1e-10).count() <= 2);
        }
    }

    #[test]
    fn seeded_is_deterministic() {
        let a = random_density(&mut ChaCha8Rng::seed_from_u64(3), 4);
        let b = random_density(&mut ChaCha8Rng::seed_from_u64(3), 4);
        assert_eq!(a, b);
    }
}
