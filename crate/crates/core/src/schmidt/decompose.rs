use crate::error::{Error, Result};
use crate::operator::{c, coefficient_matrix, kron_vec, svd, CMatrix, CVector};
use crate::tol;

/// `|ψ⟩ = Σ_i √q_i |a_i⟩|b_i⟩` truncated to the numerical Schmidt rank.
#[derive(Clone, Debug)]
pub struct SchmidtDecomposition {
    /// `√q_i`, descending.
    pub coefficients: Vec<f64>,
    /// Columns `|a_i⟩`.
    pub left: CMatrix,
    /// Columns `|b_i⟩`.
    pub right: CMatrix,
    pub rank: usize,
}

impl SchmidtDecomposition {
    pub fn reconstruct(&self) -> CVector {
        let (da, db) = (self.left.nrows(), self.right.nrows());
        let mut v = CVector::zeros(da * db);
        for (i, &s) in self.coefficients.iter().enumerate() {
            let a: CVector = self.left.column(i).into();
            let b: CVector = self.right.column(i).into();
            v += kron_vec(&a, &b) * c(s, 0.0);
        }
        v
    }
}

pub fn schmidt_decompose(psi: &CVector, dims: (usize, usize)) -> Result<SchmidtDecomposition> {
    let (da, db) = dims;
    if psi.len() != da * db {
        return Err(Error::DimensionMismatch(format!(
            "vector of length {} is not {da}x{db}",
            psi.len()
        )));
    }
    let n = psi.norm();
    if (n - 1.0).abs() > tol::COMPARE {
        return Err(Error::InvalidState(format!("vector norm {n} is not 1")));
    }
    let f = svd(&coefficient_matrix(psi, dims));
    let top = f.singular_values[0];
    let rank = f
        .singular_values
        .iter()
        .filter(|&&s| s > tol::SCHMIDT_RANK * top)
        .count();
    let coefficients = f.singular_values[..rank].to_vec();
    let left = f.u.columns(0, rank).into_owned();
    // M = U Σ V†, so the right vectors are the conjugated columns of V.
    let right = f.v.columns(0, rank).map(|z| z.conj());
    Ok(SchmidtDecomposition {
        coefficients,
        left,
        right,
        rank,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantum::{max_entangled_vector, random};
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn product_state() {
        let mut v = CVector::zeros(4);
        v[0] = c(1.0, 0.0);
        let s = schmidt_decompose(&v, (2, 2)).unwrap();
        assert_eq!(s.rank, 1);
        assert!((s.coefficients[0] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn bell_state() {
        let s = schmidt_decompose(&max_entangled_vector(2), (2, 2)).unwrap();
        assert_eq!(s.rank, 2);
        for q in &s.coefficients {
            assert!((q - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-14);
        }
    }

    #[test]
    fn unequal_weights() {
        let r5 = 5f64.sqrt();
        let v = CVector::from_vec(vec![c(2.0 / r5, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(1.0 / r5, 0.0)]);
        let s = schmidt_decompose(&v, (2, 2)).unwrap();
        assert!((s.coefficients[0] - 2.0 / r5).abs() < 1e-14);
        assert!((s.coefficients[1] - 1.0 / r5).abs() < 1e-14);
    }

    #[test]
    fn rejects_non_unit() {
        let v = CVector::from_element(4, c(1.0, 0.0));
        assert!(schmidt_decompose(&v, (2, 2)).is_err());
        assert!(schmidt_decompose(&max_entangled_vector(2), (2, 3)).is_err());
    }

    proptest! {
        #[test]
        fn decomposition_invariants(seed in 0u64..500, da in 1usize..5, db in 1usize..5, k in 1usize..5) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let v = random::random_schmidt_rank(&mut rng, (da, db), k);
            let s = schmidt_decompose(&v, (da, db)).unwrap();
            prop_assert!(s.rank <= k.min(da).min(db));
            let total: f64 = s.coefficients.iter().map(|x| x * x).sum();
            prop_assert!((total - 1.0).abs() < 1e-10);
            for w in s.coefficients.windows(2) {
                prop_assert!(w[0] >= w[1]);
            }
            let eye = CMatrix::identity(s.rank, s.rank);
            prop_assert!((s.left.adjoint() * &s.left - &eye).norm() < 1e-10);
            prop_assert!((s.right.adjoint() * &s.right - &eye).norm() < 1e-10);
            let fid = s.reconstruct().dotc(&v).norm_sqr();
            prop_assert!(fid >= 1.0 - 1e-9);
        }
    }
}
