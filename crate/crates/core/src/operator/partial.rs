use serde::{Deserialize, Serialize};

use super::{CMatrix, HermitianOperator};
use crate::error::{Error, Result};

/// One factor of a bipartite space `H_A ⊗ H_B`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Subsystem {
    A,
    B,
}

fn check_dims(dim: usize, dims: (usize, usize)) -> Result<()> {
    if dims.0 * dims.1 != dim || dims.0 == 0 || dims.1 == 0 {
        return Err(Error::DimensionMismatch(format!(
            "operator of dimension {dim} is not {}x{}",
            dims.0, dims.1
        )));
    }
    Ok(())
}

/// Kronecker product `A ⊗ B`.
pub fn tensor(a: &HermitianOperator, b: &HermitianOperator) -> HermitianOperator {
    HermitianOperator::symmetrized(a.matrix().kronecker(b.matrix()))
}

/// Traces out `traced` from an operator on `H_A ⊗ H_B`.
pub fn partial_trace(
    op: &HermitianOperator,
    dims: (usize, usize),
    traced: Subsystem,
) -> Result<HermitianOperator> {
    check_dims(op.dim(), dims)?;
    Ok(HermitianOperator::symmetrized(partial_trace_matrix(
        op.matrix(),
        dims,
        traced,
    )))
}

pub(crate) fn partial_trace_matrix(m: &CMatrix, dims: (usize, usize), traced: Subsystem) -> CMatrix {
    let (da, db) = dims;
    match traced {
        Subsystem::B => CMatrix::from_fn(da, da, |i, j| {
            (0..db).map(|k| m[(i * db + k, j * db + k)]).sum()
        }),
        Subsystem::A => CMatrix::from_fn(db, db, |i, j| {
            (0..da).map(|k| m[(k * db + i, k * db + j)]).sum()
        }),
    }
}

/// Transposes the chosen factor in the computational basis.
pub fn partial_transpose(
    op: &HermitianOperator,
    dims: (usize, usize),
    side: Subsystem,
) -> Result<HermitianOperator> {
    check_dims(op.dim(), dims)?;
    let (da, db) = dims;
    let m = op.matrix();
    let out = CMatrix::from_fn(da * db, da * db, |r, col| {
        let (a, b) = (r / db, r % db);
        let (a2, b2) = (col / db, col % db);
        match side {
            Subsystem::A => m[(a2 * db + b, a * db + b2)],
            Subsystem::B => m[(a * db + b2, a2 * db + b)],
        }
    });
    Ok(HermitianOperator::symmetrized(out))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operator::{c, CVector};

    fn phi_plus(d: usize) -> HermitianOperator {
        let mut v = CVector::zeros(d * d);
        for i in 0..d {
            v[i * d + i] = c(1.0 / (d as f64).sqrt(), 0.0);
        }
        HermitianOperator::projector(&v)
    }

    fn pauli_x() -> HermitianOperator {
        HermitianOperator::new(CMatrix::from_row_slice(
            2,
            2,
            &[c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)],
        ))
        .unwrap()
    }

    fn sample_x() -> HermitianOperator {
        HermitianOperator::new(CMatrix::from_row_slice(
            2,
            2,
            &[c(0.7, 0.0), c(0.1, 0.3), c(0.1, -0.3), c(-0.2, 0.0)],
        ))
        .unwrap()
    }

    fn sample_y() -> HermitianOperator {
        HermitianOperator::new(CMatrix::from_row_slice(
            3,
            3,
            &[
                c(1.0, 0.0),
                c(0.5, 0.5),
                c(0.0, -0.2),
                c(0.5, -0.5),
                c(2.0, 0.0),
                c(0.3, 0.0),
                c(0.0, 0.2),
                c(0.3, 0.0),
                c(-1.0, 0.0),
            ],
        ))
        .unwrap()
    }

    #[test]
    fn marginal_of_maximally_entangled_is_mixed() {
        for d in 1..5 {
            let m = partial_trace(&phi_plus(d), (d, d), Subsystem::B).unwrap();
            let target = HermitianOperator::identity(d).scale(1.0 / d as f64);
            assert!(m.max_abs_diff(&target) < 1e-15);
        }
    }

    #[test]
    fn trace_out_a_of_product() {
        let (x, y) = (sample_x(), sample_y());
        let out = partial_trace(&tensor(&x, &y), (2, 3), Subsystem::A).unwrap();
        assert!(out.max_abs_diff(&y.scale(x.trace())) < 1e-14);
        let out_b = partial_trace(&tensor(&x, &y), (2, 3), Subsystem::B).unwrap();
        assert!(out_b.max_abs_diff(&x.scale(y.trace())) < 1e-14);
    }

    #[test]
    fn marginal_of_flip_witness() {
        // tr_A(1 - 2 phi+) = 2*1 - 1 = 1.
        let w = &HermitianOperator::identity(4) - &phi_plus(2).scale(2.0);
        let m = partial_trace(&w, (2, 2), Subsystem::A).unwrap();
        assert!(m.max_abs_diff(&HermitianOperator::identity(2)) < 1e-15);
    }

    #[test]
    fn sequential_partial_traces_give_trace() {
        let op = tensor(&sample_x(), &sample_y());
        let b = partial_trace(&op, (2, 3), Subsystem::B).unwrap();
        assert!((b.trace() - op.trace()).abs() < 1e-14);
    }

    #[test]
    fn partial_transpose_of_product_and_involution() {
        let (x, y) = (sample_x(), sample_y());
        let prod = tensor(&x, &y);
        let pt = partial_transpose(&prod, (2, 3), Subsystem::B).unwrap();
        assert!(pt.max_abs_diff(&tensor(&x, &y.conj())) < 1e-15);
        let back = partial_transpose(&pt, (2, 3), Subsystem::B).unwrap();
        assert!(back.max_abs_diff(&prod) < 1e-15);
        let pta = partial_transpose(&prod, (2, 3), Subsystem::A).unwrap();
        let mut a = pta.eigenvalues();
        let mut b = prod.eigenvalues();
        a.sort_by(f64::total_cmp);
        b.sort_by(f64::total_cmp);
        assert!(a.iter().zip(&b).all(|(p, q)| (p - q).abs() < 1e-12));
    }

    #[test]
    fn partial_transpose_of_bell_state() {
        let pt = partial_transpose(&phi_plus(2), (2, 2), Subsystem::B).unwrap();
        let ev = pt.eigenvalues();
        let expected = [0.5, 0.5, 0.5, -0.5];
        assert!(ev.iter().zip(expected).all(|(a, b)| (a - b).abs() < 1e-14));
    }

    #[test]
    fn tensor_examples() {
        let one = HermitianOperator::identity(2);
        assert_eq!(tensor(&one, &one), HermitianOperator::identity(4));
        let p0 = HermitianOperator::from_real_diagonal(&[1.0, 0.0]);
        let p1 = HermitianOperator::from_real_diagonal(&[0.0, 1.0]);
        assert_eq!(
            tensor(&p0, &p1),
            HermitianOperator::from_real_diagonal(&[0.0, 1.0, 0.0, 0.0])
        );
        // X ⊗ Z: hand expansion [[0,0,1,0],[0,0,0,-1],[1,0,0,0],[0,-1,0,0]].
        let z = HermitianOperator::from_real_diagonal(&[1.0, -1.0]);
        let xz = tensor(&pauli_x(), &z);
        let expected = [
            [0.0, 0.0, 1.0, 0.0],
            [0.0, 0.0, 0.0, -1.0],
            [1.0, 0.0, 0.0, 0.0],
            [0.0, -1.0, 0.0, 0.0],
        ];
        for i in 0..4 {
            for j in 0..4 {
                assert_eq!(xz.entry(i, j), c(expected[i][j], 0.0));
            }
        }
    }

    #[test]
    fn dimension_mismatch_is_reported() {
        let op = HermitianOperator::identity(6);
        assert!(partial_trace(&op, (2, 2), Subsystem::A).is_err());
        assert!(partial_transpose(&op, (4, 2), Subsystem::B).is_err());
    }
}
