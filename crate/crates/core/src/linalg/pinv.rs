//! Moore-Penrose inverse through a full-rank factorization.
//!
//! With `A = F G`, `F` of full column rank and `G` of full row rank, the
//! pseudoinverse is `G^T (G G^T)^{-1} (F^T F)^{-1} F^T`. Both Gram matrices
//! are nonsingular over the rationals, so this works at any rank and uses no
//! knowledge of where `A` came from.

use super::matrix::{identity, mat_mul, zeros, Field, Matrix, RatMatrix, Rationals};
use super::rref::{rref, rref_rational};
use crate::error::{Error, Result};

/// `A = F G` with `F` the pivot columns of `A` and `G` the nonzero rows of its RREF.
pub fn full_rank_factorization(a: &RatMatrix) -> Result<(RatMatrix, RatMatrix)> {
    let r = rref_rational(a);
    if r.rank == 0 {
        return Err(Error::ZeroMatrix);
    }
    Ok((a.select_columns(&r.pivots), r.rref))
}

/// Inverse of a square matrix by Gauss-Jordan on `[M | I]`, `None` if singular.
pub fn inverse<F: Field>(field: &F, m: &Matrix<F::Elem>) -> Option<Matrix<F::Elem>> {
    let n = m.rows();
    if m.cols() != n {
        return None;
    }
    let id = identity(field, n);
    let aug =
        Matrix::from_fn(n, 2 * n, |i, j| if j < n { m.get(i, j).clone() } else { id.get(i, j - n).clone() });
    let red = rref(field, &aug);
    if red.rank < n || red.pivots[n - 1] != n - 1 {
        return None;
    }
    Some(Matrix::from_fn(n, n, |i, j| red.rref.get(i, n + j).clone()))
}

/// The Moore-Penrose inverse of `a`, computed exactly.
///
/// The zero matrix maps to the zero matrix of transposed shape.
pub fn pseudoinverse_oracle(a: &RatMatrix) -> RatMatrix {
    let q = Rationals;
    let (f, g) = match full_rank_factorization(a) {
        Ok(fg) => fg,
        Err(_) => return zeros(&q, a.cols(), a.rows()),
    };
    let ft = f.transpose();
    let gt = g.transpose();
    let ggt_inv = inverse(&q, &mat_mul(&q, &g, &gt).unwrap()).expect("G has full row rank");
    let ftf_inv = inverse(&q, &mat_mul(&q, &ft, &f).unwrap()).expect("F has full column rank");
    let left = mat_mul(&q, &gt, &ggt_inv).unwrap();
    let right = mat_mul(&q, &ftf_inv, &ft).unwrap();
    mat_mul(&q, &left, &right).unwrap()
}
