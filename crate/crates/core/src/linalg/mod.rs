//! Exact dense linear algebra: matrices over a [`Field`], row reduction, the
//! full-rank-factorization pseudoinverse, and the Penrose condition checker.

mod matrix;
mod penrose;
mod pinv;
mod rref;

pub use matrix::{
    identity, is_identity, mat_mul, reduce_mod_p, scale, zeros, Field, Matrix, ModMatrix, PrimeField,
    RatMatrix, Rationals,
};
pub use penrose::{penrose_check, penrose_check_in, penrose_check_mod_p, PenroseReport};
pub use pinv::{full_rank_factorization, inverse, pseudoinverse_oracle};
pub use rref::{rank, rref, rref_rational, Rref};
