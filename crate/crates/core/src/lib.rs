//! Incidence matrices of subsets, subspaces and block designs, with exact
//! closed-form Moore-Penrose inverses and an independent exact oracle.

pub mod arith;
pub mod charp;
pub mod cli;
pub mod combinatorics;
pub mod design;
pub mod error;
pub mod format;
pub mod gf;
pub mod incidence;
pub mod linalg;
pub mod set_incidence;
pub mod subsets;
pub mod subspace;
pub mod verify;

pub use arith::{rat, Rational};
pub use error::{Error, Result};
