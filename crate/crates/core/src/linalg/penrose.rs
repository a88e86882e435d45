use serde::Serialize;

use super::matrix::{mat_mul, Field, Matrix, ModMatrix, PrimeField, RatMatrix, Rationals};
use crate::error::{Error, Result};

/// Outcome of the four Penrose conditions for a candidate `X` against `A`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct PenroseReport {
    /// `A X A = A`
    pub cond1: bool,
    /// `X A X = X`
    pub cond2: bool,
    /// `(A X)^T = A X`
    pub cond3: bool,
    /// `(X A)^T = X A`
    pub cond4: bool,
}

impl PenroseReport {
    pub fn all(&self) -> bool {
        self.cond1 && self.cond2 && self.cond3 && self.cond4
    }

    /// Name of the first condition that fails.
    pub fn first_failure(&self) -> Option<&'static str> {
        [(self.cond1, "AXA=A"), (self.cond2, "XAX=X"), (self.cond3, "(AX)^T=AX"), (self.cond4, "(XA)^T=XA")]
            .into_iter()
            .find(|(ok, _)| !ok)
            .map(|(_, name)| name)
    }
}

/// Checks the Penrose conditions over an arbitrary field with exact equality.
pub fn penrose_check_in<F: Field>(
    field: &F,
    a: &Matrix<F::Elem>,
    x: &Matrix<F::Elem>,
) -> Result<PenroseReport> {
    if x.shape() != (a.cols(), a.rows()) {
        return Err(Error::Shape(format!(
            "candidate is {}x{}, expected {}x{}",
            x.rows(),
            x.cols(),
            a.cols(),
            a.rows()
        )));
    }
    let ax = mat_mul(field, a, x)?;
    let xa = mat_mul(field, x, a)?;
    Ok(PenroseReport {
        cond1: mat_mul(field, &ax, a)? == *a,
        cond2: mat_mul(field, &xa, x)? == *x,
        cond3: ax.is_symmetric(),
        cond4: xa.is_symmetric(),
    })
}

pub fn penrose_check(a: &RatMatrix, x: &RatMatrix) -> Result<PenroseReport> {
    penrose_check_in(&Rationals, a, x)
}

/// Penrose conditions over GF(p), with plain transposition for the symmetry conditions.
pub fn penrose_check_mod_p(a: &ModMatrix, x: &ModMatrix, p: u64) -> Result<PenroseReport> {
    let field = PrimeField::new(p)?;
    let bad = |m: &ModMatrix| m.entries().iter().any(|&v| v >= p);
    if bad(a) || bad(x) {
        return Err(Error::Parameter(format!("entries must be reduced modulo {p}")));
    }
    penrose_check_in(&field, a, x)
}
