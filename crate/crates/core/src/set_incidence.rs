//! Inclusion matrices of subsets of `[n]` and their closed-form Moore-Penrose inverse.
//!
//! `M(n; r, c)` has rows indexed by `r`-subsets and columns by `c`-subsets,
//! both in colex order, with a one wherever the row subset lies in the column
//! subset. Its pseudoinverse has entry
//!
//! ```text
//! M*[C, R] = (-1)^(r-i) C(c-i-1, r-i) / ( C(N-r, c-r) C(N-c, r-i) )
//! ```
//!
//! where `i = |R ∩ C|` and `N = max(n, r + c)`, so it is stored as one value
//! per intersection size.

use num_bigint::BigInt;
use num_traits::One;
use serde::Serialize;

use crate::arith::{sign_pow, Rational};
use crate::charp::{Admissibility, Factor};
use crate::combinatorics::binomial;
use crate::error::{param_err, Result};
use crate::incidence::{IncidenceMatrix, Label};
use crate::linalg::{Matrix, ModMatrix, RatMatrix};
use crate::subsets::{colex_masks, mask_to_subset, SubsetIndex};

fn check_params(n: usize, r: usize, c: usize) -> Result<()> {
    if r > c || c > n {
        return param_err(format!("need 0 <= r <= c <= n, got n={n} r={r} c={c}"));
    }
    SubsetIndex::new(n, r).map(|_| ())
}

/// `M(n; r, c)` in colex order on both axes.
pub fn build_set_incidence(n: usize, r: usize, c: usize) -> Result<IncidenceMatrix> {
    check_params(n, r, c)?;
    let rows = colex_masks(n, r);
    let cols = colex_masks(n, c);
    let label = |m: &u64| Label::Subset(mask_to_subset(*m));
    Ok(IncidenceMatrix::from_relation(
        rows.iter().map(label).collect(),
        cols.iter().map(label).collect(),
        |i, j| rows[i] & !cols[j] == 0,
    ))
}

/// A `C(n,c) x C(n,r)` matrix whose `(C, R)` entry depends only on `|R ∩ C|`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClassMatrix {
    pub n: usize,
    pub r: usize,
    pub c: usize,
    /// `max(n, r + c)`.
    #[serde(rename = "N")]
    pub big_n: usize,
    /// Entry value for intersection size `i`, at index `i = 0..=r`.
    pub values: Vec<Rational>,
}

impl ClassMatrix {
    pub fn shape(&self) -> (usize, usize) {
        let len = |k| SubsetIndex::new(self.n, k).unwrap().len();
        (len(self.c), len(self.r))
    }

    pub fn expand(&self) -> RatMatrix {
        expand_class_matrix(self)
    }

    /// Expansion with every class value reduced modulo `p`.
    pub fn expand_mod_p(&self, p: u64) -> Result<ModMatrix> {
        let residues = crate::charp::reduce_values(&self.values, p)?;
        Ok(expand_with(self.n, self.r, self.c, |i| residues[i]))
    }
}

/// Closed-form value of the pseudoinverse entry for each intersection size `i = 0..=r`.
pub fn set_mpinv_class_values(n: usize, r: usize, c: usize) -> Result<Vec<Rational>> {
    check_params(n, r, c)?;
    let (n, r, c) = (n as i64, r as i64, c as i64);
    let big_n = n.max(r + c);
    let outer = binomial(big_n - r, c - r);
    Ok((0..=r)
        .map(|i| {
            // C(c-i-1, 0) counts the empty selection even when c = r.
            let top = if i == r { BigInt::one() } else { binomial(c - i - 1, r - i) };
            let num = sign_pow(r - i) * top;
            let den = &outer * binomial(big_n - c, r - i);
            Rational::new(num, den).expect("denominator binomials are positive")
        })
        .collect())
}

/// The closed-form pseudoinverse of `M(n; r, c)` in class form.
pub fn set_mpinv(n: usize, r: usize, c: usize) -> Result<ClassMatrix> {
    Ok(ClassMatrix { n, r, c, big_n: n.max(r + c), values: set_mpinv_class_values(n, r, c)? })
}

fn expand_with<T>(n: usize, r: usize, c: usize, value: impl Fn(usize) -> T) -> Matrix<T> {
    let rows = colex_masks(n, r);
    let cols = colex_masks(n, c);
    Matrix::from_fn(cols.len(), rows.len(), |ci, ri| value((cols[ci] & rows[ri]).count_ones() as usize))
}

/// Dense `(C, R)` matrix with entry `values[|R ∩ C|]`, colex order on both axes.
pub fn expand_class_matrix(cm: &ClassMatrix) -> RatMatrix {
    expand_with(cm.n, cm.r, cm.c, |i| cm.values[i].clone())
}

/// The binomials `C(N-r, c-r), C(N-c, 0), ..., C(N-c, r)` the denominators are built from.
pub fn set_admissibility(n: usize, r: usize, c: usize, p: u64) -> Result<Admissibility> {
    check_params(n, r, c)?;
    let (n, r, c) = (n as i64, r as i64, c as i64);
    let big_n = n.max(r + c);
    let mut factors =
        vec![Factor { label: format!("C({},{})", big_n - r, c - r), value: binomial(big_n - r, c - r) }];
    factors.extend(
        (0..=r).map(|i| Factor { label: format!("C({},{})", big_n - c, i), value: binomial(big_n - c, i) }),
    );
    Admissibility::new(p, factors)
}

/// Whether `p` divides none of the denominator binomials of the closed form.
pub fn char_p_admissible_set(n: usize, r: usize, c: usize, p: u64) -> Result<bool> {
    Ok(set_admissibility(n, r, c, p)?.is_admissible())
}
