//! End-to-end verification of closed forms: Penrose conditions, equality with
//! the oracle, and the one-sided identity regimes.

use std::fmt::Display;

use rayon::prelude::*;
use serde::Serialize;

use crate::charp::Admissibility;
use crate::design::{build_design_incidence, m1_mpinv_closed_form, ms_mpinv_oracle, ValidatedDesign};
use crate::error::{Error, Result};
use crate::linalg::{
    identity, mat_mul, pseudoinverse_oracle, Field, Matrix, PenroseReport, PrimeField, Rationals,
};
use crate::set_incidence::{build_set_incidence, set_admissibility, set_mpinv};
use crate::subspace::{build_subspace_incidence, subspace_admissibility, subspace_mpinv};

/// The first entry at which a check fails.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Mismatch {
    pub check: String,
    pub row: usize,
    pub col: usize,
    pub expected: String,
    pub found: String,
}

/// Which of `M M* = I` and `M* M = I` are expected, and whether they hold.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Regime {
    /// `"MM*=I"`, `"M*M=I"`, or both.
    pub expected: Vec<&'static str>,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerifyReport {
    pub subject: String,
    /// Shape of `M`.
    pub shape: (usize, usize),
    pub penrose: PenroseReport,
    /// `None` when there is no oracle to compare with (reductions mod p).
    pub oracle_equal: Option<bool>,
    pub regime: Regime,
    pub first_failure: Option<Mismatch>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.first_failure.is_none()
    }
}

fn first_diff<T: PartialEq + Display>(
    check: &str,
    found: &Matrix<T>,
    expected: &Matrix<T>,
) -> Option<Mismatch> {
    if found.shape() != expected.shape() {
        return Some(Mismatch {
            check: check.into(),
            row: 0,
            col: 0,
            expected: format!("shape {:?}", expected.shape()),
            found: format!("shape {:?}", found.shape()),
        });
    }
    (0..found.rows())
        .flat_map(|i| (0..found.cols()).map(move |j| (i, j)))
        .find(|&(i, j)| found.get(i, j) != expected.get(i, j))
        .map(|(i, j)| Mismatch {
            check: check.into(),
            row: i,
            col: j,
            expected: expected.get(i, j).to_string(),
            found: found.get(i, j).to_string(),
        })
}

fn asymmetry<T: PartialEq + Display + Clone>(check: &str, m: &Matrix<T>) -> Option<Mismatch> {
    first_diff(check, m, &m.transpose())
}

/// Checks candidate `x` against `a`. `left` and `right` say whether
/// `a x = I` and `x a = I` are expected.
fn check_candidate<F: Field>(
    field: &F,
    subject: String,
    a: &Matrix<F::Elem>,
    x: &Matrix<F::Elem>,
    oracle: Option<&Matrix<F::Elem>>,
    left: bool,
    right: bool,
) -> Result<VerifyReport>
where
    F::Elem: Display,
{
    if x.shape() != (a.cols(), a.rows()) {
        return Err(Error::Shape(format!("candidate {:?} for a {:?} matrix", x.shape(), a.shape())));
    }
    let ax = mat_mul(field, a, x)?;
    let xa = mat_mul(field, x, a)?;
    let fails = [
        first_diff("AXA=A", &mat_mul(field, &ax, a)?, a),
        first_diff("XAX=X", &mat_mul(field, &xa, x)?, x),
        asymmetry("(AX)^T=AX", &ax),
        asymmetry("(XA)^T=XA", &xa),
    ];
    let penrose = PenroseReport {
        cond1: fails[0].is_none(),
        cond2: fails[1].is_none(),
        cond3: fails[2].is_none(),
        cond4: fails[3].is_none(),
    };
    let oracle_diff = oracle.and_then(|o| first_diff("oracle", x, o));
    let mut regime = Regime::default();
    let mut regime_diff = None;
    if left {
        regime.expected.push("MM*=I");
        regime_diff = regime_diff.or_else(|| first_diff("MM*=I", &ax, &identity(field, a.rows())));
    }
    if right {
        regime.expected.push("M*M=I");
        regime_diff = regime_diff.or_else(|| first_diff("M*M=I", &xa, &identity(field, a.cols())));
    }
    regime.holds = regime_diff.is_none();
    let first_failure = oracle_diff.clone().or_else(|| fails.into_iter().flatten().next()).or(regime_diff);
    Ok(VerifyReport {
        subject,
        shape: a.shape(),
        penrose,
        oracle_equal: oracle.map(|_| oracle_diff.is_none()),
        regime,
        first_failure,
    })
}

/// Closed form against the oracle for `M(n; r, c)`.
pub fn verify_set(n: usize, r: usize, c: usize) -> Result<VerifyReport> {
    let a = build_set_incidence(n, r, c)?.to_rational();
    let x = set_mpinv(n, r, c)?.expand();
    let oracle = pseudoinverse_oracle(&a);
    check_candidate(
        &Rationals,
        format!("set n={n} r={r} c={c}"),
        &a,
        &x,
        Some(&oracle),
        n >= r + c,
        n <= r + c,
    )
}

pub fn verify_subspace(n: usize, q: u64, r: usize, c: usize) -> Result<VerifyReport> {
    let a = build_subspace_incidence(n, q, r, c)?.to_rational();
    let x = subspace_mpinv(n, q, r, c)?.expand()?;
    let oracle = pseudoinverse_oracle(&a);
    check_candidate(
        &Rationals,
        format!("subspace n={n} q={q} r={r} c={c}"),
        &a,
        &x,
        Some(&oracle),
        n >= r + c,
        n <= r + c,
    )
}

/// `M_s` of a design. For `s = 1` and `t >= 2` the closed form is checked
/// against the oracle and `M_1 M_1^+ = I`; otherwise the oracle output is
/// checked against the Penrose conditions alone.
pub fn verify_design(vd: &ValidatedDesign, s: usize) -> Result<VerifyReport> {
    let d = vd.design();
    let a = build_design_incidence(d, s)?.to_rational();
    let oracle = ms_mpinv_oracle(d, s)?;
    let subject = format!("design {:?} s={s}", vd.params());
    if s == 1 && vd.params().t >= 2 && vd.params().v > vd.params().k {
        let x = m1_mpinv_closed_form(vd)?;
        check_candidate(&Rationals, subject, &a, &x, Some(&oracle), true, false)
    } else {
        check_candidate(&Rationals, subject, &a, &oracle, None, false, false)
    }
}

fn require_admissible(adm: Admissibility) -> Result<()> {
    match adm.offending().next() {
        Some(f) => Err(Error::Inadmissible { p: adm.p, factor: format!("{} = {}", f.label, f.value) }),
        None => Ok(()),
    }
}

/// The closed form reduced mod `p`, checked over GF(p).
pub fn verify_set_mod_p(n: usize, r: usize, c: usize, p: u64) -> Result<VerifyReport> {
    require_admissible(set_admissibility(n, r, c, p)?)?;
    let field = PrimeField::new(p)?;
    let a = build_set_incidence(n, r, c)?.to_mod_p();
    let x = set_mpinv(n, r, c)?.expand_mod_p(p)?;
    check_candidate(&field, format!("set n={n} r={r} c={c} mod {p}"), &a, &x, None, n >= r + c, n <= r + c)
}

pub fn verify_subspace_mod_p(n: usize, q: u64, r: usize, c: usize, p: u64) -> Result<VerifyReport> {
    require_admissible(subspace_admissibility(n, q, r, c, p)?)?;
    let field = PrimeField::new(p)?;
    let a = build_subspace_incidence(n, q, r, c)?.to_mod_p();
    let x = subspace_mpinv(n, q, r, c)?.expand_mod_p(p)?;
    check_candidate(
        &field,
        format!("subspace n={n} q={q} r={r} c={c} mod {p}"),
        &a,
        &x,
        None,
        n >= r + c,
        n <= r + c,
    )
}

/// All `(n, r, c)` with `0 <= r <= c <= n <= max_n`.
pub fn set_tuples(max_n: usize) -> Vec<(usize, usize, usize)> {
    let mut out = Vec::new();
    for n in 0..=max_n {
        for c in 0..=n {
            for r in 0..=c {
                out.push((n, r, c));
            }
        }
    }
    out
}

/// `(q, max n)` pairs of the default subspace sweep.
pub const SUBSPACE_SWEEP: [(u64, usize); 4] = [(2, 5), (3, 4), (4, 3), (5, 3)];

/// All `(n, q, r, c)` with `0 <= r <= c <= n <= max n` for each `(q, max n)`.
pub fn subspace_tuples(limits: &[(u64, usize)]) -> Vec<(usize, u64, usize, usize)> {
    limits
        .iter()
        .flat_map(|&(q, max_n)| set_tuples(max_n).into_iter().map(move |(n, r, c)| (n, q, r, c)))
        .collect()
}

/// Runs [`verify_set`] over [`set_tuples`]`(max_set_n)` and [`verify_subspace`] over
/// `subspace` in parallel; reports come back in tuple order.
pub fn verify_sweep(max_set_n: Option<usize>, subspace: &[(u64, usize)]) -> Result<Vec<VerifyReport>> {
    let sets = max_set_n.map(set_tuples).unwrap_or_default();
    let mut reports: Vec<VerifyReport> =
        sets.par_iter().map(|&(n, r, c)| verify_set(n, r, c)).collect::<Result<_>>()?;
    // Largest subspace matrices first so they do not straggle at the end.
    let mut tuples: Vec<_> = subspace_tuples(subspace).into_iter().enumerate().collect();
    tuples.sort_by_key(|&(_, (n, q, _, _))| std::cmp::Reverse(q.pow(n as u32)));
    let mut sub: Vec<(usize, VerifyReport)> = tuples
        .par_iter()
        .map(|&(idx, (n, q, r, c))| verify_subspace(n, q, r, c).map(|rep| (idx, rep)))
        .collect::<Result<_>>()?;
    sub.sort_by_key(|(idx, _)| *idx);
    reports.extend(sub.into_iter().map(|(_, rep)| rep));
    Ok(reports)
}
