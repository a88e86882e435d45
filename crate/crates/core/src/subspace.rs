//! Inclusion matrices of subspaces of GF(q)^n and their closed-form
//! Moore-Penrose inverse, the q-analogue of [`crate::set_incidence`].
//!
//! Subspaces are identified by their RREF basis. They are enumerated by
//! pivot set (colex order), then by the free entries of the RREF read
//! row-major, each free entry running through the field in index order with
//! the first free entry most significant.

use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::One;
use serde::Serialize;

use crate::arith::{sign_pow, Rational};
use crate::charp::{Admissibility, Factor};
use crate::combinatorics::gaussian_binomial;
use crate::error::{param_err, Error, Result};
use crate::gf::{build_field, prime_power, FieldSpec, GFMatrix};
use crate::incidence::{IncidenceMatrix, Label};
use crate::linalg::{rank, Field, Matrix, ModMatrix, RatMatrix};
use crate::subsets::colex_masks;

/// Largest field order supported by subspace enumeration.
pub const MAX_ENUMERATION_Q: u64 = 9;

/// One subspace of GF(q)^n, as its canonical RREF basis (no zero rows).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubspaceBasis {
    n: usize,
    field: Arc<FieldSpec>,
    basis: GFMatrix,
    pivots: Vec<usize>,
}

impl SubspaceBasis {
    /// The row space of `generators`, canonicalized.
    pub fn span(field: Arc<FieldSpec>, generators: &GFMatrix) -> Self {
        let red = crate::gf::rref_gf(generators, &field);
        SubspaceBasis { n: generators.cols(), field, basis: red.rref, pivots: red.pivots }
    }

    pub fn ambient_dim(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.pivots.len()
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn basis(&self) -> &GFMatrix {
        &self.basis
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn label(&self) -> Label {
        Label::Subspace(
            (0..self.basis.rows())
                .map(|i| self.basis.row(i).iter().map(|x| self.field.render(x)).collect())
                .collect(),
        )
    }

    /// Whether `self` is contained in `other`.
    pub fn is_subspace_of(&self, other: &SubspaceBasis) -> Result<bool> {
        Ok(intersection_dim(self, other)? == self.dim())
    }
}

fn check_q(q: u64) -> Result<()> {
    prime_power(q).map(|_| ()).ok_or(Error::InvalidField(q))
}

/// All `r`-dimensional subspaces of GF(q)^n in canonical order.
pub fn enumerate_subspaces(n: usize, q: u64, r: usize) -> Result<Vec<SubspaceBasis>> {
    check_q(q)?;
    if q > MAX_ENUMERATION_Q {
        return param_err(format!("subspace enumeration supports q <= {MAX_ENUMERATION_Q}, got {q}"));
    }
    enumerate_in(&Arc::new(build_field(q)?), n, r)
}

/// All `r`-dimensional subspaces of `field^n` in canonical order.
pub fn enumerate_in(field: &Arc<FieldSpec>, n: usize, r: usize) -> Result<Vec<SubspaceBasis>> {
    if r > n {
        return param_err(format!("dimension {r} exceeds ambient dimension {n}"));
    }
    let q = field.order();
    let mut out = Vec::new();
    for mask in colex_masks(n, r) {
        let pivots: Vec<usize> = (0..n).filter(|j| mask >> j & 1 == 1).collect();
        let free: Vec<(usize, usize)> = pivots
            .iter()
            .enumerate()
            .flat_map(|(row, &p)| ((p + 1)..n).filter(|j| mask >> j & 1 == 0).map(move |j| (row, j)))
            .collect();
        let count = q.checked_pow(free.len() as u32).expect("enumeration size overflows");
        for idx in 0..count {
            let mut basis = Matrix::from_fn(r, n, |_, _| field.zero());
            for (row, &p) in pivots.iter().enumerate() {
                basis.set(row, p, field.one());
            }
            let mut rest = idx;
            for &(row, col) in free.iter().rev() {
                basis.set(row, col, field.from_index(rest % q));
                rest /= q;
            }
            out.push(SubspaceBasis { n, field: field.clone(), basis, pivots: pivots.clone() });
        }
    }
    Ok(out)
}

/// `dim(A ∩ B) = dim A + dim B - dim(A + B)`.
pub fn intersection_dim(a: &SubspaceBasis, b: &SubspaceBasis) -> Result<usize> {
    if a.n != b.n || a.field != b.field {
        return Err(Error::Shape(format!(
            "subspaces of GF({})^{} and GF({})^{}",
            a.field.order(),
            a.n,
            b.field.order(),
            b.n
        )));
    }
    let stacked = a.basis.vstack(&b.basis)?;
    Ok(a.dim() + b.dim() - rank(a.field.as_ref(), &stacked))
}

fn check_params(n: usize, q: u64, r: usize, c: usize) -> Result<()> {
    check_q(q)?;
    if r > c || c > n {
        return param_err(format!("need 0 <= r <= c <= n, got n={n} r={r} c={c}"));
    }
    Ok(())
}

/// Incidence matrix between two explicit families of subspaces.
pub fn incidence_between(rows: &[SubspaceBasis], cols: &[SubspaceBasis]) -> IncidenceMatrix {
    IncidenceMatrix::from_relation(
        rows.iter().map(SubspaceBasis::label).collect(),
        cols.iter().map(SubspaceBasis::label).collect(),
        |i, j| rows[i].is_subspace_of(&cols[j]).expect("same ambient space"),
    )
}

/// `M(n, q; r, c)`: `r`-subspaces against `c`-subspaces of GF(q)^n.
pub fn build_subspace_incidence(n: usize, q: u64, r: usize, c: usize) -> Result<IncidenceMatrix> {
    check_params(n, q, r, c)?;
    let rows = enumerate_subspaces(n, q, r)?;
    let cols = enumerate_in(&rows[0].field, n, c)?;
    Ok(incidence_between(&rows, &cols))
}

/// A `[n,c]_q x [n,r]_q` matrix whose `(C, R)` entry depends only on `dim(R ∩ C)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QClassMatrix {
    pub n: usize,
    pub q: u64,
    pub r: usize,
    pub c: usize,
    #[serde(rename = "N")]
    pub big_n: usize,
    /// Entry value for intersection dimension `i`, at index `i = 0..=r`.
    pub values: Vec<Rational>,
}

impl QClassMatrix {
    pub fn expand(&self) -> Result<RatMatrix> {
        expand_qclass_matrix(self)
    }

    pub fn expand_mod_p(&self, p: u64) -> Result<ModMatrix> {
        let residues = crate::charp::reduce_values(&self.values, p)?;
        self.expand_with(|i| residues[i])
    }

    fn expand_with<T>(&self, value: impl Fn(usize) -> T) -> Result<Matrix<T>> {
        let rows = enumerate_subspaces(self.n, self.q, self.c)?;
        let cols = enumerate_in(&rows[0].field, self.n, self.r)?;
        let mut data = Vec::with_capacity(rows.len() * cols.len());
        for big in &rows {
            for small in &cols {
                data.push(value(intersection_dim(small, big)?));
            }
        }
        Matrix::new(rows.len(), cols.len(), data)
    }
}

/// Closed-form value of the pseudoinverse entry for each intersection dimension `i = 0..=r`:
///
/// `(-1)^(r-i) [c-i-1, r-i]_q / ([N-r, c-r]_q [N-c, r-i]_q) * q^-((c-r)(r-i) + C(r-i, 2))`.
pub fn subspace_mpinv_class_values(n: usize, q: u64, r: usize, c: usize) -> Result<Vec<Rational>> {
    check_params(n, q, r, c)?;
    let (n, r, c) = (n as i64, r as i64, c as i64);
    let big_n = n.max(r + c);
    let outer = gaussian_binomial(big_n - r, c - r, q);
    let qr = Rational::from_integer(q as i64);
    Ok((0..=r)
        .map(|i| {
            let d = r - i;
            // [c-i-1, 0]_q counts the zero subspace even when c = r.
            let top = if d == 0 { BigInt::one() } else { gaussian_binomial(c - i - 1, d, q) };
            let num = sign_pow(d) * top;
            let den = &outer * gaussian_binomial(big_n - c, d, q);
            let weight = qr.pow(-((c - r) * d + d * (d - 1) / 2)).unwrap();
            Rational::new(num, den).expect("denominators are positive") * weight
        })
        .collect())
}

pub fn subspace_mpinv(n: usize, q: u64, r: usize, c: usize) -> Result<QClassMatrix> {
    Ok(QClassMatrix { n, q, r, c, big_n: n.max(r + c), values: subspace_mpinv_class_values(n, q, r, c)? })
}

/// Dense `(C, R)` matrix with entry `values[dim(R ∩ C)]`, canonical order on both axes.
pub fn expand_qclass_matrix(qcm: &QClassMatrix) -> Result<RatMatrix> {
    qcm.expand_with(|i| qcm.values[i].clone())
}

fn q_pow(q: u64, e: i64) -> BigInt {
    num_traits::pow::pow(BigInt::from(q), e as usize)
}

/// Number of `c`-dimensional `C ⊇ R` with `dim(C ∩ R') = i`, for fixed
/// `r`-dimensional `R`, `R'` meeting in dimension `k`:
///
/// `[r-k, i-k]_q [n-2r+k, c-r-i+k]_q q^((c-r-i+k)(r-i))`.
pub fn count_containing_with_intersection(
    n: usize,
    q: u64,
    r: usize,
    c: usize,
    k: usize,
    i: usize,
) -> Result<BigInt> {
    check_q(q)?;
    if !(k <= i && i <= r && r <= c && c + r <= n) {
        return param_err(format!("need 0 <= k <= i <= r <= c <= n-r, got n={n} r={r} c={c} k={k} i={i}"));
    }
    let (n, r, c, k, i) = (n as i64, r as i64, c as i64, k as i64, i as i64);
    let free = c - r - i + k;
    Ok(gaussian_binomial(r - k, i - k, q)
        * gaussian_binomial(n - 2 * r + k, free, q)
        * q_pow(q, free.max(0) * (r - i)))
}

/// Number of `r`-dimensional `R ⊆ C'` with `dim(R ∩ C) = i`, for fixed
/// `c`-dimensional `C`, `C'` meeting in dimension `k`:
///
/// `[k, i]_q [c-k, r-i]_q q^((r-i)(k-i))`.
pub fn count_contained_with_intersection(
    n: usize,
    q: u64,
    c: usize,
    k: usize,
    r: usize,
    i: usize,
) -> Result<BigInt> {
    check_q(q)?;
    if !(i <= k && i <= r && r <= c && k <= c && 2 * c <= n + k) {
        return param_err(format!(
            "need i <= min(k, r), r <= c, k <= c, 2c - k <= n; got n={n} c={c} k={k} r={r} i={i}"
        ));
    }
    let (c, k, r, i) = (c as i64, k as i64, r as i64, i as i64);
    Ok(gaussian_binomial(k, i, q) * gaussian_binomial(c - k, r - i, q) * q_pow(q, (r - i) * (k - i)))
}

/// The Gaussian binomials `[N-r, c-r]_q, [N-c, 0]_q, ..., [N-c, r]_q` and `q` itself.
pub fn subspace_admissibility(n: usize, q: u64, r: usize, c: usize, p: u64) -> Result<Admissibility> {
    check_params(n, q, r, c)?;
    let (n, r, c) = (n as i64, r as i64, c as i64);
    let big_n = n.max(r + c);
    let mut factors = vec![Factor {
        label: format!("[{},{}]_{q}", big_n - r, c - r),
        value: gaussian_binomial(big_n - r, c - r, q),
    }];
    factors.extend((0..=r).map(|i| Factor {
        label: format!("[{},{}]_{q}", big_n - c, i),
        value: gaussian_binomial(big_n - c, i, q),
    }));
    factors.push(Factor { label: "q".into(), value: BigInt::from(q) });
    Admissibility::new(p, factors)
}

pub fn char_p_admissible_subspace(n: usize, q: u64, r: usize, c: usize, p: u64) -> Result<bool> {
    Ok(subspace_admissibility(n, q, r, c, p)?.is_admissible())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;
    use crate::gf::gf_matrix;
    use crate::linalg::{identity, penrose_check, pseudoinverse_oracle, Rationals};

    fn span(q: u64, rows: usize, n: usize, idx: &[u64]) -> SubspaceBasis {
        let f = Arc::new(build_field(q).unwrap());
        let g = gf_matrix(&f, rows, n, idx).unwrap();
        SubspaceBasis::span(f, &g)
    }

    #[test]
    fn lines_of_the_plane_over_gf2() {
        let lines = enumerate_subspaces(2, 2, 1).unwrap();
        let expected = [span(2, 1, 2, &[1, 0]), span(2, 1, 2, &[0, 1]), span(2, 1, 2, &[1, 1])];
        // Pivot {0} first (free entry 0 then 1), then pivot {1}.
        assert_eq!(lines, vec![expected[0].clone(), expected[2].clone(), expected[1].clone()]);
    }

    #[test]
    fn enumeration_counts() {
        assert_eq!(enumerate_subspaces(4, 2, 2).unwrap().len(), 35);
        let zero = enumerate_subspaces(3, 3, 0).unwrap();
        assert_eq!(zero.len(), 1);
        assert_eq!(zero[0].dim(), 0);
        for q in [2u64, 3, 4, 5] {
            for n in 0..=4 {
                for r in 0..=n {
                    let all = enumerate_subspaces(n, q, r).unwrap();
                    assert_eq!(BigInt::from(all.len()), gaussian_binomial(n as i64, r as i64, q));
                    // Canonical and pairwise distinct.
                    for s in &all {
                        assert_eq!(SubspaceBasis::span(s.field.clone(), &s.basis), *s);
                    }
                    let set: std::collections::HashSet<_> =
                        all.iter().map(|s| format!("{:?}", s.basis.entries())).collect();
                    assert_eq!(set.len(), all.len());
                }
            }
        }
        assert!(matches!(enumerate_subspaces(2, 6, 1), Err(Error::InvalidField(6))));
        assert!(enumerate_subspaces(2, 11, 1).is_err());
    }

    #[test]
    fn intersection_examples() {
        let e1 = span(2, 1, 3, &[1, 0, 0]);
        let e2 = span(2, 1, 3, &[0, 1, 0]);
        let e12 = span(2, 2, 3, &[1, 0, 0, 0, 1, 0]);
        assert_eq!(intersection_dim(&e1, &e12).unwrap(), 1);
        assert_eq!(intersection_dim(&e1, &e2).unwrap(), 0);
        assert_eq!(intersection_dim(&e12, &e12).unwrap(), 2);
        let other = span(3, 1, 3, &[1, 0, 0]);
        assert!(matches!(intersection_dim(&e1, &other), Err(Error::Shape(_))));
    }

    #[test]
    fn incidence_examples() {
        let m = build_subspace_incidence(2, 2, 1, 1).unwrap();
        assert_eq!(m.to_rational(), identity(&Rationals, 3));

        let fano = build_subspace_incidence(3, 2, 1, 2).unwrap();
        assert_eq!((fano.rows(), fano.cols()), (7, 7));
        assert!(fano.row_sums().iter().all(|&s| s == 3));
        assert!(fano.col_sums().iter().all(|&s| s == 3));

        let row = build_subspace_incidence(3, 2, 0, 1).unwrap();
        assert_eq!((row.rows(), row.cols(), row.nnz()), (1, 7, 7));
        assert!(build_subspace_incidence(3, 2, 2, 1).is_err());
    }

    #[test]
    fn row_and_column_sums_are_gaussian_binomials() {
        for (q, max_n) in [(2u64, 4usize), (3, 3)] {
            for n in 0..=max_n {
                for c in 0..=n {
                    for r in 0..=c {
                        let m = build_subspace_incidence(n, q, r, c).unwrap();
                        let rs = gaussian_binomial((n - r) as i64, (c - r) as i64, q);
                        let cs = gaussian_binomial(c as i64, r as i64, q);
                        assert!(m.row_sums().iter().all(|&s| rs == s.into()));
                        assert!(m.col_sums().iter().all(|&s| cs == s.into()));
                    }
                }
            }
        }
    }

    #[test]
    fn class_value_examples() {
        assert_eq!(subspace_mpinv_class_values(3, 2, 1, 2).unwrap(), vec![rat(-1, 6), rat(1, 3)]);
        for c in 0..=4 {
            let v = subspace_mpinv_class_values(4, 3, c, c).unwrap();
            assert_eq!(v[c], Rational::one());
            assert!(v[..c].iter().all(Rational::is_zero));
        }
        let m = build_subspace_incidence(4, 2, 1, 2).unwrap().to_rational();
        let star = subspace_mpinv(4, 2, 1, 2).unwrap().expand().unwrap();
        assert_eq!(pseudoinverse_oracle(&m), star);
    }

    #[test]
    fn expansion_examples() {
        let e = subspace_mpinv(2, 2, 1, 1).unwrap().expand().unwrap();
        assert_eq!(e, identity(&Rationals, 3));

        let e = subspace_mpinv(3, 2, 1, 2).unwrap().expand().unwrap();
        for i in 0..7 {
            assert_eq!(e.row(i).iter().filter(|x| **x == rat(1, 3)).count(), 3);
        }
        let m = build_subspace_incidence(3, 2, 1, 2).unwrap().to_rational();
        assert!(penrose_check(&m, &e).unwrap().all());

        let e = subspace_mpinv(3, 2, 0, 1).unwrap().expand().unwrap();
        assert_eq!(e.shape(), (7, 1));
        assert!(e.entries().iter().all(|x| *x == rat(1, 7)));
    }

    #[test]
    fn counting_examples() {
        assert_eq!(count_containing_with_intersection(4, 2, 1, 2, 0, 1).unwrap(), BigInt::from(1));
        assert_eq!(count_containing_with_intersection(4, 2, 1, 2, 0, 0).unwrap(), BigInt::from(6));
        assert_eq!(count_containing_with_intersection(4, 2, 2, 2, 2, 2).unwrap(), BigInt::from(1));
        assert!(count_containing_with_intersection(3, 2, 1, 3, 0, 0).is_err());

        assert_eq!(count_contained_with_intersection(3, 2, 2, 1, 1, 1).unwrap(), BigInt::from(1));
        assert_eq!(count_contained_with_intersection(3, 2, 2, 1, 1, 0).unwrap(), BigInt::from(2));
        assert_eq!(count_contained_with_intersection(5, 3, 2, 2, 2, 2).unwrap(), BigInt::from(1));
        assert!(count_contained_with_intersection(3, 2, 2, 0, 1, 0).is_err());
    }

    #[test]
    fn containing_counts_sum_to_all_supersets() {
        for q in [2u64, 3, 4] {
            for n in 0..=8 {
                for r in 0..=n / 2 {
                    for c in r..=n - r {
                        for k in 0..=r {
                            let total: BigInt = (k..=r)
                                .map(|i| count_containing_with_intersection(n, q, r, c, k, i).unwrap())
                                .sum();
                            let all = gaussian_binomial((n - r) as i64, (c - r) as i64, q);
                            assert_eq!(total, all, "q={q} n={n} r={r} c={c} k={k}");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn admissibility_examples() {
        assert!(char_p_admissible_subspace(3, 2, 1, 2, 5).unwrap());
        let adm = subspace_admissibility(3, 2, 1, 2, 3).unwrap();
        assert_eq!(adm.offending().next().unwrap().label, "[2,1]_2");
        assert!(!char_p_admissible_subspace(3, 2, 1, 2, 2).unwrap());
    }
}
