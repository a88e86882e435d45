//! GF(q) arithmetic for prime powers `q = p^e`.
//!
//! Elements are coefficient vectors of length `e` over GF(p), lowest degree
//! first, reduced modulo a fixed monic irreducible polynomial. The modulus is
//! the lexicographically least one (coefficients compared lowest degree
//! first), which makes every enumeration over the field reproducible.

use std::fmt;

use crate::arith::is_prime;
use crate::error::{Error, Result};
use crate::linalg::{rref, Field, Matrix, Rref};

/// A finite field with `q = p^e` elements.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FieldSpec {
    q: u64,
    p: u32,
    e: usize,
    /// Monic, `e + 1` coefficients, lowest degree first.
    modulus: Vec<u32>,
}

/// An element of GF(p^e) as `e` coefficients in `[0, p)`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldElement(Vec<u32>);

impl FieldElement {
    pub fn coefficients(&self) -> &[u32] {
        &self.0
    }
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

/// Splits `q` as `p^e`, or `None` if `q` is not a prime power.
pub fn prime_power(q: u64) -> Option<(u64, usize)> {
    if q < 2 {
        return None;
    }
    let p = (2..=q).find(|d| q.is_multiple_of(*d))?;
    let (mut rest, mut e) = (q, 0);
    while rest % p == 0 {
        rest /= p;
        e += 1;
    }
    (rest == 1 && is_prime(p)).then_some((p, e))
}

/// Builds GF(q) with the lexicographically least monic irreducible modulus.
pub fn build_field(q: u64) -> Result<FieldSpec> {
    let (p, e) = prime_power(q).ok_or(Error::InvalidField(q))?;
    let p = u32::try_from(p).map_err(|_| Error::InvalidField(q))?;
    let modulus = least_irreducible(p, e);
    Ok(FieldSpec { q, p, e, modulus })
}

/// Every monic polynomial of degree `deg` over GF(p) in lexicographic order
/// of the low-degree-first coefficient sequence.
fn monic_polys(p: u32, deg: usize) -> impl Iterator<Item = Vec<u32>> {
    let count = (p as u64).pow(deg as u32);
    (0..count).map(move |mut idx| {
        // The first coefficient is the most significant digit of the counter.
        let mut c = vec![0u32; deg + 1];
        for j in (0..deg).rev() {
            c[j] = (idx % p as u64) as u32;
            idx /= p as u64;
        }
        c[deg] = 1;
        c
    })
}

fn poly_rem(a: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    // m is monic.
    let mut r: Vec<u32> = a.to_vec();
    let dm = m.len() - 1;
    while r.len() > dm {
        let lead = *r.last().unwrap();
        let shift = r.len() - 1 - dm;
        if lead != 0 {
            for (j, &mc) in m.iter().enumerate() {
                let sub = (lead as u64 * mc as u64 % p as u64) as u32;
                r[shift + j] = (r[shift + j] + p - sub) % p;
            }
        }
        r.pop();
    }
    r
}

fn is_irreducible(f: &[u32], p: u32) -> bool {
    let deg = f.len() - 1;
    (1..=deg / 2).all(|d| monic_polys(p, d).all(|g| poly_rem(f, &g, p).iter().any(|&c| c != 0)))
}

fn least_irreducible(p: u32, e: usize) -> Vec<u32> {
    monic_polys(p, e).find(|f| is_irreducible(f, p)).expect("irreducible polynomials exist in every degree")
}

impl FieldSpec {
    pub fn order(&self) -> u64 {
        self.q
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> usize {
        self.e
    }

    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    /// Checks the coefficient count and range.
    pub fn element(&self, coefficients: Vec<u32>) -> Result<FieldElement> {
        if coefficients.len() != self.e || coefficients.iter().any(|&c| c >= self.p) {
            return Err(Error::Parameter(format!("{coefficients:?} is not an element of GF({})", self.q)));
        }
        Ok(FieldElement(coefficients))
    }

    /// The constant `c mod p`.
    pub fn constant(&self, c: u32) -> FieldElement {
        let mut v = vec![0; self.e];
        v[0] = c % self.p;
        FieldElement(v)
    }

    /// Decodes `idx = sum c_j p^j`; this is the enumeration order of the field.
    pub fn from_index(&self, mut idx: u64) -> FieldElement {
        assert!(idx < self.q, "index {idx} out of range for GF({})", self.q);
        let mut v = vec![0; self.e];
        for c in v.iter_mut() {
            *c = (idx % self.p as u64) as u32;
            idx /= self.p as u64;
        }
        FieldElement(v)
    }

    pub fn index_of(&self, a: &FieldElement) -> u64 {
        a.0.iter().rev().fold(0u64, |acc, &c| acc * self.p as u64 + c as u64)
    }

    /// All `q` elements in index order.
    pub fn elements(&self) -> impl Iterator<Item = FieldElement> + '_ {
        (0..self.q).map(|i| self.from_index(i))
    }

    /// Integer for prime fields, `[c0,c1,...]` otherwise.
    pub fn render(&self, a: &FieldElement) -> String {
        if self.e == 1 {
            a.0[0].to_string()
        } else {
            let parts: Vec<String> = a.0.iter().map(|c| c.to_string()).collect();
            format!("[{}]", parts.join(","))
        }
    }

    pub fn pow(&self, a: &FieldElement, mut exp: u64) -> FieldElement {
        let mut base = a.clone();
        let mut acc = self.one();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = gf_mul(&acc, &base, self);
            }
            base = gf_mul(&base, &base, self);
            exp >>= 1;
        }
        acc
    }
}

/// Product of two field elements.
pub fn gf_mul(a: &FieldElement, b: &FieldElement, f: &FieldSpec) -> FieldElement {
    let p = f.p as u64;
    if f.e == 1 {
        return FieldElement(vec![(a.0[0] as u64 * b.0[0] as u64 % p) as u32]);
    }
    let mut prod = vec![0u32; 2 * f.e - 1];
    for (i, &x) in a.0.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.0.iter().enumerate() {
            prod[i + j] = ((prod[i + j] as u64 + x as u64 * y as u64) % p) as u32;
        }
    }
    let mut r = poly_rem(&prod, &f.modulus, f.p);
    r.resize(f.e, 0);
    FieldElement(r)
}

/// Multiplicative inverse, as `a^(q-2)`.
pub fn gf_inv(a: &FieldElement, f: &FieldSpec) -> Result<FieldElement> {
    if a.0.iter().all(|&c| c == 0) {
        return Err(Error::NoInverse { value: f.render(a), modulus: f.q });
    }
    Ok(f.pow(a, f.q - 2))
}

impl Field for FieldSpec {
    type Elem = FieldElement;

    fn zero(&self) -> FieldElement {
        FieldElement(vec![0; self.e])
    }
    fn one(&self) -> FieldElement {
        self.constant(1)
    }
    fn is_zero(&self, a: &FieldElement) -> bool {
        a.0.iter().all(|&c| c == 0)
    }
    fn add(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        FieldElement(a.0.iter().zip(&b.0).map(|(x, y)| (x + y) % self.p).collect())
    }
    fn sub(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        FieldElement(a.0.iter().zip(&b.0).map(|(x, y)| (x + self.p - y) % self.p).collect())
    }
    fn mul(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        gf_mul(a, b, self)
    }
    fn neg(&self, a: &FieldElement) -> FieldElement {
        FieldElement(a.0.iter().map(|x| (self.p - x) % self.p).collect())
    }
    fn inv(&self, a: &FieldElement) -> Option<FieldElement> {
        gf_inv(a, self).ok()
    }
}

/// A matrix over GF(q).
pub type GFMatrix = Matrix<FieldElement>;

/// Reduced row echelon form over GF(q), zero rows trimmed.
pub fn rref_gf(a: &GFMatrix, f: &FieldSpec) -> Rref<FieldElement> {
    rref(f, a)
}

/// Builds a GF(q) matrix from element indices (see [`FieldSpec::from_index`]).
pub fn gf_matrix(f: &FieldSpec, rows: usize, cols: usize, idx: &[u64]) -> Result<GFMatrix> {
    Matrix::new(rows, cols, idx.iter().map(|&i| f.from_index(i)).collect())
}
