//! Binomial and Gaussian binomial coefficients, and the alternating-sum
//! identities they satisfy.
//!
//! Both coefficient families follow the convention that the value is zero
//! unless `0 <= m <= n`. This makes expressions such as `C(c-i-1, r-i)` well
//! defined (and zero) when `c = r` and `i < r`.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::arith::{sign_pow, Rational};

/// `C(n, m)`, or zero when `m < 0` or `m > n`.
pub fn binomial(n: i64, m: i64) -> BigInt {
    if m < 0 || n < 0 || m > n {
        return BigInt::zero();
    }
    let m = m.min(n - m);
    let mut acc = BigInt::one();
    for j in 1..=m {
        acc *= n - m + j;
        acc /= j;
    }
    acc
}

fn check_q(q: u64) {
    assert!(q >= 2, "q must be at least 2, got {q}");
}

fn q_pow(q: u64, e: u64) -> BigInt {
    num_traits::pow::pow(BigInt::from(q), e as usize)
}

/// The q-integer `[n]_q = 1 + q + ... + q^(n-1)`.
///
/// # Panics
///
/// Panics if `q < 2`.
pub fn q_integer(n: u64, q: u64) -> BigInt {
    check_q(q);
    (q_pow(q, n) - 1u32) / (q - 1)
}

/// The Gaussian binomial `[n choose m]_q`, or zero outside `0 <= m <= n`.
///
/// Evaluated as the running product of `(q^(n-m+j) - 1) / (q^j - 1)` for
/// `j = 1..=m`; each partial product is itself a Gaussian binomial, so every
/// division is exact.
///
/// # Panics
///
/// Panics if `q < 2`.
pub fn gaussian_binomial(n: i64, m: i64, q: u64) -> BigInt {
    check_q(q);
    if m < 0 || n < 0 || m > n {
        return BigInt::zero();
    }
    let m = m.min(n - m) as u64;
    let n = n as u64;
    let mut acc = BigInt::one();
    for j in 1..=m {
        acc *= q_pow(q, n - m + j) - 1u32;
        acc /= q_pow(q, j) - 1u32;
    }
    acc
}

/// A polynomial with integer coefficients, lowest degree first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntPolynomial {
    coefficients: Vec<BigInt>,
}

impl IntPolynomial {
    pub fn new(mut coefficients: Vec<BigInt>) -> Self {
        while coefficients.last().is_some_and(|c| c.is_zero()) {
            coefficients.pop();
        }
        IntPolynomial { coefficients }
    }

    pub fn from_i64(coefficients: &[i64]) -> Self {
        Self::new(coefficients.iter().map(|&c| BigInt::from(c)).collect())
    }

    /// `x^m`.
    pub fn monomial(m: usize) -> Self {
        let mut c = vec![BigInt::zero(); m + 1];
        c[m] = BigInt::one();
        IntPolynomial { coefficients: c }
    }

    pub fn coefficients(&self) -> &[BigInt] {
        &self.coefficients
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coefficients.len().checked_sub(1)
    }

    pub fn eval(&self, x: &BigInt) -> BigInt {
        self.coefficients.iter().rev().fold(BigInt::zero(), |acc, c| acc * x + c)
    }
}

/// `sum_{i=0}^{n} (-1)^i C(n,i) p(i)`, which vanishes whenever `deg p < n`.
pub fn ruiz_sum(n: u64, p: &IntPolynomial) -> Rational {
    let n = n as i64;
    let total: BigInt = (0..=n).map(|i| sign_pow(i) * binomial(n, i) * p.eval(&BigInt::from(i))).sum();
    Rational::from_integer(total)
}

/// The q-analogue of [`ruiz_sum`] for `p(x) = x^m` evaluated at `x = q^i`:
///
/// `sum_{i=0}^{n} (-1)^i [n choose i]_q q^(i m - i(n-i) - C(i,2))`,
///
/// which vanishes whenever `m < n`.
pub fn q_ruiz_sum(n: u64, m: u64, q: u64) -> Rational {
    check_q(q);
    let (n, m) = (n as i64, m as i64);
    let qr = Rational::from_integer(q as i64);
    (0..=n)
        .map(|i| {
            let exp = i * m - i * (n - i) - i * (i - 1) / 2;
            let term = Rational::from_integer(sign_pow(i) * gaussian_binomial(n, i, q));
            term * qr.pow(exp).expect("q is nonzero")
        })
        .sum()
}

/// Evaluates both sides of Gauss' binomial formula
///
/// `prod_{j=0}^{n-1} (x + q^j a) = sum_{i=0}^{n} [n choose i]_q q^C(i,2) a^i x^(n-i)`
///
/// exactly and reports whether they agree.
pub fn gauss_binomial_formula_check(n: u64, x: &Rational, a: &Rational, q: u64) -> bool {
    check_q(q);
    let n = n as i64;
    let qr = Rational::from_integer(q as i64);
    let lhs: Rational = (0..n).map(|j| x + qr.pow(j).unwrap() * a).product();
    let rhs: Rational = (0..=n)
        .map(|i| {
            Rational::from_integer(gaussian_binomial(n, i, q))
                * qr.pow(i * (i - 1) / 2).unwrap()
                * a.pow(i).unwrap()
                * x.pow(n - i).unwrap()
        })
        .sum();
    lhs == rhs
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;

    fn big(n: i64) -> BigInt {
        BigInt::from(n)
    }

    #[test]
    fn binomial_values_and_convention() {
        assert_eq!(binomial(5, 2), big(10));
        assert_eq!(binomial(3, 5), big(0));
        assert_eq!(binomial(-1, 0), big(0));
        assert_eq!(binomial(0, 0), big(1));
        assert_eq!(binomial(4, -1), big(0));
        assert_eq!(binomial(60, 30), "118264581564861424".parse::<BigInt>().unwrap());
    }

    #[test]
    fn binomial_matches_pascal() {
        for n in 1..30 {
            for m in 0..=n {
                assert_eq!(binomial(n, m), binomial(n - 1, m - 1) + binomial(n - 1, m));
            }
        }
    }

    #[test]
    fn q_integers() {
        assert_eq!(q_integer(3, 2), big(7));
        assert_eq!(q_integer(0, 5), big(0));
        assert_eq!(q_integer(4, 3), big(40));
    }

    #[test]
    fn gaussian_binomial_values() {
        assert_eq!(gaussian_binomial(2, 1, 3), big(4));
        assert_eq!(gaussian_binomial(4, 2, 2), big(35));
        assert_eq!(gaussian_binomial(3, 5, 2), big(0));
        assert_eq!(gaussian_binomial(-1, 0, 2), big(0));
        assert_eq!(gaussian_binomial(5, 2, 3), big(1210));
    }

    #[test]
    fn gaussian_binomial_symmetry_and_pascal() {
        for q in [2u64, 3, 4, 5] {
            for n in 0..=12i64 {
                for m in 0..=n {
                    assert_eq!(gaussian_binomial(n, m, q), gaussian_binomial(n, n - m, q));
                    if n > 0 {
                        // q-Pascal: [n,m] = [n-1,m-1] + q^m [n-1,m]
                        let rhs = gaussian_binomial(n - 1, m - 1, q)
                            + q_pow(q, m as u64) * gaussian_binomial(n - 1, m, q);
                        assert_eq!(gaussian_binomial(n, m, q), rhs);
                    }
                }
            }
        }
    }

    #[test]
    #[should_panic(expected = "q must be at least 2")]
    fn q_one_is_rejected() {
        gaussian_binomial(3, 1, 1);
    }

    #[test]
    fn ruiz_examples() {
        let sq = IntPolynomial::from_i64(&[0, 0, 1]);
        assert_eq!(ruiz_sum(3, &sq), Rational::zero());
        assert_eq!(ruiz_sum(1, &IntPolynomial::from_i64(&[1])), Rational::zero());
        // 0 - 2*1 + 4 = 2: degree equal to n does not vanish.
        assert_eq!(ruiz_sum(2, &sq), rat(2, 1));
    }

    #[test]
    fn q_ruiz_examples() {
        assert_eq!(q_ruiz_sum(2, 0, 2), Rational::zero());
        assert_eq!(q_ruiz_sum(3, 2, 3), Rational::zero());
        // i=0 contributes 1, i=1 contributes -[1,1]_2 * 2^1 = -2.
        assert_eq!(q_ruiz_sum(1, 1, 2), rat(-1, 1));
    }

    #[test]
    fn gauss_formula_examples() {
        let one = Rational::one();
        assert!(gauss_binomial_formula_check(1, &one, &one, 2));
        assert!(gauss_binomial_formula_check(2, &one, &one, 2));
        assert!(gauss_binomial_formula_check(3, &rat(2, 3), &rat(-1, 5), 3));
    }

    #[test]
    fn polynomial_normalizes_trailing_zeros() {
        let p = IntPolynomial::from_i64(&[1, 2, 0, 0]);
        assert_eq!(p.degree(), Some(1));
        assert_eq!(IntPolynomial::from_i64(&[0, 0]).degree(), None);
        assert_eq!(p.eval(&big(3)), big(7));
        assert_eq!(IntPolynomial::monomial(3).eval(&big(2)), big(8));
    }
}
