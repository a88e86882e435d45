//! Admissibility of the rational closed forms over a field of characteristic `p`.

use num_bigint::BigInt;
use num_traits::Zero;
use serde::Serialize;

use crate::arith::{is_prime, rat_mod_p, Rational};
use crate::error::{Error, Result};

/// One integer whose divisibility by `p` is tested.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Factor {
    /// Human-readable expression, e.g. `C(3,1)` or `[2,1]_2`.
    pub label: String,
    #[serde(serialize_with = "crate::charp::ser_big")]
    pub value: BigInt,
}

pub(crate) fn ser_big<S: serde::Serializer>(v: &BigInt, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(v)
}

/// The factor list for a prime `p`, and which of them `p` divides.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Admissibility {
    pub p: u64,
    pub factors: Vec<Factor>,
}

impl Admissibility {
    pub(crate) fn new(p: u64, factors: Vec<Factor>) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(Admissibility { p, factors })
    }

    /// Factors divisible by `p`.
    pub fn offending(&self) -> impl Iterator<Item = &Factor> {
        let p = BigInt::from(self.p);
        self.factors.iter().filter(move |f| (&f.value % &p).is_zero())
    }

    pub fn is_admissible(&self) -> bool {
        self.offending().next().is_none()
    }
}

/// Reduces each class value modulo `p`.
pub fn reduce_values(values: &[Rational], p: u64) -> Result<Vec<u64>> {
    values.iter().map(|v| rat_mod_p(v, p).map(|r| r.value())).collect()
}
