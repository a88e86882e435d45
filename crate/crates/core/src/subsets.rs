//! Colexicographic ranking of `r`-subsets of `[n]`.
//!
//! A subset is held internally as a bitmask with bit `j - 1` standing for the
//! element `j`. Colex order on subsets is exactly the numeric order of these
//! masks, so enumeration is Gosper's next-combination step.

use crate::combinatorics::binomial;
use crate::error::{param_err, Result};
use num_traits::ToPrimitive;

/// Largest ground set supported by the bitmask representation.
pub const MAX_GROUND_SET: usize = 63;

/// The `r`-subsets of `[n]` in colex order.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SubsetIndex {
    n: usize,
    r: usize,
}

impl SubsetIndex {
    pub fn new(n: usize, r: usize) -> Result<Self> {
        if n > MAX_GROUND_SET {
            return param_err(format!("ground set size {n} exceeds {MAX_GROUND_SET}"));
        }
        if r > n {
            return param_err(format!("subset size {r} exceeds ground set size {n}"));
        }
        Ok(SubsetIndex { n, r })
    }

    pub fn len(&self) -> usize {
        binomial(self.n as i64, self.r as i64).to_usize().expect("subset count fits in usize")
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn rank(&self, subset: &[usize]) -> Result<usize> {
        subset_rank(subset, self.n, self.r)
    }

    pub fn unrank(&self, rank: usize) -> Result<Vec<usize>> {
        subset_unrank(rank, self.n, self.r)
    }

    /// All subsets as bitmasks, in colex order.
    pub fn masks(&self) -> Vec<u64> {
        colex_masks(self.n, self.r)
    }
}

/// Bitmasks of all `r`-subsets of `[n]` in increasing (colex) order.
pub fn colex_masks(n: usize, r: usize) -> Vec<u64> {
    assert!(n <= MAX_GROUND_SET && r <= n);
    if r == 0 {
        return vec![0];
    }
    let limit = 1u64 << n;
    let mut out = Vec::new();
    let mut x = (1u64 << r) - 1;
    while x < limit {
        out.push(x);
        let low = x & x.wrapping_neg();
        let ripple = x + low;
        x = ripple | (((x ^ ripple) >> 2) / low);
    }
    out
}

pub fn mask_to_subset(mask: u64) -> Vec<usize> {
    (0..64).filter(|j| mask >> j & 1 == 1).map(|j| j + 1).collect()
}

pub fn subset_to_mask(subset: &[usize]) -> u64 {
    subset.iter().fold(0, |m, &j| m | 1 << (j - 1))
}

fn validate(subset: &[usize], n: usize, r: usize) -> Result<()> {
    if subset.len() != r {
        return param_err(format!("{subset:?} has {} elements, expected {r}", subset.len()));
    }
    if subset.iter().any(|&j| j == 0 || j > n) {
        return param_err(format!("{subset:?} has an element outside [1, {n}]"));
    }
    if subset.windows(2).any(|w| w[0] >= w[1]) {
        return param_err(format!("{subset:?} is not strictly increasing"));
    }
    Ok(())
}

/// Colex rank `sum_j C(S_j - 1, j)` of a strictly increasing 1-based subset.
pub fn subset_rank(subset: &[usize], n: usize, r: usize) -> Result<usize> {
    SubsetIndex::new(n, r)?;
    validate(subset, n, r)?;
    let rank: num_bigint::BigInt =
        subset.iter().enumerate().map(|(j, &s)| binomial(s as i64 - 1, j as i64 + 1)).sum();
    Ok(rank.to_usize().expect("rank fits in usize"))
}

/// Inverse of [`subset_rank`].
pub fn subset_unrank(rank: usize, n: usize, r: usize) -> Result<Vec<usize>> {
    let index = SubsetIndex::new(n, r)?;
    if rank >= index.len() {
        return param_err(format!("rank {rank} out of range for C({n},{r})"));
    }
    let mut rest = rank;
    let mut out = vec![0; r];
    let mut top = n as i64;
    for j in (1..=r).rev() {
        // Largest s with C(s - 1, j) <= rest.
        let mut s = top;
        while binomial(s - 1, j as i64).to_usize().unwrap() > rest {
            s -= 1;
        }
        rest -= binomial(s - 1, j as i64).to_usize().unwrap();
        out[j - 1] = s as usize;
        top = s - 1;
    }
    Ok(out)
}
