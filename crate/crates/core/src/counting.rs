//! Exact counts of skew-symmetric matrices by rank, and the code length.
//!
//! `rank_count(q, 2r, m)` is the number of m x m skew matrices of rank 2r:
//!
//! ```text
//! q^{r(r-1)} * prod_{i=0}^{2r-1} (q^{m-i} - 1) / prod_{i=0}^{r-1} (q^{2(r-i)} - 1)
//! ```
//!
//! for r >= 1, and 1 for r = 0 (only the zero matrix).

use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

fn pow(q: u64, e: u64) -> BigUint {
    BigUint::from(q).pow(e as u32)
}

fn exact_div(num: &BigUint, den: &BigUint) -> BigUint {
    let (quot, rem) = num.div_rem(den);
    assert!(rem.is_zero(), "inexact division {num} / {den}");
    quot
}

/// Number of skew m x m matrices over GF(q) of rank `rank`.
///
/// Odd ranks, negative arguments and ranks above m give 0.
pub fn rank_count(q: u64, rank: i64, m: i64) -> BigUint {
    if m < 0 || rank < 0 || rank % 2 != 0 || rank > m {
        return BigUint::zero();
    }
    let r = (rank / 2) as u64;
    if r == 0 {
        return BigUint::one();
    }
    let m = m as u64;
    let num: BigUint = (0..2 * r).map(|i| pow(q, m - i) - 1u32).product();
    let den: BigUint = (0..r).map(|i| pow(q, 2 * (r - i)) - 1u32).product();
    pow(q, r * (r - 1)) * exact_div(&num, &den)
}

/// Number of skew m x m matrices of rank at most 2t; zero for t < 0.
///
/// Total over every t, including 2t > m (where it saturates at q^{C(m,2)}).
pub fn cumulative_count(q: u64, t: i64, m: i64) -> BigUint {
    (0..=t).map(|r| rank_count(q, 2 * r, m)).sum()
}

/// N_a(2t, m), validated: requires 0 <= 2t <= m.
pub fn bounded_rank_count(q: u64, t: i64, m: i64) -> Result<BigUint> {
    if t < 0 || 2 * t > m {
        return Err(Error::InvalidParams(format!("need 0 <= 2t <= m, got t = {t}, m = {m}")));
    }
    Ok(cumulative_count(q, t, m))
}

/// Number of GF(q)-points of the projective variety of skew matrices of rank <= 2t.
pub fn code_length(q: u64, t: i64, m: i64) -> Result<BigUint> {
    if t < 1 || 2 * t > m {
        return Err(Error::InvalidParams(format!("need 1 <= t <= m/2, got t = {t}, m = {m}")));
    }
    let n = cumulative_count(q, t, m);
    Ok(exact_div(&(n - 1u32), &BigUint::from(q - 1)))
}

/// Gaussian binomial coefficient [m choose j]_q.
pub fn gaussian_binomial(q: u64, m: u64, j: u64) -> BigUint {
    if j > m {
        return BigUint::zero();
    }
    let num: BigUint = (0..j).map(|i| pow(q, m - i) - 1u32).product();
    let den: BigUint = (1..=j).map(|i| pow(q, i) - 1u32).product();
    exact_div(&num, &den)
}

/// q^{C(m,2)}: the number of all skew m x m matrices.
pub fn space_size(q: u64, m: u64) -> BigUint {
    pow(q, m * m.saturating_sub(1) / 2)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountTable {
    pub q: u64,
    pub m: u64,
    pub t: u64,
    /// Even rank -> count, for every even rank 0..=m.
    pub rank_counts: BTreeMap<u64, BigUint>,
    pub cumulative: BigUint,
    pub length: BigUint,
}

impl CountTable {
    pub fn new(q: u64, m: u64, t: u64) -> Result<CountTable> {
        let (mi, ti) = (m as i64, t as i64);
        let length = code_length(q, ti, mi)?;
        let rank_counts = (0..=m).step_by(2).map(|r| (r, rank_count(q, r as i64, mi))).collect();
        Ok(CountTable { q, m, t, rank_counts, cumulative: bounded_rank_count(q, ti, mi)?, length })
    }
}
