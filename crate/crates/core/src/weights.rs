//! Hamming weights of the skew determinantal codes.
//!
//! A nonzero codeword is determined by a skew matrix F, and its weight depends
//! only on rank(F) = 2k. With E_{2k} the block normal form,
//!
//! * `w_{2k}(2r, m)` counts rank-2r matrices A with tr(E_{2k} A) != 0,
//! * `W_{2k}(2t, m)` is the affine weight, the sum of `w_{2k}(2r, m)` over 1 <= r <= t,
//! * the projective weight is `W_{2k}(2t, m) / (q - 1)`.
//!
//! `w` satisfies a recursion in m that drops to sizes m - 1 and m - 2 by
//! deleting the (2k)-th row and column and counting the fibers. The class
//! weights also have a closed form through the auxiliary quantity
//! `P_m(2k, 2r)`. Both paths are exposed so they can be checked against
//! each other.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use num_bigint::{BigInt, BigUint, Sign};
use num_traits::{Signed, Zero};

use crate::counting::{cumulative_count, rank_count, space_size};
use crate::error::{Error, Result};

fn pow(q: u64, e: i64) -> BigInt {
    debug_assert!(e >= 0);
    BigInt::from(q).pow(e as u32)
}

fn n_a(q: u64, rank: i64, m: i64) -> BigInt {
    BigInt::from(rank_count(q, rank, m))
}

fn to_unsigned(v: BigInt) -> BigUint {
    assert!(!v.is_negative(), "count went negative: {v}");
    v.to_biguint().expect("nonnegative")
}

fn check_t(t: i64, m: i64) -> Result<()> {
    if t < 1 || 2 * t > m {
        return Err(Error::InvalidParams(format!("need 1 <= t <= m/2, got t = {t}, m = {m}")));
    }
    Ok(())
}

fn check_k(k: i64, m: i64) -> Result<()> {
    if k < 1 || 2 * k > m {
        return Err(Error::InvalidParams(format!("need 1 <= k <= m/2, got k = {k}, m = {m}")));
    }
    Ok(())
}

/// Memoized evaluator for `w`, `P` and the class weights over a fixed GF(q).
#[derive(Debug, Clone)]
pub struct WeightCalculator {
    q: u64,
    memo: HashMap<(i64, i64, i64), BigInt>,
}

impl WeightCalculator {
    pub fn new(q: u64) -> WeightCalculator {
        WeightCalculator { q, memo: HashMap::new() }
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    /// `w_{2k}(2r, m)` by the recursion. Requires 0 <= 2k <= m and 0 <= 2r <= m.
    pub fn w_small(&mut self, k: i64, r: i64, m: i64) -> Result<BigUint> {
        if k < 0 || r < 0 || 2 * k > m || 2 * r > m {
            return Err(Error::InvalidParams(format!("need 0 <= 2k, 2r <= m, got k = {k}, r = {r}, m = {m}")));
        }
        Ok(to_unsigned(self.w(k, r, m)))
    }

    fn w(&mut self, k: i64, r: i64, m: i64) -> BigInt {
        // E_0 = 0 has no nonzero traces; only the zero matrix has rank 0.
        if k <= 0 || r <= 0 || 2 * r > m {
            return BigInt::zero();
        }
        if let Some(v) = self.memo.get(&(k, r, m)) {
            return v.clone();
        }
        let q = self.q;
        let qm1 = BigInt::from(q - 1);

        let mut total = pow(q, 2 * r) * self.w(k - 1, r, m - 2)
            + &qm1 * pow(q, 2 * r - 1) * (n_a(q, 2 * r, m - 1) - n_a(q, 2 * r, m - 2))
            + &qm1 * pow(q, m - 2) * n_a(q, 2 * r - 2, m - 1);
        if r >= 2 {
            total -= pow(q, 2 * r - 2) * self.w(k - 1, r - 1, m - 2);
            total -= &qm1 * pow(q, 2 * r - 3) * (n_a(q, 2 * r - 2, m - 1) - n_a(q, 2 * r - 2, m - 2));
        } else {
            // both r = 1 correction terms carry a vanishing factor
            debug_assert!(self.w(k - 1, 0, m - 2).is_zero());
            debug_assert_eq!(n_a(q, 0, m - 1), n_a(q, 0, m - 2));
        }
        assert!(total.sign() != Sign::Minus, "w_{}({}, {}) negative", 2 * k, 2 * r, m);
        self.memo.insert((k, r, m), total.clone());
        total
    }

    /// `P_m(2k, 2r)`. Requires 1 <= 2k <= m and 0 <= 2r <= m.
    pub fn p_quantity(&mut self, k: i64, r: i64, m: i64) -> Result<BigUint> {
        check_k(k, m)?;
        if r < 0 || 2 * r > m {
            return Err(Error::InvalidParams(format!("need 0 <= 2r <= m, got r = {r}, m = {m}")));
        }
        Ok(to_unsigned(self.p(k, r, m)))
    }

    fn p(&mut self, k: i64, r: i64, m: i64) -> BigInt {
        let q = self.q;
        if r == 0 {
            // w(.)(0, .) = 0 and n_a(0, m-1) = n_a(0, m-2) = 1
            return BigInt::zero();
        }
        pow(q, 2 * r) * self.w(k - 1, r, m - 2)
            + BigInt::from(q - 1) * pow(q, 2 * r - 1) * (n_a(q, 2 * r, m - 1) - n_a(q, 2 * r, m - 2))
    }

    /// Affine class weight `W_{2k}(2t, m)` from the closed form
    /// `P_m(2k, 2t) + (q-1) q^{m-2} N_a(2t-2, m-1)`.
    pub fn class_weight(&mut self, k: i64, t: i64, m: i64) -> Result<BigUint> {
        check_k(k, m)?;
        check_t(t, m)?;
        let q = self.q;
        let tail = BigInt::from(q - 1) * pow(q, m - 2) * BigInt::from(cumulative_count(q, t - 1, m - 1));
        Ok(to_unsigned(self.p(k, t, m) + tail))
    }

    /// Affine class weight as the sum of `w_{2k}(2r, m)` over 1 <= r <= t.
    pub fn class_weight_by_sum(&mut self, k: i64, t: i64, m: i64) -> Result<BigUint> {
        check_k(k, m)?;
        check_t(t, m)?;
        Ok(to_unsigned((1..=t).map(|r| self.w(k, r, m)).sum()))
    }
}

/// Minimum distance of the projective code from its closed form.
pub fn min_distance(q: u64, t: i64, m: i64) -> Result<BigUint> {
    check_t(t, m)?;
    let first = (pow(q, m - 2 * t) - 1) * pow(q, m + 2 * t - 4) * n_a(q, 2 * t - 2, m - 2);
    let second = pow(q, m - 2) * BigInt::from(cumulative_count(q, t - 1, m - 1));
    Ok(to_unsigned(first + second))
}

/// Which family of codewords attains the minimum weight.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MinWeightRegime {
    /// Exactly the codewords of rank-2 matrices F.
    RankTwoClass,
    /// Constant-weight code: every nonzero codeword.
    AllNonzero,
}

impl MinWeightRegime {
    pub fn label(self) -> &'static str {
        match self {
            MinWeightRegime::RankTwoClass => "rank-2 class",
            MinWeightRegime::AllNonzero => "all nonzero codewords",
        }
    }
}

impl fmt::Display for MinWeightRegime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// Number of minimum-weight codewords.
///
/// For t = floor(m/2) every skew matrix lies on the variety, the code is a
/// first order projective Reed-Muller code and all nonzero codewords have the
/// same weight. Otherwise only the rank-2 class attains the minimum.
pub fn min_weight_count(q: u64, t: i64, m: i64) -> Result<(BigUint, MinWeightRegime)> {
    check_t(t, m)?;
    if t == m / 2 {
        Ok((space_size(q, m as u64) - 1u32, MinWeightRegime::AllNonzero))
    } else {
        Ok((rank_count(q, 2, m), MinWeightRegime::RankTwoClass))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightReport {
    pub q: u64,
    pub m: u64,
    pub t: u64,
    /// k -> W_{2k}(2t, m)
    pub affine_weights: BTreeMap<u64, BigUint>,
    /// k -> W_{2k}(2t, m) / (q - 1)
    pub projective_weights: BTreeMap<u64, BigUint>,
    pub min_distance: BigUint,
    pub min_weight_count: BigUint,
    pub min_weight_regime: MinWeightRegime,
    pub distinct_weight_count: usize,
    /// Whether the projective weights are nondecreasing in k. Only the
    /// minimality of W_2 is guaranteed; this is reported, never enforced.
    pub monotone: bool,
}

impl WeightReport {
    /// Weight enumerator of the projective code: weight -> number of codewords.
    pub fn weight_enumerator(&self) -> BTreeMap<BigUint, BigUint> {
        let mut out = BTreeMap::new();
        out.insert(BigUint::zero(), BigUint::from(1u32));
        for (&k, w) in &self.projective_weights {
            *out.entry(w.clone()).or_insert_with(BigUint::zero) += rank_count(self.q, 2 * k as i64, self.m as i64);
        }
        out
    }
}

/// Builds the full weight report and checks its internal identities.
pub fn weight_report(q: u64, t: i64, m: i64) -> Result<WeightReport> {
    weight_report_with(&mut WeightCalculator::new(q), t, m)
}

pub fn weight_report_with(calc: &mut WeightCalculator, t: i64, m: i64) -> Result<WeightReport> {
    check_t(t, m)?;
    let q = calc.q();
    let qm1 = BigUint::from(q - 1);
    let mut affine = BTreeMap::new();
    let mut projective = BTreeMap::new();
    for k in 1..=m / 2 {
        let w = calc.class_weight(k, t, m)?;
        assert_eq!(w, calc.class_weight_by_sum(k, t, m)?, "closed form and split sum disagree at k = {k}");
        assert!((&w % &qm1).is_zero(), "W_{} not divisible by q - 1", 2 * k);
        projective.insert(k as u64, &w / &qm1);
        affine.insert(k as u64, w);
    }

    let w2 = affine[&1].clone();
    for k in 2..=m / 2 {
        let gap = BigUint::from(q).pow(2 * t as u32) * to_unsigned(calc.w(k - 1, t, m - 2));
        assert_eq!(&affine[&(k as u64)] - &w2, gap, "W_{} - W_2 identity fails", 2 * k);
    }

    let d = min_distance(q, t, m)?;
    let min_proj = projective.values().min().expect("m >= 2").clone();
    assert_eq!(d, min_proj, "closed-form distance differs from the smallest class weight");
    assert_eq!(d, &w2 / &qm1);

    let (count, regime) = min_weight_count(q, t, m)?;
    let attained: BigUint = projective
        .iter()
        .filter(|(_, w)| **w == min_proj)
        .map(|(&k, _)| rank_count(q, 2 * k as i64, m))
        .sum();
    assert_eq!(count, attained, "min-weight count disagrees with class sizes");

    let distinct = projective.values().collect::<BTreeSet<_>>().len();
    let monotone = projective.values().zip(projective.values().skip(1)).all(|(a, b)| a <= b);
    Ok(WeightReport {
        q,
        m: m as u64,
        t: t as u64,
        affine_weights: affine,
        projective_weights: projective,
        min_distance: d,
        min_weight_count: count,
        min_weight_regime: regime,
        distinct_weight_count: distinct,
        monotone,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(n: u64) -> BigUint {
        BigUint::from(n)
    }

    #[test]
    fn w_small_examples() {
        let mut c = WeightCalculator::new(3);
        assert_eq!(c.w_small(1, 1, 2).unwrap(), big(2));
        assert_eq!(c.w_small(1, 1, 4).unwrap(), big(162));
        // (q-1) q (n_a(2,3) - n_a(2,2)) + (q-1) q^2 n_a(0,3)
        assert_eq!(c.w_small(1, 1, 4).unwrap(), big(2 * 3 * 24 + 2 * 9));
        for m in 0..7 {
            for r in 0..=m / 2 {
                assert_eq!(c.w_small(0, r, m).unwrap(), big(0));
            }
        }
        for k in 1..=2 {
            assert_eq!(c.w_small(k, 0, 4).unwrap(), big(0));
        }
        assert!(c.w_small(1, 3, 4).is_err());
        assert!(c.w_small(3, 1, 4).is_err());
        assert_eq!(c.w(1, 3, 4), BigInt::zero());
    }

    #[test]
    fn p_quantity_examples() {
        let mut c = WeightCalculator::new(3);
        for m in 2..8 {
            for k in 1..=m / 2 {
                assert_eq!(c.p_quantity(k, 0, m).unwrap(), big(0));
            }
        }
        assert_eq!(c.p_quantity(1, 1, 4).unwrap(), big(144));
        assert_eq!(c.p_quantity(2, 1, 4).unwrap(), big(162));
        assert!(c.p_quantity(0, 1, 4).is_err());
    }

    #[test]
    fn class_weight_examples() {
        let mut c = WeightCalculator::new(3);
        assert_eq!(c.class_weight(1, 1, 4).unwrap(), big(162));
        assert_eq!(c.class_weight(2, 1, 4).unwrap(), big(180));
        assert_eq!(c.class_weight(1, 2, 4).unwrap(), big(486));
        assert_eq!(c.class_weight(2, 2, 4).unwrap(), big(486));
        assert!(c.class_weight(3, 1, 4).is_err());
        assert!(c.class_weight(1, 0, 4).is_err());
    }

    #[test]
    fn min_distance_examples() {
        assert_eq!(min_distance(3, 1, 4).unwrap(), big(81));
        assert_eq!(min_distance(3, 2, 4).unwrap(), big(243));
        assert_eq!(min_distance(3, 1, 5).unwrap(), big(729));
        assert_eq!(min_distance(3, 2, 6).unwrap(), big(8 * 729 * 260 + 81 * 2421));
        assert!(min_distance(3, 3, 5).is_err());
    }

    #[test]
    fn min_weight_count_examples() {
        assert_eq!(min_weight_count(3, 1, 4).unwrap(), (big(260), MinWeightRegime::RankTwoClass));
        assert_eq!(min_weight_count(3, 2, 4).unwrap(), (big(728), MinWeightRegime::AllNonzero));
        assert_eq!(min_weight_count(3, 2, 6).unwrap(), (big(22022), MinWeightRegime::RankTwoClass));
        assert_eq!(min_weight_count(3, 2, 5).unwrap(), (big(59048), MinWeightRegime::AllNonzero));
        assert!(min_weight_count(3, 0, 4).is_err());
    }

    #[test]
    fn report_examples() {
        let r = weight_report(3, 1, 4).unwrap();
        assert_eq!(r.projective_weights, BTreeMap::from([(1, big(81)), (2, big(90))]));
        assert_eq!(r.min_distance, big(81));
        assert_eq!(r.distinct_weight_count, 2);
        assert!(r.monotone);
        assert_eq!(
            r.weight_enumerator(),
            BTreeMap::from([(big(0), big(1)), (big(81), big(260)), (big(90), big(468))])
        );

        let r = weight_report(3, 2, 4).unwrap();
        assert_eq!(r.distinct_weight_count, 1);
        assert_eq!(r.weight_enumerator(), BTreeMap::from([(big(0), big(1)), (big(243), big(728))]));

        assert_eq!(weight_report(3, 2, 6).unwrap().min_distance, big(1_712_421));
    }

    #[test]
    fn identities_hold_across_parameters() {
        for q in [3u64, 5, 7, 9, 11, 25] {
            let mut calc = WeightCalculator::new(q);
            for m in 2..=12 {
                for t in 1..=m / 2 {
                    let r = weight_report_with(&mut calc, t, m).unwrap();
                    assert!(r.distinct_weight_count <= (m / 2) as usize);
                    let mass: BigUint = r.weight_enumerator().values().sum();
                    assert_eq!(mass, space_size(q, m as u64));
                    if t == m / 2 {
                        assert_eq!(r.distinct_weight_count, 1);
                    }
                    if t == 1 || (2 * t >= 4 && 2 * t <= m - 2) {
                        let w2 = &r.affine_weights[&1];
                        assert!(r.affine_weights.iter().filter(|(&k, _)| k >= 2).all(|(_, w)| w > w2));
                    }
                    if t == 1 {
                        assert!(r.monotone);
                    }
                }
            }
        }
    }
}
