//! Exhaustive brute-force checks of every closed form.
//!
//! The oracle shares only the field arithmetic and the entry encoding with the
//! main path. Ranks are recomputed by its own column elimination and traces
//! are taken from the expanded m x m product, never the inner-product shortcut.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::code::{affine_weight, chunk_ranges, generator_matrix_with_budget, CodeParams, GeneratorMatrix};
use crate::counting::{code_length, rank_count};
use crate::error::{Error, Result};
use crate::field::{FieldElem, FieldSpec};
use crate::skewmat::{pair_count, random_of_rank, random_skew, SkewMatrix, SkewSpace};
use crate::weights::{weight_report_with, WeightCalculator};

/// Fast tier: about 10^6 matrices (q = 3 up to m = 5, q = 5 up to m = 4).
pub const FAST_BUDGET: u128 = 1_000_000;
/// Slow tier: admits q = 3, m = 6 (3^15 matrices).
pub const SLOW_BUDGET: u128 = 50_000_000;
/// Largest (matrices x columns) product for a full codeword census.
pub const CENSUS_BUDGET: u128 = 2_000_000_000;
/// Census cutoff inside the fast tier of `verify`.
pub const FAST_CENSUS_BUDGET: u128 = 200_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Tier {
    Fast,
    Slow,
}

impl Tier {
    pub fn budget(self) -> u128 {
        match self {
            Tier::Fast => FAST_BUDGET,
            Tier::Slow => SLOW_BUDGET,
        }
    }

    pub fn census_budget(self) -> u128 {
        match self {
            Tier::Fast => FAST_CENSUS_BUDGET,
            Tier::Slow => CENSUS_BUDGET,
        }
    }
}

/// Expanded m x m matrix, row-major.
fn expand(field: &FieldSpec, a: &SkewMatrix) -> Vec<FieldElem> {
    let m = a.size();
    let mut out = vec![FieldElem::ZERO; m * m];
    let mut idx = 0;
    for i in 0..m {
        for j in i + 1..m {
            let v = a.entries()[idx];
            out[i * m + j] = v;
            out[j * m + i] = field.neg(v);
            idx += 1;
        }
    }
    out
}

/// tr(X·Y) = Σ_i Σ_j X_ij Y_ji over expanded matrices.
fn full_trace(field: &FieldSpec, x: &[FieldElem], y: &[FieldElem], m: usize) -> FieldElem {
    let mut acc = FieldElem::ZERO;
    for i in 0..m {
        for j in 0..m {
            acc = field.add(acc, field.mul(x[i * m + j], y[j * m + i]));
        }
    }
    acc
}

/// Rank by column reduction with back-substitution (reduced column echelon form).
fn dense_rank(field: &FieldSpec, a: &[FieldElem], m: usize) -> usize {
    let mut a = a.to_vec();
    let mut rank = 0;
    for row in 0..m {
        let Some(pc) = (rank..m).find(|&c| !a[row * m + c].is_zero()) else {
            continue;
        };
        for r in 0..m {
            a.swap(r * m + pc, r * m + rank);
        }
        let inv = field.inv(a[row * m + rank]).expect("pivot is nonzero");
        for r in 0..m {
            a[r * m + rank] = field.mul(inv, a[r * m + rank]);
        }
        for c in 0..m {
            if c == rank {
                continue;
            }
            let factor = field.neg(a[row * m + c]);
            if factor.is_zero() {
                continue;
            }
            for r in 0..m {
                a[r * m + c] = field.add(a[r * m + c], field.mul(factor, a[r * m + rank]));
            }
        }
        rank += 1;
    }
    rank
}

fn with_pool<T: Send>(workers: usize, job: impl FnOnce() -> T + Send) -> T {
    if workers == 0 {
        return job();
    }
    rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .expect("thread pool")
        .install(job)
}

/// Maps every index sub-range in parallel and merges the partial results in
/// range order, so the output does not depend on the worker count.
fn partitioned<T, M, R>(workers: usize, len: u64, map: M, merge: R) -> T
where
    T: Send + Default,
    M: Fn(u64, u64) -> T + Sync + Send,
    R: Fn(&mut T, T),
{
    let parts: Vec<T> = with_pool(workers, || chunk_ranges(len).into_par_iter().map(|(s, e)| map(s, e)).collect());
    let mut out = T::default();
    for p in parts {
        merge(&mut out, p);
    }
    out
}

fn merge_hist<K: Ord>(acc: &mut BTreeMap<K, u64>, part: BTreeMap<K, u64>) {
    for (k, v) in part {
        *acc.entry(k).or_insert(0) += v;
    }
}

/// rank -> number of skew m x m matrices of that rank, by exhaustive enumeration.
/// Every rank 0..=m appears as a key.
pub fn bf_rank_histogram(field: &FieldSpec, m: usize, budget: u128, workers: usize) -> Result<BTreeMap<usize, u64>> {
    let space = SkewSpace::new(field, m, budget)?;
    let mut hist = partitioned(
        workers,
        space.len(),
        |s, e| {
            let mut h = BTreeMap::new();
            space.visit_range(s, e, |a| *h.entry(dense_rank(field, &expand(field, a), m)).or_insert(0) += 1);
            h
        },
        merge_hist,
    );
    for r in 0..=m {
        hist.entry(r).or_insert(0);
    }
    Ok(hist)
}

/// Number of rank-2r matrices A with tr(E_{2k}·A) != 0.
pub fn bf_w_small(field: &FieldSpec, k: usize, r: usize, m: usize, budget: u128) -> Result<u64> {
    if 2 * k > m || 2 * r > m {
        return Err(Error::InvalidParams(format!("need 2k, 2r <= m, got k = {k}, r = {r}, m = {m}")));
    }
    let space = SkewSpace::new(field, m, budget)?;
    let e = expand(field, &SkewMatrix::standard_form(m, k)?);
    let mut count = 0;
    space.visit_range(0, space.len(), |a| {
        let x = expand(field, a);
        if dense_rank(field, &x, m) == 2 * r && !full_trace(field, &e, &x, m).is_zero() {
            count += 1;
        }
    });
    Ok(count)
}

/// All `w_{2k}(2r, m)` for 1 <= k, r <= m/2 in a single pass, keyed (k, r).
pub fn bf_w_table(field: &FieldSpec, m: usize, budget: u128, workers: usize) -> Result<BTreeMap<(usize, usize), u64>> {
    let space = SkewSpace::new(field, m, budget)?;
    let half = m / 2;
    let forms: Vec<Vec<FieldElem>> =
        (1..=half).map(|k| expand(field, &SkewMatrix::standard_form(m, k).unwrap())).collect();
    let mut table = partitioned(
        workers,
        space.len(),
        |s, e| {
            let mut h = BTreeMap::new();
            space.visit_range(s, e, |a| {
                let x = expand(field, a);
                let rank = dense_rank(field, &x, m);
                if rank == 0 {
                    return;
                }
                for (k, form) in forms.iter().enumerate() {
                    if !full_trace(field, form, &x, m).is_zero() {
                        *h.entry((k + 1, rank / 2)).or_insert(0) += 1;
                    }
                }
            });
            h
        },
        merge_hist,
    );
    for k in 1..=half {
        for r in 1..=half {
            table.entry((k, r)).or_insert(0);
        }
    }
    Ok(table)
}

/// Weight distribution of the projective code by evaluating every F
/// against every generator column.
pub fn bf_weight_enumerator(
    params: &CodeParams,
    gen: &GeneratorMatrix,
    budget: u128,
    workers: usize,
) -> Result<BTreeMap<u64, u64>> {
    let field = &params.field;
    let m = params.m;
    let space = SkewSpace::new(field, m, budget)?;
    let work = space.len() as u128 * gen.cols() as u128;
    if work > CENSUS_BUDGET {
        return Err(Error::BudgetExceeded { size: work, budget: CENSUS_BUDGET });
    }
    let points: Vec<Vec<FieldElem>> = (0..gen.cols()).map(|c| expand(field, &gen.column_matrix(c))).collect();
    Ok(partitioned(
        workers,
        space.len(),
        |s, e| {
            let mut h = BTreeMap::new();
            space.visit_range(s, e, |f| {
                let x = expand(field, f);
                let w = points.iter().filter(|b| !full_trace(field, &x, b, m).is_zero()).count() as u64;
                *h.entry(w).or_insert(0) += 1;
            });
            h
        },
        merge_hist,
    ))
}

fn determinant(field: &FieldSpec, a: &[FieldElem], n: usize) -> FieldElem {
    // Laplace expansion along the first row
    if n == 0 {
        return FieldElem::ONE;
    }
    if n == 1 {
        return a[0];
    }
    let mut acc = FieldElem::ZERO;
    for c in 0..n {
        let v = a[c];
        if v.is_zero() {
            continue;
        }
        let minor: Vec<FieldElem> =
            (1..n).flat_map(|r| (0..n).filter(move |&j| j != c).map(move |j| a[r * n + j])).collect();
        let term = field.mul(v, determinant(field, &minor, n - 1));
        acc = if c % 2 == 0 { field.add(acc, term) } else { field.sub(acc, term) };
    }
    acc
}

fn subsets(n: usize, size: usize) -> Vec<Vec<usize>> {
    if size == 0 {
        return vec![vec![]];
    }
    if size > n {
        return vec![];
    }
    let mut out = Vec::new();
    for first in 0..n {
        for mut rest in subsets(n - first - 1, size - 1) {
            rest.iter_mut().for_each(|x| *x += first + 1);
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// rank(A) <= 2t, decided by the vanishing of every (2t+1)-minor.
pub fn rank_via_minors(field: &FieldSpec, a: &SkewMatrix, t: usize) -> Result<bool> {
    let m = a.size();
    if m > 6 {
        return Err(Error::TooLarge(format!("minor enumeration limited to m <= 6, got {m}")));
    }
    let s = 2 * t + 1;
    if s > m {
        return Ok(true);
    }
    let x = expand(field, a);
    let sets = subsets(m, s);
    for rows in &sets {
        for cols in &sets {
            let x = &x;
            let minor: Vec<FieldElem> = rows.iter().flat_map(|&r| cols.iter().map(move |&c| x[r * m + c])).collect();
            if !determinant(field, &minor, s).is_zero() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub expected: String,
    pub actual: String,
}

impl Check {
    fn new(name: &str, expected: impl ToString, actual: impl ToString) -> Check {
        let (expected, actual) = (expected.to_string(), actual.to_string());
        Check { name: name.to_string(), pass: expected == actual, expected, actual }
    }

    pub fn line(&self) -> String {
        if self.pass {
            format!("PASS {}: {}", self.name, self.actual)
        } else {
            format!("FAIL {}: expected {}, got {}", self.name, self.expected, self.actual)
        }
    }
}

fn fmt_map<K: std::fmt::Display, V: std::fmt::Display>(map: &BTreeMap<K, V>) -> String {
    let inner: Vec<String> = map.iter().map(|(k, v)| format!("{k}: {v}")).collect();
    format!("{{{}}}", inner.join(", "))
}

/// Runs every applicable oracle comparison for the given code.
pub fn verify(params: &CodeParams, tier: Tier, workers: usize, seed: u64) -> Result<Vec<Check>> {
    let field = &params.field;
    let (q, m, t) = (params.q(), params.m, params.t);
    let (mi, ti) = (m as i64, t as i64);
    let budget = tier.budget();
    SkewSpace::new(field, m, budget)?;
    let mut checks = Vec::new();

    let hist = bf_rank_histogram(field, m, budget, workers)?;
    let formula: BTreeMap<usize, BigUint> = (0..=m).map(|r| (r, rank_count(q, r as i64, mi))).collect();
    checks.push(Check::new("rank counts", fmt_map(&formula), fmt_map(&hist)));

    let mut calc = WeightCalculator::new(q);
    let bf_w = bf_w_table(field, m, budget, workers)?;
    let mut rec_w = BTreeMap::new();
    for &(k, r) in bf_w.keys() {
        rec_w.insert((k, r), calc.w_small(k as i64, r as i64, mi)?);
    }
    let fmt_w = |map: &BTreeMap<(usize, usize), String>| fmt_map(&map.iter().map(|((k, r), v)| (format!("w{}({})", 2 * k, 2 * r), v)).collect());
    checks.push(Check::new(
        "weight recursion",
        fmt_w(&rec_w.iter().map(|(k, v)| (*k, v.to_string())).collect()),
        fmt_w(&bf_w.iter().map(|(k, v)| (*k, v.to_string())).collect()),
    ));

    let mut closed = BTreeMap::new();
    let mut split = BTreeMap::new();
    for k in 1..=mi / 2 {
        closed.insert(k, calc.class_weight(k, ti, mi)?);
        split.insert(k, calc.class_weight_by_sum(k, ti, mi)?);
    }
    checks.push(Check::new("class weights (closed form vs split sum)", fmt_map(&closed), fmt_map(&split)));

    let gen = generator_matrix_with_budget(params, budget)?;
    checks.push(Check::new("length", code_length(q, ti, mi)?, gen.cols()));
    checks.push(Check::new("dimension", pair_count(m), gen.rank(field)));

    let report = weight_report_with(&mut calc, ti, mi)?;
    let enumerator = report.weight_enumerator();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let work = SkewSpace::new(field, m, budget)?.len() as u128 * gen.cols() as u128;
    if work <= tier.census_budget() {
        let census = bf_weight_enumerator(params, &gen, budget, workers)?;
        checks.push(Check::new("weight enumerator", fmt_map(&enumerator), fmt_map(&census)));
        let census_min = census.iter().find(|(&w, _)| w > 0).map(|(w, c)| (*w, *c)).unwrap_or((0, 0));
        checks.push(Check::new("minimum distance (census)", &report.min_distance, census_min.0));
        checks.push(Check::new("minimum-weight codewords (census)", &report.min_weight_count, census_min.1));
    } else {
        // sampled codewords per rank class, class sizes from the rank histogram
        let mut expected = BTreeMap::new();
        let mut observed = BTreeMap::new();
        for k in 1..=m / 2 {
            expected.insert(k, format!("{} x{}", report.projective_weights[&(k as u64)], formula[&(2 * k)]));
            let weights: Vec<u64> = (0..3)
                .map(|i| random_of_rank(field, m, k, seed.wrapping_add(i)).map(|f| gen.weight_of(field, &f)))
                .collect::<Result<_>>()?;
            let w = if weights.iter().all(|&w| w == weights[0]) { weights[0].to_string() } else { format!("{weights:?}") };
            observed.insert(k, format!("{w} x{}", hist[&(2 * k)]));
        }
        checks.push(Check::new("class weights (sampled codewords)", fmt_map(&expected), fmt_map(&observed)));
        let min_classes: u64 = report
            .projective_weights
            .iter()
            .filter(|(_, w)| **w == report.min_distance)
            .map(|(&k, _)| hist[&(2 * k as usize)])
            .sum();
        checks.push(Check::new("minimum-weight codewords (class census)", &report.min_weight_count, min_classes));
    }

    // affine weights are (q - 1) times projective weights
    let mut expected = BTreeMap::new();
    let mut observed = BTreeMap::new();
    for k in 1..=m / 2 {
        let f = random_of_rank(field, m, k, seed ^ 0x5eed)?;
        expected.insert(k, (q - 1) * gen.weight_of(field, &f));
        observed.insert(k, affine_weight(params, &f)?);
    }
    checks.push(Check::new("affine/projective weight ratio", fmt_map(&expected), fmt_map(&observed)));

    if m <= 6 {
        let mut disagreements = 0u64;
        for _ in 0..500 {
            let a = random_skew(field, m, &mut rng);
            if rank_via_minors(field, &a, t)? != (a.rank(field) <= 2 * t) {
                disagreements += 1;
            }
        }
        for k in 0..=m / 2 {
            let a = random_of_rank(field, m, k, seed.wrapping_add(k as u64))?;
            if rank_via_minors(field, &a, t)? != (a.rank(field) <= 2 * t) {
                disagreements += 1;
            }
        }
        checks.push(Check::new("minor characterization (disagreements)", 0, disagreements));
    }
    Ok(checks)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf(p: u64) -> FieldSpec {
        FieldSpec::new(p, 1).unwrap()
    }

    #[test]
    fn rank_histograms() {
        let f = gf(3);
        assert_eq!(bf_rank_histogram(&f, 2, FAST_BUDGET, 0).unwrap(), BTreeMap::from([(0, 1), (1, 0), (2, 2)]));
        let h = bf_rank_histogram(&f, 4, FAST_BUDGET, 2).unwrap();
        assert_eq!(h, BTreeMap::from([(0, 1), (1, 0), (2, 260), (3, 0), (4, 468)]));
        let f5 = gf(5);
        let h = bf_rank_histogram(&f5, 4, FAST_BUDGET, 0).unwrap();
        for r in 0..=4 {
            assert_eq!(BigUint::from(h[&r]), rank_count(5, r as i64, 4));
        }
        assert!(matches!(bf_rank_histogram(&f, 6, FAST_BUDGET, 0), Err(Error::BudgetExceeded { .. })));
    }

    #[test]
    fn dense_rank_matches_main_path() {
        let f = FieldSpec::new(3, 2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for m in 1..8 {
            for _ in 0..50 {
                let a = random_skew(&f, m, &mut rng);
                assert_eq!(dense_rank(&f, &expand(&f, &a), m), a.rank(&f));
            }
        }
    }

    #[test]
    fn w_small_counts() {
        let f = gf(3);
        assert_eq!(bf_w_small(&f, 1, 1, 2, FAST_BUDGET).unwrap(), 2);
        assert_eq!(bf_w_small(&f, 1, 1, 4, FAST_BUDGET).unwrap(), 162);
        assert_eq!(bf_w_small(&f, 2, 1, 4, FAST_BUDGET).unwrap(), 180);
        let table = bf_w_table(&f, 4, FAST_BUDGET, 0).unwrap();
        assert_eq!(table[&(1, 1)], 162);
        assert_eq!(table[&(2, 1)], 180);
        assert!(bf_w_small(&f, 3, 1, 4, FAST_BUDGET).is_err());
    }

    #[test]
    fn weight_enumerators() {
        let f = gf(3);
        let p = CodeParams::new(f.clone(), 4, 1).unwrap();
        let g = generator_matrix_with_budget(&p, FAST_BUDGET).unwrap();
        assert_eq!(bf_weight_enumerator(&p, &g, FAST_BUDGET, 0).unwrap(), BTreeMap::from([(0, 1), (81, 260), (90, 468)]));
        let p = CodeParams::new(f.clone(), 4, 2).unwrap();
        let g = generator_matrix_with_budget(&p, FAST_BUDGET).unwrap();
        assert_eq!(bf_weight_enumerator(&p, &g, FAST_BUDGET, 0).unwrap(), BTreeMap::from([(0, 1), (243, 728)]));
        let p = CodeParams::new(f, 2, 1).unwrap();
        let g = generator_matrix_with_budget(&p, FAST_BUDGET).unwrap();
        assert_eq!(bf_weight_enumerator(&p, &g, FAST_BUDGET, 0).unwrap(), BTreeMap::from([(0, 1), (1, 2)]));
    }

    #[test]
    fn minors() {
        let f = gf(3);
        for m in 1..=6 {
            for t in 0..=3 {
                assert!(rank_via_minors(&f, &SkewMatrix::zero(m), t).unwrap());
            }
        }
        assert!(!rank_via_minors(&f, &SkewMatrix::standard_form(4, 2).unwrap(), 1).unwrap());
        for seed in 0..10 {
            let a = random_of_rank(&f, 5, 1, seed).unwrap();
            assert!(rank_via_minors(&f, &a, 1).unwrap());
            assert!(!rank_via_minors(&f, &a, 0).unwrap());
        }
        assert!(matches!(rank_via_minors(&f, &SkewMatrix::zero(7), 1), Err(Error::TooLarge(_))));
    }

    #[test]
    fn minors_agree_with_elimination_exhaustively() {
        let f = gf(3);
        for m in 2..=4 {
            for a in crate::skewmat::enumerate_all(&f, m).unwrap() {
                for t in 0..=2 {
                    assert_eq!(rank_via_minors(&f, &a, t).unwrap(), a.rank(&f) <= 2 * t);
                }
            }
        }
    }

    #[test]
    fn determinant_small() {
        let f = gf(5);
        let e = |i| f.elem(i).unwrap();
        // [[1,2],[3,4]] -> -2 = 3 mod 5
        assert_eq!(determinant(&f, &[e(1), e(2), e(3), e(4)], 2), e(3));
        assert_eq!(subsets(4, 2).len(), 6);
    }

    #[test]
    fn partitioned_runs_are_worker_independent() {
        let f = gf(3);
        let one = bf_w_table(&f, 5, FAST_BUDGET, 1).unwrap();
        let four = bf_w_table(&f, 5, FAST_BUDGET, 4).unwrap();
        assert_eq!(one, four);
        assert_eq!(
            bf_rank_histogram(&f, 5, FAST_BUDGET, 1).unwrap(),
            bf_rank_histogram(&f, 5, FAST_BUDGET, 3).unwrap()
        );
    }

    #[test]
    fn verify_passes() {
        let p = CodeParams::new(gf(3), 4, 1).unwrap();
        let checks = verify(&p, Tier::Fast, 0, 0).unwrap();
        for c in &checks {
            assert!(c.pass, "{}", c.line());
        }
        assert!(checks.len() >= 9);
        let p = CodeParams::new(gf(3), 6, 2).unwrap();
        assert!(matches!(verify(&p, Tier::Fast, 0, 0), Err(Error::BudgetExceeded { .. })));
    }
}
