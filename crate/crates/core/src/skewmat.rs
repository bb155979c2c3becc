//! Skew-symmetric matrices stored by their strictly upper entries.
//!
//! The entry order is fixed: (1,2), (1,3), ..., (1,m), (2,3), ..., (m-1,m).
//! It doubles as the coordinate order of projective points and as the row
//! order of generator matrices.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::field::{FieldElem, FieldSpec};
use crate::linalg::Matrix;

/// Default cap on the number of matrices an enumeration may visit.
pub const DEFAULT_BUDGET: u128 = 1 << 31;

/// Number of strictly upper entries of an m x m matrix.
pub fn pair_count(m: usize) -> usize {
    m * m.saturating_sub(1) / 2
}

/// Position of the 0-based pair (i, j), i < j, in the entry vector.
#[inline]
pub fn pair_index(m: usize, i: usize, j: usize) -> usize {
    debug_assert!(i < j && j < m);
    i * (2 * m - i - 1) / 2 + (j - i - 1)
}

/// The 0-based pairs in entry order.
pub fn pairs(m: usize) -> impl Iterator<Item = (usize, usize)> {
    (0..m).flat_map(move |i| (i + 1..m).map(move |j| (i, j)))
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SkewMatrix {
    m: usize,
    entries: Vec<FieldElem>,
}

impl SkewMatrix {
    pub fn zero(m: usize) -> SkewMatrix {
        SkewMatrix { m, entries: vec![FieldElem::ZERO; pair_count(m)] }
    }

    pub fn from_entries(m: usize, entries: Vec<FieldElem>) -> Result<SkewMatrix> {
        if entries.len() != pair_count(m) {
            return Err(Error::DimensionMismatch(entries.len(), pair_count(m)));
        }
        Ok(SkewMatrix { m, entries })
    }

    /// E(k, l) with 1-based indices: a_{kl} = 1, a_{lk} = -1, zero elsewhere.
    pub fn elementary(m: usize, k: usize, l: usize) -> Result<SkewMatrix> {
        if k < 1 || k >= l || l > m {
            return Err(Error::IndexOutOfRange { m, row: k, col: l });
        }
        let mut out = SkewMatrix::zero(m);
        out.entries[pair_index(m, k - 1, l - 1)] = FieldElem::ONE;
        Ok(out)
    }

    /// E_{2k}: k copies of [[0, 1], [-1, 0]] down the diagonal, zero padded.
    pub fn standard_form(m: usize, k: usize) -> Result<SkewMatrix> {
        if 2 * k > m {
            return Err(Error::RankTooLarge { m, k });
        }
        let mut out = SkewMatrix::zero(m);
        for b in 0..k {
            out.entries[pair_index(m, 2 * b, 2 * b + 1)] = FieldElem::ONE;
        }
        Ok(out)
    }

    /// Reads the skew part of a dense matrix. The caller guarantees skew-symmetry.
    pub fn from_dense(dense: &Matrix) -> Result<SkewMatrix> {
        if dense.rows() != dense.cols() {
            return Err(Error::DimensionMismatch(dense.rows(), dense.cols()));
        }
        let m = dense.rows();
        Ok(SkewMatrix { m, entries: pairs(m).map(|(i, j)| dense.get(i, j)).collect() })
    }

    pub fn size(&self) -> usize {
        self.m
    }

    pub fn entries(&self) -> &[FieldElem] {
        &self.entries
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|e| e.is_zero())
    }

    /// Full-matrix entry (i, j), 0-based.
    pub fn get(&self, field: &FieldSpec, i: usize, j: usize) -> FieldElem {
        match i.cmp(&j) {
            std::cmp::Ordering::Less => self.entries[pair_index(self.m, i, j)],
            std::cmp::Ordering::Greater => field.neg(self.entries[pair_index(self.m, j, i)]),
            std::cmp::Ordering::Equal => FieldElem::ZERO,
        }
    }

    pub fn to_dense(&self, field: &FieldSpec) -> Matrix {
        let mut out = Matrix::zeros(self.m, self.m);
        for (idx, (i, j)) in pairs(self.m).enumerate() {
            let v = self.entries[idx];
            out.set(i, j, v);
            out.set(j, i, field.neg(v));
        }
        out
    }

    pub fn scale(&self, field: &FieldSpec, c: FieldElem) -> SkewMatrix {
        SkewMatrix { m: self.m, entries: self.entries.iter().map(|&e| field.mul(c, e)).collect() }
    }

    /// Projective representative: first nonzero entry scaled to 1.
    /// The zero matrix is returned unchanged.
    pub fn normalized(&self, field: &FieldSpec) -> SkewMatrix {
        match self.entries.iter().find(|e| !e.is_zero()) {
            Some(&lead) => self.scale(field, field.inv(lead).expect("nonzero")),
            None => self.clone(),
        }
    }

    /// Rank by Gaussian elimination on the expanded matrix. Always even.
    pub fn rank(&self, field: &FieldSpec) -> usize {
        let m = self.m;
        let mut stack = [FieldElem::ZERO; 256];
        let mut heap;
        let buf: &mut [FieldElem] = if m * m <= stack.len() {
            &mut stack[..m * m]
        } else {
            heap = vec![FieldElem::ZERO; m * m];
            &mut heap
        };
        for (idx, (i, j)) in pairs(m).enumerate() {
            let v = self.entries[idx];
            buf[i * m + j] = v;
            buf[j * m + i] = field.neg(v);
        }
        let rank = eliminate(field, buf, m);
        debug_assert!(rank.is_multiple_of(2), "skew-symmetric rank must be even");
        rank
    }

    /// Congruence by `lt`: returns Lᵀ·self·L for a square matrix L.
    pub fn congruent(&self, field: &FieldSpec, l: &Matrix) -> Result<SkewMatrix> {
        if l.rows() != self.m || l.cols() != self.m {
            return Err(Error::DimensionMismatch(l.rows(), self.m));
        }
        let dense = l.transpose().mul(field, &self.to_dense(field))?.mul(field, l)?;
        SkewMatrix::from_dense(&dense)
    }

    /// Entry vector as space-separated indices.
    pub fn to_entry_string(&self) -> String {
        self.to_string()
    }

    /// Full m x m array, one row per line.
    pub fn to_dense_string(&self, field: &FieldSpec) -> String {
        let dense = self.to_dense(field);
        (0..self.m)
            .map(|i| dense.row(i).iter().map(|e| e.to_string()).collect::<Vec<_>>().join(" "))
            .collect::<Vec<_>>()
            .join("\n")
    }
}

impl fmt::Display for SkewMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for e in &self.entries {
            if !first {
                f.write_str(" ")?;
            }
            write!(f, "{e}")?;
            first = false;
        }
        Ok(())
    }
}

/// In-place row reduction of an n x n buffer; returns the rank.
fn eliminate(field: &FieldSpec, a: &mut [FieldElem], n: usize) -> usize {
    let mut rank = 0;
    for col in 0..n {
        let Some(pivot) = (rank..n).find(|&r| !a[r * n + col].is_zero()) else {
            continue;
        };
        if pivot != rank {
            for j in 0..n {
                a.swap(pivot * n + j, rank * n + j);
            }
        }
        let inv = field.inv(a[rank * n + col]).expect("pivot is nonzero");
        for r in rank + 1..n {
            let factor = a[r * n + col];
            if factor.is_zero() {
                continue;
            }
            let c = field.neg(field.mul(factor, inv));
            for j in col..n {
                a[r * n + j] = field.add(a[r * n + j], field.mul(c, a[rank * n + j]));
            }
        }
        rank += 1;
    }
    rank
}

/// tr(F·A) = -2 Σ_{i<j} f_ij a_ij.
pub fn trace_pair(field: &FieldSpec, f: &SkewMatrix, a: &SkewMatrix) -> Result<FieldElem> {
    if f.m != a.m {
        return Err(Error::DimensionMismatch(f.m, a.m));
    }
    let dot = f
        .entries
        .iter()
        .zip(&a.entries)
        .fold(FieldElem::ZERO, |acc, (&x, &y)| field.add(acc, field.mul(x, y)));
    let tr = field.mul(field.from_int(-2), dot);
    debug_assert!(
        f.m > 4 || tr == f.to_dense(field).mul(field, &a.to_dense(field)).unwrap().trace(field),
        "inner-product trace disagrees with full product"
    );
    Ok(tr)
}

/// Finds invertible L and k with L·F·Lᵀ = E_{2k}.
///
/// Pivots on the first nonzero entry (in entry order) of the trailing block,
/// moves it to the next (2b, 2b+1) slot, normalizes it to 1 and clears the
/// two rows and columns against it.
pub fn congruence_normal_form(field: &FieldSpec, f: &SkewMatrix) -> (Matrix, usize) {
    let m = f.m;
    let mut s = f.to_dense(field);
    let mut l = Matrix::identity(m);
    let mut k = 0;
    loop {
        let p = 2 * k;
        let pivot = (p..m).flat_map(|i| (i + 1..m).map(move |j| (i, j))).find(|&(i, j)| !s.get(i, j).is_zero());
        let Some((i, j)) = pivot else { break };

        // move pivot to (p, p+1); j > i >= p so j survives the first swap
        for (from, to) in [(i, p), (j, p + 1)] {
            s.swap_rows(from, to);
            s.swap_cols(from, to);
            l.swap_rows(from, to);
        }
        let inv = field.inv(s.get(p, p + 1)).expect("pivot is nonzero");
        s.scale_row(field, p, inv);
        s.scale_col(field, p, inv);
        l.scale_row(field, p, inv);

        for r in p + 2..m {
            let c = field.neg(s.get(p, r));
            let d = s.get(p + 1, r);
            for (src, coef) in [(p + 1, c), (p, d)] {
                s.add_row_multiple(field, r, src, coef);
                s.add_col_multiple(field, r, src, coef);
                l.add_row_multiple(field, r, src, coef);
            }
        }
        k += 1;
    }
    debug_assert_eq!(SkewMatrix::from_dense(&s).unwrap(), SkewMatrix::standard_form(m, k).unwrap());
    (l, k)
}

/// Lᵀ·E_{2k}·L for a uniformly drawn invertible L. Deterministic in `seed`.
pub fn random_of_rank(field: &FieldSpec, m: usize, k: usize, seed: u64) -> Result<SkewMatrix> {
    let e = SkewMatrix::standard_form(m, k)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let l = random_invertible(field, m, &mut rng);
    e.congruent(field, &l)
}

pub fn random_invertible<R: Rng>(field: &FieldSpec, n: usize, rng: &mut R) -> Matrix {
    loop {
        let mut l = Matrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                l.set(i, j, field.elem(rng.gen_range(0..field.order())).unwrap());
            }
        }
        if l.is_invertible(field) {
            return l;
        }
    }
}

pub fn random_skew<R: Rng>(field: &FieldSpec, m: usize, rng: &mut R) -> SkewMatrix {
    SkewMatrix {
        m,
        entries: (0..pair_count(m)).map(|_| field.elem(rng.gen_range(0..field.order())).unwrap()).collect(),
    }
}

/// The space of all q^{C(m,2)} skew-symmetric m x m matrices, addressed by
/// integer index. Entry 0 is the least significant base-q digit.
#[derive(Debug, Clone)]
pub struct SkewSpace<'a> {
    field: &'a FieldSpec,
    m: usize,
    len: u64,
}

impl<'a> SkewSpace<'a> {
    pub fn new(field: &'a FieldSpec, m: usize, budget: u128) -> Result<SkewSpace<'a>> {
        let size = (field.order() as u128).checked_pow(pair_count(m) as u32).unwrap_or(u128::MAX);
        if size > budget || size > u64::MAX as u128 {
            return Err(Error::BudgetExceeded { size, budget });
        }
        Ok(SkewSpace { field, m, len: size as u64 })
    }

    pub fn field(&self) -> &'a FieldSpec {
        self.field
    }

    pub fn size(&self) -> usize {
        self.m
    }

    pub fn len(&self) -> u64 {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn matrix_at(&self, mut index: u64) -> SkewMatrix {
        let q = self.field.order() as u64;
        let entries = (0..pair_count(self.m))
            .map(|_| {
                let d = index % q;
                index /= q;
                FieldElem::from_index(d as u32)
            })
            .collect();
        SkewMatrix { m: self.m, entries }
    }

    pub fn index_of(&self, a: &SkewMatrix) -> u64 {
        let q = self.field.order() as u64;
        a.entries.iter().rev().fold(0, |acc, e| acc * q + e.index() as u64)
    }

    pub fn iter(&self) -> SkewIter<'a> {
        self.range(0, self.len)
    }

    /// Matrices with index in `[start, end)`.
    pub fn range(&self, start: u64, end: u64) -> SkewIter<'a> {
        let end = end.min(self.len);
        let start = start.min(end);
        SkewIter { field: self.field, current: self.matrix_at(start), pos: start, end }
    }

    /// Calls `visit` on every matrix in `[start, end)` without allocating per item.
    pub fn visit_range<F: FnMut(&SkewMatrix)>(&self, start: u64, end: u64, mut visit: F) {
        let end = end.min(self.len);
        if start >= end {
            return;
        }
        let mut cur = self.matrix_at(start);
        let q = self.field.order();
        for _ in start..end {
            visit(&cur);
            increment(&mut cur.entries, q);
        }
    }
}

fn increment(entries: &mut [FieldElem], q: u32) {
    for e in entries.iter_mut() {
        let next = e.index() + 1;
        if next < q {
            *e = FieldElem::from_index(next);
            return;
        }
        *e = FieldElem::ZERO;
    }
}

pub struct SkewIter<'a> {
    field: &'a FieldSpec,
    current: SkewMatrix,
    pos: u64,
    end: u64,
}

impl Iterator for SkewIter<'_> {
    type Item = SkewMatrix;

    fn next(&mut self) -> Option<SkewMatrix> {
        if self.pos >= self.end {
            return None;
        }
        let out = self.current.clone();
        increment(&mut self.current.entries, self.field.order());
        self.pos += 1;
        Some(out)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let n = (self.end - self.pos) as usize;
        (n, Some(n))
    }
}

/// All skew m x m matrices under the default budget.
pub fn enumerate_all(field: &FieldSpec, m: usize) -> Result<SkewIter<'_>> {
    Ok(SkewSpace::new(field, m, DEFAULT_BUDGET)?.iter())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf(p: u64) -> FieldSpec {
        FieldSpec::new(p, 1).unwrap()
    }

    fn el(f: &FieldSpec, v: &[u32]) -> Vec<FieldElem> {
        v.iter().map(|&i| f.elem(i).unwrap()).collect()
    }

    #[test]
    fn pair_order() {
        let ps: Vec<_> = pairs(4).collect();
        assert_eq!(ps, vec![(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]);
        for (idx, (i, j)) in ps.into_iter().enumerate() {
            assert_eq!(pair_index(4, i, j), idx);
        }
    }

    #[test]
    fn elementary_matrices() {
        let f = gf(3);
        let e = SkewMatrix::elementary(4, 1, 2).unwrap();
        assert_eq!(e.entries(), el(&f, &[1, 0, 0, 0, 0, 0]).as_slice());
        assert_eq!(SkewMatrix::elementary(5, 2, 4).unwrap().rank(&f), 2);
        assert!(matches!(SkewMatrix::elementary(3, 2, 2), Err(Error::IndexOutOfRange { .. })));
        assert!(SkewMatrix::elementary(3, 0, 2).is_err());
        assert!(SkewMatrix::elementary(3, 2, 4).is_err());
    }

    #[test]
    fn standard_forms() {
        let f = gf(3);
        let e4 = SkewMatrix::standard_form(4, 2).unwrap();
        assert_eq!(e4.entries(), el(&f, &[1, 0, 0, 0, 0, 1]).as_slice());
        assert_eq!(e4.rank(&f), 4);
        assert!(SkewMatrix::standard_form(5, 0).unwrap().is_zero());
        let e = SkewMatrix::standard_form(3, 1).unwrap();
        assert_eq!(e.entries(), el(&f, &[1, 0, 0]).as_slice());
        assert_eq!(e.rank(&f), 2);
        assert!(matches!(SkewMatrix::standard_form(3, 2), Err(Error::RankTooLarge { .. })));
    }

    #[test]
    fn rank_examples() {
        let f = gf(3);
        for m in 0..6 {
            assert_eq!(SkewMatrix::zero(m).rank(&f), 0);
        }
        assert_eq!(SkewMatrix::standard_form(6, 3).unwrap().rank(&f), 6);
        let a = SkewMatrix::from_entries(4, el(&f, &[1, 1, 0, 1, 0, 0])).unwrap();
        assert_eq!(a.rank(&f), 2);
        // agrees with the generic dense rank
        assert_eq!(a.to_dense(&f).rank(&f), 2);
    }

    #[test]
    fn trace_pair_examples() {
        let f = gf(3);
        let e2 = SkewMatrix::standard_form(2, 1).unwrap();
        assert_eq!(trace_pair(&f, &e2, &e2).unwrap(), FieldElem::ONE);
        let a = SkewMatrix::elementary(4, 1, 2).unwrap();
        let b = SkewMatrix::elementary(4, 3, 4).unwrap();
        assert_eq!(trace_pair(&f, &a, &b).unwrap(), FieldElem::ZERO);
        assert_eq!(trace_pair(&f, &a, &a).unwrap(), FieldElem::ONE);
        assert!(matches!(trace_pair(&f, &a, &e2), Err(Error::DimensionMismatch(4, 2))));
    }

    #[test]
    fn trace_pair_matches_full_product_exhaustively() {
        let f = gf(3);
        for m in 2..=4 {
            let all: Vec<_> = enumerate_all(&f, m).unwrap().collect();
            let step = if m == 4 { 7 } else { 1 };
            for a in all.iter().step_by(step) {
                for b in all.iter().step_by(step) {
                    let full = a.to_dense(&f).mul(&f, &b.to_dense(&f)).unwrap().trace(&f);
                    assert_eq!(trace_pair(&f, a, b).unwrap(), full);
                }
            }
        }
    }

    #[test]
    fn normal_form_examples() {
        let f = gf(3);
        for (m, k) in [(4, 1), (4, 2), (5, 2), (3, 0)] {
            let e = SkewMatrix::standard_form(m, k).unwrap();
            let (l, kk) = congruence_normal_form(&f, &e);
            assert_eq!(kk, k);
            let back = l.mul(&f, &e.to_dense(&f)).unwrap().mul(&f, &l.transpose()).unwrap();
            assert_eq!(SkewMatrix::from_dense(&back).unwrap(), e);
        }
        let two_e = SkewMatrix::elementary(2, 1, 2).unwrap().scale(&f, f.from_int(2));
        let (l, k) = congruence_normal_form(&f, &two_e);
        assert_eq!(k, 1);
        let back = l.mul(&f, &two_e.to_dense(&f)).unwrap().mul(&f, &l.transpose()).unwrap();
        assert_eq!(SkewMatrix::from_dense(&back).unwrap(), SkewMatrix::standard_form(2, 1).unwrap());

        let r4 = random_of_rank(&f, 5, 2, 11).unwrap();
        let (_, k) = congruence_normal_form(&f, &r4);
        assert_eq!(2 * k, r4.rank(&f));
        assert_eq!(k, 2);
    }

    #[test]
    fn enumeration() {
        let f = gf(3);
        let all: Vec<_> = enumerate_all(&f, 2).unwrap().collect();
        assert_eq!(all.iter().map(|a| a.entries()[0].index()).collect::<Vec<_>>(), vec![0, 1, 2]);
        assert_eq!(enumerate_all(&f, 4).unwrap().count(), 729);
        assert!(matches!(enumerate_all(&f, 7), Err(Error::BudgetExceeded { .. })));

        let space = SkewSpace::new(&f, 3, DEFAULT_BUDGET).unwrap();
        let whole: Vec<_> = space.iter().collect();
        let mut parts: Vec<_> = space.range(0, 10).collect();
        parts.extend(space.range(10, 27));
        assert_eq!(whole, parts);
        for (i, a) in whole.iter().enumerate() {
            assert_eq!(space.index_of(a), i as u64);
            assert_eq!(&space.matrix_at(i as u64), a);
        }
        let mut visited = Vec::new();
        space.visit_range(5, 12, |a| visited.push(a.clone()));
        assert_eq!(visited, whole[5..12]);
    }

    #[test]
    fn rank_histogram_gf3_m4() {
        let f = gf(3);
        let mut hist = [0u32; 5];
        for a in enumerate_all(&f, 4).unwrap() {
            hist[a.rank(&f)] += 1;
        }
        assert_eq!(hist, [1, 0, 260, 0, 468]);
    }

    #[test]
    fn random_of_rank_examples() {
        let f3 = gf(3);
        assert!(random_of_rank(&f3, 4, 0, 99).unwrap().is_zero());
        assert_eq!(random_of_rank(&f3, 4, 2, 7).unwrap().rank(&f3), 4);
        assert_eq!(random_of_rank(&f3, 4, 1, 7).unwrap().rank(&f3), 2);
        let f5 = gf(5);
        assert_eq!(random_of_rank(&f5, 5, 1, 1).unwrap().rank(&f5), 2);
        assert_eq!(random_of_rank(&f5, 5, 2, 1).unwrap().rank(&f5), 4);
        assert_eq!(random_of_rank(&f5, 5, 2, 1).unwrap(), random_of_rank(&f5, 5, 2, 1).unwrap());
        assert!(matches!(random_of_rank(&f5, 5, 3, 1), Err(Error::RankTooLarge { .. })));
    }

    #[test]
    fn display_formats() {
        let f = gf(3);
        let a = SkewMatrix::elementary(3, 1, 3).unwrap();
        assert_eq!(a.to_entry_string(), "0 1 0");
        assert_eq!(a.to_dense_string(&f), "0 0 1\n0 0 0\n2 0 0");
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(64))]

            #[test]
            fn normal_form_reconstructs(seed in any::<u64>(), p in prop::sample::select(vec![3u64, 5, 7]), m in 2usize..7) {
                let f = gf(p);
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let a = random_skew(&f, m, &mut rng);
                let (l, k) = congruence_normal_form(&f, &a);
                prop_assert!(l.is_invertible(&f));
                prop_assert_eq!(2 * k, a.rank(&f));
                let back = l.mul(&f, &a.to_dense(&f)).unwrap().mul(&f, &l.transpose()).unwrap();
                prop_assert_eq!(SkewMatrix::from_dense(&back).unwrap(), SkewMatrix::standard_form(m, k).unwrap());
            }

            #[test]
            fn rank_is_even(seed in any::<u64>(), m in 1usize..9) {
                let f = FieldSpec::new(3, 2).unwrap();
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let a = random_skew(&f, m, &mut rng);
                let r = a.rank(&f);
                prop_assert_eq!(r % 2, 0);
                prop_assert_eq!(r, a.to_dense(&f).rank(&f));
            }

            #[test]
            fn trace_pair_matches_full_product(seed in any::<u64>(), m in 2usize..8) {
                let f = gf(5);
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let (a, b) = (random_skew(&f, m, &mut rng), random_skew(&f, m, &mut rng));
                let full = a.to_dense(&f).mul(&f, &b.to_dense(&f)).unwrap().trace(&f);
                prop_assert_eq!(trace_pair(&f, &a, &b).unwrap(), full);
            }
        }
    }
}
