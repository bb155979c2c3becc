//! The projective code C_A(2t, m) and its affine companion.
//!
//! Columns of the generator matrix are the normalized representatives
//! (first nonzero entry 1) of all nonzero skew matrices of rank <= 2t,
//! sorted lexicographically by entry vector. Rows follow the fixed pair
//! order of [`crate::skewmat`].

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io::Write;
use std::path::Path;
use std::str::FromStr;

use num_bigint::BigUint;
use rayon::prelude::*;

use crate::counting::code_length;
use crate::error::{Error, Result};
use crate::field::{FieldElem, FieldSpec};
use crate::skewmat::{pair_count, trace_pair, SkewMatrix, SkewSpace, DEFAULT_BUDGET};
use crate::weights::weight_report;

/// Number of index sub-ranges used when partitioning an enumeration.
pub(crate) const CHUNKS: u64 = 256;

#[derive(Debug, Clone)]
pub struct CodeParams {
    pub field: FieldSpec,
    pub m: usize,
    pub t: usize,
}

impl CodeParams {
    pub fn new(field: FieldSpec, m: usize, t: usize) -> Result<CodeParams> {
        if m < 2 || t < 1 || 2 * t > m {
            return Err(Error::InvalidParams(format!("need m >= 2 and 1 <= t <= m/2, got m = {m}, t = {t}")));
        }
        Ok(CodeParams { field, m, t })
    }

    pub fn q(&self) -> u64 {
        self.field.order() as u64
    }

    pub fn dimension(&self) -> usize {
        pair_count(self.m)
    }

    pub fn length(&self) -> BigUint {
        code_length(self.q(), self.t as i64, self.m as i64).expect("validated params")
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratorMatrix {
    q: u32,
    m: usize,
    t: usize,
    rows: usize,
    cols: usize,
    /// Column-major: column c is `data[c * rows..(c + 1) * rows]`.
    data: Vec<FieldElem>,
}

/// Partitions `[0, len)` into at most [`CHUNKS`] contiguous ranges.
pub(crate) fn chunk_ranges(len: u64) -> Vec<(u64, u64)> {
    let step = len.div_ceil(CHUNKS).max(1);
    (0..len).step_by(step as usize).map(|s| (s, (s + step).min(len))).collect()
}

/// Builds the generator matrix by enumerating all skew matrices.
pub fn generator_matrix(params: &CodeParams) -> Result<GeneratorMatrix> {
    generator_matrix_with_budget(params, DEFAULT_BUDGET)
}

pub fn generator_matrix_with_budget(params: &CodeParams, budget: u128) -> Result<GeneratorMatrix> {
    let field = &params.field;
    let space = SkewSpace::new(field, params.m, budget)?;
    let n = pair_count(params.m);
    let q = field.order() as u64;
    let max_rank = 2 * params.t;
    let full_space = params.t == params.m / 2;

    // Sort key: entry 0 as the most significant base-q digit.
    let lex_key = |a: &SkewMatrix| a.entries().iter().fold(0u64, |acc, e| acc * q + e.index() as u64);
    let mut keys: Vec<u64> = chunk_ranges(space.len())
        .into_par_iter()
        .map(|(start, end)| {
            let mut out = Vec::new();
            space.visit_range(start, end, |a| {
                let lead = a.entries().iter().find(|e| !e.is_zero());
                if lead == Some(&FieldElem::ONE) && (full_space || a.rank(field) <= max_rank) {
                    out.push(lex_key(a));
                }
            });
            out
        })
        .flatten()
        .collect();
    keys.par_sort_unstable();

    let cols = keys.len();
    assert_eq!(BigUint::from(cols), params.length(), "column count differs from the code length");
    let mut data = vec![FieldElem::ZERO; cols * n];
    data.par_chunks_mut(n.max(1)).zip(keys.par_iter()).for_each(|(col, &key)| {
        let mut key = key;
        for slot in col.iter_mut().rev() {
            *slot = FieldElem::from_index((key % q) as u32);
            key /= q;
        }
    });
    Ok(GeneratorMatrix { q: field.order(), m: params.m, t: params.t, rows: n, cols, data })
}

impl GeneratorMatrix {
    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn field_order(&self) -> u32 {
        self.q
    }

    pub fn column(&self, c: usize) -> &[FieldElem] {
        &self.data[c * self.rows..(c + 1) * self.rows]
    }

    pub fn columns(&self) -> impl Iterator<Item = &[FieldElem]> {
        self.data.chunks(self.rows.max(1)).take(self.cols)
    }

    pub fn column_matrix(&self, c: usize) -> SkewMatrix {
        SkewMatrix::from_entries(self.m, self.column(c).to_vec()).expect("column length is C(m,2)")
    }

    pub fn entry(&self, row: usize, col: usize) -> FieldElem {
        self.data[col * self.rows + row]
    }

    /// Rank of the column set, by incremental echelon reduction.
    pub fn rank(&self, field: &FieldSpec) -> usize {
        let n = self.rows;
        // basis[i] has its pivot at coordinate i, normalized to 1
        let mut basis: Vec<Option<Vec<FieldElem>>> = vec![None; n];
        let mut rank = 0;
        for col in self.columns() {
            let mut v = col.to_vec();
            for i in 0..n {
                if v[i].is_zero() {
                    continue;
                }
                match &basis[i] {
                    Some(b) => {
                        let c = field.neg(v[i]);
                        for (x, &y) in v.iter_mut().zip(b) {
                            *x = field.add(*x, field.mul(c, y));
                        }
                    }
                    None => {
                        let inv = field.inv(v[i]).expect("nonzero");
                        basis[i] = Some(v.iter().map(|&x| field.mul(inv, x)).collect());
                        rank += 1;
                        break;
                    }
                }
            }
            if rank == n {
                break;
            }
        }
        rank
    }

    /// Projective Hamming weight of the codeword of F, counted without
    /// materializing the codeword.
    pub fn weight_of(&self, field: &FieldSpec, f: &SkewMatrix) -> u64 {
        let fe = f.entries();
        self.columns()
            .filter(|col| {
                let dot = fe.iter().zip(col.iter()).fold(FieldElem::ZERO, |acc, (&x, &y)| field.add(acc, field.mul(x, y)));
                !dot.is_zero()
            })
            .count() as u64
    }

    pub fn write<W: Write>(&self, format: Format, out: &mut W) -> Result<()> {
        match format {
            Format::Plain => {
                writeln!(out, "{} {} {} {} {}", self.q, self.m, self.t, self.rows, self.cols)?;
                for r in 0..self.rows {
                    writeln!(out, "{}", self.row_string(r, " "))?;
                }
            }
            Format::Csv => {
                for r in 0..self.rows {
                    writeln!(out, "{}", self.row_string(r, ","))?;
                }
            }
            Format::Json => {
                let mut s = String::new();
                write!(
                    s,
                    "{{\"q\":{},\"m\":{},\"t\":{},\"rows\":{},\"cols\":{},\"matrix\":[",
                    self.q, self.m, self.t, self.rows, self.cols
                )
                .unwrap();
                for r in 0..self.rows {
                    if r > 0 {
                        s.push(',');
                    }
                    write!(s, "[{}]", self.row_string(r, ",")).unwrap();
                }
                s.push_str("]}\n");
                out.write_all(s.as_bytes())?;
            }
        }
        Ok(())
    }

    fn row_string(&self, r: usize, sep: &str) -> String {
        let mut s = String::with_capacity(self.cols * 2);
        for c in 0..self.cols {
            if c > 0 {
                s.push_str(sep);
            }
            write!(s, "{}", self.entry(r, c)).unwrap();
        }
        s
    }

    /// Parses the plain or JSON export. CSV carries no header and cannot be parsed back.
    pub fn parse(text: &str, format: Format) -> Result<GeneratorMatrix> {
        let bad = |msg: &str| Error::Parse(msg.to_string());
        let (header, rows): ([u64; 5], Vec<Vec<u64>>) = match format {
            Format::Plain => {
                let mut lines = text.lines();
                let header: Vec<u64> = lines
                    .next()
                    .ok_or_else(|| bad("empty input"))?
                    .split_whitespace()
                    .map(|x| x.parse().map_err(|_| bad("bad header")))
                    .collect::<Result<_>>()?;
                let header: [u64; 5] = header.try_into().map_err(|_| bad("header needs 5 fields"))?;
                let rows = lines
                    .filter(|l| !l.trim().is_empty())
                    .map(|l| l.split_whitespace().map(|x| x.parse().map_err(|_| bad("bad entry"))).collect())
                    .collect::<Result<_>>()?;
                (header, rows)
            }
            Format::Json => {
                let v: serde_json::Value = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
                let num = |k: &str| v[k].as_u64().ok_or_else(|| bad(&format!("missing {k}")));
                let header = [num("q")?, num("m")?, num("t")?, num("rows")?, num("cols")?];
                let rows = v["matrix"]
                    .as_array()
                    .ok_or_else(|| bad("missing matrix"))?
                    .iter()
                    .map(|row| {
                        row.as_array()
                            .ok_or_else(|| bad("row is not an array"))?
                            .iter()
                            .map(|x| x.as_u64().ok_or_else(|| bad("bad entry")))
                            .collect()
                    })
                    .collect::<Result<_>>()?;
                (header, rows)
            }
            Format::Csv => return Err(bad("csv export has no header to parse")),
        };
        let [q, m, t, nrows, ncols] = header.map(|x| x as usize);
        if nrows != pair_count(m) || rows.len() != nrows || rows.iter().any(|r| r.len() != ncols) {
            return Err(bad("matrix shape does not match header"));
        }
        let mut data = vec![FieldElem::ZERO; nrows * ncols];
        for (r, row) in rows.iter().enumerate() {
            for (c, &x) in row.iter().enumerate() {
                if x >= q as u64 {
                    return Err(bad("entry out of field range"));
                }
                data[c * nrows + r] = FieldElem::from_index(x as u32);
            }
        }
        Ok(GeneratorMatrix { q: q as u32, m, t, rows: nrows, cols: ncols, data })
    }
}

/// Writes the generator matrix to `path`.
pub fn export(gen: &GeneratorMatrix, format: Format, path: &Path) -> Result<()> {
    let mut file = std::io::BufWriter::new(std::fs::File::create(path)?);
    gen.write(format, &mut file)?;
    file.flush()?;
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Plain,
    Json,
    Csv,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Format> {
        match s {
            "plain" => Ok(Format::Plain),
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            other => Err(Error::UnknownFormat(other.to_string())),
        }
    }
}

/// Codeword of F: the values -tr(F·A) over the generator columns
/// (`projective`) or over every matrix of rank <= 2t (the affine code).
pub fn codeword_from_matrix(
    params: &CodeParams,
    gen: &GeneratorMatrix,
    f: &SkewMatrix,
    projective: bool,
) -> Result<Vec<FieldElem>> {
    if f.size() != params.m {
        return Err(Error::DimensionMismatch(f.size(), params.m));
    }
    let field = &params.field;
    // linear form with coefficients 2 f_ij
    let two = field.from_int(2);
    let form: Vec<FieldElem> = f.entries().iter().map(|&x| field.mul(two, x)).collect();
    let eval = |point: &[FieldElem]| {
        form.iter().zip(point).fold(FieldElem::ZERO, |acc, (&x, &y)| field.add(acc, field.mul(x, y)))
    };
    if projective {
        Ok(gen
            .columns()
            .map(|col| {
                let v = eval(col);
                debug_assert_eq!(
                    v,
                    field.neg(trace_pair(field, f, &SkewMatrix::from_entries(params.m, col.to_vec()).unwrap()).unwrap())
                );
                v
            })
            .collect())
    } else {
        let space = SkewSpace::new(field, params.m, DEFAULT_BUDGET)?;
        let mut out = Vec::new();
        space.visit_range(0, space.len(), |a| {
            if a.rank(field) <= 2 * params.t {
                let v = field.neg(trace_pair(field, f, a).expect("same size"));
                debug_assert_eq!(v, eval(a.entries()));
                out.push(v);
            }
        });
        Ok(out)
    }
}

/// Weight of the affine codeword of F, streamed over the enumeration in parallel.
pub fn affine_weight(params: &CodeParams, f: &SkewMatrix) -> Result<u64> {
    if f.size() != params.m {
        return Err(Error::DimensionMismatch(f.size(), params.m));
    }
    let field = &params.field;
    let space = SkewSpace::new(field, params.m, DEFAULT_BUDGET)?;
    Ok(chunk_ranges(space.len())
        .into_par_iter()
        .map(|(start, end)| {
            let mut count = 0u64;
            space.visit_range(start, end, |a| {
                if !trace_pair(field, f, a).expect("same size").is_zero() && a.rank(field) <= 2 * params.t {
                    count += 1;
                }
            });
            count
        })
        .sum())
}

pub fn hamming_weight(word: &[FieldElem]) -> u64 {
    word.iter().filter(|x| !x.is_zero()).count() as u64
}

/// Weight enumerator of the projective code from the class weights.
pub fn weight_enumerator(params: &CodeParams) -> Result<BTreeMap<BigUint, BigUint>> {
    Ok(weight_report(params.q(), params.t as i64, params.m as i64)?.weight_enumerator())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::skewmat::random_of_rank;

    fn params(q: u64, m: usize, t: usize) -> CodeParams {
        CodeParams::new(FieldSpec::new(q, 1).unwrap(), m, t).unwrap()
    }

    fn big(n: u64) -> BigUint {
        BigUint::from(n)
    }

    #[test]
    fn param_validation() {
        let f = FieldSpec::new(3, 1).unwrap();
        assert!(CodeParams::new(f.clone(), 1, 1).is_err());
        assert!(CodeParams::new(f.clone(), 4, 0).is_err());
        assert!(CodeParams::new(f.clone(), 4, 3).is_err());
        assert_eq!(CodeParams::new(f, 5, 2).unwrap().dimension(), 10);
    }

    #[test]
    fn generator_examples() {
        let p = params(3, 4, 1);
        let g = generator_matrix(&p).unwrap();
        assert_eq!((g.rows(), g.cols()), (6, 130));
        assert_eq!(g.rank(&p.field), 6);
        for c in 0..g.cols() {
            let col = g.column_matrix(c);
            assert!(col.rank(&p.field) <= 2);
            assert_eq!(col.entries().iter().find(|e| !e.is_zero()), Some(&FieldElem::ONE));
            if c > 0 {
                assert!(g.column(c - 1) < g.column(c));
            }
        }

        let g = generator_matrix(&params(3, 4, 2)).unwrap();
        assert_eq!((g.rows(), g.cols()), (6, 364));

        let g = generator_matrix(&params(3, 2, 1)).unwrap();
        assert_eq!((g.rows(), g.cols()), (1, 1));
        assert_eq!(g.entry(0, 0), FieldElem::ONE);

        let f = FieldSpec::new(3, 1).unwrap();
        let big_p = CodeParams::new(f, 7, 1).unwrap();
        assert!(matches!(generator_matrix(&big_p), Err(Error::BudgetExceeded { .. })));
    }

    #[test]
    fn codeword_examples() {
        let p = params(3, 4, 1);
        let g = generator_matrix(&p).unwrap();
        let zero = codeword_from_matrix(&p, &g, &SkewMatrix::zero(4), true).unwrap();
        assert_eq!(hamming_weight(&zero), 0);
        let e2 = SkewMatrix::standard_form(4, 1).unwrap();
        let e4 = SkewMatrix::standard_form(4, 2).unwrap();
        assert_eq!(hamming_weight(&codeword_from_matrix(&p, &g, &e2, true).unwrap()), 81);
        assert_eq!(hamming_weight(&codeword_from_matrix(&p, &g, &e4, true).unwrap()), 90);
        assert_eq!(g.weight_of(&p.field, &e4), 90);
        let affine = codeword_from_matrix(&p, &g, &e2, false).unwrap();
        assert_eq!(affine.len(), 261);
        assert_eq!(hamming_weight(&affine), 162);
        assert!(matches!(
            codeword_from_matrix(&p, &g, &SkewMatrix::zero(3), true),
            Err(Error::DimensionMismatch(3, 4))
        ));
    }

    #[test]
    fn affine_weight_is_q_minus_one_times_projective() {
        for (q, m, t) in [(3, 4, 1), (3, 5, 1), (3, 5, 2), (5, 4, 1)] {
            let p = params(q, m, t);
            let g = generator_matrix(&p).unwrap();
            for seed in 0..4 {
                for k in 1..=m / 2 {
                    let f = random_of_rank(&p.field, m, k, seed).unwrap();
                    assert_eq!(affine_weight(&p, &f).unwrap(), (q - 1) * g.weight_of(&p.field, &f));
                }
            }
        }
    }

    #[test]
    fn basis_codewords_are_independent() {
        let p = params(3, 5, 1);
        let g = generator_matrix(&p).unwrap();
        let words: Vec<Vec<FieldElem>> = crate::skewmat::pairs(5)
            .map(|(i, j)| SkewMatrix::elementary(5, i + 1, j + 1).unwrap())
            .map(|e| codeword_from_matrix(&p, &g, &e, true).unwrap())
            .collect();
        let m = crate::linalg::Matrix::from_rows(words).unwrap();
        assert_eq!(m.rank(&p.field), 10);
    }

    #[test]
    fn enumerator_examples() {
        assert_eq!(
            weight_enumerator(&params(3, 4, 1)).unwrap(),
            BTreeMap::from([(big(0), big(1)), (big(81), big(260)), (big(90), big(468))])
        );
        assert_eq!(
            weight_enumerator(&params(3, 4, 2)).unwrap(),
            BTreeMap::from([(big(0), big(1)), (big(243), big(728))])
        );
        let e = weight_enumerator(&params(3, 5, 1)).unwrap();
        assert_eq!(e[&big(729)], big(2420));
        assert_eq!(e.values().sum::<BigUint>(), big(59049));
    }

    #[test]
    fn export_formats() {
        let g = generator_matrix(&params(3, 2, 1)).unwrap();
        let mut out = Vec::new();
        g.write(Format::Plain, &mut out).unwrap();
        assert_eq!(String::from_utf8(out).unwrap(), "3 2 1 1 1\n1\n");
        assert!(matches!("xml".parse::<Format>(), Err(Error::UnknownFormat(_))));

        let g = generator_matrix(&params(3, 4, 1)).unwrap();
        for fmt in [Format::Plain, Format::Json] {
            let mut out = Vec::new();
            g.write(fmt, &mut out).unwrap();
            let text = String::from_utf8(out).unwrap();
            assert_eq!(GeneratorMatrix::parse(&text, fmt).unwrap(), g);
        }
        let mut csv = Vec::new();
        g.write(Format::Csv, &mut csv).unwrap();
        let csv = String::from_utf8(csv).unwrap();
        assert_eq!(csv.lines().count(), 6);
        assert!(csv.lines().all(|l| l.split(',').count() == 130));
        assert!(GeneratorMatrix::parse("3 2 1 1\n1\n", Format::Plain).is_err());
        assert!(GeneratorMatrix::parse("3 2 1 1 1\n5\n", Format::Plain).is_err());
    }

    #[test]
    fn export_to_file() {
        let g = generator_matrix(&params(3, 3, 1)).unwrap();
        let dir = std::env::temp_dir().join(format!("skewcode-export-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("g.txt");
        export(&g, Format::Plain, &path).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        assert_eq!(GeneratorMatrix::parse(&text, Format::Plain).unwrap(), g);
        assert!(export(&g, Format::Plain, &dir.join("missing/g.txt")).is_err());
        std::fs::remove_dir_all(&dir).unwrap();
    }
}
