//! Dense matrices over a [`FieldSpec`].

use crate::error::{Error, Result};
use crate::field::{FieldElem, FieldSpec};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<FieldElem>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Matrix {
        Matrix { rows, cols, data: vec![FieldElem::ZERO; rows * cols] }
    }

    pub fn identity(n: usize) -> Matrix {
        let mut out = Matrix::zeros(n, n);
        for i in 0..n {
            out.set(i, i, FieldElem::ONE);
        }
        out
    }

    pub fn from_rows(rows: Vec<Vec<FieldElem>>) -> Result<Matrix> {
        let cols = rows.first().map_or(0, Vec::len);
        if let Some(bad) = rows.iter().find(|r| r.len() != cols) {
            return Err(Error::DimensionMismatch(bad.len(), cols));
        }
        let n = rows.len();
        Ok(Matrix { rows: n, cols, data: rows.into_iter().flatten().collect() })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> FieldElem {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: FieldElem) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[FieldElem] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn transpose(&self) -> Matrix {
        let mut out = Matrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.get(i, j));
            }
        }
        out
    }

    pub fn mul(&self, field: &FieldSpec, rhs: &Matrix) -> Result<Matrix> {
        if self.cols != rhs.rows {
            return Err(Error::DimensionMismatch(self.cols, rhs.rows));
        }
        let mut out = Matrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for l in 0..self.cols {
                let a = self.get(i, l);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let v = field.add(out.get(i, j), field.mul(a, rhs.get(l, j)));
                    out.set(i, j, v);
                }
            }
        }
        Ok(out)
    }

    pub fn trace(&self, field: &FieldSpec) -> FieldElem {
        (0..self.rows.min(self.cols)).fold(FieldElem::ZERO, |acc, i| field.add(acc, self.get(i, i)))
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    pub fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for i in 0..self.rows {
                self.data.swap(i * self.cols + a, i * self.cols + b);
            }
        }
    }

    pub fn scale_row(&mut self, field: &FieldSpec, i: usize, c: FieldElem) {
        for j in 0..self.cols {
            let v = field.mul(c, self.get(i, j));
            self.set(i, j, v);
        }
    }

    pub fn scale_col(&mut self, field: &FieldSpec, j: usize, c: FieldElem) {
        for i in 0..self.rows {
            let v = field.mul(c, self.get(i, j));
            self.set(i, j, v);
        }
    }

    /// row[dst] += c * row[src]
    pub fn add_row_multiple(&mut self, field: &FieldSpec, dst: usize, src: usize, c: FieldElem) {
        if c.is_zero() {
            return;
        }
        for j in 0..self.cols {
            let v = field.add(self.get(dst, j), field.mul(c, self.get(src, j)));
            self.set(dst, j, v);
        }
    }

    /// col[dst] += c * col[src]
    pub fn add_col_multiple(&mut self, field: &FieldSpec, dst: usize, src: usize, c: FieldElem) {
        if c.is_zero() {
            return;
        }
        for i in 0..self.rows {
            let v = field.add(self.get(i, dst), field.mul(c, self.get(i, src)));
            self.set(i, dst, v);
        }
    }

    /// Rank by row reduction.
    pub fn rank(&self, field: &FieldSpec) -> usize {
        let mut a = self.clone();
        let mut rank = 0;
        for col in 0..a.cols {
            let Some(pivot) = (rank..a.rows).find(|&r| !a.get(r, col).is_zero()) else {
                continue;
            };
            a.swap_rows(rank, pivot);
            let inv = field.inv(a.get(rank, col)).expect("pivot is nonzero");
            a.scale_row(field, rank, inv);
            for r in rank + 1..a.rows {
                let c = field.neg(a.get(r, col));
                a.add_row_multiple(field, r, rank, c);
            }
            rank += 1;
            if rank == a.rows {
                break;
            }
        }
        rank
    }

    pub fn is_invertible(&self, field: &FieldSpec) -> bool {
        self.rows == self.cols && self.rank(field) == self.rows
    }
}
