use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Dense integer matrix, row-major, arbitrary precision.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, BigInt::one());
        }
        m
    }

    pub fn from_rows<T: Into<BigInt> + Clone>(rows: &[Vec<T>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut m = Self::zeros(r, c);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), c, "ragged matrix literal");
            for (j, v) in row.iter().enumerate() {
                m.set(i, j, v.clone().into());
            }
        }
        m
    }

    /// Matrix with the given vectors as columns; `len` is the column length.
    pub fn from_cols(len: usize, cols: &[Vec<BigInt>]) -> Self {
        let mut m = Self::zeros(len, cols.len());
        for (j, col) in cols.iter().enumerate() {
            assert_eq!(col.len(), len);
            for (i, v) in col.iter().enumerate() {
                m.set(i, j, v.clone());
            }
        }
        m
    }

    pub fn diagonal(entries: &[BigInt]) -> Self {
        let mut m = Self::zeros(entries.len(), entries.len());
        for (i, e) in entries.iter().enumerate() {
            m.set(i, i, e.clone());
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.data[i * self.cols + j] = v;
    }

    pub fn entries(&self) -> &[BigInt] {
        &self.data
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn row(&self, i: usize) -> Vec<BigInt> {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn col(&self, j: usize) -> Vec<BigInt> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn columns(&self) -> Vec<Vec<BigInt>> {
        (0..self.cols).map(|j| self.col(j)).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "shape mismatch in product");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        out.data[i * other.cols + j] += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn apply(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(self.cols, v.len());
        (0..self.rows).map(|i| (0..self.cols).map(|j| self.get(i, j) * &v[j]).sum()).collect()
    }

    pub fn add(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.shape(), other.shape());
        IntMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn scale(&self, c: &BigInt) -> IntMatrix {
        IntMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|a| a * c).collect() }
    }

    /// Horizontal concatenation `[self | other]`.
    pub fn hcat(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.rows, other.rows);
        let mut m = Self::zeros(self.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m.set(i, j, self.get(i, j).clone());
            }
            for j in 0..other.cols {
                m.set(i, self.cols + j, other.get(i, j).clone());
            }
        }
        m
    }

    /// Block diagonal sum.
    pub fn block_diag(&self, other: &IntMatrix) -> IntMatrix {
        let mut m = Self::zeros(self.rows + other.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m.set(i, j, self.get(i, j).clone());
            }
        }
        for i in 0..other.rows {
            for j in 0..other.cols {
                m.set(self.rows + i, self.cols + j, other.get(i, j).clone());
            }
        }
        m
    }

    /// Reduce row `i` modulo `orders[i]` (order 0 means no reduction), into `[0, n)`.
    pub fn reduce_rows(&self, orders: &[u64]) -> IntMatrix {
        assert_eq!(orders.len(), self.rows);
        let mut m = self.clone();
        for (i, &n) in orders.iter().enumerate() {
            if n == 0 {
                continue;
            }
            let n = BigInt::from(n);
            for j in 0..self.cols {
                let v = m.get(i, j).clone();
                m.set(i, j, modulo(&v, &n));
            }
        }
        m
    }

    /// Exact determinant by fraction-free (Bareiss) elimination.
    pub fn determinant(&self) -> BigInt {
        assert_eq!(self.rows, self.cols, "determinant of non-square matrix");
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut a = self.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if a.get(k, k).is_zero() {
                match (k + 1..n).find(|&i| !a.get(i, k).is_zero()) {
                    Some(p) => {
                        a.swap_rows(k, p);
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (a.get(i, j) * a.get(k, k) - a.get(i, k) * a.get(k, j)) / &prev;
                    a.set(i, j, v);
                }
            }
            prev = a.get(k, k).clone();
        }
        sign * a.get(n - 1, n - 1)
    }

    /// Rank over the rationals, by fraction-free elimination.
    pub fn rank(&self) -> usize {
        let mut a = self.clone();
        let mut rank = 0;
        let mut prev = BigInt::one();
        for col in 0..a.cols {
            if rank == a.rows {
                break;
            }
            let Some(p) = (rank..a.rows).find(|&i| !a.get(i, col).is_zero()) else {
                continue;
            };
            a.swap_rows(rank, p);
            for i in rank + 1..a.rows {
                for j in col + 1..a.cols {
                    let v = (a.get(i, j) * a.get(rank, col) - a.get(i, col) * a.get(rank, j)) / &prev;
                    a.set(i, j, v);
                }
                a.set(i, col, BigInt::zero());
            }
            prev = a.get(rank, col).clone();
            rank += 1;
        }
        rank
    }

    /// Entries as `i64`; panics on overflow rather than wrapping.
    pub fn to_i64_rows(&self) -> Vec<Vec<i64>> {
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.get(i, j).to_i64().expect("matrix entry exceeds i64")).collect())
            .collect()
    }

    pub(crate) fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub(crate) fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// row[dst] += q * row[src]
    pub(crate) fn add_row_multiple(&mut self, dst: usize, src: usize, q: &BigInt) {
        if q.is_zero() {
            return;
        }
        for j in 0..self.cols {
            let v = self.get(src, j) * q;
            if !v.is_zero() {
                self.data[dst * self.cols + j] += v;
            }
        }
    }

    /// col[dst] += q * col[src]
    pub(crate) fn add_col_multiple(&mut self, dst: usize, src: usize, q: &BigInt) {
        if q.is_zero() {
            return;
        }
        for i in 0..self.rows {
            let v = self.get(i, src) * q;
            if !v.is_zero() {
                self.data[i * self.cols + dst] += v;
            }
        }
    }

    pub(crate) fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            let v = -self.get(i, j);
            self.set(i, j, v);
        }
    }

    pub(crate) fn negate_col(&mut self, j: usize) {
        for i in 0..self.rows {
            let v = -self.get(i, j);
            self.set(i, j, v);
        }
    }

    pub fn max_abs_entry(&self) -> BigInt {
        self.data.iter().map(|v| v.abs()).max().unwrap_or_default()
    }
}

/// Non-negative residue of `v` modulo `n > 0`.
pub fn modulo(v: &BigInt, n: &BigInt) -> BigInt {
    let r = v % n;
    if r.is_negative() {
        r + n
    } else {
        r
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            let row: Vec<String> = self.row(i).iter().map(ToString::to_string).collect();
            write!(f, "{}", row.join(" "))?;
        }
        write!(f, "]({}x{})", self.rows, self.cols)
    }
}
