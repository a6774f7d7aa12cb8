use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use super::IntMatrix;

/// `left * m * right == diag`, with `diag` in Smith normal form:
/// non-negative diagonal entries, each dividing the next, zeros last.
/// The inverses of both transforms are tracked alongside.
#[derive(Clone, Debug)]
pub struct SmithForm {
    pub diag: IntMatrix,
    pub left: IntMatrix,
    pub left_inv: IntMatrix,
    pub right: IntMatrix,
    pub right_inv: IntMatrix,
}

impl SmithForm {
    /// Nonzero invariant factors, in divisibility order.
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        let n = self.diag.rows().min(self.diag.cols());
        (0..n).map(|i| self.diag.get(i, i).clone()).take_while(|d| !d.is_zero()).collect()
    }

    pub fn rank(&self) -> usize {
        self.invariant_factors().len()
    }
}

struct Work {
    a: IntMatrix,
    left: IntMatrix,
    left_inv: IntMatrix,
    right: IntMatrix,
    right_inv: IntMatrix,
}

impl Work {
    fn swap_rows(&mut self, i: usize, j: usize) {
        self.a.swap_rows(i, j);
        self.left.swap_rows(i, j);
        self.left_inv.swap_cols(i, j);
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        self.a.swap_cols(i, j);
        self.right.swap_cols(i, j);
        self.right_inv.swap_rows(i, j);
    }

    /// row[dst] += q row[src]
    fn row_op(&mut self, dst: usize, src: usize, q: &BigInt) {
        self.a.add_row_multiple(dst, src, q);
        self.left.add_row_multiple(dst, src, q);
        self.left_inv.add_col_multiple(src, dst, &-q);
    }

    /// col[dst] += q col[src]
    fn col_op(&mut self, dst: usize, src: usize, q: &BigInt) {
        self.a.add_col_multiple(dst, src, q);
        self.right.add_col_multiple(dst, src, q);
        self.right_inv.add_row_multiple(src, dst, &-q);
    }

    fn negate_row(&mut self, i: usize) {
        self.a.negate_row(i);
        self.left.negate_row(i);
        self.left_inv.negate_col(i);
    }

    fn min_nonzero(&self, t: usize) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize, BigInt)> = None;
        for i in t..self.a.rows() {
            for j in t..self.a.cols() {
                let v = self.a.get(i, j);
                if v.is_zero() {
                    continue;
                }
                let av = v.abs();
                if best.as_ref().is_none_or(|(_, _, b)| av < *b) {
                    best = Some((i, j, av));
                }
            }
        }
        best.map(|(i, j, _)| (i, j))
    }
}

pub fn smith_normal_form(m: &IntMatrix) -> SmithForm {
    let (rows, cols) = m.shape();
    let mut w = Work {
        a: m.clone(),
        left: IntMatrix::identity(rows),
        left_inv: IntMatrix::identity(rows),
        right: IntMatrix::identity(cols),
        right_inv: IntMatrix::identity(cols),
    };
    let mut t = 0;
    while t < rows.min(cols) {
        let Some((pi, pj)) = w.min_nonzero(t) else { break };
        w.swap_rows(t, pi);
        w.swap_cols(t, pj);
        loop {
            let mut clean = true;
            for i in t + 1..rows {
                if w.a.get(i, t).is_zero() {
                    continue;
                }
                let q = -(w.a.get(i, t) / w.a.get(t, t));
                w.row_op(i, t, &q);
                if !w.a.get(i, t).is_zero() {
                    clean = false;
                }
            }
            for j in t + 1..cols {
                if w.a.get(t, j).is_zero() {
                    continue;
                }
                let q = -(w.a.get(t, j) / w.a.get(t, t));
                w.col_op(j, t, &q);
                if !w.a.get(t, j).is_zero() {
                    clean = false;
                }
            }
            if !clean {
                // move the smallest remainder in row/column t onto the pivot
                let mut best = (t, t, w.a.get(t, t).abs());
                for i in t + 1..rows {
                    let v = w.a.get(i, t).abs();
                    if !v.is_zero() && v < best.2 {
                        best = (i, t, v);
                    }
                }
                for j in t + 1..cols {
                    let v = w.a.get(t, j).abs();
                    if !v.is_zero() && v < best.2 {
                        best = (t, j, v);
                    }
                }
                w.swap_rows(t, best.0);
                w.swap_cols(t, best.1);
                continue;
            }
            let pivot = w.a.get(t, t).clone();
            let bad = (t + 1..rows)
                .flat_map(|i| (t + 1..cols).map(move |j| (i, j)))
                .find(|&(i, j)| !w.a.get(i, j).is_multiple_of(&pivot));
            match bad {
                Some((i, _)) => w.row_op(t, i, &BigInt::from(1)),
                None => break,
            }
        }
        if w.a.get(t, t).is_negative() {
            w.negate_row(t);
        }
        t += 1;
    }
    SmithForm { diag: w.a, left: w.left, left_inv: w.left_inv, right: w.right, right_inv: w.right_inv }
}

/// Basis of the integer kernel `{v : m v = 0}`, as columns of the returned matrix.
pub fn kernel_basis(m: &IntMatrix) -> IntMatrix {
    let s = smith_normal_form(m);
    let r = s.rank();
    let cols: Vec<Vec<BigInt>> = (r..m.cols()).map(|j| s.right.col(j)).collect();
    IntMatrix::from_cols(m.cols(), &cols)
}

/// Basis (as columns) of the lattice spanned by the columns of `m`.
pub fn lattice_basis(m: &IntMatrix) -> IntMatrix {
    let s = smith_normal_form(m);
    let d = s.invariant_factors();
    let mut b = IntMatrix::zeros(m.rows(), d.len());
    for (j, dj) in d.iter().enumerate() {
        for i in 0..m.rows() {
            b.set(i, j, s.left_inv.get(i, j) * dj);
        }
    }
    b
}
