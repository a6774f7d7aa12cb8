use super::snf::kernel_basis;
use super::{AlgebraError, FgAbelian, IntMatrix, Subquotient};

/// Bounded chain complex of free abelian groups. `boundaries[i]` is
/// `∂ : C_{bottom+i+1} → C_{bottom+i}`.
#[derive(Clone, Debug)]
pub struct IntComplex {
    bottom: i64,
    ranks: Vec<usize>,
    boundaries: Vec<IntMatrix>,
}

impl IntComplex {
    pub fn new(bottom: i64, ranks: Vec<usize>, boundaries: Vec<IntMatrix>) -> Result<Self, AlgebraError> {
        if boundaries.len() + 1 != ranks.len().max(1) {
            return Err(AlgebraError::Complex("boundary count does not match chain groups".into()));
        }
        for (i, b) in boundaries.iter().enumerate() {
            if b.shape() != (ranks[i], ranks[i + 1]) {
                return Err(AlgebraError::Shape { expected: (ranks[i], ranks[i + 1]), found: b.shape() });
            }
        }
        for (i, w) in boundaries.windows(2).enumerate() {
            if !w[0].mul(&w[1]).is_zero() {
                return Err(AlgebraError::Complex(format!(
                    "boundary squares to nonzero in degree {}",
                    bottom + i as i64 + 2
                )));
            }
        }
        Ok(IntComplex { bottom, ranks, boundaries })
    }

    pub fn bottom(&self) -> i64 {
        self.bottom
    }

    pub fn top(&self) -> i64 {
        self.bottom + self.ranks.len() as i64 - 1
    }

    pub fn rank_at(&self, k: i64) -> usize {
        self.index(k).map_or(0, |i| self.ranks[i])
    }

    fn index(&self, k: i64) -> Option<usize> {
        let i = k - self.bottom;
        (0..self.ranks.len() as i64).contains(&i).then_some(i as usize)
    }

    /// `∂_k : C_k → C_{k-1}`, zero outside the stored range.
    pub fn boundary(&self, k: i64) -> IntMatrix {
        match (self.index(k), self.index(k - 1)) {
            (Some(i), Some(_)) => self.boundaries[i - 1].clone(),
            _ => IntMatrix::zeros(self.rank_at(k - 1), self.rank_at(k)),
        }
    }

    pub fn homology_subquotient(&self, k: i64) -> Subquotient {
        let n = self.rank_at(k);
        let z = kernel_basis(&self.boundary(k));
        let b = self.boundary(k + 1);
        Subquotient::new(n, &z, &b)
    }

    pub fn homology(&self, k: i64) -> FgAbelian {
        self.homology_subquotient(k).group()
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.ranks
            .iter()
            .enumerate()
            .map(|(i, &r)| if (self.bottom + i as i64).rem_euclid(2) == 0 { r as i64 } else { -(r as i64) })
            .sum()
    }
}
