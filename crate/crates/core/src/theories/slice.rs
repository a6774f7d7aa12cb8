use std::collections::BTreeMap;

use super::BocksteinRun;
use crate::algebra::FgAbelian;
use crate::grading::Degree;

/// `(x_B, y_B) ↦ (x_S, y_S)`.
pub fn bss_to_sss(b: (i64, i64)) -> (i64, i64) {
    (b.0, 2 * b.1 - b.0)
}

/// `(x_S, y_S) ↦ (x_B, y_B)`, or `None` off the valid parity.
pub fn sss_to_bss(s: (i64, i64)) -> Option<(i64, i64)> {
    ((s.0 + s.1) % 2 == 0).then(|| (s.0, (s.0 + s.1) / 2))
}

/// Integer-graded slice table in Adams grading `(n, s)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SliceTable {
    pub e1: BTreeMap<(i64, i64), FgAbelian>,
    pub e_infinity: BTreeMap<(i64, i64), FgAbelian>,
}

impl SliceTable {
    pub fn e1_at(&self, n: i64, s: i64) -> FgAbelian {
        self.e1.get(&(n, s)).cloned().unwrap_or_default()
    }

    pub fn e_infinity_at(&self, n: i64, s: i64) -> FgAbelian {
        self.e_infinity.get(&(n, s)).cloned().unwrap_or_default()
    }

    /// Surviving groups in stem `n`, by filtration.
    pub fn stem(&self, n: i64) -> Vec<FgAbelian> {
        self.e_infinity.range((n, i64::MIN)..=(n, i64::MAX)).map(|(_, g)| g.clone()).collect()
    }
}

/// Reads the slice table for stems `n_range` off the Bockstein floors; slice
/// `2k` lives on floor `k`, at base degree `(k − s, −k)`.
pub fn slice_extract(run: &BocksteinRun, n_range: std::ops::RangeInclusive<i64>, s_max: i64) -> SliceTable {
    let mut e1 = BTreeMap::new();
    let mut e_infinity = BTreeMap::new();
    for n in n_range {
        for s in 0..=s_max {
            let Some((_, k)) = sss_to_bss((n, s)) else { continue };
            if k < 0 || k > run.floors {
                continue;
            }
            let base = Degree::new(k - s, -k);
            let g = run.e1.group(base);
            if !g.is_zero() {
                e1.insert((n, s), g);
            }
            let g = run.e2(k).group(base);
            if !g.is_zero() {
                e_infinity.insert((n, s), g);
            }
        }
    }
    SliceTable { e1, e_infinity }
}
