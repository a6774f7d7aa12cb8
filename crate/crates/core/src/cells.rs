//! Bredon (co)homology of representation spheres `S^{nσ}` from explicit
//! Q-CW structures: one fixed 0-cell and one free cell `Q × e^k` per `1 ≤ k ≤ n`.

use std::ops::RangeInclusive;

use rayon::prelude::*;

use crate::algebra::{AlgebraError, FgAbelian, IntComplex, IntMatrix};
use crate::grading::{Annotation, BlockClass, Chart, ChartEntry, Degree, Generator, HzClass, Window};

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum CellError {
    #[error("unsupported coefficient system: {0}")]
    Unsupported(String),
    #[error("not a Mackey functor: {0}")]
    InvalidMackey(String),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

/// A Mackey functor for the group of order two with free values.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MackeyQ {
    /// Value at `Q/Q`.
    pub fixed: FgAbelian,
    /// Value at `Q/1`.
    pub free: FgAbelian,
    /// `Q/Q → Q/1`
    pub res: IntMatrix,
    /// `Q/1 → Q/Q`
    pub ind: IntMatrix,
    pub weyl: IntMatrix,
}

impl MackeyQ {
    /// The constant functor `Z`: restriction 1, induction 2.
    pub fn constant_z() -> Self {
        MackeyQ {
            fixed: FgAbelian::free(1),
            free: FgAbelian::free(1),
            res: IntMatrix::from_rows(&[vec![1]]),
            ind: IntMatrix::from_rows(&[vec![2]]),
            weyl: IntMatrix::from_rows(&[vec![1]]),
        }
    }

    /// The dual constant functor: restriction 2, induction 1.
    pub fn dual_constant_z() -> Self {
        MackeyQ { res: IntMatrix::from_rows(&[vec![2]]), ind: IntMatrix::from_rows(&[vec![1]]), ..Self::constant_z() }
    }

    pub fn validate(&self) -> Result<(), CellError> {
        let bad = |m: &str| Err(CellError::InvalidMackey(m.to_string()));
        if !self.fixed.is_free() || !self.free.is_free() {
            return bad("values must be free");
        }
        let (t, b) = (self.fixed.rank(), self.free.rank());
        if self.res.shape() != (b, t) || self.ind.shape() != (t, b) || self.weyl.shape() != (b, b) {
            return bad("shape mismatch");
        }
        let id = IntMatrix::identity(b);
        if self.weyl.mul(&self.weyl) != id {
            return bad("Weyl action is not an involution");
        }
        if self.res.mul(&self.ind) != id.add(&self.weyl) {
            return bad("res ∘ ind ≠ 1 + weyl");
        }
        if self.weyl.mul(&self.res) != self.res || self.ind.mul(&self.weyl) != self.ind {
            return bad("restriction or induction not Weyl-equivariant");
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Variance {
    Homological,
    Cohomological,
}

#[derive(Clone, Debug)]
pub struct SphereComplex {
    pub n: usize,
    pub variance: Variance,
    /// Cohomological complexes are stored with `C^k` in degree `-k`.
    pub complex: IntComplex,
}

impl SphereComplex {
    /// `H_k` or `H^k` according to variance.
    pub fn group(&self, k: i64) -> FgAbelian {
        match self.variance {
            Variance::Homological => self.complex.homology(k),
            Variance::Cohomological => self.complex.homology(-k),
        }
    }
}

fn cellular_complex(n: usize, variance: Variance, m: &MackeyQ) -> Result<SphereComplex, CellError> {
    m.validate()?;
    let (t, b) = (m.fixed.rank(), m.free.rank());
    let id = IntMatrix::identity(b);
    let minus_w = m.weyl.scale(&(-1).into());
    // free-to-free attaching map in chain degree k ≥ 2
    let free_step = |k: usize| if k.is_multiple_of(2) { id.add(&minus_w) } else { id.add(&m.weyl) };
    let mut ranks = vec![t];
    ranks.extend(std::iter::repeat_n(b, n));
    let complex = match variance {
        Variance::Homological => {
            let bounds: Vec<IntMatrix> = (1..=n).map(|k| if k == 1 { m.ind.clone() } else { free_step(k) }).collect();
            IntComplex::new(0, ranks, bounds)?
        }
        Variance::Cohomological => {
            // d^0 = res, d^k dual to the chain map in degree k+1
            let d = |k: usize| if k == 0 { m.res.clone() } else { free_step(k + 1).transpose() };
            ranks.reverse();
            let bounds: Vec<IntMatrix> = (0..n).map(|i| d(n - 1 - i)).collect();
            IntComplex::new(-(n as i64), ranks, bounds)?
        }
    };
    Ok(SphereComplex { n, variance, complex })
}

/// Reduced cellular (co)chains of `S^{nσ}` with coefficients in `m`.
pub fn sphere_complex(n: usize, variance: Variance, m: &MackeyQ) -> Result<SphereComplex, CellError> {
    m.validate()?;
    if *m != MackeyQ::constant_z() {
        return Err(CellError::Unsupported("only the constant Mackey functor Z is supported".into()));
    }
    cellular_complex(n, variance, m)
}

/// Row `y = b` of the `HZ` chart over the given range of `x`.
pub fn bredon_row(b: i64, xs: RangeInclusive<i64>) -> Vec<(Degree, FgAbelian)> {
    let z = MackeyQ::constant_z();
    let n = b.unsigned_abs() as usize;
    if b <= 0 {
        let c = sphere_complex(n, Variance::Homological, &z).expect("constant functor is supported");
        xs.map(|x| (Degree::new(x, b), c.group(x))).collect()
    } else {
        let c = sphere_complex(n, Variance::Cohomological, &z).expect("constant functor is supported");
        xs.map(|x| (Degree::new(x, b), c.group(-x))).collect()
    }
}

/// The `HZ` chart assembled from cellular rows. Labels come from the
/// canonical names at each degree when the group matches; glyphs are bare.
pub fn cellular_chart_hz(window: Window) -> Chart {
    let mut chart = Chart::new(window);
    if window.is_empty() {
        return chart;
    }
    let rows: Vec<Vec<(Degree, FgAbelian)>> =
        (window.y_min..=window.y_max).into_par_iter().map(|b| bredon_row(b, window.x_min..=window.x_max)).collect();
    for (d, g) in rows.into_iter().flatten() {
        if g.is_zero() {
            continue;
        }
        let canon = HzClass::classes_at(d);
        let orders: Vec<u64> = canon.iter().map(|c| c.order()).collect();
        let entry = if FgAbelian::from_orders(&orders) == g {
            ChartEntry::new(canon.iter().map(|c| Generator::new(c.name(), Annotation::for_order(c.order()))).collect())
        } else {
            ChartEntry::bare(&g)
        };
        chart.insert(d, entry).expect("row degree in window");
    }
    chart
}

/// Reduced integral cohomology of `RP^n`, indexed by degree `0..=n`.
fn rp_reduced_cohomology(n: usize) -> Vec<FgAbelian> {
    (0..=n)
        .map(|k| {
            if k == 0 {
                FgAbelian::zero()
            } else if k % 2 == 0 {
                FgAbelian::cyclic(2)
            } else if k == n {
                FgAbelian::free(1)
            } else {
                FgAbelian::zero()
            }
        })
        .collect()
}

/// Compares the cohomology row of `S^{(n+1)σ}` with the reduced cohomology
/// of the unreduced suspension `S⁰ * RPⁿ` of its orbit space.
pub fn quotient_row_check(n: usize) -> bool {
    assert!(n >= 1, "quotient_row_check needs n ≥ 1");
    let b = n as i64 + 1;
    let top = b + 1;
    let row = bredon_row(b, -top..=0);
    let rp = rp_reduced_cohomology(n);
    row.iter().all(|(d, g)| {
        let k = -d.x;
        let expected = if k >= 1 && (k - 1) as usize <= n { rp[(k - 1) as usize].clone() } else { FgAbelian::zero() };
        *g == expected
    })
}

/// Reduced homology of the orbit space `S^{nσ}/Q` from its induced cell
/// structure (an arc for `n = 1`).
pub fn orbit_space_homology(n: usize, k: i64) -> FgAbelian {
    let c = cellular_complex(n, Variance::Homological, &MackeyQ::dual_constant_z())
        .expect("dual constant functor is valid");
    c.complex.homology(k)
}
