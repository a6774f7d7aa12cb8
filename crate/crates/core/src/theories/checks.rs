use std::fmt;

use crate::algebra::FgAbelian;
use crate::grading::{Chart, Degree, Symbol};

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CheckReport {
    pub checked: usize,
    pub violations: Vec<(Degree, String)>,
}

impl CheckReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    fn fail(&mut self, d: Degree, why: impl Into<String>) {
        self.violations.push((d, why.into()));
    }
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.passed() {
            return write!(f, "pass ({} degrees)", self.checked);
        }
        write!(f, "fail:")?;
        for (d, why) in &self.violations {
            write!(f, " {d} {why};")?;
        }
        Ok(())
    }
}

/// Vanishing of the diagonals `kρ − i`, `i = 1, 2, 3`, and rank at most one
/// free groups on the diagonal `kρ`.
pub fn gap_check(c: &Chart) -> CheckReport {
    let w = c.window();
    let mut r = CheckReport::default();
    for d in w.degrees() {
        let i = d.y - d.x;
        if (1..=3).contains(&i) {
            r.checked += 1;
            if !c.group(d).is_zero() {
                r.fail(d, format!("{} on the diagonal kρ-{i}", c.group(d)));
            }
        } else if i == 0 {
            r.checked += 1;
            let g = c.group(d);
            if !(g.is_free() && g.rank() <= 1) {
                r.fail(d, format!("{g} on the diagonal kρ"));
            }
        }
    }
    r
}

/// Zero below the antidiagonal for `x < 0`; `a` an isomorphism below it for `x ≥ 0`.
pub fn connectivity_check(c: &Chart) -> CheckReport {
    let w = c.window();
    let mut r = CheckReport::default();
    for d in w.degrees() {
        if d.x + d.y >= 0 {
            continue;
        }
        r.checked += 1;
        if d.x < 0 {
            if !c.group(d).is_zero() {
                r.fail(d, format!("{} below the antidiagonal", c.group(d)));
            }
        } else if w.contains(d + Symbol::A.degree()) && !c.abelian_map(Symbol::A, d).expect("in window").is_iso() {
            r.fail(d, "a is not an isomorphism");
        }
    }
    r
}

/// Groups at `(x, 0)`.
pub fn integer_line(c: &Chart, xs: impl IntoIterator<Item = i64>) -> Vec<(i64, FgAbelian)> {
    xs.into_iter().map(|x| (x, c.group(Degree::new(x, 0)))).collect()
}
