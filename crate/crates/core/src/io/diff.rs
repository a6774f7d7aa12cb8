use std::fmt;

use crate::algebra::FgAbelian;
use crate::grading::{Annotation, Chart, Degree, Window};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupDiff {
    pub degree: Degree,
    pub left: FgAbelian,
    pub right: FgAbelian,
}

/// Degreewise comparison on the common window.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DiffReport {
    /// Set when the windows differ; the comparison ran on this intersection.
    pub window_warning: Option<Window>,
    pub groups: Vec<GroupDiff>,
    /// Same group, different annotation multisets.
    pub annotations: Vec<Degree>,
    /// Same group and annotations, different generator names.
    pub labels: Vec<Degree>,
}

impl DiffReport {
    pub fn is_empty(&self) -> bool {
        self.groups.is_empty() && self.annotations.is_empty()
    }
}

impl fmt::Display for DiffReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(w) = self.window_warning {
            writeln!(f, "warning: windows differ, compared on {w}")?;
        }
        for g in &self.groups {
            writeln!(f, "group {}: {} vs {}", g.degree, g.left, g.right)?;
        }
        for d in &self.annotations {
            writeln!(f, "annotation {d}")?;
        }
        for d in &self.labels {
            writeln!(f, "label {d}")?;
        }
        Ok(())
    }
}

fn annotations(c: &Chart, d: Degree) -> Vec<Annotation> {
    let mut v: Vec<Annotation> =
        c.entry(d).map(|e| e.generators.iter().map(|g| g.annotation).collect()).unwrap_or_default();
    v.sort_by_key(|a| (a.order(), a.token()));
    v
}

fn labels(c: &Chart, d: Degree) -> Vec<String> {
    let mut v: Vec<String> =
        c.entry(d).map(|e| e.generators.iter().map(|g| g.name.to_string()).collect()).unwrap_or_default();
    v.sort();
    v
}

pub fn diff(a: &Chart, b: &Chart) -> DiffReport {
    let w = a.window().intersect(&b.window());
    let mut r = DiffReport { window_warning: (a.window() != b.window()).then_some(w), ..DiffReport::default() };
    for d in w.degrees() {
        let (ga, gb) = (a.group(d), b.group(d));
        if ga != gb {
            r.groups.push(GroupDiff { degree: d, left: ga, right: gb });
        } else if annotations(a, d) != annotations(b, d) {
            r.annotations.push(d);
        } else if labels(a, d) != labels(b, d) {
            r.labels.push(d);
        }
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cells::cellular_chart_hz;
    use crate::grading::{closed_form_hz, closed_form_kr};

    #[test]
    fn closed_forms_first_differ_at_eta() {
        let w = Window::square(4);
        let r = diff(&closed_form_hz(w), &closed_form_kr(w));
        assert!(!r.is_empty());
        let first = r.groups.iter().find(|g| g.degree.x >= 0 && g.degree.y == 0 && g.degree.x > 0).unwrap();
        assert_eq!((first.degree, first.right.clone()), (Degree::new(1, 0), FgAbelian::cyclic(2)));
        let sym = diff(&closed_form_kr(w), &closed_form_hz(w));
        let flip: Vec<_> = sym.groups.iter().map(|g| (g.degree, g.right.clone(), g.left.clone())).collect();
        let orig: Vec<_> = r.groups.iter().map(|g| (g.degree, g.left.clone(), g.right.clone())).collect();
        assert_eq!(flip, orig);
    }

    #[test]
    fn self_and_cellular() {
        let w = Window::square(5);
        assert!(diff(&closed_form_hz(w), &closed_form_hz(w)).is_empty());
        let r = diff(&closed_form_hz(w), &cellular_chart_hz(w));
        assert!(r.groups.is_empty());
    }

    #[test]
    fn window_mismatch_warns() {
        let r = diff(&closed_form_hz(Window::square(3)), &closed_form_hz(Window::square(5)));
        assert_eq!(r.window_warning, Some(Window::square(3)));
        assert!(r.is_empty());
    }
}
