//! Invariant suites run by `roq verify` and by the acceptance tests.

use std::fmt;
use std::path::Path;

use crate::algebra::FgAbelian;
use crate::cells::cellular_chart_hz;
use crate::grading::{Chart, Window};
use crate::io::{self, diff, ChartDocument};
use crate::tate::TateSquareData;
use crate::theories::{
    connectivity_check, floor_extensions, gap_check, integer_line, run_bockstein, tate_pipeline, CheckReport, Theory,
    TheoryError,
};

pub const DEFAULT_WINDOW: Window = Window::square(12);

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Scope {
    All,
    Gap,
    Connectivity,
    Cross,
    Axes,
}

impl Scope {
    fn includes(self, other: Scope) -> bool {
        self == Scope::All || self == other
    }
}

#[derive(Debug, thiserror::Error)]
pub enum GoldenError {
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("{path}: {source}")]
    Parse { path: String, source: io::ParseError },
}

/// Reference chart documents, one per theory.
#[derive(Clone, Debug)]
pub struct Goldens {
    pub hz: ChartDocument,
    pub kr: ChartDocument,
}

impl Goldens {
    pub fn builtin() -> Goldens {
        let load = |text: &str| io::parse(text).expect("built-in golden chart parses");
        Goldens { hz: load(include_str!("../golden/hz.chart")), kr: load(include_str!("../golden/kr.chart")) }
    }

    /// Reads `hz.chart` and `kr.chart` from `dir`.
    pub fn from_dir(dir: &Path) -> Result<Goldens, GoldenError> {
        let load = |file: &str| {
            let path = dir.join(file);
            let shown = path.display().to_string();
            let text =
                std::fs::read_to_string(&path).map_err(|source| GoldenError::Io { path: shown.clone(), source })?;
            io::parse(&text).map_err(|source| GoldenError::Parse { path: shown, source })
        };
        Ok(Goldens { hz: load("hz.chart")?, kr: load("kr.chart")? })
    }

    pub fn get(&self, t: Theory) -> &ChartDocument {
        match t {
            Theory::Hz => &self.hz,
            Theory::Kr => &self.kr,
        }
    }
}

/// One suite applied to one subject.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuiteResult {
    pub suite: &'static str,
    pub subject: String,
    pub failures: Vec<String>,
}

impl SuiteResult {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct VerifyReport {
    pub results: Vec<SuiteResult>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.results.iter().all(SuiteResult::passed)
    }
}

impl fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in &self.results {
            let tag = if r.passed() { "PASS" } else { "FAIL" };
            writeln!(f, "{tag} {} {}", r.suite, r.subject)?;
            for line in &r.failures {
                writeln!(f, "  {line}")?;
            }
        }
        Ok(())
    }
}

fn from_check(suite: &'static str, subject: String, r: CheckReport) -> SuiteResult {
    let failures = r.violations.iter().map(|(d, why)| format!("{d}: {why}")).collect();
    SuiteResult { suite, subject, failures }
}

fn failed(suite: &'static str, subject: String, e: impl fmt::Display) -> SuiteResult {
    SuiteResult { suite, subject, failures: vec![format!("error: {e}")] }
}

/// Group differences between `left` and `right`, one line per degree.
pub fn group_failures(left: &Chart, right: &Chart) -> Vec<String> {
    let r = diff(left, right);
    let mut out: Vec<String> = r.window_warning.iter().map(|w| format!("windows differ, compared on {w}")).collect();
    out.extend(r.groups.iter().map(|g| format!("{}: {} vs {}", g.degree, g.left, g.right)));
    out
}

/// The Bockstein chart against `reference`: exact where the abutment sits in one
/// filtration, otherwise `reference` must be an extension of the filtration quotients.
pub fn bockstein_failures(window: Window, padding: i64, reference: &Chart) -> Result<Vec<String>, TheoryError> {
    let run = run_bockstein(window, padding)?;
    let mut out = Vec::new();
    for d in window.degrees() {
        let want = reference.group(d);
        if run.chart.is_ambiguous(d) {
            let options = floor_extensions(&run.contributions[&d]);
            if !options.as_ref().is_some_and(|o| o.contains(&want)) {
                out.push(format!("{d}: {want} is not an extension of the filtration quotients"));
            }
        } else if run.chart.group(d) != want {
            out.push(format!("{d}: {} vs {want}", run.chart.group(d)));
        }
    }
    Ok(out)
}

fn line_failures(label: &str, got: Vec<(i64, FgAbelian)>, want: impl Fn(i64) -> FgAbelian) -> Vec<String> {
    got.into_iter()
        .filter(|(x, g)| *g != want(*x))
        .map(|(x, g)| format!("{label} at {x}: {g}, expected {}", want(x)))
        .collect()
}

fn ko(n: i64) -> FgAbelian {
    match n.rem_euclid(8) {
        0 | 4 => FgAbelian::free(1),
        1 | 2 => FgAbelian::cyclic(2),
        _ => FgAbelian::zero(),
    }
}

/// `Z` at 0, `Z/2` at nonzero multiples of `period`, zero elsewhere.
fn truncated_polynomial(period: i64) -> impl Fn(i64) -> FgAbelian {
    move |x| match x {
        0 => FgAbelian::free(1),
        x if x % period == 0 => FgAbelian::cyclic(2),
        _ => FgAbelian::zero(),
    }
}

/// `F_2` at nonnegative multiples of `period`.
fn polynomial_f2(period: i64) -> impl Fn(i64) -> FgAbelian {
    move |x| if x >= 0 && x % period == 0 { FgAbelian::cyclic(2) } else { FgAbelian::zero() }
}

/// Integer-line checks on the fixed-point and geometric-fixed-point charts.
pub fn axes_failures(theory: Theory, sq: &TateSquareData) -> Vec<String> {
    let w = sq.hfp.window();
    let (neg, pos) = (w.x_min.min(0)..=0, 0..=w.x_max.max(0));
    let mut out = Vec::new();
    match theory {
        Theory::Hz => {
            out.extend(line_failures("hfp", integer_line(&sq.hfp, neg), truncated_polynomial(2)));
            out.extend(line_failures("hfp", integer_line(&sq.hfp, pos.clone()), truncated_polynomial(i64::MAX)));
            out.extend(line_failures("phi", integer_line(&sq.phi, w.x_min..=w.x_max), polynomial_f2(2)));
        }
        Theory::Kr => {
            out.extend(line_failures("hfp", integer_line(&sq.hfp, neg), truncated_polynomial(4)));
            out.extend(line_failures("hfp", integer_line(&sq.hfp, pos), ko));
            out.extend(line_failures("phi", integer_line(&sq.phi, w.x_min..=w.x_max), polynomial_f2(4)));
        }
    }
    out
}

/// Runs the suites in `scope` on `window`.
pub fn verify(scope: Scope, goldens: &Goldens, window: Window, padding: i64) -> VerifyReport {
    let mut results = Vec::new();
    for theory in Theory::ALL {
        let t = theory.token();
        let sq = match tate_pipeline(theory, window, padding) {
            Ok(sq) => sq,
            Err(e) => {
                results.push(failed("tate", t.to_string(), e));
                continue;
            }
        };
        if scope.includes(Scope::Gap) {
            results.push(from_check("gap", t.to_string(), gap_check(&sq.genuine)));
        }
        if scope.includes(Scope::Connectivity) {
            results.push(from_check("connectivity", t.to_string(), connectivity_check(&sq.genuine)));
        }
        if scope.includes(Scope::Axes) {
            results.push(SuiteResult { suite: "axes", subject: t.to_string(), failures: axes_failures(theory, &sq) });
        }
        if scope.includes(Scope::Cross) {
            let closed = theory.closed_form(window);
            let cross =
                |subject: &str, failures| SuiteResult { suite: "cross", subject: format!("{t} {subject}"), failures };
            results.push(cross("tate", group_failures(&sq.genuine, &closed)));
            match theory {
                Theory::Hz => results.push(cross("cells", group_failures(&cellular_chart_hz(window), &closed))),
                Theory::Kr => results.push(match bockstein_failures(window, padding, &closed) {
                    Ok(f) => cross("bockstein", f),
                    Err(e) => failed("cross", format!("{t} bockstein"), e),
                }),
            }
            let golden = goldens.get(theory);
            let gw = golden.chart.window();
            let mut f = group_failures(&golden.chart.restrict(window.intersect(&gw)), &closed.restrict(gw));
            if !gw.covers(&window) {
                f.insert(0, format!("golden window {gw} does not cover {window}"));
            }
            if golden.theory != t {
                f.insert(0, format!("golden file is for theory `{}`", golden.theory));
            }
            results.push(cross("golden", f));
        }
    }
    VerifyReport { results }
}
