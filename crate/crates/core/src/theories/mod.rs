//! Theory seeds and the pipelines built on them.

mod bockstein;
mod checks;
mod slice;

pub use bockstein::{floor_extensions, phi_sector, run_bockstein, theta_apply, BocksteinRun, HigherCandidate};
pub use checks::{connectivity_check, gap_check, integer_line, CheckReport};
pub use slice::{bss_to_sss, slice_extract, sss_to_bss, SliceTable};

use std::sync::Arc;

use crate::grading::{closed_form_hz, closed_form_kr, Chart, Degree, Symbol, Window};
use crate::io::{parse_seed, ParseError};
use crate::specseq::{Assignment, Page, PageWindow, Presentation, SpecSeqError};
use crate::tate::{run_tate_square, TateError, TateSquareData};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Theory {
    Hz,
    Kr,
}

impl Theory {
    pub const ALL: [Theory; 2] = [Theory::Hz, Theory::Kr];

    pub fn token(self) -> &'static str {
        match self {
            Theory::Hz => "hz",
            Theory::Kr => "kr",
        }
    }

    pub fn from_token(s: &str) -> Option<Theory> {
        Theory::ALL.into_iter().find(|t| t.token() == s)
    }

    pub fn closed_form(self, window: Window) -> Chart {
        match self {
            Theory::Hz => closed_form_hz(window),
            Theory::Kr => closed_form_kr(window),
        }
    }

    pub fn seed_text(self) -> &'static str {
        match self {
            Theory::Hz => include_str!("../../seeds/hz.seed"),
            Theory::Kr => include_str!("../../seeds/kr.seed"),
        }
    }

    pub fn seed(self) -> TheorySeed {
        parse_seed(self.seed_text()).expect("builtin seed parses")
    }
}

impl std::fmt::Display for Theory {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.token())
    }
}

/// A homotopy-fixed-point spectral sequence with its differentials, page by page.
#[derive(Clone, Debug)]
pub struct TheorySeed {
    pub theory: Theory,
    pub closed: Theory,
    pub presentation: Arc<Presentation>,
    /// `pages[r-1]` holds the assignments for `d^r`.
    pub pages: Vec<Vec<Assignment>>,
    pub maps: Vec<Symbol>,
    pub connective: bool,
    pub two_torsion_a: bool,
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum TheoryError {
    #[error(transparent)]
    Seed(#[from] ParseError),
    #[error(transparent)]
    SpecSeq(#[from] SpecSeqError),
    #[error(transparent)]
    Tate(#[from] TateError),
    #[error("abutment at {0} is spread over several filtrations")]
    MultiFiltration(Degree),
    #[error("`{0}` is not a generator of the closed-form HZ chart")]
    UnknownGenerator(String),
    #[error("possible d^{} from floor {} at {} to floor {} at {}", .0.r, .0.floor, .0.source, .0.floor + .0.r, .0.target)]
    HigherDifferential(HigherCandidate),
    #[error("padding {0} and its double disagree at {1}")]
    PaddingUnstable(i64, Degree),
}

#[derive(Clone, Debug)]
pub struct HfpssRun {
    /// `E_1, E_2, …, E_∞`.
    pub pages: Vec<Page>,
    pub chart: Chart,
}

impl HfpssRun {
    pub fn e(&self, r: usize) -> &Page {
        &self.pages[r - 1]
    }

    pub fn e_infinity(&self) -> &Page {
        self.pages.last().expect("at least E_1")
    }
}

fn page_window(seed: &TheorySeed, window: Window, padding: i64) -> PageWindow {
    let turns = seed.pages.len() as i64;
    let reach = turns * (turns + 1) / 2;
    let chart = window.expand(turns + padding, turns + padding, 0, 0);
    let s_min = (chart.x_min.min(0) + chart.y_min.min(0)).min(0) - reach - padding - 2;
    PageWindow { chart, s_min, s_max: 0 }
}

/// Runs the seeded spectral sequence and reads off the abutment on `window`.
pub fn run_hfpss(seed: &TheorySeed, window: Window, padding: i64) -> Result<HfpssRun, TheoryError> {
    let mut page = Page::from_presentation(seed.presentation.clone(), page_window(seed, window, padding));
    let mut pages = Vec::with_capacity(seed.pages.len() + 1);
    for assignments in &seed.pages {
        let next = page.set_differential(assignments)?.turn_page()?;
        pages.push(std::mem::replace(&mut page, next));
    }
    let collapse = page.collapse_to_chart(window, &seed.maps)?;
    pages.push(page);
    if let Some(d) = collapse.multi_filtration.first() {
        return Err(TheoryError::MultiFiltration(*d));
    }
    Ok(HfpssRun { pages, chart: collapse.chart })
}

/// Window for the fixed-point chart feeding a Tate square on `window`.
pub fn tate_input_window(window: Window, padding: i64) -> Window {
    let x_max = window.x_max + 1;
    let y_min = window.y_min.min(-x_max - 3) - padding;
    Window::new(window.x_min, x_max, y_min, window.y_max + 1)
}

/// The Tate square for `theory`, every chart restricted to `window`.
pub fn tate_pipeline(theory: Theory, window: Window, padding: i64) -> Result<TateSquareData, TheoryError> {
    let seed = theory.seed();
    let hfp = run_hfpss(&seed, tate_input_window(window, padding), padding)?;
    let mut sq = run_tate_square(&hfp.chart, seed.connective, seed.two_torsion_a)?;
    sq.splits.retain(|(d, _)| window.contains(*d));
    for c in [&mut sq.hfp, &mut sq.tate, &mut sq.orbits, &mut sq.phi, &mut sq.genuine] {
        *c = c.restrict(window);
    }
    sq.hfp_to_tate.retain(|d, _| window.contains(*d));
    sq.phi_to_tate.retain(|d, _| window.contains(*d));
    Ok(sq)
}

/// Recomputes with doubled padding and reports the first disagreement.
pub fn padding_self_check(
    padding: i64,
    compute: impl Fn(i64) -> Result<Chart, TheoryError>,
) -> Result<Chart, TheoryError> {
    let a = compute(padding)?;
    let b = compute(2 * padding)?;
    let bad = a.window().degrees().find(|d| a.entry(*d) != b.entry(*d));
    match bad {
        Some(d) => Err(TheoryError::PaddingUnstable(padding, d)),
        None => Ok(a),
    }
}

#[cfg(test)]
mod tests;
