//! Trigraded multiplicative spectral sequences on monomial bases.

mod page;
mod presentation;

pub use page::{Assignment, Candidate, Cell, Collapse, Page, PageWindow};
pub use presentation::{AliasSpec, Factor, GeneratorSpec, Monomial, Polynomial, Presentation, TriDegree};

use std::sync::Arc;

use crate::grading::{Symbol, Window};

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum SpecSeqError {
    #[error("invalid presentation: {0}")]
    Presentation(String),
    #[error("unknown generator or alias `{0}`")]
    UnknownFactor(String),
    #[error("d^{r}({factor}) must have tridegree {expected}, found {found}")]
    DegreeMismatch { factor: String, r: u32, expected: TriDegree, found: TriDegree },
    #[error("monomial {monomial} is not expressible in the page-{r} alphabet")]
    NotExpressible { monomial: String, r: u32 },
    #[error("d^{r}({witness}) is not a cycle for the earlier differentials")]
    NotACycle { witness: String, r: u32 },
    #[error("d^{r} does not preserve boundaries: witness {witness}")]
    BoundaryNotPreserved { witness: String, r: u32 },
    #[error("d^{r} is not well defined at {tridegree}")]
    LeibnizInconsistent { tridegree: TriDegree, r: u32 },
    #[error("d^{r} squares to a nonzero map: witness {witness}")]
    DSquaredNonzero { witness: String, r: u32 },
    #[error("page {0} has no differential set")]
    NoDifferential(u32),
    #[error("possible nonzero d^{} from {} to {}", .0.r, .0.source, .0.target)]
    RemainingDifferential(Candidate),
    #[error("requested window {requested} exceeds the reliable region {reliable}")]
    WindowTooLarge { requested: Window, reliable: Window },
}

pub fn page_from_presentation(pres: Arc<Presentation>, window: PageWindow) -> Page {
    Page::from_presentation(pres, window)
}

pub fn set_differential(p: &Page, assignments: &[Assignment]) -> Result<Page, SpecSeqError> {
    p.set_differential(assignments)
}

pub fn turn_page(p: &Page) -> Result<Page, SpecSeqError> {
    p.turn_page()
}

pub fn collapse_to_chart(p: &Page, window: Window, maps: &[Symbol]) -> Result<Collapse, SpecSeqError> {
    p.collapse_to_chart(window, maps)
}
