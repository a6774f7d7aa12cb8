//! Text formats: chart documents, theory seeds, renders and diffs.

mod chart;
mod diff;
mod render;
mod seed;

pub use chart::{parse, serialize, ChartDocument};
pub use diff::{diff, DiffReport, GroupDiff};
pub use render::{render, RenderFormat};
pub use seed::parse_seed;

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
#[error("line {line}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

impl ParseError {
    pub(crate) fn new(line: usize, message: impl Into<String>) -> Self {
        ParseError { line, message: message.into() }
    }
}

/// Non-empty lines with comments stripped, numbered from 1.
pub(crate) fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(i, l)| {
        let l = l.split('#').next().unwrap_or("").trim();
        (!l.is_empty()).then_some((i + 1, l))
    })
}
