//! The `roq` command line.

use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};

use crate::cells::cellular_chart_hz;
use crate::grading::{Chart, Window};
use crate::io::{self, diff, render, ChartDocument, RenderFormat};
use crate::theories::{padding_self_check, run_bockstein, tate_pipeline, Theory, TheoryError};
use crate::verify::{self, Goldens, Scope};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "roq", version, about = "RO(Q)-graded coefficient charts for HZ and kR")]
pub struct Cli {
    /// Worker threads for degreewise computations (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Compute a chart and write it as a chart document.
    Compute(RunConfig),
    /// Run invariant suites; exits 1 on any failure.
    Verify {
        #[arg(value_enum, default_value = "all")]
        scope: Scope,
        /// Directory holding hz.chart and kr.chart (default: built-in).
        #[arg(long)]
        golden: Option<PathBuf>,
        #[arg(long, default_value = "-12..12", allow_hyphen_values = true, value_parser = parse_window)]
        window: Window,
        #[arg(long, default_value_t = 4)]
        padding: i64,
    },
    /// Render a chart document (`-` reads stdin).
    Render {
        file: PathBuf,
        #[arg(long, value_enum, default_value = "text")]
        format: OutputFormat,
        #[arg(long, short, default_value = "-")]
        output: PathBuf,
    },
    /// Compare two chart documents; exits 1 if any group differs.
    Diff { left: PathBuf, right: PathBuf },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Pipeline {
    Cells,
    Tate,
    Bockstein,
    Closed,
}

impl Pipeline {
    fn token(self) -> &'static str {
        match self {
            Pipeline::Cells => "cells",
            Pipeline::Tate => "tate",
            Pipeline::Bockstein => "bockstein",
            Pipeline::Closed => "closed",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum TheoryArg {
    Hz,
    Kr,
}

impl From<TheoryArg> for Theory {
    fn from(t: TheoryArg) -> Theory {
        match t {
            TheoryArg::Hz => Theory::Hz,
            TheoryArg::Kr => Theory::Kr,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum OutputFormat {
    Chart,
    Svg,
    Text,
}

#[derive(clap::Args, Debug)]
pub struct RunConfig {
    #[arg(long, value_enum)]
    theory: TheoryArg,
    #[arg(long, value_enum)]
    pipeline: Pipeline,
    /// `a..b` for the square `[a,b]²`, or `a..b,c..d` for `[a,b]×[c,d]`.
    #[arg(long, default_value = "-12..12", allow_hyphen_values = true, value_parser = parse_window)]
    window: Window,
    #[arg(long, default_value_t = 4)]
    padding: i64,
    /// Recompute with doubled padding and fail unless the charts agree.
    #[arg(long)]
    paranoid: bool,
    #[arg(long, value_enum, default_value = "chart")]
    format: OutputFormat,
    #[arg(long, short, default_value = "-")]
    output: PathBuf,
}

fn parse_range(s: &str) -> Result<(i64, i64), String> {
    let (a, b) = s.split_once("..").ok_or_else(|| format!("expected `a..b`, found `{s}`"))?;
    let int = |t: &str| t.trim().parse::<i64>().map_err(|_| format!("`{t}` is not an integer"));
    let (a, b) = (int(a)?, int(b)?);
    if a > b {
        return Err(format!("empty range `{s}`"));
    }
    Ok((a, b))
}

pub fn parse_window(s: &str) -> Result<Window, String> {
    let (x, y) = match s.split_once(',') {
        Some((x, y)) => (parse_range(x)?, parse_range(y)?),
        None => (parse_range(s)?, parse_range(s)?),
    };
    Ok(Window::new(x.0, x.1, y.0, y.1))
}

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("{path}: {source}")]
    Parse { path: String, source: io::ParseError },
    #[error(transparent)]
    Golden(#[from] verify::GoldenError),
    #[error(transparent)]
    Theory(#[from] TheoryError),
}

impl CliError {
    fn exit_code(&self) -> i32 {
        match self {
            CliError::Theory(_) => EXIT_FAILURE,
            _ => EXIT_USAGE,
        }
    }
}

fn shown(p: &Path) -> String {
    p.display().to_string()
}

fn read_input(path: &Path) -> Result<String, CliError> {
    let mut text = String::new();
    let r = if path == Path::new("-") {
        std::io::stdin().read_to_string(&mut text).map(|_| ())
    } else {
        std::fs::read_to_string(path).map(|t| text = t)
    };
    r.map_err(|source| CliError::Io { path: shown(path), source })?;
    Ok(text)
}

fn read_document(path: &Path) -> Result<ChartDocument, CliError> {
    io::parse(&read_input(path)?).map_err(|source| CliError::Parse { path: shown(path), source })
}

fn write_output(path: &Path, bytes: &str, stdout: &mut dyn Write) -> Result<(), CliError> {
    let r = if path == Path::new("-") { stdout.write_all(bytes.as_bytes()) } else { std::fs::write(path, bytes) };
    r.map_err(|source| CliError::Io { path: shown(path), source })
}

fn format_document(doc: &ChartDocument, format: OutputFormat) -> String {
    match format {
        OutputFormat::Chart => io::serialize(doc),
        OutputFormat::Svg => render(&doc.chart, RenderFormat::Svg),
        OutputFormat::Text => render(&doc.chart, RenderFormat::Text),
    }
}

fn compute_chart(cfg: &RunConfig) -> Result<Chart, CliError> {
    let theory = Theory::from(cfg.theory);
    match (theory, cfg.pipeline) {
        (Theory::Kr, Pipeline::Cells) => return Err(CliError::Usage("the cells pipeline only computes hz".into())),
        (Theory::Hz, Pipeline::Bockstein) => {
            return Err(CliError::Usage("the bockstein pipeline only computes kr".into()))
        }
        _ if cfg.padding < 0 => return Err(CliError::Usage("padding must be nonnegative".into())),
        _ => {}
    }
    let once = |p| -> Result<Chart, TheoryError> {
        Ok(match cfg.pipeline {
            Pipeline::Closed => theory.closed_form(cfg.window),
            Pipeline::Cells => cellular_chart_hz(cfg.window),
            Pipeline::Tate => tate_pipeline(theory, cfg.window, p)?.genuine,
            Pipeline::Bockstein => run_bockstein(cfg.window, p)?.chart,
        })
    };
    Ok(if cfg.paranoid { padding_self_check(cfg.padding, once)? } else { once(cfg.padding)? })
}

fn cmd_compute(cfg: &RunConfig, stdout: &mut dyn Write) -> Result<i32, CliError> {
    let chart = compute_chart(cfg)?;
    let doc =
        ChartDocument { theory: Theory::from(cfg.theory).token().into(), pipeline: cfg.pipeline.token().into(), chart };
    write_output(&cfg.output, &format_document(&doc, cfg.format), stdout)?;
    Ok(EXIT_OK)
}

fn dispatch(cli: &Cli, stdout: &mut dyn Write) -> Result<i32, CliError> {
    match &cli.command {
        Command::Compute(cfg) => cmd_compute(cfg, stdout),
        Command::Verify { scope, golden, window, padding } => {
            let goldens = match golden {
                Some(dir) => Goldens::from_dir(dir)?,
                None => Goldens::builtin(),
            };
            let report = verify::verify(*scope, &goldens, *window, *padding);
            write_output(Path::new("-"), &report.to_string(), stdout)?;
            Ok(if report.passed() { EXIT_OK } else { EXIT_FAILURE })
        }
        Command::Render { file, format, output } => {
            let doc = read_document(file)?;
            write_output(output, &format_document(&doc, *format), stdout)?;
            Ok(EXIT_OK)
        }
        Command::Diff { left, right } => {
            let (a, b) = (read_document(left)?, read_document(right)?);
            let report = diff(&a.chart, &b.chart);
            write_output(Path::new("-"), &report.to_string(), stdout)?;
            Ok(if report.groups.is_empty() { EXIT_OK } else { EXIT_FAILURE })
        }
    }
}

/// Parses `args` (program name first) and runs the command; returns the exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { stderr.write_all(text.as_bytes()) } else { stdout.write_all(text.as_bytes()) };
            return code;
        }
    };
    let result = match cli.threads {
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
            Ok(pool) => {
                let mut buf = Vec::new();
                let r = pool.install(|| dispatch(&cli, &mut buf));
                stdout.write_all(&buf).map_err(|source| CliError::Io { path: "-".into(), source }).and(r)
            }
            Err(e) => Err(CliError::Usage(format!("cannot start {n} threads: {e}"))),
        },
        None => dispatch(&cli, stdout),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "roq: {e}");
            e.exit_code()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn windows() {
        assert_eq!(parse_window("-12..12"), Ok(Window::square(12)));
        assert_eq!(parse_window("-2..3,0..4"), Ok(Window::new(-2, 3, 0, 4)));
        assert!(parse_window("3..1").is_err());
        assert!(parse_window("1-3").is_err());
    }

    fn run_str(args: &[&str]) -> (i32, String, String) {
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let code = run(std::iter::once("roq").chain(args.iter().copied()), &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn invalid_combinations_are_usage_errors() {
        let (code, _, err) = run_str(&["compute", "--theory", "hz", "--pipeline", "bockstein"]);
        assert_eq!(code, EXIT_USAGE);
        assert!(err.contains("only computes kr"));
        assert_eq!(run_str(&["compute", "--theory", "kr", "--pipeline", "cells"]).0, EXIT_USAGE);
        assert_eq!(run_str(&["compute", "--theory", "qq", "--pipeline", "cells"]).0, EXIT_USAGE);
        assert_eq!(run_str(&["frobnicate"]).0, EXIT_USAGE);
    }

    #[test]
    fn compute_writes_a_document() {
        let (code, out, _) = run_str(&["compute", "--theory", "hz", "--pipeline", "cells", "--window", "-2..2"]);
        assert_eq!(code, EXIT_OK);
        let doc = io::parse(&out).unwrap();
        assert_eq!((doc.theory.as_str(), doc.pipeline.as_str()), ("hz", "cells"));
        assert_eq!(doc.chart.groups(), Theory::Hz.closed_form(Window::square(2)).groups());
    }
}
