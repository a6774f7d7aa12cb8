use std::fmt::Write;

use num_bigint::BigInt;

use super::{content_lines, ParseError};
use crate::algebra::{FgAbelian, IntMatrix};
use crate::grading::{Annotation, Chart, ChartEntry, Degree, Generator, GeneratorName, Symbol, Window};

const MAGIC: &str = "roq-chart v1";

/// A chart with the provenance recorded in its header.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChartDocument {
    pub theory: String,
    pub pipeline: String,
    pub chart: Chart,
}

fn torsion_token(g: &FgAbelian) -> String {
    if g.torsion().is_empty() {
        "-".into()
    } else {
        g.torsion().iter().map(u64::to_string).collect::<Vec<_>>().join(",")
    }
}

fn matrix_token(m: &IntMatrix) -> String {
    let rows: Vec<String> =
        (0..m.rows()).map(|i| m.row(i).iter().map(BigInt::to_string).collect::<Vec<_>>().join(",")).collect();
    format!("{}x{} {}", m.rows(), m.cols(), rows.join(";"))
}

/// Canonical text form: header, then entries, maps and ambiguity marks sorted by degree.
pub fn serialize(doc: &ChartDocument) -> String {
    let c = &doc.chart;
    let w = c.window();
    let mut out = String::new();
    writeln!(out, "{MAGIC}").unwrap();
    writeln!(out, "theory {}", doc.theory).unwrap();
    writeln!(out, "pipeline {}", doc.pipeline).unwrap();
    writeln!(out, "window {} {} {} {}", w.x_min, w.x_max, w.y_min, w.y_max).unwrap();
    for (d, e) in c.entries() {
        write!(out, "entry {} {} rank={} torsion={} gens=", d.x, d.y, e.group.rank(), torsion_token(&e.group)).unwrap();
        let gens: Vec<String> = e.generators.iter().map(|g| format!("{}:{}", g.name, g.annotation.token())).collect();
        writeln!(out, "{}", gens.join(",")).unwrap();
    }
    for (s, d, m) in c.maps() {
        writeln!(out, "map {} {} {} {}", s.token(), d.x, d.y, matrix_token(m)).unwrap();
    }
    for d in c.ambiguous() {
        writeln!(out, "ambiguous {} {}", d.x, d.y).unwrap();
    }
    out.push_str("end\n");
    out
}

fn int<T: std::str::FromStr>(line: usize, s: &str) -> Result<T, ParseError> {
    s.parse().map_err(|_| ParseError::new(line, format!("expected an integer, found `{s}`")))
}

fn field<'a>(line: usize, s: &'a str, key: &str) -> Result<&'a str, ParseError> {
    s.strip_prefix(key)
        .and_then(|r| r.strip_prefix('='))
        .ok_or_else(|| ParseError::new(line, format!("expected `{key}=…`, found `{s}`")))
}

fn generators(line: usize, s: &str) -> Result<Vec<Generator>, ParseError> {
    // names may contain commas inside tower parentheses
    let mut out = Vec::new();
    let mut depth = 0;
    let mut start = 0;
    let bytes = s.as_bytes();
    for i in 0..=bytes.len() {
        let c = bytes.get(i).copied();
        match c {
            Some(b'(') => depth += 1,
            Some(b')') => depth -= 1,
            Some(b',') | None if depth == 0 => {
                let g = &s[start..i];
                let (n, a) = g
                    .rsplit_once(':')
                    .ok_or_else(|| ParseError::new(line, format!("generator `{g}` lacks an annotation")))?;
                let name = GeneratorName::parse(n).map_err(|e| ParseError::new(line, format!("bad name `{}`", e.0)))?;
                let ann = Annotation::from_token(a)
                    .ok_or_else(|| ParseError::new(line, format!("unknown annotation `{a}`")))?;
                out.push(Generator::new(name, ann));
                start = i + 1;
            }
            _ => {}
        }
    }
    Ok(out)
}

fn matrix(line: usize, shape: &str, body: Option<&str>) -> Result<IntMatrix, ParseError> {
    let (r, c) = shape.split_once('x').ok_or_else(|| ParseError::new(line, format!("bad shape `{shape}`")))?;
    let (r, c): (usize, usize) = (int(line, r)?, int(line, c)?);
    let rows: Vec<Vec<BigInt>> = match body {
        Some(b) => b
            .split(';')
            .map(|row| row.split(',').map(|e| int::<BigInt>(line, e)).collect::<Result<Vec<_>, _>>())
            .collect::<Result<_, _>>()?,
        None => Vec::new(),
    };
    if rows.len() != r || rows.iter().any(|row| row.len() != c) {
        return Err(ParseError::new(line, format!("matrix entries do not match shape {r}x{c}")));
    }
    Ok(if r == 0 { IntMatrix::zeros(0, c) } else { IntMatrix::from_rows(&rows) })
}

pub fn parse(text: &str) -> Result<ChartDocument, ParseError> {
    let mut lines = content_lines(text);
    let mut header = |key: &str| -> Result<(usize, String), ParseError> {
        match lines.next() {
            Some((n, l)) => match l.strip_prefix(key) {
                Some(rest) if key == MAGIC && rest.is_empty() => Ok((n, String::new())),
                Some(rest) if rest.starts_with(' ') => Ok((n, rest.trim().to_string())),
                _ => Err(ParseError::new(n, format!("expected `{key}`, found `{l}`"))),
            },
            None => Err(ParseError::new(0, format!("missing `{key}`"))),
        }
    };
    header(MAGIC)?;
    let (_, theory) = header("theory")?;
    let (_, pipeline) = header("pipeline")?;
    let (n, w) = header("window")?;
    let w: Vec<i64> = w.split_whitespace().map(|t| int(n, t)).collect::<Result<_, _>>()?;
    let [x0, x1, y0, y1] = w[..] else {
        return Err(ParseError::new(n, "window takes four integers"));
    };
    let mut chart = Chart::new(Window::new(x0, x1, y0, y1));
    let mut last_entry: Option<Degree> = None;
    let mut ended = false;
    for (n, l) in lines {
        if ended {
            return Err(ParseError::new(n, "content after `end`"));
        }
        let w: Vec<&str> = l.split_whitespace().collect();
        let at = |i: usize, j: usize| -> Result<Degree, ParseError> { Ok(Degree::new(int(n, w[i])?, int(n, w[j])?)) };
        match w[0] {
            "entry" if w.len() == 6 => {
                let d = at(1, 2)?;
                if last_entry.is_some_and(|p| p >= d) {
                    return Err(ParseError::new(n, "entries must be sorted by (x, y) without repeats"));
                }
                last_entry = Some(d);
                let rank: usize = int(n, field(n, w[3], "rank")?)?;
                let tors = field(n, w[4], "torsion")?;
                let tors: Vec<u64> = if tors == "-" {
                    Vec::new()
                } else {
                    tors.split(',').map(|t| int(n, t)).collect::<Result<_, _>>()?
                };
                let entry = ChartEntry::new(generators(n, field(n, w[5], "gens")?)?);
                let mut declared = vec![0u64; rank];
                declared.extend(tors);
                if FgAbelian::from_orders(&declared) != entry.group || entry.is_zero() {
                    return Err(ParseError::new(
                        n,
                        format!("declared group does not match generators ({})", entry.group),
                    ));
                }
                chart.insert(d, entry).map_err(|e| ParseError::new(n, e.to_string()))?;
            }
            "map" if (6..=7).contains(&w.len()) => {
                let s =
                    Symbol::from_token(w[1]).ok_or_else(|| ParseError::new(n, format!("unknown symbol `{}`", w[1])))?;
                let m = matrix(n, w[4], w.get(5).copied())?;
                chart.set_map(s, at(2, 3)?, m).map_err(|e| ParseError::new(n, e.to_string()))?;
            }
            "ambiguous" if w.len() == 3 => {
                let d = at(1, 2)?;
                if chart.entry(d).is_none() {
                    return Err(ParseError::new(n, format!("ambiguous mark at {d} without an entry")));
                }
                chart.mark_ambiguous(d);
            }
            "end" if w.len() == 1 => ended = true,
            _ => return Err(ParseError::new(n, format!("unrecognized record `{l}`"))),
        }
    }
    if !ended {
        return Err(ParseError::new(text.lines().count(), "missing `end`"));
    }
    Ok(ChartDocument { theory, pipeline, chart })
}
