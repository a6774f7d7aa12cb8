use std::fmt::Write;

use crate::grading::{Annotation, Chart, ChartEntry, Degree, Symbol};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RenderFormat {
    Svg,
    Text,
}

impl std::str::FromStr for RenderFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "svg" => Ok(RenderFormat::Svg),
            "text" => Ok(RenderFormat::Text),
            _ => Err(format!("unknown render format `{s}`")),
        }
    }
}

pub fn render(c: &Chart, format: RenderFormat) -> String {
    match format {
        RenderFormat::Svg => svg(c),
        RenderFormat::Text => text(c),
    }
}

fn glyph(e: &ChartEntry) -> char {
    match e.generators[..] {
        [ref g] => match g.annotation {
            Annotation::Square => '□',
            Annotation::Circle => '○',
            Annotation::Dot => '·',
            Annotation::Cyclic(_) => '◇',
        },
        ref gs if gs.len() <= 9 => char::from_digit(gs.len() as u32, 10).expect("digit"),
        _ => '+',
    }
}

fn text(c: &Chart) -> String {
    let w = c.window();
    let mut out = String::new();
    if w.is_empty() {
        return "empty window\n".into();
    }
    let label = |y: i64| y.to_string();
    let lw = (w.y_min..=w.y_max).map(|y| label(y).len()).max().unwrap_or(1);
    writeln!(out, "{:>lw$} Z·σ", "").unwrap();
    for y in (w.y_min..=w.y_max).rev() {
        let mut row = format!("{:>lw$} ", label(y));
        for x in w.x_min..=w.x_max {
            let d = Degree::new(x, y);
            row.push(match c.entry(d) {
                Some(e) => glyph(e),
                None if x == 0 && y == 0 => '┼',
                None if x == 0 => '│',
                None if y == 0 => '─',
                None => ' ',
            });
        }
        writeln!(out, "{}", row.trim_end()).unwrap();
    }
    let mut ticks = format!("{:>lw$} ", "");
    let mut labels = ticks.clone();
    for x in w.x_min..=w.x_max {
        let on = x.rem_euclid(4) == 0;
        ticks.push(if on { '╵' } else { ' ' });
        if on && labels.chars().count() <= lw + 1 + (x - w.x_min) as usize {
            while labels.chars().count() < lw + 1 + (x - w.x_min) as usize {
                labels.push(' ');
            }
            labels.push_str(&x.to_string());
        }
    }
    writeln!(out, "{}", ticks.trim_end()).unwrap();
    writeln!(out, "{}   Z·1", labels.trim_end()).unwrap();
    writeln!(out, "□ Z   ○ Z (index 2)   · Z/2   ◇ Z/n   digit: number of summands").unwrap();
    out
}

const CELL: i64 = 20;
const MARGIN: i64 = 40;

fn svg(c: &Chart) -> String {
    let w = c.window();
    let (nx, ny) = if w.is_empty() { (0, 0) } else { (w.x_max - w.x_min + 1, w.y_max - w.y_min + 1) };
    let (width, height) = (2 * MARGIN + nx * CELL, 2 * MARGIN + ny * CELL);
    let cx = |x: i64| MARGIN + (x - w.x_min) * CELL + CELL / 2;
    let cy = |y: i64| MARGIN + (w.y_max - y) * CELL + CELL / 2;
    let mut out = String::new();
    writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{width}" height="{height}" viewBox="0 0 {width} {height}">"#
    )
    .unwrap();
    writeln!(out, r#"<rect x="0" y="0" width="{width}" height="{height}" fill="white"/>"#).unwrap();
    if !w.is_empty() {
        let (left, right) = (MARGIN, MARGIN + nx * CELL);
        let (top, bottom) = (MARGIN, MARGIN + ny * CELL);
        for x in w.x_min..=w.x_max {
            if x.rem_euclid(4) == 0 {
                writeln!(
                    out,
                    r#"<text x="{}" y="{}" font-size="10" text-anchor="middle">{x}</text>"#,
                    cx(x),
                    bottom + 14
                )
                .unwrap();
            }
        }
        for y in w.y_min..=w.y_max {
            if y.rem_euclid(4) == 0 {
                writeln!(
                    out,
                    r#"<text x="{}" y="{}" font-size="10" text-anchor="end">{y}</text>"#,
                    left - 4,
                    cy(y) + 3
                )
                .unwrap();
            }
        }
        if w.y_min <= 0 && 0 <= w.y_max {
            writeln!(out, r#"<line x1="{left}" y1="{0}" x2="{right}" y2="{0}" stroke="gray"/>"#, cy(0)).unwrap();
        }
        if w.x_min <= 0 && 0 <= w.x_max {
            writeln!(out, r#"<line x1="{0}" y1="{top}" x2="{0}" y2="{bottom}" stroke="gray"/>"#, cx(0)).unwrap();
        }
        writeln!(out, r#"<text x="{}" y="{}" font-size="12">Z·1</text>"#, right + 4, bottom - 4).unwrap();
        writeln!(out, r#"<text x="{}" y="{}" font-size="12">Z·σ</text>"#, left, top - 8).unwrap();
    }
    for (s, d, _) in c.maps() {
        if !matches!(s, Symbol::A | Symbol::VBar) {
            continue;
        }
        let t = d + s.degree();
        writeln!(out, r#"<line x1="{}" y1="{}" x2="{}" y2="{}" stroke="black"/>"#, cx(d.x), cy(d.y), cx(t.x), cy(t.y))
            .unwrap();
    }
    for (d, e) in c.entries() {
        let n = e.generators.len() as i64;
        for (i, g) in e.generators.iter().enumerate() {
            let off = (2 * i as i64 - (n - 1)) * 4;
            let (x, y) = (cx(d.x) + off, cy(d.y));
            match g.annotation {
                Annotation::Square => {
                    writeln!(
                        out,
                        r#"<rect x="{}" y="{}" width="10" height="10" fill="white" stroke="black"/>"#,
                        x - 5,
                        y - 5
                    )
                }
                Annotation::Circle => {
                    writeln!(out, r#"<circle cx="{x}" cy="{y}" r="6" fill="white" stroke="black"/>"#)
                }
                Annotation::Dot => writeln!(out, r#"<circle cx="{x}" cy="{y}" r="3" fill="red" stroke="black"/>"#),
                Annotation::Cyclic(k) => {
                    writeln!(out, r#"<text x="{x}" y="{}" font-size="9" text-anchor="middle">{k}</text>"#, y + 3)
                }
            }
            .unwrap();
        }
    }
    out.push_str("</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grading::{closed_form_hz, closed_form_kr, Window};

    #[test]
    fn text_glyphs() {
        let t = render(&closed_form_hz(Window::square(2)), RenderFormat::Text);
        let rows: Vec<&str> = t.lines().collect();
        assert_eq!(rows[1], " 2 ○ │");
        assert_eq!(rows[3], " 0 ──□──");
        assert_eq!(rows[4], "-1   ·");
        assert!(t.contains("Z·1") && t.contains("Z·σ"));
    }

    #[test]
    fn svg_has_unit_square_and_dots() {
        let s = render(&closed_form_hz(Window::square(4)), RenderFormat::Svg);
        // (0,0) sits at cell centre (40+4*20+10, 40+4*20+10)
        assert!(s.contains(r#"<rect x="125" y="125" width="10" height="10""#));
        // a-column under 1, two classes under u, towers at x = -3
        assert_eq!(s.matches(r#"fill="red""#).count(), 4 + 2 + 2);
        let k = render(&closed_form_kr(Window::square(4)), RenderFormat::Svg);
        assert!(k.matches("<line").count() > 6);
    }

    #[test]
    fn empty_chart_axes_only() {
        let s = render(&Chart::new(Window::square(3)), RenderFormat::Svg);
        assert!(!s.contains("<circle") && s.contains("Z·1"));
        assert_eq!(s.matches("<line").count(), 2);
    }
}
