use std::sync::Arc;

use num_bigint::BigInt;

use super::{content_lines, ParseError};
use crate::grading::Symbol;
use crate::specseq::{AliasSpec, Assignment, GeneratorSpec, Monomial, Polynomial, Presentation, TriDegree};
use crate::theories::{Theory, TheorySeed};

const MAGIC: &str = "roq-seed v1";

fn int(line: usize, s: &str) -> Result<i64, ParseError> {
    s.parse().map_err(|_| ParseError::new(line, format!("expected an integer, found `{s}`")))
}

fn flag(line: usize, s: &str) -> Result<bool, ParseError> {
    match s {
        "true" => Ok(true),
        "false" => Ok(false),
        _ => Err(ParseError::new(line, format!("expected true or false, found `{s}`"))),
    }
}

fn theory(line: usize, s: &str) -> Result<Theory, ParseError> {
    Theory::from_token(s).ok_or_else(|| ParseError::new(line, format!("unknown theory `{s}`")))
}

fn term(line: usize, pres: &Presentation, s: &str) -> Result<(BigInt, Monomial), ParseError> {
    let mut coeff = BigInt::from(1);
    let mut exps = vec![0i64; pres.len()];
    for (i, f) in s.split('*').enumerate() {
        let f = f.trim();
        if i == 0 {
            if let Ok(c) = f.parse::<BigInt>() {
                coeff = c;
                continue;
            }
        }
        let (name, e) = match f.split_once('^') {
            Some((n, e)) => (n, int(line, e)?),
            None => (f, 1),
        };
        let fac = pres.factor(name).ok_or_else(|| ParseError::new(line, format!("unknown factor `{name}`")))?;
        for (x, y) in exps.iter_mut().zip(pres.factor_power(fac, e).exps()) {
            *x += y;
        }
    }
    Ok((coeff, Monomial(exps)))
}

fn polynomial(line: usize, pres: &Presentation, s: &str) -> Result<Polynomial, ParseError> {
    let mut p = Polynomial::zero();
    let s = s.trim();
    if s == "0" {
        return Ok(p);
    }
    for t in s.replace(" - ", " + -").split(" + ") {
        let t = t.trim();
        let (c, m) = match t.strip_prefix('-') {
            Some(r) => {
                let (c, m) = term(line, pres, r)?;
                (-c, m)
            }
            None => term(line, pres, t)?,
        };
        p.add_term(c, m);
    }
    Ok(p)
}

/// Parses a declarative page presentation.
pub fn parse_seed(text: &str) -> Result<TheorySeed, ParseError> {
    let mut lines = content_lines(text);
    match lines.next() {
        Some((_, MAGIC)) => {}
        Some((n, l)) => return Err(ParseError::new(n, format!("expected `{MAGIC}`, found `{l}`"))),
        None => return Err(ParseError::new(1, "empty seed")),
    }
    let mut name = None;
    let mut closed = None;
    let mut connective = false;
    let mut two_torsion_a = false;
    let mut gens = Vec::new();
    let mut aliases = Vec::new();
    let mut maps = Vec::new();
    let mut pres: Option<Arc<Presentation>> = None;
    let mut pages: Vec<Vec<Assignment>> = Vec::new();
    let mut last = 0;
    for (n, l) in lines {
        last = n;
        let w: Vec<&str> = l.split_whitespace().collect();
        let need = |k: usize| {
            if w.len() == k {
                Ok(())
            } else {
                Err(ParseError::new(n, format!("`{}` takes {} fields", w[0], k - 1)))
            }
        };
        if pres.is_none() && matches!(w[0], "page" | "d") {
            pres = Some(Arc::new(
                Presentation::new(std::mem::take(&mut gens), std::mem::take(&mut aliases))
                    .map_err(|e| ParseError::new(n, e.to_string()))?,
            ));
        }
        match w[0] {
            "theory" => {
                need(2)?;
                name = Some(theory(n, w[1])?);
            }
            "closed" => {
                need(2)?;
                closed = Some(theory(n, w[1])?);
            }
            "connective" => {
                need(2)?;
                connective = flag(n, w[1])?;
            }
            "two-torsion-a" => {
                need(2)?;
                two_torsion_a = flag(n, w[1])?;
            }
            "generator" if pres.is_none() => {
                if !(5..=6).contains(&w.len()) {
                    return Err(ParseError::new(n, "generator takes a name, s, t, b and an optional flag"));
                }
                let t = TriDegree::new(int(n, w[2])?, int(n, w[3])?, int(n, w[4])?);
                let g = match w.get(5) {
                    None => GeneratorSpec::new(w[1], t, false),
                    Some(&"invertible") => GeneratorSpec::new(w[1], t, true),
                    Some(&"even") => GeneratorSpec::new(w[1], t, false).with_parity(false),
                    Some(&"odd") => GeneratorSpec::new(w[1], t, false).with_parity(true),
                    Some(f) => return Err(ParseError::new(n, format!("unknown generator flag `{f}`"))),
                };
                gens.push(g);
            }
            "alias" if pres.is_none() => {
                need(4)?;
                let base = gens
                    .iter()
                    .position(|g| g.name == w[2])
                    .ok_or_else(|| ParseError::new(n, format!("alias base `{}` is not a generator", w[2])))?;
                aliases.push(AliasSpec {
                    name: w[1].into(),
                    base,
                    power: int(n, w[3])?,
                    symbol: Symbol::from_token(w[1]),
                });
            }
            "maps" => {
                for t in &w[1..] {
                    let s = Symbol::from_token(t)
                        .filter(|s| s.is_structure_map())
                        .ok_or_else(|| ParseError::new(n, format!("`{t}` is not a structure map")))?;
                    maps.push(s);
                }
            }
            "page" => {
                need(2)?;
                let r = int(n, w[1])?;
                if r != pages.len() as i64 + 1 {
                    return Err(ParseError::new(n, format!("expected page {}, found {r}", pages.len() + 1)));
                }
                pages.push(Vec::new());
            }
            "d" => {
                let Some(page) = pages.last_mut() else {
                    return Err(ParseError::new(n, "differential before the first page"));
                };
                let (lhs, rhs) =
                    l[1..].split_once('=').ok_or_else(|| ParseError::new(n, "expected `d <factor> = <polynomial>`"))?;
                let p = pres.as_ref().expect("presentation built");
                let factor = lhs.trim().to_string();
                if p.factor(&factor).is_none() {
                    return Err(ParseError::new(n, format!("unknown factor `{factor}`")));
                }
                page.push(Assignment { factor, image: polynomial(n, p, rhs)? });
            }
            k => return Err(ParseError::new(n, format!("unexpected `{k}`"))),
        }
    }
    let presentation = match pres {
        Some(p) => p,
        None => Arc::new(Presentation::new(gens, aliases).map_err(|e| ParseError::new(last, e.to_string()))?),
    };
    let theory = name.ok_or_else(|| ParseError::new(last, "missing `theory`"))?;
    Ok(TheorySeed { theory, closed: closed.unwrap_or(theory), presentation, pages, maps, connective, two_torsion_a })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_seeds_parse() {
        let hz = parse_seed(include_str!("../../seeds/hz.seed")).unwrap();
        assert_eq!(hz.theory, Theory::Hz);
        assert_eq!(hz.pages.len(), 1);
        assert_eq!(hz.maps, vec![Symbol::A, Symbol::SmallU]);
        let kr = parse_seed(include_str!("../../seeds/kr.seed")).unwrap();
        assert_eq!(kr.presentation.len(), 3);
        assert_eq!(kr.pages.len(), 3);
        assert!(kr.pages[1].is_empty());
        let d3 = &kr.pages[2][0];
        assert_eq!(d3.factor, "u");
        assert_eq!(d3.image, Polynomial::term(1, Monomial(vec![3, 0, 1])));
    }

    #[test]
    fn polynomials_with_signs() {
        let kr = parse_seed(include_str!("../../seeds/kr.seed")).unwrap();
        let p = polynomial(1, &kr.presentation, "2*a - a^3*vb + U").unwrap();
        let mut want = Polynomial::term(2, Monomial(vec![1, 0, 0]));
        want.add_term(BigInt::from(-1), Monomial(vec![3, 0, 1]));
        want.add_term(BigInt::from(1), Monomial(vec![0, 4, 0]));
        assert_eq!(p, want);
    }

    #[test]
    fn errors_carry_line_numbers() {
        let bad = "roq-seed v1\ntheory hz\n\ngenerator a -1 1\n";
        assert_eq!(parse_seed(bad).unwrap_err().line, 4);
        let bad = "roq-seed v1\ntheory hz\ngenerator a -1 1 -1\npage 1\nd b = a\n";
        let e = parse_seed(bad).unwrap_err();
        assert_eq!((e.line, e.message.as_str()), (5, "unknown factor `b`"));
        assert_eq!(parse_seed("roq-chart v1").unwrap_err().line, 1);
    }
}
