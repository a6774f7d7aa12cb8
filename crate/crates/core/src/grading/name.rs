use std::fmt;

use super::Degree;

/// Alphabet of named classes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Symbol {
    A,
    Lambda,
    SmallU,
    BigU,
    VBar,
    VHat,
    SmallY,
    BigY,
    XPhi,
}

impl Symbol {
    pub const ALL: [Symbol; 9] = [
        Symbol::A,
        Symbol::Lambda,
        Symbol::SmallU,
        Symbol::BigU,
        Symbol::VBar,
        Symbol::VHat,
        Symbol::SmallY,
        Symbol::BigY,
        Symbol::XPhi,
    ];

    pub fn degree(self) -> Degree {
        match self {
            Symbol::A => Degree::new(0, -1),
            Symbol::Lambda => Degree::new(1, -1),
            Symbol::SmallU => Degree::new(2, -2),
            Symbol::BigU => Degree::new(4, -4),
            Symbol::VBar | Symbol::VHat => Degree::new(1, 1),
            Symbol::SmallY => Degree::new(-2, 0),
            Symbol::BigY => Degree::new(-4, 0),
            Symbol::XPhi => Degree::new(2, 0),
        }
    }

    pub fn token(self) -> &'static str {
        match self {
            Symbol::A => "a",
            Symbol::Lambda => "l",
            Symbol::SmallU => "u",
            Symbol::BigU => "U",
            Symbol::VBar => "vb",
            Symbol::VHat => "vh",
            Symbol::SmallY => "y",
            Symbol::BigY => "Y",
            Symbol::XPhi => "xphi",
        }
    }

    pub fn pretty(self) -> &'static str {
        match self {
            Symbol::A => "a",
            Symbol::Lambda => "λ",
            Symbol::SmallU => "u",
            Symbol::BigU => "U",
            Symbol::VBar => "v̄",
            Symbol::VHat => "v̂",
            Symbol::SmallY => "y",
            Symbol::BigY => "Y",
            Symbol::XPhi => "x_Φ",
        }
    }

    pub fn from_token(s: &str) -> Option<Symbol> {
        Symbol::ALL.into_iter().find(|sym| sym.token() == s)
    }

    /// Symbols that label chart structure maps.
    pub fn is_structure_map(self) -> bool {
        matches!(self, Symbol::A | Symbol::SmallU | Symbol::BigU | Symbol::VBar)
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.token())
    }
}

/// Which dual a-tower a tower element belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TowerKind {
    /// `t(j, y)` at `(-2j-1, y)`.
    Hz,
    /// `T(k, y)` at `(-4k-1, y)`.
    Kr,
}

/// Canonical generator label.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GeneratorName {
    /// `coeff · Π symbol^exp`, symbols ascending, no zero exponents.
    Monomial {
        coeff: i64,
        powers: Vec<(Symbol, i64)>,
    },
    Tower {
        kind: TowerKind,
        index: i64,
        height: i64,
    },
    Anonymous(u32),
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
#[error("malformed generator name `{0}`")]
pub struct NameParseError(pub String);

impl GeneratorName {
    pub fn monomial(coeff: i64, powers: &[(Symbol, i64)]) -> Self {
        let mut p: Vec<(Symbol, i64)> = Vec::new();
        for &(s, e) in powers {
            match p.iter_mut().find(|(t, _)| *t == s) {
                Some((_, x)) => *x += e,
                None => p.push((s, e)),
            }
        }
        p.retain(|&(_, e)| e != 0);
        p.sort();
        GeneratorName::Monomial { coeff, powers: p }
    }

    pub fn one() -> Self {
        Self::monomial(1, &[])
    }

    pub fn tower(kind: TowerKind, index: i64, height: i64) -> Self {
        GeneratorName::Tower { kind, index, height }
    }

    pub fn exponent(&self, s: Symbol) -> i64 {
        match self {
            GeneratorName::Monomial { powers, .. } => powers.iter().find(|(t, _)| *t == s).map_or(0, |&(_, e)| e),
            _ => 0,
        }
    }

    pub fn coeff(&self) -> Option<i64> {
        match self {
            GeneratorName::Monomial { coeff, .. } => Some(*coeff),
            _ => None,
        }
    }

    /// Multiply a monomial name by `s^e`; other names are returned as-is.
    pub fn times(&self, s: Symbol, e: i64) -> Self {
        match self {
            GeneratorName::Monomial { coeff, powers } => {
                let mut p = powers.clone();
                p.push((s, e));
                Self::monomial(*coeff, &p)
            }
            other => other.clone(),
        }
    }

    pub fn degree(&self) -> Option<Degree> {
        match self {
            GeneratorName::Monomial { powers, .. } => {
                Some(powers.iter().fold(Degree::default(), |acc, &(s, e)| acc + s.degree().scale(e)))
            }
            GeneratorName::Tower { kind: TowerKind::Hz, index, height } => Some(Degree::new(-2 * index - 1, *height)),
            GeneratorName::Tower { kind: TowerKind::Kr, index, height } => Some(Degree::new(-4 * index - 1, *height)),
            GeneratorName::Anonymous(_) => None,
        }
    }

    pub fn parse(s: &str) -> Result<Self, NameParseError> {
        let err = || NameParseError(s.to_string());
        if let Some(rest) = s.strip_prefix('g') {
            if !rest.is_empty() && rest.bytes().all(|b| b.is_ascii_digit()) {
                return rest.parse().map(GeneratorName::Anonymous).map_err(|_| err());
            }
        }
        for (prefix, kind) in [("t(", TowerKind::Hz), ("T(", TowerKind::Kr)] {
            if let Some(body) = s.strip_prefix(prefix) {
                let body = body.strip_suffix(')').ok_or_else(err)?;
                let (i, h) = body.split_once(',').ok_or_else(err)?;
                let index = i.parse().map_err(|_| err())?;
                let height = h.parse().map_err(|_| err())?;
                return Ok(GeneratorName::tower(kind, index, height));
            }
        }
        let mut coeff = 1i64;
        let mut powers = Vec::new();
        for (i, part) in s.split('.').enumerate() {
            if part.is_empty() {
                return Err(err());
            }
            if i == 0 && part.bytes().next().is_some_and(|b| b == b'-' || b.is_ascii_digit()) {
                coeff = part.parse().map_err(|_| err())?;
                continue;
            }
            let (sym, e) = match part.split_once('^') {
                Some((a, b)) => (a, b.parse::<i64>().map_err(|_| err())?),
                None => (part, 1),
            };
            let sym = Symbol::from_token(sym).ok_or_else(err)?;
            if e == 0 || powers.iter().any(|&(t, _)| t == sym) {
                return Err(err());
            }
            powers.push((sym, e));
        }
        let name = Self::monomial(coeff, &powers);
        if name.to_string() != s {
            return Err(err());
        }
        Ok(name)
    }

    /// Human-readable rendering with superscripts.
    pub fn pretty(&self) -> String {
        match self {
            GeneratorName::Monomial { coeff, powers } => {
                let mut out = String::new();
                if *coeff != 1 || powers.is_empty() {
                    out.push_str(&coeff.to_string());
                }
                for &(s, e) in powers {
                    out.push_str(s.pretty());
                    if e != 1 {
                        out.push_str(&superscript(e));
                    }
                }
                out
            }
            GeneratorName::Tower { kind: TowerKind::Hz, index, height } => format!("t({index},{height})"),
            GeneratorName::Tower { kind: TowerKind::Kr, index, height } => format!("T({index},{height})"),
            GeneratorName::Anonymous(i) => format!("g{i}"),
        }
    }
}

fn superscript(e: i64) -> String {
    e.to_string()
        .chars()
        .map(|c| match c {
            '-' => '⁻',
            '0' => '⁰',
            '1' => '¹',
            '2' => '²',
            '3' => '³',
            '4' => '⁴',
            '5' => '⁵',
            '6' => '⁶',
            '7' => '⁷',
            '8' => '⁸',
            _ => '⁹',
        })
        .collect()
}

impl fmt::Display for GeneratorName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GeneratorName::Monomial { coeff, powers } => {
                let mut parts = Vec::new();
                if *coeff != 1 || powers.is_empty() {
                    parts.push(coeff.to_string());
                }
                for &(s, e) in powers {
                    parts.push(if e == 1 { s.token().to_string() } else { format!("{}^{}", s.token(), e) });
                }
                f.write_str(&parts.join("."))
            }
            GeneratorName::Tower { kind: TowerKind::Hz, index, height } => write!(f, "t({index},{height})"),
            GeneratorName::Tower { kind: TowerKind::Kr, index, height } => write!(f, "T({index},{height})"),
            GeneratorName::Anonymous(i) => write!(f, "g{i}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tokens_round_trip() {
        let names = [
            GeneratorName::one(),
            GeneratorName::monomial(2, &[(Symbol::SmallU, -1)]),
            GeneratorName::monomial(1, &[(Symbol::VBar, 2), (Symbol::A, 3), (Symbol::BigU, -1)]),
            GeneratorName::tower(TowerKind::Hz, 1, 5),
            GeneratorName::tower(TowerKind::Kr, 2, 9),
            GeneratorName::Anonymous(3),
        ];
        for n in names {
            assert_eq!(GeneratorName::parse(&n.to_string()), Ok(n));
        }
        assert_eq!(GeneratorName::monomial(1, &[(Symbol::A, 3), (Symbol::SmallU, 2)]).to_string(), "a^3.u^2");
    }

    #[test]
    fn rejects_noncanonical() {
        for bad in ["", "u.a", "a^0", "a.a", "q", "t(1)", "1.a"] {
            assert!(GeneratorName::parse(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn degrees_add() {
        let n = GeneratorName::monomial(1, &[(Symbol::A, 2), (Symbol::SmallU, -1)]);
        assert_eq!(n.degree(), Some(Degree::new(-2, 0)));
        assert_eq!(n.degree(), Some(Symbol::SmallY.degree()));
        assert_eq!(
            GeneratorName::monomial(1, &[(Symbol::A, 4), (Symbol::BigU, -1)]).degree(),
            Some(Symbol::BigY.degree())
        );
        assert_eq!(GeneratorName::tower(TowerKind::Hz, 1, 3).degree(), Some(Degree::new(-3, 3)));
    }

    #[test]
    fn pretty_uses_superscripts() {
        assert_eq!(GeneratorName::monomial(2, &[(Symbol::SmallU, -1)]).pretty(), "2u⁻¹");
        assert_eq!(GeneratorName::monomial(1, &[(Symbol::A, 1), (Symbol::VBar, 1)]).pretty(), "av̄");
    }
}
