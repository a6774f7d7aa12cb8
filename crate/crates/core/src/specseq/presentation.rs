use std::collections::BTreeMap;
use std::fmt;
use std::ops::Add;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use super::SpecSeqError;
use crate::algebra::{smith_normal_form, IntMatrix};
use crate::grading::{Degree, Symbol, Window};

/// Trigrading `(s, t, b)`; the chart shadow is `(s + t, b)`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TriDegree {
    pub s: i64,
    pub t: i64,
    pub b: i64,
}

impl TriDegree {
    pub const fn new(s: i64, t: i64, b: i64) -> Self {
        TriDegree { s, t, b }
    }

    pub fn chart(self) -> Degree {
        Degree::new(self.s + self.t, self.b)
    }

    pub fn scale(self, k: i64) -> TriDegree {
        TriDegree::new(self.s * k, self.t * k, self.b * k)
    }

    /// Tridegree of `d^r`.
    pub fn differential(r: u32) -> TriDegree {
        let r = r as i64;
        TriDegree::new(-r, r - 1, 0)
    }
}

impl Add for TriDegree {
    type Output = TriDegree;
    fn add(self, o: TriDegree) -> TriDegree {
        TriDegree::new(self.s + o.s, self.t + o.t, self.b + o.b)
    }
}

impl fmt::Display for TriDegree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.s, self.t, self.b)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratorSpec {
    pub name: String,
    pub degree: TriDegree,
    pub invertible: bool,
    /// Koszul parity.
    pub odd: bool,
    pub symbol: Option<Symbol>,
}

impl GeneratorSpec {
    /// Parity defaults to that of `s + t`.
    pub fn new(name: &str, degree: TriDegree, invertible: bool) -> Self {
        GeneratorSpec {
            name: name.to_string(),
            degree,
            invertible,
            odd: (degree.s + degree.t).rem_euclid(2) == 1,
            symbol: Symbol::from_token(name),
        }
    }

    pub fn with_parity(mut self, odd: bool) -> Self {
        self.odd = odd;
        self
    }
}

/// `name = base^power`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AliasSpec {
    pub name: String,
    pub base: usize,
    pub power: i64,
    pub symbol: Option<Symbol>,
}

/// Exponent vector over the presentation's generators.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial(pub Vec<i64>);

impl Monomial {
    pub fn unit(n: usize) -> Self {
        Monomial(vec![0; n])
    }

    pub fn exps(&self) -> &[i64] {
        &self.0
    }
}

/// Integer combination of monomials.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Polynomial {
    terms: BTreeMap<Monomial, BigInt>,
}

impl Polynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn term(c: impl Into<BigInt>, m: Monomial) -> Self {
        let mut p = Self::zero();
        p.add_term(c.into(), m);
        p
    }

    pub fn add_term(&mut self, c: BigInt, m: Monomial) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(m).or_insert_with(BigInt::zero);
        *e += c;
        if e.is_zero() {
            self.terms.retain(|_, v| !v.is_zero());
        }
    }

    pub fn add(&mut self, other: &Polynomial) {
        for (m, c) in &other.terms {
            self.add_term(c.clone(), m.clone());
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigInt)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn scale(&self, c: &BigInt) -> Polynomial {
        let mut p = Polynomial::zero();
        for (m, x) in &self.terms {
            p.add_term(x * c, m.clone());
        }
        p
    }
}

/// A free graded-commutative algebra on named generators, some invertible,
/// with aliases `u = λ²`-style for powers of a generator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Presentation {
    generators: Vec<GeneratorSpec>,
    aliases: Vec<AliasSpec>,
}

/// A factor of the Leibniz alphabet: a generator or an alias.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Factor {
    Generator(usize),
    Alias(usize),
}

impl Presentation {
    pub fn new(generators: Vec<GeneratorSpec>, aliases: Vec<AliasSpec>) -> Result<Self, SpecSeqError> {
        let mut names: Vec<&str> = generators.iter().map(|g| g.name.as_str()).collect();
        names.extend(aliases.iter().map(|a| a.name.as_str()));
        let mut sorted = names.clone();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != names.len() {
            return Err(SpecSeqError::Presentation("duplicate generator or alias name".into()));
        }
        for a in &aliases {
            if a.base >= generators.len() || a.power < 1 {
                return Err(SpecSeqError::Presentation(format!("invalid alias `{}`", a.name)));
            }
        }
        let p = Presentation { generators, aliases };
        if p.degree_matrix().rank() < p.generators.len() {
            return Err(SpecSeqError::Presentation(
                "generator tridegrees are linearly dependent; monomials per tridegree would be unbounded".into(),
            ));
        }
        Ok(p)
    }

    pub fn generators(&self) -> &[GeneratorSpec] {
        &self.generators
    }

    pub fn aliases(&self) -> &[AliasSpec] {
        &self.aliases
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn factor(&self, name: &str) -> Option<Factor> {
        if let Some(i) = self.generators.iter().position(|g| g.name == name) {
            return Some(Factor::Generator(i));
        }
        self.aliases.iter().position(|a| a.name == name).map(Factor::Alias)
    }

    pub fn factor_name(&self, f: Factor) -> &str {
        match f {
            Factor::Generator(i) => &self.generators[i].name,
            Factor::Alias(i) => &self.aliases[i].name,
        }
    }

    /// `(base generator, power)`.
    pub fn factor_base(&self, f: Factor) -> (usize, i64) {
        match f {
            Factor::Generator(i) => (i, 1),
            Factor::Alias(i) => (self.aliases[i].base, self.aliases[i].power),
        }
    }

    pub fn factor_degree(&self, f: Factor) -> TriDegree {
        let (g, p) = self.factor_base(f);
        self.generators[g].degree.scale(p)
    }

    pub fn factor_odd(&self, f: Factor) -> bool {
        let (g, p) = self.factor_base(f);
        self.generators[g].odd && p % 2 != 0
    }

    pub fn factor_symbol(&self, f: Factor) -> Option<Symbol> {
        match f {
            Factor::Generator(i) => self.generators[i].symbol,
            Factor::Alias(i) => self.aliases[i].symbol,
        }
    }

    pub fn factor_by_symbol(&self, s: Symbol) -> Option<Factor> {
        (0..self.generators.len())
            .map(Factor::Generator)
            .chain((0..self.aliases.len()).map(Factor::Alias))
            .find(|&f| self.factor_symbol(f) == Some(s))
    }

    /// E¹ monomial of `f^k`.
    pub fn factor_power(&self, f: Factor, k: i64) -> Monomial {
        let (g, p) = self.factor_base(f);
        let mut m = Monomial::unit(self.len());
        m.0[g] = p * k;
        m
    }

    pub fn degree(&self, m: &Monomial) -> TriDegree {
        m.0.iter().zip(&self.generators).fold(TriDegree::default(), |acc, (&e, g)| acc + g.degree.scale(e))
    }

    pub fn is_valid(&self, m: &Monomial) -> bool {
        m.0.len() == self.len() && m.0.iter().zip(&self.generators).all(|(&e, g)| g.invertible || e >= 0)
    }

    /// Product in canonical order, with the Koszul sign from reordering.
    pub fn mul(&self, a: &Monomial, b: &Monomial) -> (i64, Monomial) {
        let n = self.len();
        let mut parity = 0i64;
        for g in 0..n {
            if !self.generators[g].odd || a.0[g].rem_euclid(2) == 0 {
                continue;
            }
            for h in 0..g {
                if self.generators[h].odd && b.0[h].rem_euclid(2) == 1 {
                    parity += 1;
                }
            }
        }
        let m = Monomial(a.0.iter().zip(&b.0).map(|(x, y)| x + y).collect());
        (if parity % 2 == 0 { 1 } else { -1 }, m)
    }

    fn degree_matrix(&self) -> IntMatrix {
        // rows: s, chart x = s + t, b
        let mut m = IntMatrix::zeros(3, self.len());
        for (j, g) in self.generators.iter().enumerate() {
            m.set(0, j, g.degree.s.into());
            m.set(1, j, (g.degree.s + g.degree.t).into());
            m.set(2, j, g.degree.b.into());
        }
        m
    }

    /// All valid monomials whose tridegree has `s` in `[s_min, s_max]` and
    /// chart shadow in `window`.
    pub fn enumerate(&self, window: Window, s_min: i64, s_max: i64) -> BTreeMap<TriDegree, Vec<Monomial>> {
        let mut out: BTreeMap<TriDegree, Vec<Monomial>> = BTreeMap::new();
        if window.is_empty() || s_min > s_max {
            return out;
        }
        let n = self.len();
        if n == 0 {
            if window.contains(Degree::new(0, 0)) && (s_min..=s_max).contains(&0) {
                out.insert(TriDegree::default(), vec![Monomial::unit(0)]);
            }
            return out;
        }
        let d = self.degree_matrix();
        let smith = smith_normal_form(&d);
        let diag = smith.invariant_factors();
        for s in s_min..=s_max {
            for x in window.x_min..=window.x_max {
                for b in window.y_min..=window.y_max {
                    let target = [BigInt::from(s), BigInt::from(x), BigInt::from(b)];
                    let w = smith.left.apply(&target);
                    if w[diag.len()..].iter().any(|v| !v.is_zero()) {
                        continue;
                    }
                    let mut z = vec![BigInt::zero(); n];
                    let mut ok = true;
                    for (i, di) in diag.iter().enumerate() {
                        if !(&w[i] % di).is_zero() {
                            ok = false;
                            break;
                        }
                        z[i] = &w[i] / di;
                    }
                    if !ok {
                        continue;
                    }
                    let e = smith.right.apply(&z);
                    let m = Monomial(e.iter().map(|v| v.to_i64().expect("exponent fits in i64")).collect());
                    if self.is_valid(&m) {
                        let tau = TriDegree::new(s, x - s, b);
                        debug_assert_eq!(self.degree(&m), tau);
                        out.entry(tau).or_default().push(m);
                    }
                }
            }
        }
        out
    }

    /// Whether truncating `s` from below (resp. above) can cut off monomials.
    pub fn open_ends(&self) -> (bool, bool) {
        let mut below = false;
        let mut above = false;
        for g in &self.generators {
            let s = g.degree.s;
            if g.invertible && s != 0 {
                below = true;
                above = true;
            } else if s < 0 {
                below = true;
            } else if s > 0 {
                above = true;
            }
        }
        (below, above)
    }
}
