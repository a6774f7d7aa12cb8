//! RO(Q) degrees, named generators, windowed charts with structure maps,
//! and the closed-form block-model charts.

mod closed;
mod name;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_bigint::BigInt;

use crate::algebra::{AbelianMap, FgAbelian, IntMatrix};

pub use closed::{closed_form_hz, closed_form_kr, BlockClass, HzClass, KrClass};
pub use name::{GeneratorName, NameParseError, Symbol, TowerKind};

/// The degree `x + yσ`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Degree {
    pub x: i64,
    pub y: i64,
}

impl Degree {
    pub const fn new(x: i64, y: i64) -> Self {
        Degree { x, y }
    }

    pub const SIGMA: Degree = Degree::new(0, 1);
    pub const RHO: Degree = Degree::new(1, 1);

    pub fn scale(self, k: i64) -> Degree {
        Degree::new(self.x * k, self.y * k)
    }
}

impl Add for Degree {
    type Output = Degree;
    fn add(self, o: Degree) -> Degree {
        Degree::new(self.x + o.x, self.y + o.y)
    }
}

impl Sub for Degree {
    type Output = Degree;
    fn sub(self, o: Degree) -> Degree {
        Degree::new(self.x - o.x, self.y - o.y)
    }
}

impl Neg for Degree {
    type Output = Degree;
    fn neg(self) -> Degree {
        Degree::new(-self.x, -self.y)
    }
}

impl fmt::Display for Degree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.x, self.y)
    }
}

/// Inclusive rectangle of degrees; empty when a minimum exceeds its maximum.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Window {
    pub x_min: i64,
    pub x_max: i64,
    pub y_min: i64,
    pub y_max: i64,
}

impl Window {
    pub const fn new(x_min: i64, x_max: i64, y_min: i64, y_max: i64) -> Self {
        Window { x_min, x_max, y_min, y_max }
    }

    pub const fn square(r: i64) -> Self {
        Window::new(-r, r, -r, r)
    }

    pub fn is_empty(&self) -> bool {
        self.x_min > self.x_max || self.y_min > self.y_max
    }

    pub fn contains(&self, d: Degree) -> bool {
        (self.x_min..=self.x_max).contains(&d.x) && (self.y_min..=self.y_max).contains(&d.y)
    }

    pub fn degrees(&self) -> impl Iterator<Item = Degree> + '_ {
        (self.x_min..=self.x_max).flat_map(move |x| (self.y_min..=self.y_max).map(move |y| Degree::new(x, y)))
    }

    pub fn expand(&self, left: i64, right: i64, down: i64, up: i64) -> Window {
        Window::new(self.x_min - left, self.x_max + right, self.y_min - down, self.y_max + up)
    }

    pub fn intersect(&self, o: &Window) -> Window {
        Window::new(self.x_min.max(o.x_min), self.x_max.min(o.x_max), self.y_min.max(o.y_min), self.y_max.min(o.y_max))
    }

    pub fn covers(&self, o: &Window) -> bool {
        o.is_empty()
            || (self.x_min <= o.x_min && o.x_max <= self.x_max && self.y_min <= o.y_min && o.y_max <= self.y_max)
    }
}

impl fmt::Display for Window {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}..{}]x[{}..{}]", self.x_min, self.x_max, self.y_min, self.y_max)
    }
}

/// Chart glyph: squares and circles are copies of `Z` (a circle is twice the
/// expected generator), dots are `Z/2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Annotation {
    Square,
    Circle,
    Dot,
    Cyclic(u64),
}

impl Annotation {
    pub fn order(self) -> u64 {
        match self {
            Annotation::Square | Annotation::Circle => 0,
            Annotation::Dot => 2,
            Annotation::Cyclic(n) => n,
        }
    }

    /// Default glyph for a bare cyclic group of the given order.
    pub fn for_order(order: u64) -> Annotation {
        match order {
            0 => Annotation::Square,
            2 => Annotation::Dot,
            n => Annotation::Cyclic(n),
        }
    }

    pub fn token(self) -> String {
        match self {
            Annotation::Square => "sq".into(),
            Annotation::Circle => "ci".into(),
            Annotation::Dot => "dot".into(),
            Annotation::Cyclic(n) => format!("z{n}"),
        }
    }

    pub fn from_token(s: &str) -> Option<Annotation> {
        match s {
            "sq" => Some(Annotation::Square),
            "ci" => Some(Annotation::Circle),
            "dot" => Some(Annotation::Dot),
            _ => {
                let n: u64 = s.strip_prefix('z')?.parse().ok()?;
                (n > 2).then_some(Annotation::Cyclic(n))
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Generator {
    pub name: GeneratorName,
    pub annotation: Annotation,
}

impl Generator {
    pub fn new(name: GeneratorName, annotation: Annotation) -> Self {
        Generator { name, annotation }
    }

    pub fn order(&self) -> u64 {
        self.annotation.order()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChartEntry {
    pub group: FgAbelian,
    pub generators: Vec<Generator>,
}

impl ChartEntry {
    pub fn new(generators: Vec<Generator>) -> Self {
        let orders: Vec<u64> = generators.iter().map(Generator::order).collect();
        ChartEntry { group: FgAbelian::from_orders(&orders), generators }
    }

    /// Anonymous generators matching the normal form of `group`.
    pub fn bare(group: &FgAbelian) -> Self {
        let gens = group
            .orders()
            .into_iter()
            .enumerate()
            .map(|(i, o)| Generator::new(GeneratorName::Anonymous(i as u32), Annotation::for_order(o)))
            .collect();
        ChartEntry::new(gens)
    }

    pub fn orders(&self) -> Vec<u64> {
        self.generators.iter().map(Generator::order).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.group.is_zero()
    }
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum ChartError {
    #[error("degree {0} lies outside the chart window")]
    OutOfWindow(Degree),
    #[error("structure map {name} at {degree} has shape {found:?}, expected {expected:?}")]
    MapShape { name: Symbol, degree: Degree, expected: (usize, usize), found: (usize, usize) },
    #[error("{0} is not a structure-map generator")]
    NotAMap(Symbol),
}

/// Sparse windowed chart: absent entries are zero groups, absent structure
/// maps are zero maps.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Chart {
    window: Window,
    entries: BTreeMap<Degree, ChartEntry>,
    maps: BTreeMap<(Symbol, Degree), IntMatrix>,
    ambiguous: BTreeSet<Degree>,
}

impl Chart {
    pub fn new(window: Window) -> Self {
        Chart { window, entries: BTreeMap::new(), maps: BTreeMap::new(), ambiguous: BTreeSet::new() }
    }

    pub fn window(&self) -> Window {
        self.window
    }

    /// Stores a nonzero entry; zero entries are dropped.
    pub fn insert(&mut self, d: Degree, entry: ChartEntry) -> Result<(), ChartError> {
        if !self.window.contains(d) {
            return Err(ChartError::OutOfWindow(d));
        }
        self.maps.retain(|(s, src), _| *src != d && *src + s.degree() != d);
        if entry.is_zero() {
            self.entries.remove(&d);
        } else {
            self.entries.insert(d, entry);
        }
        Ok(())
    }

    pub fn remove(&mut self, d: Degree) {
        self.entries.remove(&d);
        self.ambiguous.remove(&d);
        self.maps.retain(|(s, src), _| *src != d && *src + s.degree() != d);
    }

    pub fn entry(&self, d: Degree) -> Option<&ChartEntry> {
        self.entries.get(&d)
    }

    pub fn group(&self, d: Degree) -> FgAbelian {
        self.entries.get(&d).map(|e| e.group.clone()).unwrap_or_default()
    }

    pub fn orders(&self, d: Degree) -> Vec<u64> {
        self.entries.get(&d).map(ChartEntry::orders).unwrap_or_default()
    }

    pub fn entries(&self) -> impl Iterator<Item = (Degree, &ChartEntry)> {
        self.entries.iter().map(|(d, e)| (*d, e))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn maps(&self) -> impl Iterator<Item = (Symbol, Degree, &IntMatrix)> {
        self.maps.iter().map(|((s, d), m)| (*s, *d, m))
    }

    pub fn mark_ambiguous(&mut self, d: Degree) {
        self.ambiguous.insert(d);
    }

    pub fn is_ambiguous(&self, d: Degree) -> bool {
        self.ambiguous.contains(&d)
    }

    pub fn ambiguous(&self) -> impl Iterator<Item = Degree> + '_ {
        self.ambiguous.iter().copied()
    }

    /// Stores the multiplication-by-`name` matrix from `d`; zero matrices are not stored.
    pub fn set_map(&mut self, name: Symbol, d: Degree, m: IntMatrix) -> Result<(), ChartError> {
        if !name.is_structure_map() {
            return Err(ChartError::NotAMap(name));
        }
        let t = d + name.degree();
        for e in [d, t] {
            if !self.window.contains(e) {
                return Err(ChartError::OutOfWindow(e));
            }
        }
        let expected = (self.orders(t).len(), self.orders(d).len());
        if m.shape() != expected {
            return Err(ChartError::MapShape { name, degree: d, expected, found: m.shape() });
        }
        let m = m.reduce_rows(&self.orders(t));
        if m.is_zero() {
            self.maps.remove(&(name, d));
        } else {
            self.maps.insert((name, d), m);
        }
        Ok(())
    }

    /// Matrix of multiplication by `name` from degree `d`, on the chosen bases.
    pub fn mult_map(&self, name: Symbol, d: Degree) -> Result<IntMatrix, ChartError> {
        if !name.is_structure_map() {
            return Err(ChartError::NotAMap(name));
        }
        let t = d + name.degree();
        for e in [d, t] {
            if !self.window.contains(e) {
                return Err(ChartError::OutOfWindow(e));
            }
        }
        Ok(self
            .maps
            .get(&(name, d))
            .cloned()
            .unwrap_or_else(|| IntMatrix::zeros(self.orders(t).len(), self.orders(d).len())))
    }

    pub fn abelian_map(&self, name: Symbol, d: Degree) -> Result<AbelianMap, ChartError> {
        let m = self.mult_map(name, d)?;
        let t = d + name.degree();
        Ok(AbelianMap::new(self.orders(d), self.orders(t), m).expect("stored structure map is well defined"))
    }

    /// Sub-chart on the intersection of windows, keeping maps with both ends inside.
    pub fn restrict(&self, w: Window) -> Chart {
        let window = self.window.intersect(&w);
        let mut c = Chart::new(window);
        for (d, e) in &self.entries {
            if window.contains(*d) {
                c.entries.insert(*d, e.clone());
            }
        }
        for ((s, d), m) in &self.maps {
            if window.contains(*d) && window.contains(*d + s.degree()) {
                c.maps.insert((*s, *d), m.clone());
            }
        }
        c.ambiguous = self.ambiguous.iter().copied().filter(|d| window.contains(*d)).collect();
        c
    }

    /// Degrees where `p∘q ≠ q∘p` for the two structure maps, over squares
    /// lying entirely in the window.
    pub fn commutation_failures(&self, p: Symbol, q: Symbol) -> Vec<Degree> {
        let mut bad = Vec::new();
        for d in self.window.degrees() {
            let far = d + p.degree() + q.degree();
            if !self.window.contains(d + p.degree())
                || !self.window.contains(d + q.degree())
                || !self.window.contains(far)
            {
                continue;
            }
            if self.group(d).is_zero() || self.group(far).is_zero() {
                continue;
            }
            let pq = self.mult_map(q, d + p.degree()).unwrap().mul(&self.mult_map(p, d).unwrap());
            let qp = self.mult_map(p, d + q.degree()).unwrap().mul(&self.mult_map(q, d).unwrap());
            let orders = self.orders(far);
            if pq.reduce_rows(&orders) != qp.reduce_rows(&orders) {
                bad.push(d);
            }
        }
        bad
    }

    /// Degreewise groups only, as a comparable map.
    pub fn groups(&self) -> BTreeMap<Degree, FgAbelian> {
        self.entries.iter().map(|(d, e)| (*d, e.group.clone())).collect()
    }
}

pub(crate) fn unit_vec(n: usize, i: usize) -> Vec<BigInt> {
    let mut v = vec![BigInt::from(0); n];
    v[i] = BigInt::from(1);
    v
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn window_membership() {
        let w = Window::square(2);
        assert!(w.contains(Degree::new(-2, 2)));
        assert!(!w.contains(Degree::new(3, 0)));
        assert_eq!(w.degrees().count(), 25);
        assert!(Window::new(1, 0, 0, 0).is_empty());
    }

    #[test]
    fn out_of_window_map_is_an_error() {
        let c = closed_form_hz(Window::square(2));
        assert_eq!(c.mult_map(Symbol::A, Degree::new(0, -2)), Err(ChartError::OutOfWindow(Degree::new(0, -3))));
    }

    #[test]
    fn zero_map_when_entry_vanishes() {
        let c = closed_form_hz(Window::square(4));
        let m = c.mult_map(Symbol::A, Degree::new(-2, 2)).unwrap();
        assert_eq!(m.shape(), (0, 1));
    }
}
