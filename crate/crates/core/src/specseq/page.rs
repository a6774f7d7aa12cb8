use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use rayon::prelude::*;

use super::presentation::{Factor, Monomial, Polynomial, Presentation, TriDegree};
use super::SpecSeqError;
use crate::algebra::{lattice_basis, AbelianMap, FgAbelian, IntMatrix, Subquotient};
use crate::grading::{Annotation, Chart, ChartEntry, Degree, Generator, GeneratorName, Symbol, Window};

/// Truncation box of a page: chart shadow in `chart`, filtration in `[s_min, s_max]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PageWindow {
    pub chart: Window,
    pub s_min: i64,
    pub s_max: i64,
}

/// `E^r` at one tridegree: `Z_r / B_r` inside the free module on `basis`.
#[derive(Clone, Debug)]
pub struct Cell {
    basis: Vec<Monomial>,
    cycles: IntMatrix,
    boundaries: IntMatrix,
    quotient: Subquotient,
}

impl Cell {
    fn full(basis: Vec<Monomial>) -> Cell {
        let n = basis.len();
        let cycles = IntMatrix::identity(n);
        let boundaries = IntMatrix::zeros(n, 0);
        let quotient = Subquotient::new(n, &cycles, &boundaries);
        Cell { basis, cycles, boundaries, quotient }
    }

    pub fn basis(&self) -> &[Monomial] {
        &self.basis
    }

    pub fn group(&self) -> FgAbelian {
        self.quotient.group()
    }

    pub fn quotient(&self) -> &Subquotient {
        &self.quotient
    }

    pub fn cycles(&self) -> &IntMatrix {
        &self.cycles
    }

    pub fn boundaries(&self) -> &IntMatrix {
        &self.boundaries
    }

    fn vector(&self, p: &Polynomial) -> Option<Vec<BigInt>> {
        let mut v = vec![BigInt::zero(); self.basis.len()];
        for (m, c) in p.terms() {
            let i = self.basis.iter().position(|b| b == m)?;
            v[i] += c;
        }
        Some(v)
    }
}

/// A differential assignment `d^r(factor) = image`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Assignment {
    pub factor: String,
    pub image: Polynomial,
}

#[derive(Clone, Debug)]
struct Differential {
    /// E¹ images of the source generators, as vectors at the target cell.
    images: BTreeMap<TriDegree, Vec<Vec<BigInt>>>,
    maps: BTreeMap<TriDegree, AbelianMap>,
    nonzero: bool,
}

/// A possibly nonzero differential the page cannot rule out by degrees.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Candidate {
    pub r: u32,
    pub source: TriDegree,
    pub target: TriDegree,
}

/// Result of collapsing a page to a chart.
#[derive(Clone, Debug)]
pub struct Collapse {
    pub chart: Chart,
    /// Chart degrees fed by more than one filtration.
    pub multi_filtration: Vec<Degree>,
}

#[derive(Clone, Debug)]
pub struct Page {
    r: u32,
    pres: Arc<Presentation>,
    window: PageWindow,
    cells: BTreeMap<TriDegree, Cell>,
    alphabet: Vec<Factor>,
    differential: Option<Differential>,
    turns: i64,
    s_margin: i64,
}

impl Page {
    pub fn from_presentation(pres: Arc<Presentation>, window: PageWindow) -> Page {
        let cells = pres
            .enumerate(window.chart, window.s_min, window.s_max)
            .into_iter()
            .map(|(t, b)| (t, Cell::full(b)))
            .collect();
        let alphabet = (0..pres.len()).map(Factor::Generator).collect();
        Page { r: 1, pres, window, cells, alphabet, differential: None, turns: 0, s_margin: 0 }
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    pub fn presentation(&self) -> &Presentation {
        &self.pres
    }

    pub fn window(&self) -> PageWindow {
        self.window
    }

    pub fn cells(&self) -> impl Iterator<Item = (TriDegree, &Cell)> {
        self.cells.iter().map(|(t, c)| (*t, c))
    }

    pub fn cell(&self, t: TriDegree) -> Option<&Cell> {
        self.cells.get(&t)
    }

    pub fn group(&self, t: TriDegree) -> FgAbelian {
        self.cells.get(&t).map(Cell::group).unwrap_or_default()
    }

    /// Chart columns whose groups are unaffected by truncation.
    pub fn reliable_x(&self) -> (i64, i64) {
        (self.window.chart.x_min + self.turns, self.window.chart.x_max - self.turns)
    }

    pub fn reliable_s(&self) -> (i64, i64) {
        let (below, above) = self.pres.open_ends();
        let lo = if below { self.window.s_min + self.s_margin } else { self.window.s_min };
        let hi = if above { self.window.s_max - self.s_margin } else { self.window.s_max };
        (lo, hi)
    }

    pub fn is_reliable(&self, t: TriDegree) -> bool {
        let (xl, xh) = self.reliable_x();
        let (sl, sh) = self.reliable_s();
        let x = t.chart().x;
        xl <= x && x <= xh && sl <= t.s && t.s <= sh
    }

    pub fn monomial_label(&self, m: &Monomial) -> String {
        let parts: Vec<String> = m
            .exps()
            .iter()
            .zip(self.pres.generators())
            .filter(|(&e, _)| e != 0)
            .map(|(&e, g)| if e == 1 { g.name.clone() } else { format!("{}^{}", g.name, e) })
            .collect();
        if parts.is_empty() {
            "1".into()
        } else {
            parts.join("*")
        }
    }

    /// `d^r(m)` by the Leibniz rule over the current alphabet.
    pub fn leibniz(&self, m: &Monomial, dvals: &HashMap<Factor, Polynomial>) -> Result<Polynomial, SpecSeqError> {
        let pres = &*self.pres;
        let n = pres.len();
        let mut ks = Vec::with_capacity(n);
        for (g, &f) in self.alphabet.iter().enumerate() {
            let (_, p) = pres.factor_base(f);
            if m.0[g] % p != 0 {
                return Err(SpecSeqError::NotExpressible { monomial: self.monomial_label(m), r: self.r });
            }
            ks.push(m.0[g] / p);
        }
        let mut out = Polynomial::zero();
        let mut sign_parity = 0i64;
        for (g, &k) in ks.iter().enumerate() {
            let f = self.alphabet[g];
            let odd = pres.factor_odd(f);
            if k != 0 {
                if let Some(df) = dvals.get(&f) {
                    let (coeff, rest_k) =
                        if odd { (if k.rem_euclid(2) == 1 { 1 } else { 0 }, k - 1) } else { (k, k - 1) };
                    if coeff != 0 {
                        let mut prefix = Monomial::unit(n);
                        let mut suffix = Monomial::unit(n);
                        for h in 0..n {
                            if h < g {
                                prefix.0[h] = m.0[h];
                            } else if h > g {
                                suffix.0[h] = m.0[h];
                            }
                        }
                        let rest = pres.factor_power(f, rest_k);
                        let sign = if sign_parity % 2 == 0 { coeff } else { -coeff };
                        for (t, c) in df.terms() {
                            let (s1, p1) = pres.mul(&prefix, t);
                            let (s2, p2) = pres.mul(&p1, &rest);
                            let (s3, p3) = pres.mul(&p2, &suffix);
                            if !pres.is_valid(&p3) {
                                return Err(SpecSeqError::NotExpressible {
                                    monomial: self.monomial_label(&p3),
                                    r: self.r,
                                });
                            }
                            out.add_term(c * BigInt::from(sign * s1 * s2 * s3), p3);
                        }
                    }
                }
            }
            if odd && k.rem_euclid(2) == 1 {
                sign_parity += 1;
            }
        }
        Ok(out)
    }

    fn apply_leibniz(
        &self,
        v: &[BigInt],
        basis: &[Monomial],
        dvals: &HashMap<Factor, Polynomial>,
    ) -> Result<Polynomial, SpecSeqError> {
        let mut p = Polynomial::zero();
        for (c, m) in v.iter().zip(basis) {
            if !c.is_zero() {
                p.add(&self.leibniz(m, dvals)?.scale(c));
            }
        }
        Ok(p)
    }

    fn witness(&self, v: &[BigInt], basis: &[Monomial]) -> String {
        let parts: Vec<String> = v
            .iter()
            .zip(basis)
            .filter(|(c, _)| !c.is_zero())
            .map(|(c, m)| format!("{}*{}", c, self.monomial_label(m)))
            .collect();
        parts.join("+")
    }

    /// Sets `d^r` from assignments on alphabet factors, extended by Leibniz.
    pub fn set_differential(&self, assignments: &[Assignment]) -> Result<Page, SpecSeqError> {
        let pres = &*self.pres;
        let shift = TriDegree::differential(self.r);
        let mut alphabet = self.alphabet.clone();
        let mut dvals = HashMap::new();
        for a in assignments {
            let f = pres.factor(&a.factor).ok_or_else(|| SpecSeqError::UnknownFactor(a.factor.clone()))?;
            let expected = pres.factor_degree(f) + shift;
            for (m, _) in a.image.terms() {
                if !pres.is_valid(m) || m.0.len() != pres.len() {
                    return Err(SpecSeqError::Presentation(format!("invalid monomial in d({})", a.factor)));
                }
                let found = pres.degree(m);
                if found != expected {
                    return Err(SpecSeqError::DegreeMismatch { factor: a.factor.clone(), r: self.r, expected, found });
                }
            }
            let (g, _) = pres.factor_base(f);
            if dvals.keys().any(|&k| k != f && pres.factor_base(k).0 == g) {
                return Err(SpecSeqError::Presentation(format!(
                    "conflicting assignments on powers of `{}`",
                    pres.generators()[g].name
                )));
            }
            alphabet[g] = f;
            dvals.insert(f, a.image.clone());
        }
        let mut next = self.clone();
        next.alphabet = alphabet;
        let zero = dvals.values().all(Polynomial::is_zero);
        let results: Vec<(TriDegree, Vec<Vec<BigInt>>, AbelianMap)> = self
            .cells
            .par_iter()
            .map(|(tau, cell)| -> Result<_, SpecSeqError> {
                let target_tau = *tau + shift;
                let target = self.cells.get(&target_tau);
                let src_orders = cell.quotient.orders();
                let tgt_orders = target.map(|t| t.quotient.orders()).unwrap_or_default();
                let Some(target) = target.filter(|_| !zero) else {
                    let n = cell.quotient.len();
                    let len = target.map_or(0, |t| t.basis.len());
                    return Ok((*tau, vec![vec![BigInt::zero(); len]; n], AbelianMap::zero(src_orders, tgt_orders)));
                };
                let mut images = Vec::new();
                let mut cols = Vec::new();
                for g in cell.quotient.generators() {
                    let p = next.apply_leibniz(g, &cell.basis, &dvals)?;
                    let v = target
                        .vector(&p)
                        .ok_or_else(|| SpecSeqError::NotACycle { witness: self.witness(g, &cell.basis), r: self.r })?;
                    let coords = target
                        .quotient
                        .coords(&v)
                        .ok_or_else(|| SpecSeqError::NotACycle { witness: self.witness(g, &cell.basis), r: self.r })?;
                    images.push(v);
                    cols.push(coords);
                }
                for b in cell.boundaries.columns() {
                    let p = next.apply_leibniz(&b, &cell.basis, &dvals)?;
                    let ok = target.vector(&p).is_some_and(|v| target.quotient.is_zero_class(&v));
                    if !ok {
                        return Err(SpecSeqError::BoundaryNotPreserved {
                            witness: self.witness(&b, &cell.basis),
                            r: self.r,
                        });
                    }
                }
                let m = IntMatrix::from_cols(tgt_orders.len(), &cols);
                let map = AbelianMap::new(src_orders, tgt_orders, m)
                    .map_err(|_| SpecSeqError::LeibnizInconsistent { tridegree: *tau, r: self.r })?;
                Ok((*tau, images, map))
            })
            .collect::<Result<_, _>>()?;
        let mut diff = Differential { images: BTreeMap::new(), maps: BTreeMap::new(), nonzero: false };
        for (tau, images, map) in results {
            diff.nonzero |= !map.is_zero();
            diff.images.insert(tau, images);
            diff.maps.insert(tau, map);
        }
        for (tau, map) in &diff.maps {
            if let Some(next_map) = diff.maps.get(&(*tau + shift)) {
                let dd = next_map
                    .compose(map)
                    .map_err(|_| SpecSeqError::LeibnizInconsistent { tridegree: *tau, r: self.r })?;
                if !dd.is_zero() {
                    let cell = &self.cells[tau];
                    let gen = cell.quotient.generators().first().cloned().unwrap_or_default();
                    return Err(SpecSeqError::DSquaredNonzero { witness: self.witness(&gen, &cell.basis), r: self.r });
                }
            }
        }
        next.differential = Some(diff);
        Ok(next)
    }

    /// The matrix of `d^r` on the page generators at `t`, if set.
    pub fn differential_at(&self, t: TriDegree) -> Option<&AbelianMap> {
        self.differential.as_ref()?.maps.get(&t)
    }

    /// `E^{r+1}` as the homology of `d^r`.
    pub fn turn_page(&self) -> Result<Page, SpecSeqError> {
        let diff = self.differential.as_ref().ok_or(SpecSeqError::NoDifferential(self.r))?;
        let shift = TriDegree::differential(self.r);
        let cells: BTreeMap<TriDegree, Cell> = self
            .cells
            .par_iter()
            .map(|(tau, cell)| {
                let n = cell.basis.len();
                let kernel = diff.maps[tau].kernel();
                let gens = cell.quotient.generators();
                let lifts: Vec<Vec<BigInt>> = kernel
                    .generators()
                    .iter()
                    .map(|c| {
                        let mut v = vec![BigInt::zero(); n];
                        for (ci, g) in c.iter().zip(gens) {
                            for (vi, gi) in v.iter_mut().zip(g) {
                                *vi += ci * gi;
                            }
                        }
                        v
                    })
                    .collect();
                let cycles = lattice_basis(&cell.boundaries.hcat(&IntMatrix::from_cols(n, &lifts)));
                let source = TriDegree::new(tau.s - shift.s, tau.t - shift.t, tau.b - shift.b);
                let incoming = diff.images.get(&source).cloned().unwrap_or_default();
                let boundaries = lattice_basis(&cell.boundaries.hcat(&IntMatrix::from_cols(n, &incoming)));
                let quotient = Subquotient::new(n, &cycles, &boundaries);
                (*tau, Cell { basis: cell.basis.clone(), cycles, boundaries, quotient })
            })
            .collect();
        let (turns, s_margin) =
            if diff.nonzero { (self.turns + 1, self.s_margin + self.r as i64) } else { (self.turns, self.s_margin) };
        Ok(Page {
            r: self.r + 1,
            pres: self.pres.clone(),
            window: self.window,
            cells,
            alphabet: self.alphabet.clone(),
            differential: None,
            turns,
            s_margin,
        })
    }

    /// Differentials `d^q`, `q ≥ r`, not excluded by degree and group reasons
    /// among reliable cells.
    pub fn candidates(&self, r_max: u32) -> Vec<Candidate> {
        let mut out = Vec::new();
        for q in self.r..=r_max {
            let shift = TriDegree::differential(q);
            for (tau, cell) in &self.cells {
                if !self.is_reliable(*tau) {
                    continue;
                }
                let g = cell.group();
                if g.is_zero() {
                    continue;
                }
                let target = *tau + shift;
                if !self.is_reliable(target) {
                    continue;
                }
                if g.hom_nonzero(&self.group(target)) {
                    out.push(Candidate { r: q, source: *tau, target });
                }
            }
        }
        out
    }

    /// Largest page index that can still connect two cells of the box.
    pub fn max_reach(&self) -> u32 {
        (self.window.s_max - self.window.s_min).max(0) as u32
    }

    fn display_name(&self, coeff: &BigInt, m: &Monomial) -> Option<GeneratorName> {
        let pres = &*self.pres;
        let mut powers = Vec::new();
        for (g, spec) in pres.generators().iter().enumerate() {
            let mut e = m.0[g];
            if e == 0 {
                continue;
            }
            let mut aliases: Vec<_> = pres.aliases().iter().filter(|a| a.base == g && a.symbol.is_some()).collect();
            aliases.sort_by_key(|a| -a.power);
            for (i, a) in aliases.iter().enumerate() {
                let q = if i == 0 {
                    e.div_euclid(a.power)
                } else if e % a.power == 0 {
                    e / a.power
                } else {
                    0
                };
                if q != 0 {
                    powers.push((a.symbol?, q));
                    e -= q * a.power;
                }
            }
            if e != 0 {
                powers.push((spec.symbol?, e));
            }
        }
        use num_traits::ToPrimitive;
        Some(GeneratorName::monomial(coeff.to_i64()?, &powers))
    }

    /// `E^r` summed over reliable filtrations, as a chart on `window`, with
    /// structure maps for the listed symbols computed on representatives.
    pub fn collapse_to_chart(&self, window: Window, maps: &[Symbol]) -> Result<Collapse, SpecSeqError> {
        let (xl, xh) = self.reliable_x();
        if !window.is_empty()
            && (window.x_min < xl
                || window.x_max > xh
                || window.y_min < self.window.chart.y_min
                || window.y_max > self.window.chart.y_max)
        {
            return Err(SpecSeqError::WindowTooLarge {
                requested: window,
                reliable: Window::new(xl, xh, self.window.chart.y_min, self.window.chart.y_max),
            });
        }
        if let Some(c) = self
            .candidates(self.max_reach())
            .into_iter()
            .find(|c| window.contains(c.source.chart()) || window.contains(c.target.chart()))
        {
            return Err(SpecSeqError::RemainingDifferential(c));
        }
        let mut by_degree: BTreeMap<Degree, Vec<TriDegree>> = BTreeMap::new();
        for (tau, cell) in &self.cells {
            if window.contains(tau.chart()) && self.is_reliable(*tau) && !cell.quotient.is_empty() {
                by_degree.entry(tau.chart()).or_default().push(*tau);
            }
        }
        for v in by_degree.values_mut() {
            v.sort_by_key(|t| -t.s);
        }
        // per cell: normalized generator signs
        let sign_of = |g: &[BigInt]| -> i64 {
            match g.iter().find(|c| !c.is_zero()) {
                Some(c) if c.is_negative() => -1,
                _ => 1,
            }
        };
        let mut chart = Chart::new(window);
        let mut multi = Vec::new();
        let mut anon = 0u32;
        for (d, taus) in &by_degree {
            if taus.len() > 1 {
                multi.push(*d);
            }
            let mut gens = Vec::new();
            for tau in taus {
                let cell = &self.cells[tau];
                for (g, &o) in cell.quotient.generators().iter().zip(&cell.quotient.orders()) {
                    let sgn = BigInt::from(sign_of(g));
                    let nz: Vec<usize> = (0..g.len()).filter(|&i| !g[i].is_zero()).collect();
                    let c = &g[nz[0]] * &sgn;
                    let name = if nz.len() == 1 { self.display_name(&c, &cell.basis[nz[0]]) } else { None };
                    let name = name.unwrap_or_else(|| {
                        anon += 1;
                        GeneratorName::Anonymous(anon - 1)
                    });
                    let ann = if o == 0 && nz.len() == 1 && c.abs() == BigInt::from(2) {
                        Annotation::Circle
                    } else {
                        Annotation::for_order(o)
                    };
                    gens.push(Generator::new(name, ann));
                }
            }
            chart.insert(*d, ChartEntry::new(gens)).expect("degree in window");
        }
        for &sym in maps {
            let Some(f) = self.pres.factor_by_symbol(sym) else { continue };
            let fm = self.pres.factor_power(f, 1);
            let fdeg = self.pres.factor_degree(f);
            for (d, taus) in &by_degree {
                let t = *d + sym.degree();
                if !window.contains(t) {
                    continue;
                }
                let targets = by_degree.get(&t).cloned().unwrap_or_default();
                let rows: usize = targets.iter().map(|x| self.cells[x].quotient.len()).sum();
                let mut cols = Vec::new();
                for tau in taus {
                    let cell = &self.cells[tau];
                    for g in cell.quotient.generators() {
                        let sg = BigInt::from(sign_of(g));
                        let mut col = vec![BigInt::zero(); rows];
                        let dest = *tau + fdeg;
                        let mut offset = 0;
                        for x in &targets {
                            let tc = &self.cells[x];
                            if *x == dest {
                                let mut p = Polynomial::zero();
                                for (c, m) in g.iter().zip(&cell.basis) {
                                    if !c.is_zero() {
                                        let (s, prod) = self.pres.mul(m, &fm);
                                        p.add_term(c * BigInt::from(s) * &sg, prod);
                                    }
                                }
                                let v = tc.vector(&p).ok_or_else(|| SpecSeqError::NotACycle {
                                    witness: self.witness(g, &cell.basis),
                                    r: self.r,
                                })?;
                                let coords = tc.quotient.coords(&v).ok_or_else(|| SpecSeqError::NotACycle {
                                    witness: self.witness(g, &cell.basis),
                                    r: self.r,
                                })?;
                                for (i, (cv, tg)) in coords.iter().zip(tc.quotient.generators()).enumerate() {
                                    col[offset + i] = cv * BigInt::from(sign_of(tg));
                                }
                            }
                            offset += tc.quotient.len();
                        }
                        cols.push(col);
                    }
                }
                let m = IntMatrix::from_cols(rows, &cols);
                chart.set_map(sym, *d, m).map_err(|e| SpecSeqError::Presentation(e.to_string()))?;
            }
        }
        Ok(Collapse { chart, multi_filtration: multi })
    }
}
