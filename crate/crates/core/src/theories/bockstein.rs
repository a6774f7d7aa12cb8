use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use rayon::prelude::*;

use super::TheoryError;
use crate::algebra::{filtered_groups, AbelianMap, FgAbelian, IntMatrix, Subquotient};
use crate::grading::{
    closed_form_hz, Annotation, BlockClass, Chart, ChartEntry, Degree, Generator, GeneratorName, HzClass, Symbol,
    Window,
};

/// Degree of `θ`, and of `d¹` on the base chart of a floor.
pub const THETA_SHIFT: Degree = Degree { x: -2, y: -1 };
const RHO: Degree = Degree { x: 1, y: 1 };

fn theta_class(c: HzClass) -> Option<HzClass> {
    let t = match c {
        HzClass::Pos { j, k } if j % 2 != 0 => HzClass::Pos { j: j - 1, k: k + 3 },
        HzClass::Tower { j, y } if j % 2 != 0 => HzClass::Tower { j: j + 1, y: y - 1 },
        _ => return None,
    };
    t.is_valid().then_some(t)
}

/// `θ` on a canonical generator of the closed-form HZ chart; `None` is zero.
pub fn theta_apply(m: &GeneratorName) -> Result<Option<GeneratorName>, TheoryError> {
    let c = HzClass::from_name(m).ok_or_else(|| TheoryError::UnknownGenerator(m.to_string()))?;
    Ok(theta_class(c).map(|t| t.name()))
}

/// `θ` on the `a`-inverted chart, where every `a^k u^j` with `j ≥ 0` is a class.
fn theta_periodic(m: &GeneratorName) -> Option<GeneratorName> {
    let (k, j) = (m.exponent(Symbol::A), m.exponent(Symbol::SmallU));
    (j % 2 != 0).then(|| GeneratorName::monomial(1, &[(Symbol::A, k + 3), (Symbol::SmallU, j - 1)]))
}

/// A pair of `E₂` classes between which a `d^r`, `r ≥ 2`, is not ruled out by degrees and groups.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HigherCandidate {
    pub r: i64,
    pub floor: i64,
    pub source: Degree,
    pub target: Degree,
}

/// Floorwise `E₁`/`E₂` data on base degrees and the assembled chart.
#[derive(Clone, Debug)]
pub struct BocksteinRun {
    /// Highest floor used.
    pub floors: i64,
    pub e1: Chart,
    /// Floor 0: kernels of `d¹`.
    pub e2_bottom: Chart,
    /// Floors `≥ 1`: homology of `d¹`.
    pub e2_upper: Chart,
    /// Total degree to nonzero `(floor, E₂ group)` contributions.
    pub contributions: BTreeMap<Degree, Vec<(i64, FgAbelian)>>,
    pub chart: Chart,
}

impl BocksteinRun {
    pub fn e2(&self, floor: i64) -> &Chart {
        if floor == 0 {
            &self.e2_bottom
        } else {
            &self.e2_upper
        }
    }

    /// Total degrees fed by more than one floor.
    pub fn multi_floor(&self) -> Vec<Degree> {
        self.contributions.iter().filter(|(_, v)| v.len() > 1).map(|(d, _)| *d).collect()
    }
}

/// `θ` as a map from the entry at `d` to the entry at `d + THETA_SHIFT`.
fn theta_map(e1: &Chart, d: Degree, theta: &dyn Fn(&GeneratorName) -> Option<GeneratorName>) -> AbelianMap {
    let t = d + THETA_SHIFT;
    let (so, to) = (e1.orders(d), e1.orders(t));
    let mut m = IntMatrix::zeros(to.len(), so.len());
    if let (Some(src), Some(tgt)) = (e1.entry(d), e1.entry(t)) {
        for (j, g) in src.generators.iter().enumerate() {
            if let Some(img) = theta(&g.name) {
                let i = tgt.generators.iter().position(|h| h.name == img).expect("θ lands on a generator");
                m.set(i, j, BigInt::from(1));
            }
        }
    }
    AbelianMap::new(so, to, m).expect("θ respects orders")
}

fn floor_entry(e1: &Chart, d: Degree, q: &Subquotient) -> ChartEntry {
    let src = e1.entry(d).map(|e| e.generators.as_slice()).unwrap_or(&[]);
    let gens = q
        .generators()
        .iter()
        .zip(q.orders())
        .enumerate()
        .map(|(n, (v, o))| {
            let nz: Vec<usize> = (0..v.len()).filter(|&i| !v[i].is_zero()).collect();
            match nz[..] {
                [i] => {
                    let c = v[i].abs();
                    let g = &src[i];
                    let name = match (&g.name, i64::try_from(&c)) {
                        (GeneratorName::Monomial { coeff, powers }, Ok(c)) => {
                            GeneratorName::monomial(coeff * c, powers)
                        }
                        (name, Ok(1)) => name.clone(),
                        _ => GeneratorName::Anonymous(n as u32),
                    };
                    let ann =
                        if o == 0 && c == BigInt::from(2) { Annotation::Circle } else { Annotation::for_order(o) };
                    let ann = if o == 0 && c == BigInt::from(1) { g.annotation } else { ann };
                    Generator::new(name, ann)
                }
                _ => Generator::new(GeneratorName::Anonymous(n as u32), Annotation::for_order(o)),
            }
        })
        .collect();
    ChartEntry::new(gens)
}

/// `E₂` on floor 0 and on the upper floors, over the degrees of `inner`.
fn e2_charts(
    e1: &Chart,
    inner: Window,
    theta: &(dyn Fn(&GeneratorName) -> Option<GeneratorName> + Sync),
) -> (Chart, Chart) {
    let rows: Vec<_> = inner
        .degrees()
        .collect::<Vec<_>>()
        .into_par_iter()
        .filter(|d| e1.entry(*d).is_some())
        .map(|d| {
            let out = theta_map(e1, d, theta);
            let inc = theta_map(e1, d - THETA_SHIFT, theta);
            let bottom = floor_entry(e1, d, &out.kernel());
            let upper = floor_entry(e1, d, &out.homology_after(&inc).expect("θ squares to zero"));
            (d, bottom, upper)
        })
        .collect();
    let mut b = Chart::new(inner);
    let mut u = Chart::new(inner);
    for (d, bottom, upper) in rows {
        b.insert(d, bottom).expect("in window");
        u.insert(d, upper).expect("in window");
    }
    (b, u)
}

fn with_floor(name: &GeneratorName, f: i64) -> GeneratorName {
    match name {
        GeneratorName::Monomial { .. } => name.times(Symbol::VHat, f),
        other => other.clone(),
    }
}

/// Cocycle budget when enumerating extensions of floor pieces.
const EXTENSION_LIMIT: usize = 1 << 12;

/// Groups with a filtration whose quotients are the floor contributions, top floor last.
pub fn floor_extensions(contribs: &[(i64, FgAbelian)]) -> Option<BTreeSet<FgAbelian>> {
    let pieces: Vec<FgAbelian> = contribs.iter().map(|(_, g)| g.clone()).collect();
    filtered_groups(&pieces, EXTENSION_LIMIT)
}

struct Assembly {
    contributions: BTreeMap<Degree, Vec<(i64, FgAbelian)>>,
    chart: Chart,
    candidates: Vec<HigherCandidate>,
}

fn assemble(window: Window, floors: i64, bottom: &Chart, upper: &Chart) -> Assembly {
    let e2 = |f: i64| if f == 0 { bottom } else { upper };
    let mut chart = Chart::new(window);
    let mut contributions = BTreeMap::new();
    for d in window.degrees() {
        let mut gens = Vec::new();
        let mut parts = Vec::new();
        for f in 0..=floors {
            let base = d - RHO.scale(f);
            if let Some(e) = e2(f).entry(base) {
                parts.push((f, e.group.clone()));
                gens.extend(e.generators.iter().map(|g| Generator::new(with_floor(&g.name, f), g.annotation)));
            }
        }
        if parts.is_empty() {
            continue;
        }
        let entry = ChartEntry::new(gens);
        match floor_extensions(&parts) {
            Some(gs) if gs.len() == 1 && gs.contains(&entry.group) => chart.insert(d, entry),
            Some(gs) if gs.len() == 1 => chart.insert(d, ChartEntry::bare(gs.first().expect("one group"))),
            _ => {
                chart.mark_ambiguous(d);
                chart.insert(d, entry)
            }
        }
        .expect("in window");
        contributions.insert(d, parts);
    }
    let mut candidates = Vec::new();
    for f in 0..=floors {
        for (base, e) in e2(f).entries() {
            for r in 2..=floors - f {
                let total = base + RHO.scale(f);
                let t = base - Degree::new(r + 1, r);
                if !window.contains(total) && !window.contains(total - Degree::new(1, 0)) {
                    continue;
                }
                let Some(te) = e2(f + r).entry(t) else { continue };
                if e.group.hom_nonzero(&te.group) {
                    candidates.push(HigherCandidate { r, floor: f, source: base, target: t });
                }
            }
        }
    }
    Assembly { contributions, chart, candidates }
}

/// The `v̄`-Bockstein spectral sequence from the closed-form HZ chart, on `window`.
pub fn run_bockstein(window: Window, padding: i64) -> Result<BocksteinRun, TheoryError> {
    let floors = (window.x_max + window.y_max).max(0) + padding;
    let reach = 2 * floors + 4;
    let base = window.expand(reach, 4, reach, 4);
    let e1 = closed_form_hz(base.expand(2, 2, 1, 1));
    let theta = |n: &GeneratorName| HzClass::from_name(n).and_then(theta_class).map(|c| c.name());
    let (e2_bottom, e2_upper) = e2_charts(&e1, base, &theta);
    let a = assemble(window, floors, &e2_bottom, &e2_upper);
    if let Some(c) = a.candidates.into_iter().next() {
        return Err(TheoryError::HigherDifferential(c));
    }
    Ok(BocksteinRun { floors, e1, e2_bottom, e2_upper, contributions: a.contributions, chart: a.chart })
}

/// Integer-line groups `0..=n_max` of the `a`-inverted Bockstein spectral sequence.
pub fn phi_sector(n_max: i64) -> Result<BTreeMap<i64, FgAbelian>, TheoryError> {
    let floors = n_max.max(0) + 1;
    let window = Window::new(0, n_max.max(0), 0, 0);
    let base = Window::new(-floors - 4, n_max + 4, -2 * floors - 4, 4);
    let mut e1 = Chart::new(base.expand(2, 2, 1, 1));
    for d in e1.window().degrees() {
        if d.x >= 0 && d.x % 2 == 0 {
            let name = GeneratorName::monomial(1, &[(Symbol::A, -d.x - d.y), (Symbol::SmallU, d.x / 2)]);
            e1.insert(d, ChartEntry::new(vec![Generator::new(name, Annotation::Dot)])).expect("in window");
        }
    }
    let (bottom, upper) = e2_charts(&e1, base, &theta_periodic);
    let a = assemble(window, floors, &bottom, &upper);
    if let Some(c) = a.candidates.into_iter().next() {
        return Err(TheoryError::HigherDifferential(c));
    }
    Ok((0..=n_max).map(|n| (n, a.chart.group(Degree::new(n, 0)))).collect())
}
