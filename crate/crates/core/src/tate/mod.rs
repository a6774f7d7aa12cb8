//! From a homotopy-fixed-point chart to Tate, homotopy orbits, geometric
//! fixed points and the genuine fixed points through the Tate square.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::Zero;
use rayon::prelude::*;

use crate::algebra::{AbelianMap, FgAbelian, IntMatrix, Subquotient};
use crate::grading::{
    unit_vec, Annotation, Chart, ChartEntry, ChartError, Degree, Generator, GeneratorName, Symbol, Window,
};

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum TateError {
    #[error("a-column {column} does not stabilize within the window")]
    Instability { column: i64 },
    #[error("chart is not a-periodic at {0}")]
    NotPeriodic(Degree),
    #[error("geometric fixed points need a connective theory")]
    NotConnective,
    #[error("extension problem at {0}: both Mayer-Vietoris contributions are nonzero")]
    ExtensionAmbiguity(Degree),
    #[error("window {0} is too small for this step")]
    WindowTooSmall(Window),
    #[error(transparent)]
    Chart(#[from] ChartError),
}

/// How a two-sided Mayer-Vietoris extension was split.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SplitRule {
    /// The quotient is free.
    FreeQuotient,
    /// The quotient is an `F₂`-vector space of `a`-multiples and `2a = 0`.
    ADivisibleTwoTorsion,
}

#[derive(Clone, Debug)]
pub struct TateSquareData {
    pub hfp: Chart,
    pub tate: Chart,
    pub orbits: Chart,
    pub phi: Chart,
    pub genuine: Chart,
    pub hfp_to_tate: BTreeMap<Degree, IntMatrix>,
    pub phi_to_tate: BTreeMap<Degree, IntMatrix>,
    pub splits: Vec<(Degree, SplitRule)>,
}

const A: Symbol = Symbol::A;

fn a_map(c: &Chart, d: Degree) -> AbelianMap {
    c.abelian_map(A, d).expect("a-map inside window")
}

/// Degreewise colimit along `a` down each column, with the localization maps.
pub fn invert_a(c: &Chart) -> Result<(Chart, BTreeMap<Degree, IntMatrix>), TateError> {
    let w = c.window();
    let mut tate = Chart::new(w);
    let mut loc = BTreeMap::new();
    if w.is_empty() {
        return Ok((tate, loc));
    }
    if w.y_max - w.y_min < 2 {
        return Err(TateError::WindowTooSmall(w));
    }
    let columns: Vec<_> = (w.x_min..=w.x_max)
        .into_par_iter()
        .map(|x| -> Result<_, TateError> {
            let bottom = Degree::new(x, w.y_min);
            for y in [w.y_min + 1, w.y_min + 2] {
                if !a_map(c, Degree::new(x, y)).is_iso() {
                    return Err(TateError::Instability { column: x });
                }
            }
            let base = c.entry(bottom).cloned();
            let mut entries = Vec::new();
            let mut maps = Vec::new();
            let n = base.as_ref().map_or(0, |e| e.generators.len());
            let mut composite = IntMatrix::identity(n);
            let orders = c.orders(bottom);
            for y in w.y_min..=w.y_max {
                let d = Degree::new(x, y);
                if y > w.y_min {
                    composite = composite.mul(&c.mult_map(A, d)?).reduce_rows(&orders);
                }
                if let Some(b) = &base {
                    let gens = b
                        .generators
                        .iter()
                        .enumerate()
                        .map(|(i, g)| {
                            let name = match &g.name {
                                GeneratorName::Monomial { .. } => g.name.times(A, -(y - w.y_min)),
                                _ => GeneratorName::Anonymous(i as u32),
                            };
                            Generator::new(name, Annotation::for_order(g.order()))
                        })
                        .collect();
                    entries.push((d, ChartEntry::new(gens)));
                }
                maps.push((d, composite.clone()));
            }
            Ok((x, n, entries, maps))
        })
        .collect::<Result<_, _>>()?;
    for (x, n, entries, maps) in columns {
        for (d, e) in entries {
            tate.insert(d, e)?;
        }
        if n > 0 {
            for y in w.y_min + 1..=w.y_max {
                tate.set_map(A, Degree::new(x, y), IntMatrix::identity(n))?;
            }
        }
        loc.extend(maps);
    }
    Ok((tate, loc))
}

/// Every column has constant groups and invertible `a`-maps.
pub fn check_a_periodic(c: &Chart) -> Result<(), TateError> {
    let w = c.window();
    for d in w.degrees() {
        if d.y > w.y_min {
            let m = a_map(c, d);
            if !m.is_iso() {
                return Err(TateError::NotPeriodic(d));
            }
        }
    }
    Ok(())
}

/// Map induced on subquotients by an ambient matrix.
fn induced(src: &Subquotient, tgt: &Subquotient, m: &IntMatrix) -> IntMatrix {
    let cols: Vec<Vec<BigInt>> =
        src.generators().iter().map(|g| tgt.coords(&m.apply(g)).expect("map respects the subquotients")).collect();
    IntMatrix::from_cols(tgt.len(), &cols)
}

/// Name and annotation for a subgroup generator `v` written in the source basis.
fn sub_generator(src: &[&Generator], v: &[BigInt], order: u64, fallback: u32) -> Generator {
    let nz = |free: bool| -> Vec<usize> {
        (0..v.len()).filter(|&i| !v[i].is_zero() && (src[i].order() == 0) == free).collect()
    };
    let free = nz(true);
    let pick = match free[..] {
        [i] => Some(i),
        [] => match nz(false)[..] {
            [i] => Some(i),
            _ => None,
        },
        _ => None,
    };
    let anon = || Generator::new(GeneratorName::Anonymous(fallback), Annotation::for_order(order));
    let Some(i) = pick else { return anon() };
    let (GeneratorName::Monomial { coeff, powers }, Ok(c)) = (&src[i].name, i64::try_from(&v[i])) else {
        return anon();
    };
    if src[i].order() != 0 && c != 1 {
        return anon();
    }
    let ann = if order == 0 && c.abs() == 2 && src[i].annotation == Annotation::Square {
        Annotation::Circle
    } else if order == 0 && c.abs() == 1 {
        src[i].annotation
    } else {
        Annotation::for_order(order)
    };
    let c = if order == 0 { c.abs() } else { c };
    Generator::new(GeneratorName::monomial(coeff * c, powers), ann)
}

fn sub_generators(src: &[&Generator], q: &Subquotient, offset: u32) -> Vec<Generator> {
    q.generators()
        .iter()
        .zip(q.orders())
        .enumerate()
        .map(|(i, (v, o))| sub_generator(src, v, o, offset + i as u32))
        .collect()
}

fn anon_generators(q: &Subquotient, offset: u32) -> Vec<Generator> {
    q.orders()
        .into_iter()
        .enumerate()
        .map(|(i, o)| Generator::new(GeneratorName::Anonymous(offset + i as u32), Annotation::for_order(o)))
        .collect()
}

/// One degree of a long exact sequence `… → Y_{d+1} → T_{d+1} → G_d → Y_d → T_d → …`:
/// the kernel at `d` (quotient of `G_d`) and cokernel at `d + (1,0)` (sub of `G_d`).
struct LesPiece {
    kernel: Subquotient,
    cokernel: Subquotient,
}

fn les_piece(f_d: &AbelianMap, f_next: &AbelianMap) -> LesPiece {
    LesPiece { kernel: f_d.kernel(), cokernel: f_next.cokernel() }
}

/// Homotopy orbits from the lower cofibre sequence.
pub fn homotopy_orbits(hfp: &Chart, tate: &Chart, loc: &BTreeMap<Degree, IntMatrix>) -> Result<Chart, TateError> {
    let w = hfp.window();
    let out_w = w.expand(0, -1, 0, 0);
    let f = |d: Degree| {
        AbelianMap::new(hfp.orders(d), tate.orders(d), loc[&d].clone()).expect("localization map well defined")
    };
    let pieces: BTreeMap<Degree, LesPiece> = out_w
        .degrees()
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|d| (d, les_piece(&f(d), &f(d + Degree::new(1, 0)))))
        .collect();
    let mut out = Chart::new(out_w);
    for (d, p) in &pieces {
        let src: Vec<&Generator> = hfp.entry(*d).map(|e| e.generators.iter().collect()).unwrap_or_default();
        let mut gens = sub_generators(&src, &p.kernel, 0);
        gens.extend(anon_generators(&p.cokernel, p.kernel.len() as u32));
        if gens.is_empty() {
            continue;
        }
        out.insert(*d, ChartEntry::new(gens))?;
        if !p.kernel.is_empty() && !p.cokernel.is_empty() {
            out.mark_ambiguous(*d);
        }
    }
    for (d, p) in &pieces {
        let t = *d + A.degree();
        let Some(q) = pieces.get(&t) else { continue };
        let k = induced(&p.kernel, &q.kernel, &hfp.mult_map(A, *d)?);
        let c = induced(&p.cokernel, &q.cokernel, &tate.mult_map(A, *d + Degree::new(1, 0))?);
        out.set_map(A, *d, k.block_diag(&c))?;
    }
    Ok(out)
}

/// Connective cover of the Tate chart read off its integer line.
pub fn geometric_fixed_points(
    tate: &Chart,
    connective: bool,
) -> Result<(Chart, BTreeMap<Degree, IntMatrix>), TateError> {
    if !connective {
        return Err(TateError::NotConnective);
    }
    check_a_periodic(tate)?;
    let w = tate.window();
    let mut phi = Chart::new(w);
    let mut maps = BTreeMap::new();
    for d in w.degrees() {
        let n = if d.x >= 0 { tate.orders(d).len() } else { 0 };
        if n > 0 {
            phi.insert(d, tate.entry(d).cloned().expect("nonzero entry"))?;
        }
        maps.insert(d, if d.x >= 0 { IntMatrix::identity(n) } else { IntMatrix::zeros(tate.orders(d).len(), 0) });
    }
    for d in w.degrees() {
        if d.x >= 0 && d.y > w.y_min {
            phi.set_map(A, d, tate.mult_map(A, d)?)?;
        }
    }
    Ok((phi, maps))
}

struct MvPiece {
    kernel: Subquotient,
    cokernel: Subquotient,
}

/// Genuine fixed points from the Tate square, degreewise.
pub fn assemble_genuine(
    hfp: &Chart,
    phi: &Chart,
    tate: &Chart,
    hfp_to_tate: &BTreeMap<Degree, IntMatrix>,
    phi_to_tate: &BTreeMap<Degree, IntMatrix>,
    two_torsion_a: bool,
) -> Result<(Chart, Vec<(Degree, SplitRule)>), TateError> {
    let w = hfp.window();
    let piece_w = w.expand(0, -1, 0, 0);
    let out_w = piece_w.expand(0, 0, 0, -1);
    let sum_orders = |d: Degree| {
        let mut o = hfp.orders(d);
        o.extend(phi.orders(d));
        o
    };
    let f = |d: Degree| {
        let m = hfp_to_tate[&d].hcat(&phi_to_tate[&d].scale(&BigInt::from(-1)));
        AbelianMap::new(sum_orders(d), tate.orders(d), m).expect("square maps well defined")
    };
    let a_sum =
        |d: Degree| -> Result<IntMatrix, TateError> { Ok(hfp.mult_map(A, d)?.block_diag(&phi.mult_map(A, d)?)) };
    let pieces: BTreeMap<Degree, MvPiece> = piece_w
        .degrees()
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|d| {
            let p = les_piece(&f(d), &f(d + Degree::new(1, 0)));
            (d, MvPiece { kernel: p.kernel, cokernel: p.cokernel })
        })
        .collect();
    let mut out = Chart::new(out_w);
    let mut splits = Vec::new();
    for (d, p) in pieces.iter().filter(|(d, _)| out_w.contains(**d)) {
        if !p.kernel.is_empty() && !p.cokernel.is_empty() {
            let quotient = p.kernel.group();
            let rule = if quotient.is_free() {
                Some(SplitRule::FreeQuotient)
            } else if two_torsion_a && quotient.torsion().iter().all(|&t| t == 2) {
                let above = *d - A.degree();
                match pieces.get(&above) {
                    Some(q) => {
                        let am = induced(&q.kernel, &p.kernel, &a_sum(above)?);
                        let img = AbelianMap::new(q.kernel.orders(), p.kernel.orders(), am).expect("induced a-map");
                        let all_hit = p
                            .kernel
                            .orders()
                            .iter()
                            .enumerate()
                            .filter(|(_, &o)| o != 0)
                            .all(|(i, _)| img.preimage(&unit_vec(p.kernel.len(), i)).is_some());
                        all_hit.then_some(SplitRule::ADivisibleTwoTorsion)
                    }
                    _ => None,
                }
            } else {
                None
            };
            match rule {
                Some(r) => splits.push((*d, r)),
                None => return Err(TateError::ExtensionAmbiguity(*d)),
            }
        }
        let mut src: Vec<&Generator> = hfp.entry(*d).map(|e| e.generators.iter().collect()).unwrap_or_default();
        src.extend(phi.entry(*d).map(|e| e.generators.iter().collect::<Vec<_>>()).unwrap_or_default());
        let mut gens = sub_generators(&src, &p.kernel, 0);
        gens.extend(anon_generators(&p.cokernel, p.kernel.len() as u32));
        if !gens.is_empty() {
            out.insert(*d, ChartEntry::new(gens))?;
        }
    }
    for (d, p) in pieces.iter().filter(|(d, _)| out_w.contains(**d)) {
        let t = *d + A.degree();
        let Some(q) = pieces.get(&t) else { continue };
        let k = induced(&p.kernel, &q.kernel, &a_sum(*d)?);
        let c = induced(&p.cokernel, &q.cokernel, &tate.mult_map(A, *d + Degree::new(1, 0))?);
        out.set_map(A, *d, k.block_diag(&c))?;
    }
    Ok((out, splits))
}

/// The full square from a homotopy-fixed-point chart.
pub fn run_tate_square(hfp: &Chart, connective: bool, two_torsion_a: bool) -> Result<TateSquareData, TateError> {
    let (tate, hfp_to_tate) = invert_a(hfp)?;
    let orbits = homotopy_orbits(hfp, &tate, &hfp_to_tate)?;
    let (phi, phi_to_tate) = geometric_fixed_points(&tate, connective)?;
    let (genuine, splits) = assemble_genuine(hfp, &phi, &tate, &hfp_to_tate, &phi_to_tate, two_torsion_a)?;
    Ok(TateSquareData { hfp: hfp.clone(), tate, orbits, phi, genuine, hfp_to_tate, phi_to_tate, splits })
}

/// Column values of an `a`-periodic chart.
pub fn periodic_columns(c: &Chart) -> BTreeMap<i64, FgAbelian> {
    let w = c.window();
    (w.x_min..=w.x_max).map(|x| (x, c.group(Degree::new(x, w.y_min)))).collect()
}
