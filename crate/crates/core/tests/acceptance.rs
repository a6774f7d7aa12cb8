//! One PASS/FAIL line per acceptance criterion.

use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use roq_charts::algebra::{AbelianMap, FgAbelian, IntMatrix};
use roq_charts::cells::cellular_chart_hz;
use roq_charts::cli;
use roq_charts::grading::{
    closed_form_hz, Annotation, BlockClass, Chart, ChartEntry, Degree, Generator, GeneratorName, HzClass, Symbol,
    TowerKind, Window,
};
use roq_charts::io::{self, diff, render, ChartDocument, RenderFormat};
use roq_charts::specseq::{Page, TriDegree};
use roq_charts::tate::check_a_periodic;
use roq_charts::theories::{
    bss_to_sss, connectivity_check, floor_extensions, gap_check, integer_line, phi_sector, run_bockstein, run_hfpss,
    slice_extract, sss_to_bss, tate_pipeline, theta_apply, Theory,
};

const WINDOW: Window = Window::square(12);
const PADDING: i64 = 4;
const HZ_BUDGET: Duration = Duration::from_secs(5);
const KR_BUDGET: Duration = Duration::from_secs(10);
const ROUND_TRIPS: usize = 1000;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn z() -> FgAbelian {
    FgAbelian::free(1)
}
fn f2() -> FgAbelian {
    FgAbelian::cyclic(2)
}
fn zero() -> FgAbelian {
    FgAbelian::zero()
}

fn single_threaded<T: Send>(f: impl FnOnce() -> T + Send) -> T {
    rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap().install(f)
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn same_groups(label: &str, a: &Chart, b: &Chart) -> Result<(), String> {
    let r = diff(a, b);
    ensure(r.window_warning.is_none() && r.groups.is_empty(), || match r.groups.first() {
        Some(g) => {
            format!("{label}: {} groups differ, first at {} ({} vs {})", r.groups.len(), g.degree, g.left, g.right)
        }
        None => format!("{label}: windows differ"),
    })
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let (cells, tate) = single_threaded(|| (cellular_chart_hz(WINDOW), tate_pipeline(Theory::Hz, WINDOW, PADDING)));
    let closed = Theory::Hz.closed_form(WINDOW);
    let elapsed = start.elapsed();
    let tate = tate.map_err(|e| e.to_string())?.genuine;
    same_groups("cells vs closed", &cells, &closed)?;
    same_groups("tate vs closed", &tate, &closed)?;
    ensure(elapsed < HZ_BUDGET, || format!("took {elapsed:?}"))?;
    Ok(format!("{} degrees, {elapsed:.2?} on one thread", WINDOW.degrees().count()))
}

fn criterion_2() -> Outcome {
    let start = Instant::now();
    let (bss, tate) = single_threaded(|| (run_bockstein(WINDOW, PADDING), tate_pipeline(Theory::Kr, WINDOW, PADDING)));
    let closed = Theory::Kr.closed_form(WINDOW);
    let elapsed = start.elapsed();
    let bss = bss.map_err(|e| e.to_string())?;
    same_groups("tate vs closed", &tate.map_err(|e| e.to_string())?.genuine, &closed)?;
    let mut exact = 0;
    let mut filtered = Vec::new();
    for d in WINDOW.degrees() {
        let want = closed.group(d);
        let pieces = bss.contributions.get(&d).cloned().unwrap_or_default();
        let orders: u64 = pieces.iter().filter(|(_, g)| g.is_torsion()).map(|(_, g)| g.order().unwrap()).product();
        let rank: usize = pieces.iter().map(|(_, g)| g.rank()).sum();
        ensure(rank == want.rank() && (!want.is_torsion() || Some(orders) == want.order()), || {
            format!("composition factors differ at {d}: {pieces:?} vs {want}")
        })?;
        if bss.chart.is_ambiguous(d) {
            let options = floor_extensions(&pieces).ok_or_else(|| format!("too many extensions at {d}"))?;
            ensure(options.contains(&want), || format!("{want} is not an extension of the floors at {d}"))?;
            filtered.push(d);
        } else {
            ensure(bss.chart.group(d) == want, || format!("{d}: {} vs {want}", bss.chart.group(d)))?;
            exact += 1;
        }
    }
    ensure(elapsed < KR_BUDGET, || format!("took {elapsed:?}"))?;
    let multi: Vec<String> = filtered.iter().map(Degree::to_string).collect();
    Ok(format!(
        "exact at {exact} single-filtration degrees; multi-filtration at {} (extension-compatible): {}; {elapsed:.2?} on one thread",
        filtered.len(),
        multi.join(" ")
    ))
}

/// Tridegrees of `page` lying over `WINDOW` and away from truncation effects.
fn reliable_tridegrees(page: &Page) -> Vec<TriDegree> {
    let (sl, sh) = page.reliable_s();
    let mut out = Vec::new();
    for s in sl..=sh {
        for d in WINDOW.degrees() {
            let t = TriDegree::new(s, d.x - s, d.y);
            if page.is_reliable(t) {
                out.push(t);
            }
        }
    }
    out
}

/// `Z[a]/(2a)[u^±]`, reading `a^i λ^j` off the tridegree.
fn hz_e2_oracle(t: TriDegree) -> FgAbelian {
    let i = -t.s;
    let j = t.t + t.s;
    if i < 0 || t.b != -i - j || j.rem_euclid(2) == 1 {
        zero()
    } else if i == 0 {
        z()
    } else {
        f2()
    }
}

/// The kR page after `d λ = 2a` and `d u = a³ v̄`, reading `a^i λ^j v̄^k` off the tridegree.
fn kr_e3_oracle(t: TriDegree) -> FgAbelian {
    let i = -t.s;
    if i < 0 || (t.t + t.b).rem_euclid(2) == 1 {
        return zero();
    }
    let k = (t.t + t.b) / 2;
    let j = t.t - i - k;
    if k < 0 {
        return zero();
    }
    match j.rem_euclid(4) {
        0 if i == 0 => z(),
        0 if k == 0 || i <= 2 => f2(),
        2 if i == 0 => z(),
        _ => zero(),
    }
}

fn criterion_3() -> Outcome {
    let mut checked = 0;
    for (theory, index, oracle) in [
        (Theory::Hz, 2, hz_e2_oracle as fn(TriDegree) -> FgAbelian),
        (Theory::Kr, 4, kr_e3_oracle as fn(TriDegree) -> FgAbelian),
    ] {
        let run = run_hfpss(&theory.seed(), WINDOW, PADDING).map_err(|e| e.to_string())?;
        let page = run.e(index);
        for t in reliable_tridegrees(page) {
            ensure(page.group(t) == oracle(t), || {
                format!("{theory} E_{index} at {t:?}: {} vs {}", page.group(t), oracle(t))
            })?;
            checked += 1;
        }
        let last = run.e_infinity();
        ensure(last.r() as usize == index, || format!("{theory}: no differentials expected after E_{index}"))?;
        let left = last.candidates(last.max_reach());
        ensure(left.is_empty(), || {
            format!("{theory}: {} possible later differentials, e.g. {:?}", left.len(), left[0])
        })?;
    }
    Ok(format!("{checked} tridegrees; no later differential possible"))
}

fn criterion_4() -> Outcome {
    for (theory, period) in [(Theory::Hz, 2), (Theory::Kr, 4)] {
        let sq = tate_pipeline(theory, WINDOW, PADDING).map_err(|e| e.to_string())?;
        for d in WINDOW.degrees() {
            let want = if d.x.rem_euclid(period) == 0 { f2() } else { zero() };
            ensure(sq.tate.group(d) == want, || format!("{theory} Tate at {d}: {}", sq.tate.group(d)))?;
        }
        check_a_periodic(&sq.tate).map_err(|e| format!("{theory}: {e}"))?;
    }
    Ok("F_2 on x even (HZ) and x = 0 mod 4 (kR), a-periodic".into())
}

fn criterion_5() -> Outcome {
    for (theory, period) in [(Theory::Hz, 2), (Theory::Kr, 4)] {
        let sq = tate_pipeline(theory, WINDOW, PADDING).map_err(|e| e.to_string())?;
        for (x, g) in integer_line(&sq.phi, WINDOW.x_min..=WINDOW.x_max) {
            let want = if x >= 0 && x % period == 0 { f2() } else { zero() };
            ensure(g == want, || format!("{theory} geometric fixed points at {x}: {g}"))?;
        }
    }
    let bss = phi_sector(12).map_err(|e| e.to_string())?;
    for (n, g) in &bss {
        let want = if n % 4 == 0 { f2() } else { zero() };
        ensure(*g == want, || format!("a-inverted Bockstein at {n}: {g}"))?;
    }
    ensure(bss[&1].is_zero(), || "kR geometric fixed points nonzero in degree 1".into())?;
    Ok("Tate-square and a-inverted Bockstein lines agree".into())
}

fn criterion_6() -> Outcome {
    let ko = [z(), f2(), f2(), zero(), z(), zero(), zero(), zero(), z()];
    let hz = run_hfpss(&Theory::Hz.seed(), WINDOW, PADDING).map_err(|e| e.to_string())?.chart;
    let kr = run_hfpss(&Theory::Kr.seed(), WINDOW, PADDING).map_err(|e| e.to_string())?.chart;
    for (x, g) in integer_line(&hz, -12..=0) {
        let want = match x {
            0 => z(),
            x if x % 2 == 0 => f2(),
            _ => zero(),
        };
        ensure(g == want, || format!("HZ^hQ at {x}: {g}"))?;
    }
    for (x, g) in integer_line(&kr, 0..=8) {
        ensure(g == ko[x as usize], || format!("kR^hQ at {x}: {g}"))?;
    }
    for (x, g) in integer_line(&kr, -12..=0) {
        let want = match x {
            0 => z(),
            x if x % 4 == 0 => f2(),
            _ => zero(),
        };
        ensure(g == want, || format!("kR^hQ at {x}: {g}"))?;
    }
    Ok("Z[y]/(2y), ko_0..8, Z[Y]/(2Y)".into())
}

fn criterion_7() -> Outcome {
    let mut genuine = Vec::new();
    for theory in Theory::ALL {
        let c = tate_pipeline(theory, WINDOW, PADDING).map_err(|e| e.to_string())?.genuine;
        let (g, k) = (gap_check(&c), connectivity_check(&c));
        ensure(g.passed(), || format!("{theory} gap: {g}"))?;
        ensure(k.passed(), || format!("{theory} connectivity: {k}"))?;
        genuine.push(c);
    }
    let spurious = ChartEntry::bare(&f2());
    for c in &genuine {
        for d in [Degree::new(-1, 1), Degree::new(1, 3), Degree::new(2, 5)] {
            let mut m = c.clone();
            m.insert(d, spurious.clone()).unwrap();
            let r = gap_check(&m);
            ensure(r.violations.iter().map(|v| v.0).eq([d]), || format!("gap mutation at {d}: {r}"))?;
        }
        for d in [Degree::new(-3, 1), Degree::new(-7, 2)] {
            let mut m = c.clone();
            m.insert(d, spurious.clone()).unwrap();
            let r = connectivity_check(&m);
            ensure(r.violations.iter().any(|v| v.0 == d), || format!("connectivity mutation at {d}: {r}"))?;
        }
    }
    Ok("both genuine charts pass; injected classes are reported at their degrees".into())
}

fn criterion_8() -> Outcome {
    let theta_shift = Degree::new(-2, -1);
    let run = run_bockstein(WINDOW, PADDING).map_err(|e| e.to_string())?;
    let mut applied = 0;
    for (d, e) in run.e1.entries() {
        for g in &e.generators {
            let Some(t) = theta_apply(&g.name).map_err(|e| e.to_string())? else { continue };
            applied += 1;
            let target = HzClass::from_name(&t).ok_or_else(|| format!("θ({}) = {t} is not a class", g.name))?;
            ensure(target.degree() == d + theta_shift, || format!("θ({}) lands in {}", g.name, target.degree()))?;
            ensure(theta_apply(&t).map_err(|e| e.to_string())?.is_none(), || format!("θ²({}) ≠ 0", g.name))?;
            ensure(run.e1.entry(target.degree()).is_none_or(|e| e.generators.iter().any(|h| h.name == t)), || {
                format!("θ({}) is not a generator of the chart", g.name)
            })?;
        }
    }
    Ok(format!(
        "{} generators, θ nonzero on {applied}; exhaustive search found no d^r for r ≥ 2 across {} floors",
        run.e1.entries().map(|(_, e)| e.generators.len()).sum::<usize>(),
        run.floors
    ))
}

fn criterion_9() -> Outcome {
    let w = Window::new(-4, 10, -4, 10);
    let run = run_bockstein(w, PADDING).map_err(|e| e.to_string())?;
    let table = slice_extract(&run, -4..=9, 9);
    let hz = closed_form_hz(Window::square(30));
    let mut blobs = 0;
    for n in -4..=9 {
        for s in 0..=9 {
            if (n + s) % 2 != 0 {
                ensure(table.e1_at(n, s).is_zero(), || format!("entry off parity at ({n},{s})"))?;
                continue;
            }
            let k = (n + s) / 2;
            let want = if k < 0 { zero() } else { hz.group(Degree::new(n - k, -k)) };
            ensure(table.e1_at(n, s) == want, || format!("slice E_1 at ({n},{s}): {} vs {want}", table.e1_at(n, s)))?;
            blobs += usize::from(!want.is_zero());
        }
    }
    let ko_orders = [Some(0u64), Some(2), Some(2), Some(1), Some(0), Some(1), Some(1), Some(1), Some(0)];
    for (n, want) in ko_orders.iter().enumerate() {
        let stem = table.stem(n as i64);
        let order = if stem.iter().any(|g| g.rank() > 0) {
            Some(0)
        } else {
            Some(stem.iter().map(|g| g.order().unwrap()).product())
        };
        ensure(order == *want, || format!("stem {n}: {stem:?}"))?;
    }
    for x in -40..=40 {
        for y in -40..=40 {
            ensure(sss_to_bss(bss_to_sss((x, y))) == Some((x, y)), || format!("round trip fails at ({x},{y})"))?;
        }
    }
    Ok(format!("{blobs} nonzero blobs match; stems 0..8 have ko orders"))
}

fn random_name(rng: &mut impl Rng) -> GeneratorName {
    match rng.gen_range(0..3) {
        0 => GeneratorName::Anonymous(rng.gen_range(0..5)),
        1 => GeneratorName::tower(
            if rng.gen() { TowerKind::Hz } else { TowerKind::Kr },
            rng.gen_range(1..4),
            rng.gen_range(-6..7),
        ),
        _ => {
            let syms = [Symbol::A, Symbol::SmallU, Symbol::BigU, Symbol::VBar, Symbol::VHat];
            let mut powers = Vec::new();
            for s in syms {
                if rng.gen_bool(0.4) {
                    powers.push((s, rng.gen_range(-3..4)));
                }
            }
            GeneratorName::monomial(rng.gen_range(1..4), &powers)
        }
    }
}

fn random_chart(rng: &mut impl Rng) -> Chart {
    let w = Window::new(rng.gen_range(-6..0), rng.gen_range(0..6), rng.gen_range(-6..0), rng.gen_range(0..6));
    let mut c = Chart::new(w);
    for _ in 0..rng.gen_range(0..20) {
        let d = Degree::new(rng.gen_range(w.x_min..=w.x_max), rng.gen_range(w.y_min..=w.y_max));
        let gens = (0..rng.gen_range(1..4))
            .map(|_| {
                let ann = match rng.gen_range(0..4) {
                    0 => Annotation::Square,
                    1 => Annotation::Circle,
                    2 => Annotation::Dot,
                    _ => Annotation::Cyclic(rng.gen_range(3..9)),
                };
                Generator::new(random_name(rng), ann)
            })
            .collect();
        c.insert(d, ChartEntry::new(gens)).unwrap();
    }
    let sources: Vec<Degree> = c.entries().map(|(d, _)| d).collect();
    for d in sources {
        for s in [Symbol::A, Symbol::VBar] {
            let t = d + s.degree();
            if !w.contains(t) || c.orders(t).is_empty() || rng.gen_bool(0.5) {
                continue;
            }
            let (so, to) = (c.orders(d), c.orders(t));
            let rows: Vec<Vec<i64>> = to.iter().map(|_| so.iter().map(|_| rng.gen_range(-2..3)).collect()).collect();
            let m = IntMatrix::from_rows(&rows);
            if AbelianMap::new(so, to, m.clone()).is_ok() {
                c.set_map(s, d, m).unwrap();
            }
        }
    }
    let marks: Vec<Degree> = c.entries().map(|(d, _)| d).filter(|_| rng.gen_bool(0.1)).collect();
    for d in marks {
        c.mark_ambiguous(d);
    }
    c
}

fn renders(threads: usize) -> Vec<String> {
    rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap().install(|| {
        let kr = tate_pipeline(Theory::Kr, WINDOW, PADDING).unwrap().genuine;
        let bss = run_bockstein(WINDOW, PADDING).unwrap().chart;
        let hz = cellular_chart_hz(WINDOW);
        [("kr", "tate", kr), ("kr", "bockstein", bss), ("hz", "cells", hz)]
            .into_iter()
            .flat_map(|(t, p, chart)| {
                let svg = render(&chart, RenderFormat::Svg);
                let text = render(&chart, RenderFormat::Text);
                let doc = ChartDocument { theory: t.into(), pipeline: p.into(), chart };
                [io::serialize(&doc), svg, text]
            })
            .collect()
    })
}

fn criterion_10() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut maps = 0;
    for i in 0..ROUND_TRIPS {
        let chart = random_chart(&mut rng);
        maps += chart.maps().count();
        let doc = ChartDocument { theory: "kr".into(), pipeline: "random".into(), chart };
        let text = io::serialize(&doc);
        let back = io::parse(&text).map_err(|e| format!("chart {i}: {e}"))?;
        ensure(back == doc && io::serialize(&back) == text, || format!("chart {i} does not round-trip"))?;
    }
    let one = renders(1);
    for n in [2, 4] {
        ensure(renders(n) == one, || format!("output with {n} threads differs from one thread"))?;
    }
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = cli::run(["roq", "verify", "all"], &mut out, &mut err);
    ensure(code == cli::EXIT_OK, || format!("verify all exited {code}:\n{}", String::from_utf8_lossy(&out)))?;
    Ok(format!("{ROUND_TRIPS} round trips ({maps} maps), renders identical on 1/2/4 threads, verify all exit 0"))
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("HZ triple equality", criterion_1),
        ("kR double equality", criterion_2),
        ("hfpss intermediate pages", criterion_3),
        ("Tate rings", criterion_4),
        ("geometric fixed points", criterion_5),
        ("axes", criterion_6),
        ("gap and connectivity", criterion_7),
        ("theta laws", criterion_8),
        ("slice extraction", criterion_9),
        ("infrastructure", criterion_10),
    ];
    let mut failed = Vec::new();
    for (i, (name, f)) in criteria.iter().enumerate() {
        match f() {
            Ok(detail) => println!("PASS {} {name}: {detail}", i + 1),
            Err(why) => {
                println!("FAIL {} {name}: {why}", i + 1);
                failed.push(i + 1);
            }
        }
    }
    if !failed.is_empty() {
        eprintln!("failed criteria: {failed:?}");
        std::process::exit(1);
    }
}
