use proptest::prelude::*;

use super::bockstein::THETA_SHIFT;
use super::*;
use crate::algebra::FgAbelian;
use crate::grading::{BlockClass, ChartEntry, GeneratorName, HzClass, TowerKind};

fn z() -> FgAbelian {
    FgAbelian::free(1)
}
fn f2() -> FgAbelian {
    FgAbelian::cyclic(2)
}
fn zero() -> FgAbelian {
    FgAbelian::zero()
}
fn name(s: &str) -> GeneratorName {
    GeneratorName::parse(s).unwrap()
}

#[test]
fn hfpss_examples() {
    let hz = run_hfpss(&Theory::Hz.seed(), Window::square(6), 2).unwrap();
    assert_eq!(hz.chart.group(Degree::new(0, -1)), f2());
    assert_eq!(hz.chart.group(Degree::new(-2, 2)), z());
    assert_eq!(hz.chart.entry(Degree::new(0, -1)).unwrap().generators[0].name, name("a"));
    let kr = run_hfpss(&Theory::Kr.seed(), Window::new(-2, 9, -9, 3), 2).unwrap();
    assert_eq!(kr.chart.group(Degree::new(1, 0)), f2());
    assert_eq!(kr.chart.entry(Degree::new(1, 0)).unwrap().generators[0].name, name("a.vb"));
    assert_eq!(kr.chart.group(Degree::new(8, -8)), z());
    assert_eq!(kr.chart.entry(Degree::new(8, -8)).unwrap().generators[0].name, name("U^2"));
    let ko = [z(), f2(), f2(), zero(), z(), zero(), zero(), zero(), z()];
    let line: Vec<FgAbelian> = integer_line(&kr.chart, 0..=8).into_iter().map(|(_, g)| g).collect();
    assert_eq!(line, ko);
}

#[test]
fn hfpss_axes() {
    let hz = run_hfpss(&Theory::Hz.seed(), Window::square(9), 2).unwrap();
    for (x, g) in integer_line(&hz.chart, -9..=0) {
        let want = match x {
            0 => z(),
            x if x % 2 == 0 => f2(),
            _ => zero(),
        };
        assert_eq!(g, want, "HZ^hQ at {x}");
    }
    let kr = run_hfpss(&Theory::Kr.seed(), Window::square(9), 2).unwrap();
    for (x, g) in integer_line(&kr.chart, -9..=0) {
        let want = match x {
            0 => z(),
            x if x % 4 == 0 => f2(),
            _ => zero(),
        };
        assert_eq!(g, want, "kR^hQ at {x}");
    }
}

#[test]
fn hfpss_has_no_late_differentials() {
    for t in Theory::ALL {
        let run = run_hfpss(&t.seed(), Window::square(5), 2).unwrap();
        let e = run.e_infinity();
        assert!(e.candidates(e.max_reach()).is_empty(), "{t}");
    }
}

#[test]
fn padding_is_stable() {
    let c = padding_self_check(2, |p| Ok(tate_pipeline(Theory::Kr, Window::square(6), p)?.genuine)).unwrap();
    assert_eq!(c.groups(), Theory::Kr.closed_form(Window::square(6)).groups());
}

#[test]
fn theta_examples() {
    assert_eq!(theta_apply(&name("u")).unwrap(), Some(name("a^3")));
    assert_eq!(theta_apply(&name("u^2")).unwrap(), None);
    assert_eq!(theta_apply(&name("a^2.u^3")).unwrap(), Some(name("a^5.u^2")));
    assert_eq!(theta_apply(&name("2.u^-1")).unwrap(), None);
    assert_eq!(theta_apply(&name("t(1,6)")).unwrap(), Some(name("t(2,5)")));
    assert_eq!(theta_apply(&name("t(1,5)")).unwrap(), None);
    assert_eq!(theta_apply(&name("t(2,9)")).unwrap(), None);
    assert!(matches!(theta_apply(&name("vb")), Err(TheoryError::UnknownGenerator(_))));
    assert!(theta_apply(&GeneratorName::tower(TowerKind::Hz, 1, 2)).is_err());
}

#[test]
fn theta_squares_to_zero_with_fixed_degree() {
    let c = crate::grading::closed_form_hz(Window::square(14));
    let mut hits = 0;
    for (d, e) in c.entries() {
        for g in &e.generators {
            if let Some(t) = theta_apply(&g.name).unwrap() {
                hits += 1;
                assert_eq!(HzClass::from_name(&t).unwrap().degree(), d + THETA_SHIFT);
                assert_eq!(theta_apply(&t).unwrap(), None);
            }
        }
    }
    assert!(hits > 20);
}

#[test]
fn bockstein_examples() {
    let run = run_bockstein(Window::square(8), 2).unwrap();
    assert_eq!(run.contributions[&Degree::new(1, 0)], vec![(1, f2())]);
    assert_eq!(run.chart.entry(Degree::new(1, 0)).unwrap().generators[0].name, name("a.vh"));
    let four = run.chart.entry(Degree::new(4, 0)).unwrap();
    assert_eq!(run.contributions[&Degree::new(4, 0)], vec![(2, z())]);
    assert_eq!(four.generators[0].name, name("2.u.vh^2"));
    assert_eq!(four.generators[0].annotation, crate::grading::Annotation::Circle);
    for k in -8..=8 {
        for i in 1..=3 {
            if k - i >= -8 {
                assert_eq!(run.chart.group(Degree::new(k - i, k)), zero());
            }
        }
    }
}

#[test]
fn bockstein_matches_closed_form_up_to_extension() {
    let w = Window::square(10);
    let run = run_bockstein(w, 2).unwrap();
    let closed = Theory::Kr.closed_form(w);
    for d in w.degrees() {
        let want = closed.group(d);
        if run.chart.is_ambiguous(d) {
            assert!(floor_extensions(&run.contributions[&d]).unwrap().contains(&want), "{d}");
        } else {
            assert_eq!(run.chart.group(d), want, "{d}");
        }
    }
    assert!(run.multi_floor().contains(&Degree::new(-3, 5)));
}

#[test]
fn phi_sector_line() {
    let phi = phi_sector(12).unwrap();
    for (n, g) in phi {
        assert_eq!(g, if n % 4 == 0 { f2() } else { zero() }, "{n}");
    }
}

#[test]
fn slice_examples() {
    let run = run_bockstein(Window::new(-4, 10, -4, 10), 2).unwrap();
    let t = slice_extract(&run, -4..=9, 9);
    assert_eq!(t.e1_at(0, 0), z());
    assert_eq!(t.e1_at(1, 1), f2());
    assert_eq!(t.e1_at(-2, 0), zero());
    assert_eq!(t.e1_at(1, 0), zero());
    let orders: Vec<Vec<FgAbelian>> = (0..=8).map(|n| t.stem(n)).collect();
    let ko = [vec![z()], vec![f2()], vec![f2()], vec![], vec![z()], vec![], vec![], vec![], vec![z()]];
    assert_eq!(orders, ko);
}

proptest! {
    #[test]
    fn slice_coordinates_round_trip(x in -50i64..50, y in -50i64..50) {
        prop_assert_eq!(sss_to_bss(bss_to_sss((x, y))), Some((x, y)));
        match sss_to_bss((x, y)) {
            Some(b) => prop_assert_eq!(bss_to_sss(b), (x, y)),
            None => prop_assert!((x + y) % 2 != 0),
        }
    }
}

#[test]
fn structural_checks() {
    let w = Window::square(12);
    for t in Theory::ALL {
        let c = t.closed_form(w);
        assert!(gap_check(&c).passed(), "{t}");
        assert!(connectivity_check(&c).passed(), "{t}");
    }
    let mut bad = Theory::Hz.closed_form(w);
    bad.insert(Degree::new(-1, 1), ChartEntry::bare(&f2())).unwrap();
    let r = gap_check(&bad);
    assert_eq!(r.violations.iter().map(|v| v.0).collect::<Vec<_>>(), [Degree::new(-1, 1)]);
    let mut bad = Theory::Kr.closed_form(w);
    bad.insert(Degree::new(-3, 1), ChartEntry::bare(&f2())).unwrap();
    assert_eq!(connectivity_check(&bad).violations[0].0, Degree::new(-3, 1));
    let sq = tate_pipeline(Theory::Hz, Window::square(6), 2).unwrap();
    let r = connectivity_check(&sq.tate);
    assert!(!r.passed() && r.violations.iter().all(|(d, _)| d.x < 0));
}
