use num_bigint::BigInt;

use super::{Annotation, Chart, ChartEntry, Degree, Generator, GeneratorName, Symbol, TowerKind, Window};
use crate::algebra::IntMatrix;

/// A class in a block-model chart, with its multiplicative rules.
pub trait BlockClass: Sized + Clone + PartialEq {
    fn degree(&self) -> Degree;
    fn name(&self) -> GeneratorName;
    fn annotation(&self) -> Annotation;
    fn classes_at(d: Degree) -> Vec<Self>;
    /// `self · s` as `coeff · class`, or `None` for zero.
    fn times(&self, s: Symbol) -> Option<(i64, Self)>;
}

fn build<C: BlockClass>(window: Window, maps: &[Symbol]) -> Chart {
    let mut chart = Chart::new(window);
    if window.is_empty() {
        return chart;
    }
    let mut classes: std::collections::BTreeMap<Degree, Vec<C>> = Default::default();
    for d in window.degrees() {
        let mut cs = C::classes_at(d);
        if cs.is_empty() {
            continue;
        }
        cs.sort_by_key(|c| (c.annotation().order() != 0, c.name()));
        let gens = cs.iter().map(|c| Generator::new(c.name(), c.annotation())).collect();
        chart.insert(d, ChartEntry::new(gens)).expect("degree in window");
        classes.insert(d, cs);
    }
    for &s in maps {
        for (d, src) in &classes {
            let t = *d + s.degree();
            if !window.contains(t) {
                continue;
            }
            let tgt = classes.get(&t).map(Vec::as_slice).unwrap_or(&[]);
            let mut m = IntMatrix::zeros(tgt.len(), src.len());
            for (j, c) in src.iter().enumerate() {
                if let Some((k, img)) = c.times(s) {
                    let i = tgt
                        .iter()
                        .position(|x| *x == img)
                        .unwrap_or_else(|| panic!("{} · {s} lands outside the block model", c.name()));
                    m.set(i, j, BigInt::from(k));
                }
            }
            chart.set_map(s, *d, m).expect("block-model map shape");
        }
    }
    chart
}

/// Classes of the closed-form HZ chart.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum HzClass {
    /// `a^k u^j`, `j, k ≥ 0`.
    Pos { j: i64, k: i64 },
    /// `2u^{-j}`, `j ≥ 1`.
    TwoNeg { j: i64 },
    /// `t(j, y)`, `j ≥ 1`, `y ≥ 2j+1`.
    Tower { j: i64, y: i64 },
}

impl HzClass {
    pub fn is_valid(&self) -> bool {
        match *self {
            HzClass::Pos { j, k } => j >= 0 && k >= 0,
            HzClass::TwoNeg { j } => j >= 1,
            HzClass::Tower { j, y } => j >= 1 && y > 2 * j,
        }
    }

    pub fn from_name(n: &GeneratorName) -> Option<HzClass> {
        let c = match n {
            GeneratorName::Tower { kind: TowerKind::Hz, index, height } => HzClass::Tower { j: *index, y: *height },
            GeneratorName::Monomial { coeff, powers } => {
                if powers.iter().any(|(s, _)| !matches!(s, Symbol::A | Symbol::SmallU)) {
                    return None;
                }
                let k = n.exponent(Symbol::A);
                let j = n.exponent(Symbol::SmallU);
                match coeff {
                    1 => HzClass::Pos { j, k },
                    2 if k == 0 => HzClass::TwoNeg { j: -j },
                    _ => return None,
                }
            }
            _ => return None,
        };
        (c.is_valid() && c.name() == *n).then_some(c)
    }

    pub fn order(&self) -> u64 {
        self.annotation().order()
    }
}

impl BlockClass for HzClass {
    fn degree(&self) -> Degree {
        match *self {
            HzClass::Pos { j, k } => Degree::new(2 * j, -2 * j - k),
            HzClass::TwoNeg { j } => Degree::new(-2 * j, 2 * j),
            HzClass::Tower { j, y } => Degree::new(-2 * j - 1, y),
        }
    }

    fn name(&self) -> GeneratorName {
        match *self {
            HzClass::Pos { j, k } => GeneratorName::monomial(1, &[(Symbol::A, k), (Symbol::SmallU, j)]),
            HzClass::TwoNeg { j } => GeneratorName::monomial(2, &[(Symbol::SmallU, -j)]),
            HzClass::Tower { j, y } => GeneratorName::tower(TowerKind::Hz, j, y),
        }
    }

    fn annotation(&self) -> Annotation {
        match *self {
            HzClass::Pos { k: 0, .. } => Annotation::Square,
            HzClass::Pos { .. } | HzClass::Tower { .. } => Annotation::Dot,
            HzClass::TwoNeg { .. } => Annotation::Circle,
        }
    }

    fn classes_at(d: Degree) -> Vec<Self> {
        let Degree { x, y } = d;
        let c = if x >= 0 && x % 2 == 0 && y <= -x {
            HzClass::Pos { j: x / 2, k: -x - y }
        } else if x < 0 && x % 2 == 0 && y == -x {
            HzClass::TwoNeg { j: -x / 2 }
        } else if x <= -3 && x % 2 != 0 {
            HzClass::Tower { j: (-x - 1) / 2, y }
        } else {
            return Vec::new();
        };
        if c.is_valid() {
            vec![c]
        } else {
            Vec::new()
        }
    }

    fn times(&self, s: Symbol) -> Option<(i64, Self)> {
        let out = match (*self, s) {
            (HzClass::Pos { j, k }, Symbol::A) => (1, HzClass::Pos { j, k: k + 1 }),
            (HzClass::Pos { j, k }, Symbol::SmallU) => (1, HzClass::Pos { j: j + 1, k }),
            (HzClass::TwoNeg { .. }, Symbol::A) => return None,
            (HzClass::TwoNeg { j: 1 }, Symbol::SmallU) => (2, HzClass::Pos { j: 0, k: 0 }),
            (HzClass::TwoNeg { j }, Symbol::SmallU) => (1, HzClass::TwoNeg { j: j - 1 }),
            (HzClass::Tower { j, y }, Symbol::A) => (1, HzClass::Tower { j, y: y - 1 }),
            (HzClass::Tower { j, y }, Symbol::SmallU) => (1, HzClass::Tower { j: j - 1, y: y - 2 }),
            _ => return None,
        };
        out.1.is_valid().then_some(out)
    }
}

/// Classes of the closed-form kR chart.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum KrClass {
    /// `a^j v̄^m U^k`: for `k ≥ 0` either `m = 0` or `j ≤ 2`; for `k < 0`, `m ≥ 1` and `j ≤ 2`.
    Block { k: i64, m: i64, j: i64 },
    /// `2u v̄^m U^k`, any `k`, `m ≥ 0`.
    TwoU { k: i64, m: i64 },
    /// `2U^{-k}`, `k ≥ 1`.
    TwoNeg { k: i64 },
    /// `T(k, y)` at `(-4k-1, y)`, `k ≥ 1`, `y ≥ 4k+1`.
    Tower { k: i64, y: i64 },
}

impl KrClass {
    pub fn is_valid(&self) -> bool {
        match *self {
            KrClass::Block { k, m, j } => m >= 0 && j >= 0 && if k >= 0 { m == 0 || j <= 2 } else { m >= 1 && j <= 2 },
            KrClass::TwoU { m, .. } => m >= 0,
            KrClass::TwoNeg { k } => k >= 1,
            KrClass::Tower { k, y } => k >= 1 && y > 4 * k,
        }
    }

    pub fn from_name(n: &GeneratorName) -> Option<KrClass> {
        KrClass::classes_at(n.degree()?).into_iter().find(|c| c.name() == *n)
    }
}

impl BlockClass for KrClass {
    fn degree(&self) -> Degree {
        match *self {
            KrClass::Block { k, m, j } => Degree::new(4 * k + m, -4 * k + m - j),
            KrClass::TwoU { k, m } => Degree::new(4 * k + 2 + m, -4 * k - 2 + m),
            KrClass::TwoNeg { k } => Degree::new(-4 * k, 4 * k),
            KrClass::Tower { k, y } => Degree::new(-4 * k - 1, y),
        }
    }

    fn name(&self) -> GeneratorName {
        match *self {
            KrClass::Block { k, m, j } => {
                GeneratorName::monomial(1, &[(Symbol::A, j), (Symbol::BigU, k), (Symbol::VBar, m)])
            }
            KrClass::TwoU { k, m } => {
                GeneratorName::monomial(2, &[(Symbol::SmallU, 1), (Symbol::BigU, k), (Symbol::VBar, m)])
            }
            KrClass::TwoNeg { k } => GeneratorName::monomial(2, &[(Symbol::BigU, -k)]),
            KrClass::Tower { k, y } => GeneratorName::tower(TowerKind::Kr, k, y),
        }
    }

    fn annotation(&self) -> Annotation {
        match *self {
            KrClass::Block { j: 0, .. } => Annotation::Square,
            KrClass::Block { .. } | KrClass::Tower { .. } => Annotation::Dot,
            KrClass::TwoU { .. } | KrClass::TwoNeg { .. } => Annotation::Circle,
        }
    }

    fn classes_at(d: Degree) -> Vec<Self> {
        let Degree { x, y } = d;
        let mut out = Vec::new();
        // Block: m = x - 4k, j = x - y - 8k
        let k_hi = x.div_euclid(4).min((x - y).div_euclid(8));
        let k_lo = k_hi.min((x - y - 2).div_euclid(8)).min(0) - 1;
        for k in k_lo..=k_hi {
            let c = KrClass::Block { k, m: x - 4 * k, j: x - y - 8 * k };
            if c.is_valid() {
                out.push(c);
            }
        }
        if (x - y - 4).rem_euclid(8) == 0 {
            let k = (x - y - 4) / 8;
            let c = KrClass::TwoU { k, m: x - 2 - 4 * k };
            if c.is_valid() {
                out.push(c);
            }
        }
        if x < 0 && x % 4 == 0 && y == -x {
            out.push(KrClass::TwoNeg { k: -x / 4 });
        }
        if x <= -5 && (x + 1) % 4 == 0 {
            let c = KrClass::Tower { k: (-x - 1) / 4, y };
            if c.is_valid() {
                out.push(c);
            }
        }
        out
    }

    fn times(&self, s: Symbol) -> Option<(i64, Self)> {
        use KrClass::*;
        let out = match (*self, s) {
            (Block { k, m, j }, Symbol::A) => (1, Block { k, m, j: j + 1 }),
            (Block { k, m, j }, Symbol::VBar) => (1, Block { k, m: m + 1, j }),
            (Block { k, m, j }, Symbol::BigU) => (1, Block { k: k + 1, m, j }),
            (TwoU { .. }, Symbol::A) => return None,
            (TwoU { k, m }, Symbol::VBar) => (1, TwoU { k, m: m + 1 }),
            (TwoU { k, m }, Symbol::BigU) => (1, TwoU { k: k + 1, m }),
            (TwoNeg { .. }, Symbol::A) => return None,
            (TwoNeg { k }, Symbol::VBar) => (2, Block { k: -k, m: 1, j: 0 }),
            (TwoNeg { k: 1 }, Symbol::BigU) => (2, Block { k: 0, m: 0, j: 0 }),
            (TwoNeg { k }, Symbol::BigU) => (1, TwoNeg { k: k - 1 }),
            (Tower { k, y }, Symbol::A) => (1, Tower { k, y: y - 1 }),
            (Tower { .. }, Symbol::VBar) => return None,
            (Tower { k, y }, Symbol::BigU) => (1, Tower { k: k - 1, y: y - 4 }),
            _ => return None,
        };
        out.1.is_valid().then_some(out)
    }
}

/// `BB[u] ⊕ u⁻¹·NB[u⁻¹]` for `BB = Z[a]/(2a)`, with `a` and `u` multiplication.
pub fn closed_form_hz(window: Window) -> Chart {
    build::<HzClass>(window, &[Symbol::A, Symbol::SmallU])
}

/// The kR block chart with `a`, `v̄` and `U` multiplication.
pub fn closed_form_kr(window: Window) -> Chart {
    build::<KrClass>(window, &[Symbol::A, Symbol::VBar, Symbol::BigU])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::FgAbelian;

    fn g(c: &Chart, x: i64, y: i64) -> FgAbelian {
        c.group(Degree::new(x, y))
    }

    #[test]
    fn hz_named_entries() {
        let c = closed_form_hz(Window::square(12));
        assert_eq!(g(&c, 0, 0), FgAbelian::free(1));
        assert_eq!(c.entry(Degree::new(0, 0)).unwrap().generators[0].name, GeneratorName::one());
        assert_eq!(g(&c, 0, -3), FgAbelian::cyclic(2));
        assert_eq!(c.entry(Degree::new(0, -3)).unwrap().generators[0].name.to_string(), "a^3");
        assert_eq!(g(&c, -3, 3), FgAbelian::cyclic(2));
        assert!(g(&c, -1, 1).is_zero());
        assert_eq!(c.entry(Degree::new(-2, 2)).unwrap().generators[0].annotation, Annotation::Circle);
    }

    #[test]
    fn hz_structure_maps() {
        let c = closed_form_hz(Window::square(6));
        assert_eq!(c.mult_map(Symbol::A, Degree::new(0, 0)).unwrap(), IntMatrix::from_rows(&[vec![1]]));
        assert!(c.mult_map(Symbol::A, Degree::new(-2, 2)).unwrap().is_zero());
        assert_eq!(c.mult_map(Symbol::SmallU, Degree::new(0, 0)).unwrap(), IntMatrix::from_rows(&[vec![1]]));
        assert_eq!(c.mult_map(Symbol::SmallU, Degree::new(-2, 2)).unwrap(), IntMatrix::from_rows(&[vec![2]]));
        assert!(c.commutation_failures(Symbol::A, Symbol::SmallU).is_empty());
    }

    #[test]
    fn empty_window_gives_empty_chart() {
        assert!(closed_form_hz(Window::new(1, 0, 0, 0)).is_empty());
        assert!(closed_form_kr(Window::new(0, 0, 1, 0)).is_empty());
    }

    #[test]
    fn kr_named_entries() {
        let c = closed_form_kr(Window::square(12));
        assert_eq!(g(&c, 0, 0), FgAbelian::free(1));
        assert_eq!(g(&c, 1, 0), FgAbelian::cyclic(2));
        assert_eq!(c.entry(Degree::new(1, 0)).unwrap().generators[0].name.to_string(), "a.vb");
        assert_eq!(g(&c, 4, -4), FgAbelian::free(1));
        assert!(g(&c, -1, 1).is_zero());
        assert_eq!(g(&c, -5, 11), FgAbelian::from_orders(&[0, 2]));
        assert_eq!(g(&c, -5, 10), FgAbelian::from_orders(&[2, 2]));
    }

    #[test]
    fn kr_integer_line_is_ko() {
        let c = closed_form_kr(Window::square(12));
        let want = [0u64, 2, 2, 1, 0, 1, 1, 1, 0];
        for (x, &o) in want.iter().enumerate() {
            assert_eq!(g(&c, x as i64, 0), FgAbelian::from_orders(&[o]), "x = {x}");
        }
    }

    #[test]
    fn kr_maps_commute() {
        let c = closed_form_kr(Window::square(12));
        for (p, q) in [(Symbol::A, Symbol::VBar), (Symbol::A, Symbol::BigU), (Symbol::VBar, Symbol::BigU)] {
            assert!(c.commutation_failures(p, q).is_empty(), "{p} {q}");
        }
    }

    #[test]
    fn kr_relations_hold() {
        let c = closed_form_kr(Window::square(12));
        // η⁴ = a⁴v̄⁴ = 0 from the unit
        let mut d = Degree::new(0, 0);
        let mut m = IntMatrix::identity(1);
        for _ in 0..4 {
            m = c.mult_map(Symbol::A, d).unwrap().mul(&m);
            d = d + Symbol::A.degree();
            m = c.mult_map(Symbol::VBar, d).unwrap().mul(&m);
            d = d + Symbol::VBar.degree();
        }
        assert!(m.reduce_rows(&c.orders(d)).is_zero());
    }

    #[test]
    fn names_parse_back_to_classes() {
        let c = closed_form_hz(Window::square(8));
        for (_, e) in c.entries() {
            for gen in &e.generators {
                assert!(HzClass::from_name(&gen.name).is_some(), "{}", gen.name);
            }
        }
        let k = closed_form_kr(Window::square(8));
        for (d, e) in k.entries() {
            for gen in &e.generators {
                let cl = KrClass::from_name(&gen.name).unwrap();
                assert_eq!(cl.degree(), d);
            }
        }
    }
}
