use std::fmt;

use num_bigint::BigInt;
use num_traits::ToPrimitive;

/// Finitely generated abelian group `Z^rank ⊕ Z/t1 ⊕ … ⊕ Z/tk`, normalized:
/// every `ti > 1` and `t1 | t2 | … | tk`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FgAbelian {
    rank: usize,
    torsion: Vec<u64>,
}

impl FgAbelian {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn free(rank: usize) -> Self {
        FgAbelian { rank, torsion: Vec::new() }
    }

    pub fn cyclic(n: u64) -> Self {
        Self::from_orders(&[n])
    }

    /// Direct sum of cyclic groups; order 0 means `Z`, order 1 the trivial group.
    pub fn from_orders(orders: &[u64]) -> Self {
        let rank = orders.iter().filter(|&&n| n == 0).count();
        let finite: Vec<u64> = orders.iter().copied().filter(|&n| n > 1).collect();
        FgAbelian { rank, torsion: invariant_factors_of(&finite) }
    }

    pub fn from_bigint_orders(orders: &[BigInt]) -> Self {
        let small: Vec<u64> = orders.iter().map(|n| n.to_u64().expect("cyclic order exceeds u64")).collect();
        Self::from_orders(&small)
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn torsion(&self) -> &[u64] {
        &self.torsion
    }

    pub fn is_zero(&self) -> bool {
        self.rank == 0 && self.torsion.is_empty()
    }

    pub fn is_free(&self) -> bool {
        self.torsion.is_empty()
    }

    pub fn is_torsion(&self) -> bool {
        self.rank == 0
    }

    /// Number of cyclic summands in the normal form.
    pub fn num_summands(&self) -> usize {
        self.rank + self.torsion.len()
    }

    /// Order of the torsion subgroup.
    pub fn torsion_order(&self) -> u64 {
        self.torsion.iter().try_fold(1u64, |acc, &t| acc.checked_mul(t)).expect("torsion order overflow")
    }

    /// `None` for infinite groups.
    pub fn order(&self) -> Option<u64> {
        (self.rank == 0).then(|| self.torsion_order())
    }

    pub fn direct_sum(&self, other: &FgAbelian) -> FgAbelian {
        let mut orders: Vec<u64> = self.torsion.iter().chain(&other.torsion).copied().collect();
        orders.extend(std::iter::repeat_n(0, self.rank + other.rank));
        Self::from_orders(&orders)
    }

    /// Rank together with the elementary divisors (prime powers), sorted.
    pub fn composition_factors(&self) -> (usize, Vec<u64>) {
        let mut pp: Vec<u64> = self.torsion.iter().flat_map(|&t| prime_power_parts(t)).collect();
        pp.sort_unstable();
        (self.rank, pp)
    }

    /// Rank of `Hom(self, other)` is positive or there is a nonzero torsion homomorphism.
    pub fn hom_nonzero(&self, other: &FgAbelian) -> bool {
        if self.rank > 0 && !other.is_zero() {
            return true;
        }
        self.torsion.iter().any(|&s| other.torsion.iter().any(|&t| gcd(s, t) > 1))
    }

    pub fn orders(&self) -> Vec<u64> {
        let mut v = vec![0; self.rank];
        v.extend(&self.torsion);
        v
    }
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

fn prime_power_parts(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p.saturating_mul(p) <= n {
        if n.is_multiple_of(p) {
            let mut q = 1u64;
            while n.is_multiple_of(p) {
                n /= p;
                q *= p;
            }
            out.push(q);
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

fn invariant_factors_of(orders: &[u64]) -> Vec<u64> {
    // group prime powers by prime, largest first, then recombine column-wise
    let mut by_prime: Vec<(u64, Vec<u64>)> = Vec::new();
    for &n in orders {
        for q in prime_power_parts(n) {
            let p = smallest_prime_factor(q);
            match by_prime.iter_mut().find(|(pp, _)| *pp == p) {
                Some((_, v)) => v.push(q),
                None => by_prime.push((p, vec![q])),
            }
        }
    }
    let len = by_prime.iter().map(|(_, v)| v.len()).max().unwrap_or(0);
    for (_, v) in &mut by_prime {
        v.sort_unstable_by(|a, b| b.cmp(a));
    }
    let mut factors: Vec<u64> = (0..len)
        .map(|k| {
            by_prime
                .iter()
                .filter_map(|(_, v)| v.get(k))
                .try_fold(1u64, |acc, &q| acc.checked_mul(q))
                .expect("invariant factor overflow")
        })
        .collect();
    factors.sort_unstable();
    factors
}

fn smallest_prime_factor(n: u64) -> u64 {
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            return p;
        }
        p += 1;
    }
    n
}

impl fmt::Display for FgAbelian {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut parts = Vec::new();
        match self.rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        for t in &self.torsion {
            parts.push(format!("Z/{t}"));
        }
        write!(f, "{}", parts.join("+"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn normal_form_merges_coprime_parts() {
        assert_eq!(FgAbelian::from_orders(&[2, 3]), FgAbelian::from_orders(&[6]));
        assert_eq!(FgAbelian::from_orders(&[4, 6]).torsion(), &[2, 12]);
        assert_eq!(FgAbelian::from_orders(&[1, 0, 2]).to_string(), "Z+Z/2");
    }

    #[test]
    fn composition_factors_split_primes() {
        assert_eq!(FgAbelian::cyclic(4).composition_factors(), (0, vec![4]));
        assert_eq!(FgAbelian::cyclic(12).composition_factors(), (0, vec![3, 4]));
    }

    #[test]
    fn hom_detection() {
        let z = FgAbelian::free(1);
        let z2 = FgAbelian::cyclic(2);
        assert!(!z2.hom_nonzero(&z));
        assert!(z.hom_nonzero(&z2));
        assert!(!z2.hom_nonzero(&FgAbelian::cyclic(3)));
        assert!(FgAbelian::cyclic(6).hom_nonzero(&FgAbelian::cyclic(4)));
    }

    proptest! {
        #[test]
        fn normal_form_idempotent(orders in prop::collection::vec(0u64..40, 0..6)) {
            let g = FgAbelian::from_orders(&orders);
            prop_assert_eq!(FgAbelian::from_orders(&g.orders()), g.clone());
            for w in g.torsion().windows(2) {
                prop_assert_eq!(w[1] % w[0], 0);
            }
            let expected: u64 = orders.iter().filter(|&&n| n > 0).product();
            prop_assert_eq!(g.torsion_order(), expected);
        }

        #[test]
        fn direct_sum_commutes(a in prop::collection::vec(0u64..20, 0..4), b in prop::collection::vec(0u64..20, 0..4)) {
            let ga = FgAbelian::from_orders(&a);
            let gb = FgAbelian::from_orders(&b);
            prop_assert_eq!(ga.direct_sum(&gb), gb.direct_sum(&ga));
        }
    }
}
