use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;

use super::{smith_normal_form, FgAbelian, IntMatrix};

/// Every middle term `E` of `0 → sub → E → quot → 0`, or `None` when more
/// than `limit` cocycles would have to be enumerated.
pub fn extensions(sub: &FgAbelian, quot: &FgAbelian, limit: usize) -> Option<BTreeSet<FgAbelian>> {
    let a = sub.orders();
    let b: Vec<u64> = quot.orders().into_iter().filter(|&d| d != 0).collect();
    let free_quot = quot.rank();
    // cocycle entry (i, j) matters modulo gcd(order of a_i, order of b_j)
    let ranges: Vec<u64> = b.iter().flat_map(|&d| a.iter().map(move |&o| if o == 0 { d } else { d.gcd(&o) })).collect();
    let mut total: usize = 1;
    for &r in &ranges {
        total = total.checked_mul(r as usize).filter(|&t| t <= limit)?;
    }
    let n = a.len() + b.len();
    let mut out = BTreeSet::new();
    let mut x = vec![0u64; ranges.len()];
    loop {
        let mut cols: Vec<Vec<BigInt>> = Vec::new();
        for (i, &o) in a.iter().enumerate() {
            if o != 0 {
                let mut c = vec![BigInt::from(0); n];
                c[i] = BigInt::from(o);
                cols.push(c);
            }
        }
        for (j, &d) in b.iter().enumerate() {
            let mut c = vec![BigInt::from(0); n];
            c[a.len() + j] = BigInt::from(d);
            for i in 0..a.len() {
                c[i] = BigInt::from(x[j * a.len() + i]);
            }
            cols.push(c);
        }
        let rel = IntMatrix::from_cols(n, &cols);
        let mut orders = smith_normal_form(&rel).invariant_factors();
        orders.resize(n, BigInt::from(0));
        out.insert(FgAbelian::from_bigint_orders(&orders).direct_sum(&FgAbelian::free(free_quot)));
        // odometer
        let mut k = 0;
        loop {
            if k == x.len() {
                return Some(out);
            }
            x[k] += 1;
            if x[k] < ranges[k] {
                break;
            }
            x[k] = 0;
            k += 1;
        }
    }
}

/// Groups carrying a finite filtration with the given graded pieces, listed
/// from the top quotient down to the bottom subgroup.
pub fn filtered_groups(pieces: &[FgAbelian], limit: usize) -> Option<BTreeSet<FgAbelian>> {
    let Some((bottom, rest)) = pieces.split_last() else {
        return Some([FgAbelian::zero()].into());
    };
    let mut acc: BTreeSet<FgAbelian> = [bottom.clone()].into();
    for q in rest.iter().rev() {
        let mut next = BTreeSet::new();
        for s in &acc {
            next.extend(extensions(s, q, limit)?);
        }
        acc = next;
    }
    Some(acc)
}

#[cfg(test)]
mod tests {
    use proptest::prelude::*;

    use super::*;

    fn set(gs: &[FgAbelian]) -> BTreeSet<FgAbelian> {
        gs.iter().cloned().collect()
    }

    #[test]
    fn small_extensions() {
        let z = FgAbelian::free(1);
        let z2 = FgAbelian::cyclic(2);
        let e = |s: &FgAbelian, q: &FgAbelian| extensions(s, q, 1000).unwrap();
        assert_eq!(e(&z, &z2), set(&[z.clone(), z.direct_sum(&z2)]));
        assert_eq!(e(&z2, &z), set(&[z.direct_sum(&z2)]));
        assert_eq!(e(&z2, &z2), set(&[FgAbelian::cyclic(4), z2.direct_sum(&z2)]));
        assert_eq!(e(&z2, &FgAbelian::cyclic(3)), set(&[FgAbelian::cyclic(6)]));
        assert_eq!(e(&FgAbelian::cyclic(4), &z2), set(&[FgAbelian::cyclic(8), FgAbelian::from_orders(&[2, 4])]));
        assert_eq!(e(&FgAbelian::zero(), &z2), set(std::slice::from_ref(&z2)));
        assert!(extensions(&FgAbelian::from_orders(&[0; 20]), &FgAbelian::cyclic(1 << 20), 1000).is_none());
    }

    #[test]
    fn filtrations() {
        let z = FgAbelian::free(1);
        let z2 = FgAbelian::cyclic(2);
        let got = filtered_groups(&[z2.clone(), z2.clone(), z.clone()], 1000).unwrap();
        assert!(got.contains(&z));
        assert!(got.contains(&FgAbelian::from_orders(&[0, 4])));
        assert!(!got.contains(&FgAbelian::cyclic(8)));
        assert_eq!(filtered_groups(&[], 10).unwrap(), set(&[FgAbelian::zero()]));
    }

    fn small_group() -> impl Strategy<Value = FgAbelian> {
        prop::collection::vec(prop::sample::select(vec![0u64, 2, 3, 4]), 0..3).prop_map(|o| FgAbelian::from_orders(&o))
    }

    proptest! {
        #[test]
        fn extension_invariants(s in small_group(), q in small_group()) {
            let es = extensions(&s, &q, 10_000).unwrap();
            prop_assert!(es.contains(&s.direct_sum(&q)));
            for e in es {
                prop_assert_eq!(e.rank(), s.rank() + q.rank());
                if s.is_torsion() {
                    prop_assert_eq!(e.torsion_order(), s.torsion_order() * q.torsion_order());
                } else {
                    prop_assert_eq!((s.torsion_order() * q.torsion_order()) % e.torsion_order(), 0);
                }
            }
        }
    }
}
