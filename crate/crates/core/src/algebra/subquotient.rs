use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use super::snf::smith_normal_form;
use super::{modulo, FgAbelian, IntMatrix};

/// A subquotient `L / R` of `Z^n`, where `R ⊆ L` are lattices given by
/// generating vectors. Carries a cyclic basis and a coordinate map.
#[derive(Clone, Debug)]
pub struct Subquotient {
    ambient: usize,
    /// Basis of `L`, as columns (full column rank).
    numer: IntMatrix,
    /// Smith data for solving `numer * c = v`: `u * numer = [diag(d); 0]`.
    solve_left: IntMatrix,
    solve_diag: Vec<BigInt>,
    /// Change of basis on `L`-coordinates towards the cyclic decomposition.
    p: IntMatrix,
    /// Indices (into the `p`-basis) of the nontrivial summands with their orders.
    kept: Vec<(usize, u64)>,
    gens: Vec<Vec<BigInt>>,
}

impl Subquotient {
    /// `numer` and `relations` hold generators as columns, both of length `ambient`.
    /// Panics if some relation does not lie in the numerator lattice.
    pub fn new(ambient: usize, numer: &IntMatrix, relations: &IntMatrix) -> Self {
        assert_eq!(numer.rows(), ambient);
        assert_eq!(relations.rows(), ambient);
        let s = smith_normal_form(numer);
        let d = s.invariant_factors();
        let k = d.len();
        // basis of L: columns of left_inv scaled by d
        let mut basis = IntMatrix::zeros(ambient, k);
        for (j, dj) in d.iter().enumerate() {
            for i in 0..ambient {
                basis.set(i, j, s.left_inv.get(i, j) * dj);
            }
        }
        let mut sq = Subquotient {
            ambient,
            numer: basis,
            solve_left: s.left,
            solve_diag: d,
            p: IntMatrix::identity(k),
            kept: Vec::new(),
            gens: Vec::new(),
        };
        let rel_cols: Vec<Vec<BigInt>> = relations
            .columns()
            .iter()
            .map(|v| sq.lattice_coords(v).expect("relation outside numerator lattice"))
            .collect();
        let c = IntMatrix::from_cols(k, &rel_cols);
        let t = smith_normal_form(&c);
        let e = t.invariant_factors();
        let mut kept = Vec::new();
        for i in 0..k {
            let order = e.get(i).map_or(0u64, |v| v.to_u64().expect("order exceeds u64"));
            if order != 1 {
                kept.push((i, order));
            }
        }
        let new_basis = sq.numer.mul(&t.left_inv);
        sq.gens = kept.iter().map(|&(i, _)| new_basis.col(i)).collect();
        sq.p = t.left;
        sq.kept = kept;
        sq
    }

    /// The whole lattice `Z^n` modulo the given relations.
    pub fn quotient(ambient: usize, relations: &IntMatrix) -> Self {
        Self::new(ambient, &IntMatrix::identity(ambient), relations)
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn group(&self) -> FgAbelian {
        FgAbelian::from_orders(&self.orders())
    }

    /// Orders of the cyclic generators (0 for infinite).
    pub fn orders(&self) -> Vec<u64> {
        self.kept.iter().map(|&(_, o)| o).collect()
    }

    /// Ambient representatives of the cyclic generators.
    pub fn generators(&self) -> &[Vec<BigInt>] {
        &self.gens
    }

    pub fn len(&self) -> usize {
        self.kept.len()
    }

    pub fn is_empty(&self) -> bool {
        self.kept.is_empty()
    }

    /// Coordinates of `v` with respect to the basis of `L`, or `None` if `v ∉ L`.
    fn lattice_coords(&self, v: &[BigInt]) -> Option<Vec<BigInt>> {
        let w = self.solve_left.apply(v);
        let k = self.solve_diag.len();
        if w[k..].iter().any(|x| !x.is_zero()) {
            return None;
        }
        let mut c = Vec::with_capacity(k);
        for (x, d) in w[..k].iter().zip(&self.solve_diag) {
            if !(x % d).is_zero() {
                return None;
            }
            c.push(x / d);
        }
        Some(c)
    }

    pub fn contains(&self, v: &[BigInt]) -> bool {
        self.lattice_coords(v).is_some()
    }

    /// Coordinates of the class of `v` in the cyclic basis, reduced modulo the
    /// finite orders. `None` if `v` is not in the numerator lattice.
    pub fn coords(&self, v: &[BigInt]) -> Option<Vec<BigInt>> {
        let c = self.lattice_coords(v)?;
        let pc = self.p.apply(&c);
        Some(
            self.kept
                .iter()
                .map(|&(i, o)| if o == 0 { pc[i].clone() } else { modulo(&pc[i], &BigInt::from(o)) })
                .collect(),
        )
    }

    /// Is `v` in the numerator and zero in the quotient?
    pub fn is_zero_class(&self, v: &[BigInt]) -> bool {
        self.coords(v).is_some_and(|c| c.iter().all(Zero::is_zero))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bi(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn z_mod_two() {
        let q = Subquotient::quotient(1, &IntMatrix::from_rows(&[vec![2]]));
        assert_eq!(q.group(), FgAbelian::cyclic(2));
        assert_eq!(q.coords(&bi(&[3])), Some(bi(&[1])));
        assert!(q.is_zero_class(&bi(&[4])));
    }

    #[test]
    fn sublattice_quotient() {
        // L = 2Z ⊕ Z, R = 4Z ⊕ 0
        let l = IntMatrix::from_rows(&[vec![2, 0], vec![0, 1]]);
        let r = IntMatrix::from_rows(&[vec![4], vec![0]]);
        let q = Subquotient::new(2, &l, &r);
        assert_eq!(q.group(), FgAbelian::from_orders(&[0, 2]));
        assert!(q.coords(&bi(&[1, 0])).is_none());
        assert!(q.is_zero_class(&bi(&[8, 0])));
        assert!(!q.is_zero_class(&bi(&[2, 0])));
        for g in q.generators() {
            assert!(q.contains(g));
        }
    }

    #[test]
    fn generators_have_unit_coordinates() {
        let l = IntMatrix::from_rows(&[vec![1, 1, 0], vec![0, 3, 3]]);
        let r = IntMatrix::from_rows(&[vec![6, 0], vec![0, 9]]);
        let q = Subquotient::new(2, &l, &r);
        for (i, g) in q.generators().iter().enumerate() {
            let c = q.coords(g).unwrap();
            for (j, x) in c.iter().enumerate() {
                let want = if i == j { 1 } else { 0 };
                assert_eq!(x, &BigInt::from(want));
            }
        }
    }
}
