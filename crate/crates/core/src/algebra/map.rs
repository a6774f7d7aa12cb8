use num_bigint::BigInt;

use super::snf::kernel_basis;
use super::{AlgebraError, FgAbelian, IntMatrix, Subquotient};

/// Homomorphism between direct sums of cyclic groups, given on generators.
/// Column `j` of `matrix` is the image of source generator `j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AbelianMap {
    source: Vec<u64>,
    target: Vec<u64>,
    matrix: IntMatrix,
}

fn order_relations(orders: &[u64]) -> IntMatrix {
    let n = orders.len();
    let cols: Vec<Vec<BigInt>> = orders
        .iter()
        .enumerate()
        .filter(|(_, &o)| o != 0)
        .map(|(i, &o)| {
            let mut v = vec![BigInt::from(0); n];
            v[i] = BigInt::from(o);
            v
        })
        .collect();
    IntMatrix::from_cols(n, &cols)
}

impl AbelianMap {
    /// Checks that the map is well defined: `ord(s) * f(s) == 0` for every source generator.
    pub fn new(source: Vec<u64>, target: Vec<u64>, matrix: IntMatrix) -> Result<Self, AlgebraError> {
        if matrix.shape() != (target.len(), source.len()) {
            return Err(AlgebraError::Shape { expected: (target.len(), source.len()), found: matrix.shape() });
        }
        let matrix = matrix.reduce_rows(&target);
        let rel = Subquotient::quotient(target.len(), &order_relations(&target));
        for (j, &o) in source.iter().enumerate() {
            if o == 0 {
                continue;
            }
            let img: Vec<BigInt> = matrix.col(j).iter().map(|x| x * o).collect();
            if !rel.is_zero_class(&img) {
                return Err(AlgebraError::IllDefined { generator: j });
            }
        }
        Ok(AbelianMap { source, target, matrix })
    }

    pub fn zero(source: Vec<u64>, target: Vec<u64>) -> Self {
        let matrix = IntMatrix::zeros(target.len(), source.len());
        AbelianMap { source, target, matrix }
    }

    pub fn source_orders(&self) -> &[u64] {
        &self.source
    }

    pub fn target_orders(&self) -> &[u64] {
        &self.target
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.matrix
    }

    pub fn source_group(&self) -> FgAbelian {
        FgAbelian::from_orders(&self.source)
    }

    pub fn target_group(&self) -> FgAbelian {
        FgAbelian::from_orders(&self.target)
    }

    pub fn apply(&self, v: &[BigInt]) -> Vec<BigInt> {
        let out = self.matrix.apply(v);
        let col = IntMatrix::from_cols(out.len(), &[out]);
        col.reduce_rows(&self.target).col(0)
    }

    /// Kernel as a subquotient of the source coordinate lattice.
    pub fn kernel(&self) -> Subquotient {
        let n = self.source.len();
        let big = self.matrix.hcat(&order_relations(&self.target));
        let k = kernel_basis(&big);
        let cols: Vec<Vec<BigInt>> = k.columns().into_iter().map(|c| c[..n].to_vec()).collect();
        let numer = IntMatrix::from_cols(n, &cols).hcat(&order_relations(&self.source));
        Subquotient::new(n, &numer, &order_relations(&self.source))
    }

    /// Cokernel as a quotient of the target coordinate lattice.
    pub fn cokernel(&self) -> Subquotient {
        let rel = self.matrix.hcat(&order_relations(&self.target));
        Subquotient::quotient(self.target.len(), &rel)
    }

    /// Image as a subquotient of the target coordinate lattice.
    pub fn image(&self) -> Subquotient {
        let rel = order_relations(&self.target);
        Subquotient::new(self.target.len(), &self.matrix.hcat(&rel), &rel)
    }

    /// Some `x` with `f(x) = y`, if one exists.
    pub fn preimage(&self, y: &[BigInt]) -> Option<Vec<BigInt>> {
        let rel = order_relations(&self.target);
        let big = self.matrix.hcat(&rel);
        let n = self.source.len();
        // solve big * z = y through the Smith form of `big`
        let s = super::smith_normal_form(&big);
        let w = s.left.apply(y);
        let d = s.invariant_factors();
        let mut z0 = vec![BigInt::from(0); big.cols()];
        for (i, wi) in w.iter().enumerate() {
            match d.get(i) {
                Some(di) => {
                    if !(wi % di == BigInt::from(0)) {
                        return None;
                    }
                    z0[i] = wi / di;
                }
                None if *wi != BigInt::from(0) => return None,
                None => {}
            }
        }
        let z = s.right.apply(&z0);
        Some(z[..n].to_vec())
    }

    pub fn is_zero(&self) -> bool {
        self.matrix.is_zero()
    }

    /// `self ∘ first`.
    pub fn compose(&self, first: &AbelianMap) -> Result<AbelianMap, AlgebraError> {
        if first.target != self.source {
            return Err(AlgebraError::Composable);
        }
        AbelianMap::new(first.source.clone(), self.target.clone(), self.matrix.mul(&first.matrix))
    }

    pub fn is_iso(&self) -> bool {
        self.kernel().is_empty() && self.cokernel().is_empty()
    }

    /// `ker(self) / im(prev)`, in source coordinates of `self`.
    pub fn homology_after(&self, prev: &AbelianMap) -> Result<Subquotient, AlgebraError> {
        if !self.compose(prev)?.is_zero() {
            return Err(AlgebraError::Complex("composite of consecutive maps is nonzero".into()));
        }
        let n = self.source.len();
        let rel = order_relations(&self.source);
        let k = self.kernel();
        let numer = IntMatrix::from_cols(n, k.generators()).hcat(&rel);
        Ok(Subquotient::new(n, &numer, &prev.matrix.hcat(&rel)))
    }
}
