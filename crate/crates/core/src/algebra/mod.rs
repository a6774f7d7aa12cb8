//! Exact integer linear algebra: matrices, Smith normal form, finitely
//! generated abelian groups, subquotients and chain complexes.

mod complex;
mod extension;
mod group;
mod map;
mod matrix;
mod snf;
mod subquotient;

pub use complex::IntComplex;
pub use extension::{extensions, filtered_groups};
pub use group::FgAbelian;
pub use map::AbelianMap;
pub use matrix::{modulo, IntMatrix};
pub use snf::{kernel_basis, lattice_basis, smith_normal_form, SmithForm};
pub use subquotient::Subquotient;

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("shape mismatch: expected {expected:?}, found {found:?}")]
    Shape { expected: (usize, usize), found: (usize, usize) },
    #[error("map is not well defined on source generator {generator}")]
    IllDefined { generator: usize },
    #[error("maps are not composable")]
    Composable,
    #[error("invalid complex: {0}")]
    Complex(String),
}
