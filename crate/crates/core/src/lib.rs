//! Exact computation of RO(Q)-graded coefficient charts for `HZ` (constant
//! Mackey functor coefficients) and `kR` (connective K-theory with Reality).

pub mod algebra;
pub mod cells;
pub mod cli;
pub mod grading;
pub mod io;
pub mod specseq;
pub mod tate;
pub mod theories;
pub mod verify;
