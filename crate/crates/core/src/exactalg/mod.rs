//! Exact linear algebra over the integers and the rationals.

mod integer;
mod lattice;
mod matrix;
mod module;
mod normal_form;
mod ring;
pub mod sparse;

use thiserror::Error;

pub use integer::Integer;
pub use lattice::Lattice;
pub use matrix::Matrix;
pub use module::{
    hom_decompose, module_invariants, subobject_ops, FPModule, HomDecomposition, ModuleHom,
    ModuleInvariants, Simplified, Subobject, SubobjectOps,
};
pub use normal_form::{
    column_hnf, kernel_basis, left_kernel_basis, rank, row_echelon, smith_normal_form, smith_with,
    solve_linear, Echelon, LinearSolver, Smith, SmithOptions,
};
pub use ring::{Rational, Ring, RingTag};

/// Matrix with exact entries over the ring `R`.
pub type ExactMatrix<R> = Matrix<R>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("ill-defined homomorphism: {0}")]
    IllDefined(String),
    #[error("subobjects live in different ambient modules")]
    AmbientMismatch,
    #[error("empty family of subobjects")]
    Empty,
}
