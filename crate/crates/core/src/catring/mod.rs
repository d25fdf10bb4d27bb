//! Category rings and induction.
//!
//! Tensor products over category rings and monoid rings are built as explicit
//! finite presentations, free on basis pairs modulo the bilinearity
//! relations, and shrunk along unit pivots before any dense algebra.
//!
//! Equivariant isomorphism is certified in two parts: the underlying abelian
//! groups by invariant factors, and the rational representations by comparing
//! traces of every group element.

mod decomposition;
mod kan;
mod monoid;
mod ring;
mod star;
mod tensor;

use thiserror::Error;

pub use decomposition::*;
pub use kan::*;
pub use monoid::*;
pub use ring::*;
pub use star::*;
pub use tensor::*;

use crate::cats::CatError;
use crate::exactalg::AlgebraError;
use crate::funrep::FunRepError;
use crate::invariants::InvariantError;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CatRingError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Category(#[from] CatError),
    #[error(transparent)]
    Functor(#[from] FunRepError),
    #[error(transparent)]
    Invariant(#[from] InvariantError),
    #[error("malformed input: {0}")]
    Malformed(String),
    #[error("needs {needed} entries, budget is {budget}")]
    TooLarge { needed: usize, budget: usize },
    #[error("unsupported: {0}")]
    Unsupported(String),
}
