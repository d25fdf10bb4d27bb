//! Cross-effects, heights, recursive degrees, the graded cross-effect functor
//! and the Taylor tower.
//!
//! Everything is computed on a finite window of objects. Heights and degrees
//! are therefore values *within the window*: a vanishing cross-effect or a
//! zero cokernel is only certified for the objects that were examined.

mod cross;
mod degree;
mod graded;
mod height;
mod taylor;

pub use cross::*;
pub use degree::*;
pub use graded::*;
pub use height::*;
pub use taylor::*;

use thiserror::Error;

use crate::cats::CatError;
use crate::exactalg::AlgebraError;
use crate::funrep::FunRepError;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum InvariantError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Category(#[from] CatError),
    #[error(transparent)]
    Functor(#[from] FunRepError),
    #[error("{flavor} needs a functor on {expected}, got {got}")]
    WrongCube {
        flavor: CrossFlavor,
        expected: String,
        got: String,
    },
    #[error("window {window} is too small: {reason}")]
    Window { window: usize, reason: String },
    #[error("the two descriptions of the cross-effect disagree at m = {m}, n = {n}")]
    FormulaMismatch { m: usize, n: usize },
    #[error("the subset and permutation structure fails its axioms: {0}")]
    Axioms(String),
    #[error("invalid coproduct context: {0}")]
    Context(String),
    #[error("{0}")]
    Unsupported(String),
}
