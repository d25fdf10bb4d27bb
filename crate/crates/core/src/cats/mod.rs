//! Finite combinatorial categories, structural functors between them, and
//! stabiliser structures with their searches.

mod cati;
mod fincat;
mod functor;
mod maps;
mod stabiliser;

pub use cati::*;
pub use fincat::*;
pub use functor::*;
pub use maps::*;
pub use stabiliser::*;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CatError {
    #[error("sets of size {0} exceed the supported maximum")]
    TooLarge(usize),
    #[error("invalid payload: {0}")]
    InvalidPayload(String),
    #[error("category needs {needed} morphisms, budget is {budget}")]
    BudgetExceeded { needed: u128, budget: usize },
    #[error("invalid group table: {0}")]
    InvalidGroup(String),
    #[error("selection is not closed under composition: {0}")]
    NotClosed(String),
    #[error("category law violated: {0}")]
    LawViolation(String),
    #[error("{0} is not supported for this category")]
    Unsupported(String),
    #[error("subsets have different sizes ({0} and {1})")]
    SizeMismatch(usize, usize),
    #[error("malformed partition: {0}")]
    MalformedPartition(String),
    #[error("not a functor: {0}")]
    NotAFunctor(String),
    #[error("search budget of {0} candidates exceeded")]
    SearchBudget(usize),
}
