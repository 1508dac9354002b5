//! The mwp flow semiring, choice-indexed polynomials and matrices over them.

mod matrix;
mod poly;
mod scalar;

use thiserror::Error;

pub use matrix::{MwpMatrix, ScalarMatrix};
pub use poly::{all_assignments, ChoiceAssignment, Delta, DeltaPoly, DeltaSet, Monomial};
pub use scalar::{MwpScalar, ALL_SCALARS};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("matrices are indexed by different variables")]
    VarMismatch,
    #[error("no value for choice point {0}")]
    MissingChoice(u32),
    #[error("internal error: closure did not converge within {iterations} iterations")]
    StarDiverged { iterations: usize },
}
