//! Sparse matrices and direct solves.

mod lu;
mod ordering;
mod sparse;

pub use lu::{LuOptions, SparseLu};
pub use ordering::{bandwidths, reverse_cuthill_mckee};
pub use sparse::{SparseBuilder, SparseMatrix};

use thiserror::Error;

use crate::scalar::Real;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LinalgError {
    #[error("entry ({row}, {col}) outside a {nrows}x{ncols} matrix")]
    IndexOutOfRange { row: usize, col: usize, nrows: usize, ncols: usize },
    #[error("matrix is {nrows}x{ncols}, expected square")]
    NotSquare { nrows: usize, ncols: usize },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("zero pivot at unknown {index}: matrix is singular")]
    ZeroPivot { index: usize },
}

/// Solves `A x = b` by a fresh factorization.
pub fn solve<T: Real>(a: &SparseMatrix<T>, b: &[T]) -> Result<Vec<T>, LinalgError> {
    SparseLu::factor(a)?.solve(b)
}
