//! Exact linear algebra over a [`Field`]: sparse matrices, echelon forms,
//! ranks, kernels and the cohomology of a matrix complex at one spot.

mod elim;
mod field;
mod matrix;

pub use elim::{complex_cohomology, rank, rank_and_kernel, rref, Rref, DENSE_COLUMN_LIMIT};
pub use field::{sign, Field, Fp};
pub use matrix::SparseMatrix;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QError {
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("entry ({row}, {col}) outside a {rows}x{cols} matrix")]
    IndexOutOfRange { row: usize, col: usize, rows: usize, cols: usize },
    #[error("consecutive maps do not compose to zero (first nonzero entry at ({row}, {col}))")]
    CompositionNonzero { row: usize, col: usize },
}
