//! Catalog of the cohomology rings used by the builtin families, plus the
//! symmetric-product Poincaré series.

mod curve;
mod grassmann;
mod product;

use thiserror::Error;

pub use curve::{curve_algebra, curve_algebra_relabeled, picard_algebra};
pub use grassmann::{
    grassmann_algebra, grassmannian_cohomology, projective_space, quotient_chern_class, quotient_top_chern,
};
pub use product::tensor_algebra;

use crate::superalg::graded_power_coefficient;
use crate::GradedDims;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RingError {
    #[error("invalid Grassmannian shape G({k}, {n}): need 0 < k < N")]
    InvalidShape { k: usize, n: usize },
    #[error("{0}")]
    Algebra(#[from] crate::superalg::AlgebraError),
}

/// Compactly supported cohomology of affine `d`-space.
pub fn compact_support_affine(d: usize) -> GradedDims {
    GradedDims::from_pairs([(2 * d, 1)])
}

/// Graded dimensions of `H(Sym^n X)` from the Betti numbers of `X`: the `x^n`
/// coefficient of `∏_{i odd} (1 + x t^i)^{b_i} ∏_{i even} (1 - x t^i)^{-b_i}`.
pub fn macdonald_sym(dims: &GradedDims, n: usize) -> GradedDims {
    graded_power_coefficient(dims, n, false)
}
