//! Graded-commutative algebra kernel: presented algebras, Koszul signs,
//! tensor powers and their sign-twisted symmetric invariants.

mod algebra;
mod hom;
mod invariants;
mod koszul;
mod tensor;

use std::collections::HashMap;

use thiserror::Error;

use crate::qexact::Field;

pub use algebra::{BasisElement, Element, Generator, PresentedAlgebra, EXHAUSTIVE_ASSOCIATIVITY_LIMIT};
pub use hom::{AlgebraHom, TensorTarget};
pub(crate) use invariants::graded_power_coefficient;
pub use invariants::{
    canonicalize, orbit_size, project_to_invariants, sgn_invariant_basis, sym_ext_dims, InvMonomial, SgnInvariantBasis,
};
pub use koszul::{koszul_sign, permutation_sign};
pub use tensor::TensorElement;

/// Sparse vector over a basis: `(index, coefficient)` pairs.
pub type SparseVec<F> = Vec<(usize, F)>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("product of basis elements {i} and {j} is not homogeneous of the summed degree")]
    NotDegreeAdditive { i: usize, j: usize },
    #[error("basis elements {i} and {j} do not graded-commute")]
    NotGradedCommutative { i: usize, j: usize },
    #[error("unit law fails on basis element {index}")]
    UnitLaw { index: usize },
    #[error("associativity fails on basis triple ({i}, {j}, {k})")]
    NotAssociative { i: usize, j: usize, k: usize },
    #[error("word for basis element {index} does not reproduce it")]
    BadWord { index: usize },
    #[error("index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },
    #[error("expected an element of {expected}, found one of {found}")]
    AlgebraMismatch { expected: String, found: String },
    #[error("{what} is not homogeneous")]
    NotHomogeneous { what: String },
    #[error("{what} is not multiplicative")]
    NotMultiplicative { what: String },
    #[error("tensor is not sign-twisted invariant (term {slots:?})")]
    NotInvariant { slots: Vec<usize> },
}

pub(crate) fn add_scaled<F: Field>(acc: &mut HashMap<usize, F>, k: usize, c: &F, s: &F) {
    let v = c.clone() * s.clone();
    match acc.get_mut(&k) {
        Some(x) => *x = x.clone() + v,
        None => {
            acc.insert(k, v);
        }
    }
}

/// Sorts, merges duplicates and drops zeros.
pub(crate) fn normalize_sparse<F: Field>(v: &mut SparseVec<F>) {
    v.sort_by_key(|(k, _)| *k);
    let mut out: SparseVec<F> = Vec::with_capacity(v.len());
    for (k, c) in v.drain(..) {
        match out.last_mut() {
            Some((lk, lc)) if *lk == k => *lc = lc.clone() + c,
            _ => out.push((k, c)),
        }
    }
    out.retain(|(_, c)| !c.is_zero());
    *v = out;
}
