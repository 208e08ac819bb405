//! Exact-arithmetic calculator for the spectral sequence of a family of spaces
//! filtered by powers of a fixed space.
//!
//! The pipeline is: catalog cohomology rings ([`rings`]) feed family descriptors
//! ([`families`]); the engine ([`ssengine`]) builds the E1 page from
//! sign-twisted symmetric invariants ([`superalg`]), assembles the alternating
//! face-pullback differentials, turns the page with exact rank computations
//! ([`qexact`]) and reports Betti tables of the open stratum.
//!
//! Everything is generic over an exact [`qexact::Field`]; the aliases below fix
//! the rational instantiation used by the command-line tool.

pub mod dims;
pub mod families;
pub mod qexact;
pub mod rings;
pub mod ssengine;
pub mod superalg;

pub use dims::GradedDims;
pub use qexact::Fp;

/// Arbitrary-precision rational numbers.
pub type Rational = num_rational::BigRational;
/// Sparse rational matrix.
pub type QMatrix = qexact::SparseMatrix<Rational>;
