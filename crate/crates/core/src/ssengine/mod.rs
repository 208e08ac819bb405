//! The spectral-sequence engine: E1 pages from sign-twisted invariants, the
//! alternating face-pullback differentials, E2, and Betti tables of `U_n`.

mod assemble;
mod betti;
mod checks;
mod page;

use thiserror::Error;

pub use assemble::{assemble_differential, build_e1, e1_with_differentials, ColumnBasis};
pub use betti::{betti_from_e2, betti_of_stratum, compute_e2, BettiTable, CohomologyKind, StratumBetti};
pub use checks::{check_d_squared, stalk_acyclicity_check, top_chern_kernel, KernelReport, StalkReport};
pub use page::{euler_characteristic, Cell, Page};

use crate::families::FamilyError;
use crate::qexact::QError;

/// How differential columns are computed.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Route {
    /// Apply the differential to the canonical term only and read off
    /// coordinates through the sign-twisted coinvariants.
    #[default]
    Coinvariant,
    /// Apply the differential to the full orbit sum and project the image back
    /// onto the invariant basis, checking invariance on the way.
    Orbit,
}

#[derive(Clone, Debug, Default)]
pub struct EngineOptions {
    pub route: Route,
    /// Enumerate every cell basis in reverse order.
    pub reverse_order: bool,
    /// Worker threads; `None` uses the global pool.
    pub threads: Option<usize>,
    /// Test hook: flips the sign of the first stored entry of the
    /// differential leaving cell `(p, q)`.
    #[doc(hidden)]
    pub flip_entry: Option<(usize, usize)>,
}

impl EngineOptions {
    pub(crate) fn install<R: Send>(&self, f: impl FnOnce() -> R + Send) -> R {
        match self.threads {
            Some(t) => match rayon::ThreadPoolBuilder::new().num_threads(t.max(1)).build() {
                Ok(pool) => pool.install(f),
                Err(_) => f(),
            },
            None => f(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EngineError {
    #[error(transparent)]
    Family(#[from] FamilyError),
    #[error("differential image at column {p}, degree {q} left the invariant subspace ({detail})")]
    NotInvariant { p: usize, q: usize, detail: String },
    #[error("d o d is nonzero at source cell ({p}, {q})")]
    CompositionNonzero { p: usize, q: usize },
    #[error(
        "higher differentials could act between cells ({p}, {q}) and ({p2}, {q2}) and degeneration is not assumed"
    )]
    DegenerationUnknown { p: usize, q: usize, p2: usize, q2: usize },
    #[error(transparent)]
    Linear(#[from] QError),
}
