use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::assemble::e1_with_differentials;
use super::page::{Cell, Page};
use super::{EngineError, EngineOptions};
use crate::families::{Convergence, FamilyDescriptor, FamilyError};
use crate::qexact::{complex_cohomology, Field, QError, SparseMatrix};
use crate::GradedDims;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CohomologyKind {
    CompactSupport,
    Ordinary,
    /// `H(X_n, X_n - U_n)`.
    Relative,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BettiTable {
    pub dims: GradedDims,
    pub kind: CohomologyKind,
    /// True when E2 = E∞ rests on the family's degeneration assumption rather
    /// than on degree reasons.
    pub converged_assumed: bool,
    pub valid_up_to_degree: Option<usize>,
    pub valid_from_degree: Option<usize>,
    /// Complex dimension used for the duality step, if any.
    pub duality_dim: Option<usize>,
}

/// The abutment of the page and, when a duality applies, the ordinary Betti
/// numbers of the stratum.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StratumBetti {
    pub abutment: BettiTable,
    pub ordinary: Option<BettiTable>,
}

fn zero_or<F: Field>(m: Option<&SparseMatrix<F>>, rows: usize, cols: usize) -> SparseMatrix<F> {
    m.cloned().unwrap_or_else(|| SparseMatrix::zero(rows, cols))
}

/// Turns the page: each cell becomes the cohomology of its row at that spot.
pub fn compute_e2<F: Field>(e1: &Page<F>) -> Result<Page<F>, EngineError> {
    if !e1.differentials_complete {
        return Err(FamilyError::DifferentialsUnavailable {
            family: e1.family.clone(),
            reason: "cells in adjacent columns share a degree and the differential is not determined".into(),
        }
        .into());
    }
    let spot = |p: usize, q: usize, dim: usize| -> Result<usize, EngineError> {
        let prev = if p == 0 { 0 } else { e1.dim(p - 1, q) };
        let d_in =
            if p == 0 { SparseMatrix::zero(dim, 0) } else { zero_or(e1.differentials.get(&(p - 1, q)), dim, prev) };
        let d_out = zero_or(e1.differentials.get(&(p, q)), e1.dim(p + 1, q), dim);
        complex_cohomology(&d_in, &d_out).map_err(|e| match e {
            QError::CompositionNonzero { .. } => EngineError::CompositionNonzero { p: p.saturating_sub(1), q },
            other => other.into(),
        })
    };
    let turn = |cells: &BTreeMap<(usize, usize), Cell>| -> Result<BTreeMap<(usize, usize), Cell>, EngineError> {
        let mut out = BTreeMap::new();
        for (&(p, q), c) in cells {
            let d = spot(p, q, c.dim)?;
            if d > 0 {
                out.insert((p, q), Cell { dim: d, labels: None });
            }
        }
        Ok(out)
    };
    Ok(Page {
        index: 2,
        family: e1.family.clone(),
        n: e1.n,
        cells: turn(&e1.cells)?,
        boundary: turn(&e1.boundary)?,
        differentials: BTreeMap::new(),
        differentials_complete: true,
    })
}

/// Fails when some higher differential `d_r`, `r >= 2`, could connect two
/// nonzero E2 cells.
fn check_degeneration<F: Field>(e2: &Page<F>) -> Result<(), EngineError> {
    for &(p, q) in e2.cells.keys() {
        for &(p2, q2) in e2.cells.keys() {
            if p2 >= p + 2 && p2 + q2 == p + q + 1 {
                return Err(EngineError::DegenerationUnknown { p, q, p2, q2 });
            }
        }
    }
    Ok(())
}

/// Betti numbers of the stratum: total-degree collapse of E2, then duality.
pub fn betti_of_stratum<F: Field>(
    fam: &FamilyDescriptor<F>,
    opts: &EngineOptions,
) -> Result<StratumBetti, EngineError> {
    let e1 = e1_with_differentials(fam, opts)?;
    betti_from_e2(fam, &compute_e2(&e1)?)
}

/// As [`betti_of_stratum`], from an E2 page already computed for `fam`.
pub fn betti_from_e2<F: Field>(fam: &FamilyDescriptor<F>, e2: &Page<F>) -> Result<StratumBetti, EngineError> {
    if !fam.degeneration_assumed() {
        check_degeneration(e2)?;
    }
    let mut total = GradedDims::new();
    for (&(p, q), c) in &e2.cells {
        total.add(p + q, c.dim);
    }
    let assumed = fam.degeneration_assumed();
    let ordinary_limit = fam.valid_up_to_degree();
    let duality = fam.duality_dim();
    let (kind, valid_from) = match fam.convergence() {
        Convergence::CompactSupportDirect => (CohomologyKind::CompactSupport, None),
        Convergence::RelativeThenDuality => {
            let from = match (ordinary_limit, duality) {
                (Some(lim), Some(d)) => Some((2 * d).saturating_sub(lim)),
                _ => None,
            };
            (CohomologyKind::Relative, from)
        }
    };
    let abutment_dims = match valid_from {
        Some(from) => GradedDims::from_pairs(total.iter().filter(|(k, _)| *k >= from)),
        None => total.clone(),
    };
    let abutment = BettiTable {
        dims: abutment_dims,
        kind,
        converged_assumed: assumed,
        valid_up_to_degree: None,
        valid_from_degree: valid_from,
        duality_dim: duality,
    };
    let ordinary = duality.map(|d| {
        let dual = GradedDims::from_pairs(
            total
                .iter()
                .filter(|(k, _)| *k <= 2 * d)
                .map(|(k, r)| (2 * d - k, r))
                .filter(|(i, _)| ordinary_limit.is_none_or(|lim| *i <= lim)),
        );
        BettiTable {
            dims: dual,
            kind: CohomologyKind::Ordinary,
            converged_assumed: assumed,
            valid_up_to_degree: ordinary_limit,
            valid_from_degree: None,
            duality_dim: Some(d),
        }
    });
    Ok(StratumBetti { abutment, ordinary })
}
