use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::qexact::{Field, SparseMatrix};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Cell {
    pub dim: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
}

/// A page of the spectral sequence. Cells are keyed by `(p, q)`; the
/// differential stored at `(p, q)` maps `E^{p,q} -> E^{p+1,q}`.
#[derive(Clone)]
pub struct Page<F> {
    pub index: u8,
    pub family: String,
    pub n: usize,
    pub cells: BTreeMap<(usize, usize), Cell>,
    /// Cells of the column just past the valid range, kept only as the target
    /// of the last differential.
    pub boundary: BTreeMap<(usize, usize), Cell>,
    pub differentials: BTreeMap<(usize, usize), SparseMatrix<F>>,
    /// False when the page has interacting cells but no known differentials.
    pub differentials_complete: bool,
}

impl<F: Field> fmt::Debug for Page<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Page")
            .field("index", &self.index)
            .field("family", &self.family)
            .field("cells", &self.dims())
            .field("differentials", &self.differentials)
            .finish()
    }
}

impl<F: Field> Page<F> {
    pub fn dim(&self, p: usize, q: usize) -> usize {
        self.cells.get(&(p, q)).or_else(|| self.boundary.get(&(p, q))).map_or(0, |c| c.dim)
    }

    pub fn max_column(&self) -> Option<usize> {
        self.cells.keys().map(|(p, _)| *p).max()
    }

    /// Dimensions only, without the boundary column.
    pub fn dims(&self) -> BTreeMap<(usize, usize), usize> {
        self.cells.iter().map(|(k, c)| (*k, c.dim)).collect()
    }

    /// Rank of each stored differential.
    pub fn differential_ranks(&self) -> BTreeMap<(usize, usize), usize> {
        self.differentials.iter().map(|(k, m)| (*k, crate::qexact::rank(m))).collect()
    }
}

/// `Σ (-1)^{p+q} dim E^{p,q}` over all cells, boundary included.
pub fn euler_characteristic<F: Field>(page: &Page<F>) -> i128 {
    page.cells
        .iter()
        .chain(&page.boundary)
        .map(|((p, q), c)| if (p + q) % 2 == 0 { c.dim as i128 } else { -(c.dim as i128) })
        .sum()
}
