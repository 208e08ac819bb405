use serde::{Deserialize, Serialize};

use super::assemble::{column_basis, e1_with_differentials};
use super::page::Page;
use super::{EngineError, EngineOptions};
use crate::families::{family_pencils_p1, FamilyError};
use crate::qexact::{complex_cohomology, rank, rank_and_kernel, Field, SparseMatrix};
use crate::rings::quotient_top_chern;

/// Exactness of the augmented cochain complex of the `(p-1)`-simplex,
/// `0 -> Q -> Q^p -> Q^{C(p,2)} -> ... -> Q -> 0`, for each `p`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StalkReport {
    pub p: usize,
    pub term_dims: Vec<usize>,
    pub ranks: Vec<usize>,
    pub cohomology: Vec<usize>,
    pub exact: bool,
}

fn subsets_of_size(p: usize, k: usize) -> Vec<u32> {
    (0u32..1 << p).filter(|s| s.count_ones() as usize == k).collect()
}

fn simplex_differential<F: Field>(p: usize, k: usize) -> SparseMatrix<F> {
    let src = subsets_of_size(p, k);
    let tgt = subsets_of_size(p, k + 1);
    let mut trip = Vec::new();
    for (c, &s) in src.iter().enumerate() {
        for j in 0..p {
            if s & (1 << j) != 0 {
                continue;
            }
            let t = s | (1 << j);
            // sign from the position of j in the enlarged set
            let before = (t & ((1 << j) - 1)).count_ones();
            let r = tgt.binary_search(&t).expect("enlarged set has size k+1");
            trip.push((r, c, crate::qexact::sign::<F>(before % 2 == 1)));
        }
    }
    SparseMatrix::from_triplets(tgt.len(), src.len(), trip).expect("indices in range")
}

pub fn stalk_acyclicity_check<F: Field>(p_max: usize) -> Vec<StalkReport> {
    (1..=p_max)
        .map(|p| {
            let maps: Vec<SparseMatrix<F>> = (0..p).map(|k| simplex_differential(p, k)).collect();
            let term_dims: Vec<usize> = (0..=p).map(|k| subsets_of_size(p, k).len()).collect();
            let ranks = maps.iter().map(rank).collect();
            let cohomology: Vec<usize> = (0..=p)
                .map(|k| {
                    let d_in = if k == 0 { SparseMatrix::zero(1, 0) } else { maps[k - 1].clone() };
                    let d_out = if k == p { SparseMatrix::zero(0, 1) } else { maps[k].clone() };
                    complex_cohomology(&d_in, &d_out).expect("simplex complex squares to zero")
                })
                .collect();
            let exact = cohomology.iter().all(|h| *h == 0);
            StalkReport { p, term_dims, ranks, cohomology, exact }
        })
        .collect()
}

/// First source cell where two consecutive stored differentials fail to
/// compose to zero.
pub fn check_d_squared<F: Field>(page: &Page<F>) -> Result<(), EngineError> {
    for (&(p, q), d) in &page.differentials {
        if let Some(next) = page.differentials.get(&(p + 1, q)) {
            let comp = next.mul(d)?;
            if !comp.is_zero() {
                return Err(EngineError::CompositionNonzero { p, q });
            }
        }
    }
    Ok(())
}

/// The kernel of `d_1` on column 0 of pencils on `P^1` and whether
/// `s_{n-1} c_1^{n-1}` spans it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KernelReport {
    pub n: usize,
    /// `(q, dim ker d_1 in degree q)` for every degree with a nonzero kernel.
    pub kernel: Vec<(usize, usize)>,
    pub element_nonzero: bool,
    pub element_in_kernel: bool,
    pub spans: bool,
}

pub fn top_chern_kernel<F: Field>(n: usize, opts: &EngineOptions) -> Result<KernelReport, EngineError> {
    let fam = family_pencils_p1::<F>(1, n)?;
    let page = e1_with_differentials(&fam, opts)?;
    let mut kernel = Vec::new();
    for (&(p, q), c) in &page.cells {
        if p != 0 {
            continue;
        }
        let k = match page.differentials.get(&(0, q)) {
            Some(d) => c.dim - rank(d),
            None => c.dim,
        };
        if k > 0 {
            kernel.push((q, k));
        }
    }

    let basis = column_basis(&fam, 0, opts)?.ok_or_else(|| FamilyError::InvalidParameter("empty column".into()))?;
    let g = basis.tail.clone();
    let c1 = g.generator_by_name("c1").expect("c1");
    let x = g
        .multiply(&quotient_top_chern(&g, n + 1), &g.power(&c1, n - 1).map_err(FamilyError::from)?)
        .map_err(FamilyError::from)?;
    let q = 4 * n - 4;
    let mut coords = vec![F::zero(); page.dim(0, q)];
    for (b, c) in x.to_sparse() {
        let (qb, pos) = basis.locate(0, b).expect("column 0 pairs the empty monomial with each class");
        if qb != q {
            return Err(FamilyError::InvalidParameter(format!("element has a component in degree {qb}")).into());
        }
        coords[pos] = c;
    }
    let element_nonzero = coords.iter().any(|c| !c.is_zero());
    let element_in_kernel = match page.differentials.get(&(0, q)) {
        Some(d) => d.mul_vec(&coords)?.iter().all(|v| v.is_zero()),
        None => true,
    };
    let kernel_dim = match page.differentials.get(&(0, q)) {
        Some(d) => rank_and_kernel(d).1.len(),
        None => coords.len(),
    };
    let spans = element_nonzero && element_in_kernel && kernel_dim == 1;
    Ok(KernelReport { n, kernel, element_nonzero, element_in_kernel, spans })
}
