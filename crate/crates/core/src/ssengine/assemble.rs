use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use rayon::prelude::*;

use super::page::{Cell, Page};
use super::{EngineError, EngineOptions, Route};
use crate::families::{ColumnSpace, FacePullback, FamilyDescriptor, FamilyKind, SlotSpace};
use crate::qexact::{sign, Field, SparseMatrix};
use crate::superalg::{
    canonicalize, orbit_size, project_to_invariants, sgn_invariant_basis, sym_ext_dims, PresentedAlgebra,
    SgnInvariantBasis, TensorElement,
};
use crate::GradedDims;

/// Labeled basis of a presented column: pairs (invariant monomial, tail basis
/// element) grouped by total degree.
#[derive(Clone, Debug)]
pub struct ColumnBasis<F> {
    pub p: usize,
    pub inv: SgnInvariantBasis,
    pub tail: Arc<PresentedAlgebra<F>>,
    pub by_degree: BTreeMap<usize, Vec<(usize, usize)>>,
    index: HashMap<(usize, usize), (usize, usize)>,
}

impl<F: Field> ColumnBasis<F> {
    fn new(slot: &PresentedAlgebra<F>, p: usize, tail: Arc<PresentedAlgebra<F>>, reverse: bool) -> Self {
        let mut inv = sgn_invariant_basis(slot, p);
        if reverse {
            inv = inv.reversed();
        }
        let mut by_degree: BTreeMap<usize, Vec<(usize, usize)>> = BTreeMap::new();
        for m in 0..inv.len() {
            for b in 0..tail.dim() {
                let q = inv.monomial(m).degree + tail.degree(b);
                by_degree.entry(q).or_default().push((m, b));
            }
        }
        if reverse {
            for v in by_degree.values_mut() {
                v.reverse();
            }
        }
        let index =
            by_degree.iter().flat_map(|(q, v)| v.iter().enumerate().map(move |(pos, key)| (*key, (*q, pos)))).collect();
        ColumnBasis { p, inv, tail, by_degree, index }
    }

    /// `(q, position)` of a basis pair.
    pub fn locate(&self, mono: usize, tail: usize) -> Option<(usize, usize)> {
        self.index.get(&(mono, tail)).copied()
    }

    pub fn labels(&self, slot: &PresentedAlgebra<F>, q: usize) -> Vec<String> {
        self.by_degree.get(&q).map_or_else(Vec::new, |v| {
            v.iter().map(|&(m, b)| format!("[{}] {}", self.inv.label(slot, m), self.tail.label(b))).collect()
        })
    }
}

pub(crate) fn column_basis<F: Field>(
    fam: &FamilyDescriptor<F>,
    p: usize,
    opts: &EngineOptions,
) -> Result<Option<ColumnBasis<F>>, EngineError> {
    let (Some(slot), ColumnSpace::Presented(tail)) = (fam.slot_algebra(), fam.column_space(p)?) else {
        return Ok(None);
    };
    Ok(Some(ColumnBasis::new(slot, p, tail.clone(), opts.reverse_order)))
}

fn column_cells<F: Field>(
    fam: &FamilyDescriptor<F>,
    p: usize,
    opts: &EngineOptions,
) -> Result<BTreeMap<(usize, usize), Cell>, EngineError> {
    let mut cells = BTreeMap::new();
    if let Some(basis) = column_basis(fam, p, opts)? {
        let slot = fam.slot_algebra().expect("presented column has a presented slot");
        for (q, v) in &basis.by_degree {
            cells.insert((p, *q), Cell { dim: v.len(), labels: Some(basis.labels(slot, *q)) });
        }
        return Ok(cells);
    }
    let inv = match fam.slot() {
        SlotSpace::Presented(a) => a.betti(),
        SlotSpace::Betti(d) => d.clone(),
    };
    let dims: GradedDims = sym_ext_dims(&inv, p).convolve(&fam.column_space(p)?.dims());
    for (q, d) in dims.iter() {
        if d > 0 {
            cells.insert((p, q), Cell { dim: d, labels: None });
        }
    }
    Ok(cells)
}

/// The E1 page: `E1^{p,q} = ⊕_{l+m=q} (Sym/Λ)^p(M)^{(l)} ⊗ H^m(X_{n-ep})`.
pub fn build_e1<F: Field>(fam: &FamilyDescriptor<F>, opts: &EngineOptions) -> Result<Page<F>, EngineError> {
    let mut cells = BTreeMap::new();
    for p in fam.columns() {
        cells.extend(column_cells(fam, p, opts)?);
    }
    let boundary = match fam.boundary_column() {
        Some(b) => column_cells(fam, b, opts)?,
        None => BTreeMap::new(),
    };
    Ok(Page {
        index: 1,
        family: fam.name(),
        n: fam.n(),
        cells,
        boundary,
        differentials: BTreeMap::new(),
        differentials_complete: true,
    })
}

/// Matrices of `d_{p+1} = Σ_i (-1)^i f̃_{p,i}` on the invariant bases, per degree `q`.
pub fn assemble_differential<F: Field>(
    fam: &FamilyDescriptor<F>,
    p: usize,
    opts: &EngineOptions,
) -> Result<BTreeMap<usize, SparseMatrix<F>>, EngineError> {
    let mut faces: Vec<(F, FacePullback<F>)> = Vec::with_capacity(p + 1);
    for i in 1..=p + 1 {
        let Some(face) = fam.face_pullback(p, i)? else {
            return Ok(BTreeMap::new());
        };
        faces.push((sign(i % 2 == 1), face));
    }
    let (Some(src), Some(tgt)) = (column_basis(fam, p, opts)?, column_basis(fam, p + 1, opts)?) else {
        return Ok(BTreeMap::new());
    };
    let slot = fam.slot_algebra().expect("differentials need a presented slot").clone();

    let jobs: Vec<(usize, usize, usize, usize)> = src
        .by_degree
        .iter()
        .flat_map(|(q, v)| v.iter().enumerate().map(move |(col, &(m, b))| (*q, col, m, b)))
        .collect();
    let columns: Vec<(usize, usize, Vec<(usize, F)>)> = opts.install(|| {
        jobs.par_iter()
            .map(|&(q, col, m, b)| {
                let entries = match opts.route {
                    Route::Orbit => orbit_column(&slot, &src, &tgt, &faces, m, b),
                    Route::Coinvariant => coinvariant_column(&slot, &src, &tgt, &faces, m, b),
                }
                .map_err(|detail| EngineError::NotInvariant { p, q, detail })?;
                let mut rows = Vec::with_capacity(entries.len());
                for ((m2, b2), v) in entries {
                    let (q2, row) = tgt.locate(m2, b2).ok_or_else(|| EngineError::NotInvariant {
                        p,
                        q,
                        detail: "image outside the target basis".into(),
                    })?;
                    if q2 != q {
                        return Err(EngineError::NotInvariant { p, q, detail: format!("image in degree {q2}") });
                    }
                    rows.push((row, v));
                }
                Ok((q, col, rows))
            })
            .collect::<Result<Vec<_>, EngineError>>()
    })?;

    let mut trips: BTreeMap<usize, Vec<(usize, usize, F)>> = BTreeMap::new();
    for (q, col, rows) in columns {
        let t = trips.entry(q).or_default();
        t.extend(rows.into_iter().map(|(r, v)| (r, col, v)));
    }
    let mut out = BTreeMap::new();
    for (q, v) in &src.by_degree {
        let Some(rows) = tgt.by_degree.get(q) else { continue };
        let mut t = trips.remove(q).unwrap_or_default();
        if opts.flip_entry == Some((p, *q)) {
            if let Some(first) = t.iter_mut().min_by_key(|(r, c, _)| (*r, *c)) {
                first.2 = -first.2.clone();
            }
        }
        out.insert(*q, SparseMatrix::from_triplets(rows.len(), v.len(), t)?);
    }
    Ok(out)
}

fn apply_faces<F: Field>(
    faces: &[(F, FacePullback<F>)],
    slots: &[usize],
    tail: usize,
    c: &F,
    out: &mut TensorElement<F>,
) {
    for (s, f) in faces {
        f.apply_term(slots, tail, &(s.clone() * c.clone()), out);
    }
}

type Entries<F> = Vec<((usize, usize), F)>;

fn orbit_column<F: Field>(
    slot: &PresentedAlgebra<F>,
    src: &ColumnBasis<F>,
    tgt: &ColumnBasis<F>,
    faces: &[(F, FacePullback<F>)],
    m: usize,
    b: usize,
) -> Result<Entries<F>, String> {
    let x = src.inv.reconstruct(slot, &[(m, b, F::one())]);
    let mut y = TensorElement::new(src.p + 1);
    for (slots, tail, c) in x.terms() {
        apply_faces(faces, slots, tail, c, &mut y);
    }
    let coords = project_to_invariants(&tgt.inv, slot, &y).map_err(|e| e.to_string())?;
    Ok(coords.into_iter().map(|(m2, b2, c)| ((m2, b2), c)).collect())
}

fn coinvariant_column<F: Field>(
    slot: &PresentedAlgebra<F>,
    src: &ColumnBasis<F>,
    tgt: &ColumnBasis<F>,
    faces: &[(F, FacePullback<F>)],
    m: usize,
    b: usize,
) -> Result<Entries<F>, String> {
    let mono = src.inv.monomial(m);
    let mut y = TensorElement::new(src.p + 1);
    apply_faces(faces, &mono.slots(), b, &F::one(), &mut y);
    let mut acc: HashMap<(usize, usize), F> = HashMap::new();
    for (slots, tail, c) in y.terms() {
        // tuples repeating an even class vanish in the coinvariants
        let Some((canon, negative)) = canonicalize(slot, slots) else { continue };
        let m2 = tgt.inv.index_of(&canon).ok_or_else(|| format!("no target monomial {canon:?}"))?;
        let v = sign::<F>(negative) * c.clone();
        let e = acc.entry((m2, tail)).or_insert_with(F::zero);
        *e = e.clone() + v;
    }
    let src_orbit = F::from_i64(orbit_size(mono) as i64);
    let mut out: Entries<F> = acc
        .into_iter()
        .filter(|(_, v)| !v.is_zero())
        .map(|((m2, b2), v)| {
            let tgt_orbit = F::from_i64(orbit_size(tgt.inv.monomial(m2)) as i64);
            ((m2, b2), v * src_orbit.clone() / tgt_orbit)
        })
        .collect();
    out.sort_by_key(|(k, _)| *k);
    Ok(out)
}

/// The E1 page with every differential the family supports.
pub fn e1_with_differentials<F: Field>(
    fam: &FamilyDescriptor<F>,
    opts: &EngineOptions,
) -> Result<Page<F>, EngineError> {
    let mut page = build_e1(fam, opts)?;
    if fam.has_differentials() {
        let last = fam.boundary_column().unwrap_or(fam.max_valid_column());
        for p in 0..last {
            for (q, m) in assemble_differential(fam, p, opts)? {
                page.differentials.insert((p, q), m);
            }
        }
        return Ok(page);
    }
    // Betti-level families: d1 vanishes unless two adjacent cells share q
    let interacting: Vec<(usize, usize)> =
        page.cells.keys().filter(|(p, q)| page.cells.contains_key(&(p + 1, *q))).copied().collect();
    for (p, q) in interacting {
        match fam.kind() {
            // r = 1: the face A^1 x X_{n-1} -> X_n is finite of degree n, so the
            // pullback multiplies the top compactly supported class by n
            FamilyKind::Tuples { r: 1 } if p == 0 => {
                let d = F::from_i64(-(fam.n() as i64));
                page.differentials.insert((p, q), SparseMatrix::from_triplets(1, 1, [(0, 0, d)])?);
            }
            _ => page.differentials_complete = false,
        }
    }
    Ok(page)
}
