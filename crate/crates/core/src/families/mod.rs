//! Descriptors for the builtin filtered families: the slot algebra `M`, the
//! column spaces `X_{n-ep}`, the face-pullback template and validity ranges.

mod pullback;

use std::fmt;
use std::sync::{Arc, OnceLock};

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use pullback::FacePullback;

use crate::qexact::Field;
use crate::rings::{
    compact_support_affine, curve_algebra, curve_algebra_relabeled, grassmannian_cohomology, macdonald_sym,
    picard_algebra, tensor_algebra, RingError,
};
use crate::superalg::{AlgebraError, AlgebraHom, PresentedAlgebra, TensorElement, TensorTarget};
use crate::GradedDims;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FamilyError {
    #[error("n = {n} is below the stable range for genus {g} (valid for n >= 2g)")]
    StableRange { g: usize, n: usize },
    #[error("column p = {p} is out of range ({constraint})")]
    ColumnRange { p: usize, constraint: String },
    #[error("face index i = {i} out of range 1..={max}")]
    FaceRange { i: usize, max: usize },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("differentials are not available for {family}: {reason}")]
    DifferentialsUnavailable { family: String, reason: String },
    #[error(transparent)]
    Ring(#[from] RingError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

/// How the spectral sequence's abutment is turned into Betti numbers of `U_n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Convergence {
    /// The page abuts to `H_c(U_n)` directly.
    CompactSupportDirect,
    /// The page abuts to `H(X_n, X_n - U_n)`, turned into `H(U_n)` by duality.
    RelativeThenDuality,
}

/// Which cohomology the input Betti table of a custom space describes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum InputConvention {
    CompactSupport,
    /// Ordinary cohomology of a compact space, where it agrees with `H_c`.
    Ordinary,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "kebab-case")]
pub enum FamilyKind {
    UconfPlane,
    UconfGeneral { dims: GradedDims, convention: InputConvention },
    Tuples { r: usize },
    PencilsP1 { m: usize },
    PencilsCurve { g: usize },
}

impl FamilyKind {
    pub fn slug(&self) -> &'static str {
        match self {
            FamilyKind::UconfPlane => "uconf-plane",
            FamilyKind::UconfGeneral { .. } => "uconf-general",
            FamilyKind::Tuples { .. } => "tuples",
            FamilyKind::PencilsP1 { .. } => "pencils-p1",
            FamilyKind::PencilsCurve { .. } => "pencils-curve",
        }
    }
}

/// The space at one column: a presented algebra, a bare Betti table, or empty.
#[derive(Clone, Debug)]
pub enum ColumnSpace<F> {
    Presented(Arc<PresentedAlgebra<F>>),
    Betti(GradedDims),
    Empty,
}

impl<F: Field> ColumnSpace<F> {
    pub fn dims(&self) -> GradedDims {
        match self {
            ColumnSpace::Presented(a) => a.betti(),
            ColumnSpace::Betti(d) => d.clone(),
            ColumnSpace::Empty => GradedDims::new(),
        }
    }

    pub fn algebra(&self) -> Option<&Arc<PresentedAlgebra<F>>> {
        match self {
            ColumnSpace::Presented(a) => Some(a),
            _ => None,
        }
    }
}

/// The slot space `M`.
#[derive(Clone, Debug)]
pub enum SlotSpace<F> {
    Presented(Arc<PresentedAlgebra<F>>),
    Betti(GradedDims),
}

impl<F: Field> SlotSpace<F> {
    pub fn dims(&self) -> GradedDims {
        match self {
            SlotSpace::Presented(a) => a.betti(),
            SlotSpace::Betti(d) => d.clone(),
        }
    }
}

/// One line of a pullback template, for display.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TemplateLine {
    pub generator: String,
    pub image: String,
}

/// A semi-simplicially filtered family at a fixed `n`.
pub struct FamilyDescriptor<F> {
    kind: FamilyKind,
    n: usize,
    filter_gap: usize,
    slot: SlotSpace<F>,
    convergence: Convergence,
    duality_dim: Option<usize>,
    degeneration_assumed: bool,
    max_valid_column: usize,
    boundary_column: Option<usize>,
    columns: Vec<OnceLock<ColumnSpace<F>>>,
    tail_homs: Vec<OnceLock<Result<Arc<AlgebraHom<F>>, FamilyError>>>,
}

impl<F: Field> fmt::Debug for FamilyDescriptor<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FamilyDescriptor")
            .field("kind", &self.kind)
            .field("n", &self.n)
            .field("filter_gap", &self.filter_gap)
            .field("max_valid_column", &self.max_valid_column)
            .finish()
    }
}

impl<F: Field> FamilyDescriptor<F> {
    #[allow(clippy::too_many_arguments)]
    fn assemble(
        kind: FamilyKind,
        n: usize,
        filter_gap: usize,
        slot: SlotSpace<F>,
        convergence: Convergence,
        duality_dim: Option<usize>,
        degeneration_assumed: bool,
        max_valid_column: usize,
        boundary_column: Option<usize>,
    ) -> Self {
        let count = boundary_column.unwrap_or(max_valid_column) + 1;
        FamilyDescriptor {
            kind,
            n,
            filter_gap,
            slot,
            convergence,
            duality_dim,
            degeneration_assumed,
            max_valid_column,
            boundary_column,
            columns: (0..count).map(|_| OnceLock::new()).collect(),
            tail_homs: (0..count).map(|_| OnceLock::new()).collect(),
        }
    }

    pub fn kind(&self) -> &FamilyKind {
        &self.kind
    }

    pub fn name(&self) -> String {
        match &self.kind {
            FamilyKind::UconfPlane => format!("uconf-plane(n={})", self.n),
            FamilyKind::UconfGeneral { .. } => format!("uconf-general(n={})", self.n),
            FamilyKind::Tuples { r } => format!("tuples(r={r}, n={})", self.n),
            FamilyKind::PencilsP1 { m } => format!("pencils-p1(m={m}, n={})", self.n),
            FamilyKind::PencilsCurve { g } => format!("pencils-curve(g={g}, n={})", self.n),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn filter_gap(&self) -> usize {
        self.filter_gap
    }

    pub fn slot(&self) -> &SlotSpace<F> {
        &self.slot
    }

    pub fn slot_algebra(&self) -> Option<&Arc<PresentedAlgebra<F>>> {
        match &self.slot {
            SlotSpace::Presented(a) => Some(a),
            SlotSpace::Betti(_) => None,
        }
    }

    pub fn convergence(&self) -> Convergence {
        self.convergence
    }

    /// Complex dimension used to dualize the abutment, when there is one.
    pub fn duality_dim(&self) -> Option<usize> {
        self.duality_dim
    }

    pub fn degeneration_assumed(&self) -> bool {
        self.degeneration_assumed
    }

    /// Largest column whose E1 entries are certified.
    pub fn max_valid_column(&self) -> usize {
        self.max_valid_column
    }

    /// A column past the valid range that still exists as the target of the
    /// last differential.
    pub fn boundary_column(&self) -> Option<usize> {
        self.boundary_column
    }

    /// Human-readable statement of the column range.
    pub fn column_constraint(&self) -> String {
        match &self.kind {
            FamilyKind::PencilsCurve { .. } => "valid for p <= n - 2g".into(),
            FamilyKind::PencilsP1 { .. } => "valid for p <= n - 1".into(),
            FamilyKind::Tuples { .. } => "valid for p <= n".into(),
            _ => "valid for p <= n/2".into(),
        }
    }

    /// Ordinary degrees up to which the dualized Betti numbers are certified.
    pub fn valid_up_to_degree(&self) -> Option<usize> {
        match &self.kind {
            // at genus zero no nonzero column lies past the range
            FamilyKind::PencilsCurve { g } if *g > 0 => Some(self.n - 2 * g),
            _ => None,
        }
    }

    pub fn has_differentials(&self) -> bool {
        matches!(&self.kind, FamilyKind::PencilsP1 { .. } | FamilyKind::PencilsCurve { .. })
    }

    fn check_column(&self, p: usize) -> Result<(), FamilyError> {
        if p > self.max_valid_column && Some(p) != self.boundary_column {
            return Err(FamilyError::ColumnRange { p, constraint: self.column_constraint() });
        }
        Ok(())
    }

    /// The space `X_{n - e p}` at column `p`.
    pub fn column_space(&self, p: usize) -> Result<&ColumnSpace<F>, FamilyError> {
        self.check_column(p)?;
        Ok(self.columns[p].get_or_init(|| self.make_column(p)))
    }

    fn make_column(&self, p: usize) -> ColumnSpace<F> {
        let n = self.n;
        let Some(rest) = n.checked_sub(self.filter_gap * p) else {
            return ColumnSpace::Empty;
        };
        match &self.kind {
            FamilyKind::UconfPlane => ColumnSpace::Betti(compact_support_affine(rest)),
            FamilyKind::UconfGeneral { dims, .. } => ColumnSpace::Betti(macdonald_sym(dims, rest)),
            FamilyKind::Tuples { r } => ColumnSpace::Betti(compact_support_affine(r * rest)),
            FamilyKind::PencilsP1 { m } => match grassmannian_cohomology(m + 1, rest + 1) {
                Some(a) => ColumnSpace::Presented(Arc::new(a)),
                None => ColumnSpace::Empty,
            },
            FamilyKind::PencilsCurve { g } => {
                // G(2, d - g + 1) over Pic, d = n - p
                match (rest + 1).checked_sub(*g).and_then(|big_n| grassmannian_cohomology(2, big_n)) {
                    Some(gr) => ColumnSpace::Presented(Arc::new(tensor_algebra(&picard_algebra(*g), &gr))),
                    None => ColumnSpace::Empty,
                }
            }
        }
    }

    /// Columns shown on the E1 page (valid columns, not the boundary one).
    pub fn columns(&self) -> std::ops::RangeInclusive<usize> {
        0..=self.max_valid_column
    }

    /// The map `H(X_{n-ep}) -> H(M) ⊗ H(X_{n-e(p+1)})` given by the template,
    /// shared by every face at column `p`. `None` when either column is empty.
    pub fn tail_hom(&self, p: usize) -> Result<Option<Arc<AlgebraHom<F>>>, FamilyError> {
        let slot = match &self.slot {
            SlotSpace::Presented(a) if self.has_differentials() => a.clone(),
            _ => {
                return Err(FamilyError::DifferentialsUnavailable {
                    family: self.name(),
                    reason: "only Betti numbers are known for this family".into(),
                })
            }
        };
        self.check_column(p)?;
        self.check_column(p + 1)?;
        let (src, tgt) = match (self.column_space(p)?, self.column_space(p + 1)?) {
            (ColumnSpace::Presented(s), ColumnSpace::Presented(t)) => (s.clone(), t.clone()),
            _ => return Ok(None),
        };
        let hom = self.tail_homs[p].get_or_init(|| {
            let images = self.template_images(&slot, &src, &tgt)?;
            let target = TensorTarget { slot: slot.clone(), p: 1, tail: tgt.clone() };
            Ok(Arc::new(AlgebraHom::new(src.clone(), target, images)?))
        });
        hom.clone().map(Some)
    }

    fn template_images(
        &self,
        slot: &PresentedAlgebra<F>,
        src: &PresentedAlgebra<F>,
        tgt: &PresentedAlgebra<F>,
    ) -> Result<Vec<TensorElement<F>>, FamilyError> {
        let e = slot.basis_index("e").expect("slot algebra has a top class e");
        let unit = slot.unit_index();
        // 1 ⊗ (generator of the target with the given name), or 1 ⊗ 1 for "c0"
        let lift = |slot_class: usize, name: &str| -> TensorElement<F> {
            let mut t = TensorElement::new(1);
            if name == "c0" {
                t.add_term(vec![slot_class], tgt.unit_index(), F::one());
                return t;
            }
            if let Some(k) = tgt.generator_index(name) {
                for (b, c) in &tgt.generators()[k].element {
                    t.add_term(vec![slot_class], *b, c.clone());
                }
            }
            t
        };
        let rank = match &self.kind {
            FamilyKind::PencilsP1 { m } => m + 1,
            _ => 2,
        };
        let mut images = Vec::with_capacity(src.generators().len());
        for gen in src.generators() {
            let name = gen.name.as_str();
            let img = if let Some(j) = name.strip_prefix('c').and_then(|s| s.parse::<usize>().ok()) {
                // c_j ↦ c_j − (k − j + 1) e⟨i⟩ c_{j−1}
                let coeff = F::from_i64((rank - j + 1) as i64);
                lift(unit, name).add_then(&lift(e, &format!("c{}", j - 1)).scale(&-coeff))
            } else if let Some(r) = name.strip_prefix('a').and_then(|s| s.parse::<usize>().ok()) {
                // a_r ↦ a_r + α_r⟨i⟩
                let alpha = slot
                    .basis_index(&format!("alpha{r}"))
                    .ok_or_else(|| FamilyError::InvalidParameter(format!("no class alpha{r}")))?;
                lift(unit, name).add_then(&TensorElement::pure(vec![alpha], tgt.unit_index()))
            } else {
                return Err(FamilyError::InvalidParameter(format!("no template for generator {name}")));
            };
            images.push(img);
        }
        Ok(images)
    }

    /// The pullback `f̃_{p,i}` along the `i`-th face, `1 <= i <= p + 1`.
    pub fn face_pullback(&self, p: usize, i: usize) -> Result<Option<FacePullback<F>>, FamilyError> {
        if i == 0 || i > p + 1 {
            return Err(FamilyError::FaceRange { i, max: p + 1 });
        }
        Ok(self.tail_hom(p)?.map(|hom| FacePullback::new(p, i, hom)))
    }

    /// The template on generators, with `⟨i⟩` marking the inserted slot.
    pub fn template(&self) -> Vec<TemplateLine> {
        let line = |g: &str, img: &str| TemplateLine { generator: g.into(), image: img.into() };
        match &self.kind {
            FamilyKind::PencilsP1 { m } => {
                let k = m + 1;
                (1..=k)
                    .map(|j| {
                        let prev = if j == 1 { String::new() } else { format!("*c{}", j - 1) };
                        line(&format!("c{j}"), &format!("c{j} - {}*e<i>{prev}", k - j + 1))
                    })
                    .collect()
            }
            FamilyKind::PencilsCurve { g } => {
                let mut out: Vec<TemplateLine> =
                    (1..=2 * g).map(|r| line(&format!("a{r}"), &format!("a{r} + alpha{r}<i>"))).collect();
                out.push(line("c1", "c1 - 2*e<i>"));
                out.push(line("c2", "c2 - e<i>*c1"));
                out
            }
            FamilyKind::Tuples { r: 1 } => vec![line("[X_n]", "n*[A^1 x X_(n-1)] (finite map of degree n)")],
            _ => Vec::new(),
        }
    }
}

fn check_n(n: usize, min: usize, what: &str) -> Result<(), FamilyError> {
    if n < min {
        return Err(FamilyError::InvalidParameter(format!("{what} requires n >= {min}, got {n}")));
    }
    Ok(())
}

/// Unordered configurations in the plane via doubled roots: `M = A^1`, `e = 2`.
pub fn family_uconf_plane<F: Field>(n: usize) -> FamilyDescriptor<F> {
    FamilyDescriptor::assemble(
        FamilyKind::UconfPlane,
        n,
        2,
        SlotSpace::Betti(compact_support_affine(1)),
        Convergence::CompactSupportDirect,
        Some(n),
        false,
        n / 2,
        None,
    )
}

/// Unordered configurations in a space with the given Betti table. E1 only,
/// unless the page is final for degree reasons.
pub fn family_uconf_general<F: Field>(dims: GradedDims, n: usize, convention: InputConvention) -> FamilyDescriptor<F> {
    FamilyDescriptor::assemble(
        FamilyKind::UconfGeneral { dims: dims.clone(), convention },
        n,
        2,
        SlotSpace::Betti(dims),
        Convergence::CompactSupportDirect,
        None,
        false,
        n / 2,
        None,
    )
}

/// `r`-tuples of monic degree-`n` polynomials with no common root: `e = 1`.
pub fn family_tuples<F: Field>(r: usize, n: usize) -> Result<FamilyDescriptor<F>, FamilyError> {
    if r == 0 {
        return Err(FamilyError::InvalidParameter("tuples requires r >= 1".into()));
    }
    Ok(FamilyDescriptor::assemble(
        FamilyKind::Tuples { r },
        n,
        1,
        SlotSpace::Betti(compact_support_affine(1)),
        Convergence::CompactSupportDirect,
        Some(r * n),
        false,
        n,
        None,
    ))
}

/// Basepoint-free pencils on `P^1`: `X_n = G(m + 1, n + 1)`, `M = P^1`.
pub fn family_pencils_p1<F: Field>(m: usize, n: usize) -> Result<FamilyDescriptor<F>, FamilyError> {
    if m == 0 {
        return Err(FamilyError::InvalidParameter("pencils-p1 requires m >= 1".into()));
    }
    check_n(n, m + 1, "pencils-p1")?;
    Ok(FamilyDescriptor::assemble(
        FamilyKind::PencilsP1 { m },
        n,
        1,
        SlotSpace::Presented(Arc::new(curve_algebra(0))),
        Convergence::RelativeThenDuality,
        Some((m + 1) * (n - m)),
        true,
        n - 1,
        None,
    ))
}

/// Basepoint-free pencils on a genus-`g` curve, in the stable range `n >= 2g`:
/// `X_n` is a `G(2, n - g + 1)`-bundle over `Pic^n(C)`.
pub fn family_pencils_curve<F: Field>(g: usize, n: usize) -> Result<FamilyDescriptor<F>, FamilyError> {
    pencils_curve_with(g, n, curve_algebra(g))
}

/// As [`family_pencils_curve`], with the curve's `alpha` classes stored in the
/// order given by a pairing-preserving permutation (see
/// [`curve_algebra_relabeled`]). Page dimensions do not depend on it.
pub fn family_pencils_curve_relabeled<F: Field>(
    g: usize,
    n: usize,
    sigma: &[usize],
) -> Result<FamilyDescriptor<F>, FamilyError> {
    let slot = curve_algebra_relabeled(g, sigma)
        .ok_or_else(|| FamilyError::InvalidParameter(format!("{sigma:?} does not preserve the pairing")))?;
    pencils_curve_with(g, n, slot)
}

fn pencils_curve_with<F: Field>(
    g: usize,
    n: usize,
    slot: PresentedAlgebra<F>,
) -> Result<FamilyDescriptor<F>, FamilyError> {
    if n < 2 * g {
        return Err(FamilyError::StableRange { g, n });
    }
    check_n(n, 2, "pencils-curve")?;
    let max = n - 2 * g;
    Ok(FamilyDescriptor::assemble(
        FamilyKind::PencilsCurve { g },
        n,
        1,
        SlotSpace::Presented(Arc::new(slot)),
        Convergence::RelativeThenDuality,
        Some(g + 2 * (n - g - 1)),
        true,
        max,
        Some(max + 1),
    ))
}
