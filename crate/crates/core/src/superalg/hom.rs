use std::sync::Arc;

use super::{AlgebraError, PresentedAlgebra, TensorElement};
use crate::qexact::{Field, SparseMatrix};

/// Codomain `A^{⊗p} ⊗ B` of an algebra map. With `p = 0` this is just `B`.
#[derive(Clone, Debug)]
pub struct TensorTarget<F> {
    pub slot: Arc<PresentedAlgebra<F>>,
    pub p: usize,
    pub tail: Arc<PresentedAlgebra<F>>,
}

impl<F: Field> TensorTarget<F> {
    pub fn plain(tail: Arc<PresentedAlgebra<F>>) -> Self {
        TensorTarget { slot: Arc::new(PresentedAlgebra::ground_field("Q")), p: 0, tail }
    }

    pub fn one(&self) -> TensorElement<F> {
        TensorElement::pure(vec![self.slot.unit_index(); self.p], self.tail.unit_index())
    }

    pub fn mul(&self, x: &TensorElement<F>, y: &TensorElement<F>) -> Result<TensorElement<F>, AlgebraError> {
        x.mul(y, &self.slot, Some(&self.tail))
    }

    /// Degree of a homogeneous tensor; `None` for zero or mixed tensors.
    pub fn homogeneous_degree(&self, x: &TensorElement<F>) -> Option<usize> {
        let mut degs =
            x.terms().map(|(s, t, _)| s.iter().map(|&a| self.slot.degree(a)).sum::<usize>() + self.tail.degree(t));
        let first = degs.next()?;
        degs.all(|d| d == first).then_some(first)
    }
}

/// Degree-preserving algebra map out of a presented algebra, determined by the
/// images of its generators. Basis images are products of generator images
/// along each basis element's word.
#[derive(Clone, Debug)]
pub struct AlgebraHom<F> {
    source: Arc<PresentedAlgebra<F>>,
    target: TensorTarget<F>,
    generator_images: Vec<TensorElement<F>>,
    basis_images: Vec<TensorElement<F>>,
}

impl<F: Field> AlgebraHom<F> {
    pub fn new(
        source: Arc<PresentedAlgebra<F>>,
        target: TensorTarget<F>,
        generator_images: Vec<TensorElement<F>>,
    ) -> Result<Self, AlgebraError> {
        if generator_images.len() != source.generators().len() {
            return Err(AlgebraError::AlgebraMismatch {
                expected: format!("{} generator images", source.generators().len()),
                found: format!("{}", generator_images.len()),
            });
        }
        for (g, img) in source.generators().iter().zip(&generator_images) {
            if img.p() != target.p {
                return Err(AlgebraError::AlgebraMismatch {
                    expected: format!("tensor power {}", target.p),
                    found: format!("tensor power {}", img.p()),
                });
            }
            if !img.is_empty() && target.homogeneous_degree(img) != Some(g.degree) {
                return Err(AlgebraError::NotHomogeneous { what: format!("image of {}", g.name) });
            }
        }
        let mut basis_images = Vec::with_capacity(source.dim());
        for i in 0..source.dim() {
            let mut acc = target.one();
            for &g in source.word(i) {
                acc = target.mul(&acc, &generator_images[g])?;
            }
            basis_images.push(acc);
        }
        Ok(AlgebraHom { source, target, generator_images, basis_images })
    }

    pub fn source(&self) -> &PresentedAlgebra<F> {
        &self.source
    }

    pub fn target(&self) -> &TensorTarget<F> {
        &self.target
    }

    pub fn generator_image(&self, k: usize) -> &TensorElement<F> {
        &self.generator_images[k]
    }

    pub fn basis_image(&self, i: usize) -> &TensorElement<F> {
        &self.basis_images[i]
    }

    pub fn apply(&self, x: &[(usize, F)]) -> TensorElement<F> {
        let mut out = TensorElement::new(self.target.p);
        for (i, c) in x {
            out.add_assign(&self.basis_images[*i].scale(c));
        }
        out
    }

    /// Checks `f(xy) = f(x) f(y)` on all generator pairs and that every basis
    /// image has the degree of its source.
    pub fn check_multiplicative(&self) -> Result<(), AlgebraError> {
        for i in 0..self.source.dim() {
            let img = &self.basis_images[i];
            if !img.is_empty() && self.target.homogeneous_degree(img) != Some(self.source.degree(i)) {
                return Err(AlgebraError::NotHomogeneous { what: format!("image of {}", self.source.label(i)) });
            }
        }
        let gens = self.source.generators();
        for a in 0..gens.len() {
            for b in 0..gens.len() {
                let prod = self.source.multiply_sparse(&gens[a].element, &gens[b].element);
                let lhs = self.apply(&prod);
                let rhs = self.target.mul(&self.apply(&gens[a].element), &self.apply(&gens[b].element))?;
                if lhs != rhs {
                    return Err(AlgebraError::NotMultiplicative {
                        what: format!("product {}*{}", gens[a].name, gens[b].name),
                    });
                }
            }
        }
        Ok(())
    }

    /// Matrix in degree `d` when the target is a plain algebra: rows index the
    /// target basis of degree `d`, columns the source basis of degree `d`.
    pub fn matrix_in_degree(&self, d: usize) -> Result<SparseMatrix<F>, AlgebraError> {
        if self.target.p != 0 {
            return Err(AlgebraError::AlgebraMismatch {
                expected: "a plain target algebra".into(),
                found: format!("tensor power {}", self.target.p),
            });
        }
        let src: Vec<usize> = (0..self.source.dim()).filter(|&i| self.source.degree(i) == d).collect();
        let tgt: Vec<usize> = (0..self.target.tail.dim()).filter(|&i| self.target.tail.degree(i) == d).collect();
        let mut row_of = vec![usize::MAX; self.target.tail.dim()];
        for (r, &t) in tgt.iter().enumerate() {
            row_of[t] = r;
        }
        let mut trip = Vec::new();
        for (c, &i) in src.iter().enumerate() {
            for (_, t, v) in self.basis_images[i].terms() {
                trip.push((row_of[t], c, v.clone()));
            }
        }
        SparseMatrix::from_triplets(tgt.len(), src.len(), trip)
            .map_err(|e| AlgebraError::NotHomogeneous { what: e.to_string() })
    }
}
