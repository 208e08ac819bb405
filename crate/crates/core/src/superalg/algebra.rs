use std::collections::HashMap;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use serde::{Deserialize, Serialize};

use super::{add_scaled, normalize_sparse, AlgebraError, SparseVec};
use crate::qexact::Field;
use crate::GradedDims;

/// Associativity is checked on every basis triple up to this dimension and on a
/// deterministic sample of triples above it.
pub const EXHAUSTIVE_ASSOCIATIVITY_LIMIT: usize = 200;
const SAMPLED_TRIPLES: usize = 20_000;

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BasisElement {
    pub label: String,
    pub degree: usize,
}

impl BasisElement {
    pub fn new(label: impl Into<String>, degree: usize) -> Self {
        BasisElement { label: label.into(), degree }
    }

    pub fn is_odd(&self) -> bool {
        self.degree % 2 == 1
    }
}

/// A named algebra generator. Usually a basis element, but it may be any
/// homogeneous element (including zero, e.g. Chern classes on a point).
#[derive(Clone, Debug, PartialEq)]
pub struct Generator<F> {
    pub name: String,
    pub degree: usize,
    pub element: SparseVec<F>,
}

/// Finite-dimensional graded-commutative algebra given by structure constants.
///
/// Every basis element carries a word in the generators whose ordered product is
/// exactly that basis element; algebra homomorphisms are determined by generator
/// images through these words.
#[derive(Clone, Debug, PartialEq)]
pub struct PresentedAlgebra<F> {
    name: String,
    basis: Vec<BasisElement>,
    unit: usize,
    mult: HashMap<(usize, usize), SparseVec<F>>,
    generators: Vec<Generator<F>>,
    words: Vec<Vec<usize>>,
}

/// An element of a specific algebra, stored densely over its basis.
#[derive(Clone, Debug, PartialEq)]
pub struct Element<F> {
    algebra: String,
    coeffs: Vec<F>,
}

impl<F: Field> Element<F> {
    pub fn coeffs(&self) -> &[F] {
        &self.coeffs
    }

    pub fn algebra_name(&self) -> &str {
        &self.algebra
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn to_sparse(&self) -> SparseVec<F> {
        self.coeffs.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(i, c)| (i, c.clone())).collect()
    }

    pub fn scale(&self, s: &F) -> Self {
        Element { algebra: self.algebra.clone(), coeffs: self.coeffs.iter().map(|c| c.clone() * s.clone()).collect() }
    }

    pub fn add(&self, other: &Self) -> Result<Self, AlgebraError> {
        if self.algebra != other.algebra || self.coeffs.len() != other.coeffs.len() {
            return Err(AlgebraError::AlgebraMismatch { expected: self.algebra.clone(), found: other.algebra.clone() });
        }
        Ok(Element {
            algebra: self.algebra.clone(),
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a.clone() + b.clone()).collect(),
        })
    }
}

impl<F: Field> PresentedAlgebra<F> {
    /// Builds and validates an algebra.
    ///
    /// `mult` lists the nonzero basis products; missing pairs multiply to zero.
    pub fn new(
        name: impl Into<String>,
        basis: Vec<BasisElement>,
        unit: usize,
        mult: HashMap<(usize, usize), SparseVec<F>>,
        generators: Vec<Generator<F>>,
        words: Vec<Vec<usize>>,
    ) -> Result<Self, AlgebraError> {
        let alg = Self::new_unchecked(name, basis, unit, mult, generators, words)?;
        alg.validate()?;
        Ok(alg)
    }

    /// Builds an algebra, checking only index ranges. For constructions whose
    /// axioms hold by construction (e.g. tensor products of validated factors).
    pub(crate) fn new_unchecked(
        name: impl Into<String>,
        basis: Vec<BasisElement>,
        unit: usize,
        mut mult: HashMap<(usize, usize), SparseVec<F>>,
        generators: Vec<Generator<F>>,
        words: Vec<Vec<usize>>,
    ) -> Result<Self, AlgebraError> {
        let dim = basis.len();
        if unit >= dim {
            return Err(AlgebraError::IndexOutOfRange { index: unit, dim });
        }
        if words.len() != dim {
            return Err(AlgebraError::BadWord { index: words.len().min(dim) });
        }
        mult.retain(|_, v| {
            normalize_sparse(v);
            !v.is_empty()
        });
        for (&(i, j), v) in &mult {
            for &k in [i, j].iter().chain(v.iter().map(|(k, _)| k)) {
                if k >= dim {
                    return Err(AlgebraError::IndexOutOfRange { index: k, dim });
                }
            }
        }
        for w in &words {
            if let Some(&g) = w.iter().find(|&&g| g >= generators.len()) {
                return Err(AlgebraError::IndexOutOfRange { index: g, dim: generators.len() });
            }
        }
        Ok(PresentedAlgebra { name: name.into(), basis, unit, mult, generators, words })
    }

    /// The ground field as a one-dimensional algebra.
    pub fn ground_field(name: impl Into<String>) -> Self {
        let mut mult = HashMap::new();
        mult.insert((0, 0), vec![(0, F::one())]);
        PresentedAlgebra {
            name: name.into(),
            basis: vec![BasisElement::new("1", 0)],
            unit: 0,
            mult,
            generators: Vec::new(),
            words: vec![Vec::new()],
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[BasisElement] {
        &self.basis
    }

    pub fn degree(&self, i: usize) -> usize {
        self.basis[i].degree
    }

    pub fn label(&self, i: usize) -> &str {
        &self.basis[i].label
    }

    pub fn unit_index(&self) -> usize {
        self.unit
    }

    pub fn generators(&self) -> &[Generator<F>] {
        &self.generators
    }

    pub fn generator_index(&self, name: &str) -> Option<usize> {
        self.generators.iter().position(|g| g.name == name)
    }

    pub fn word(&self, i: usize) -> &[usize] {
        &self.words[i]
    }

    pub fn basis_index(&self, label: &str) -> Option<usize> {
        self.basis.iter().position(|b| b.label == label)
    }

    pub fn betti(&self) -> GradedDims {
        GradedDims::from_pairs(self.basis.iter().map(|b| (b.degree, 1)))
    }

    pub fn top_degree(&self) -> usize {
        self.basis.iter().map(|b| b.degree).max().unwrap_or(0)
    }

    /// Product of two basis elements as a sparse vector (empty means zero).
    pub fn basis_product(&self, i: usize, j: usize) -> &[(usize, F)] {
        self.mult.get(&(i, j)).map_or(&[], Vec::as_slice)
    }

    pub fn zero(&self) -> Element<F> {
        Element { algebra: self.name.clone(), coeffs: vec![F::zero(); self.dim()] }
    }

    pub fn basis_element(&self, i: usize) -> Element<F> {
        let mut e = self.zero();
        e.coeffs[i] = F::one();
        e
    }

    pub fn one(&self) -> Element<F> {
        self.basis_element(self.unit)
    }

    pub fn element(&self, coeffs: Vec<F>) -> Result<Element<F>, AlgebraError> {
        if coeffs.len() != self.dim() {
            return Err(AlgebraError::AlgebraMismatch {
                expected: format!("{} (dim {})", self.name, self.dim()),
                found: format!("vector of length {}", coeffs.len()),
            });
        }
        Ok(Element { algebra: self.name.clone(), coeffs })
    }

    pub fn from_sparse(&self, v: &[(usize, F)]) -> Element<F> {
        let mut e = self.zero();
        for (i, c) in v {
            e.coeffs[*i] = e.coeffs[*i].clone() + c.clone();
        }
        e
    }

    pub fn generator(&self, k: usize) -> Element<F> {
        self.from_sparse(&self.generators[k].element)
    }

    pub fn generator_by_name(&self, name: &str) -> Option<Element<F>> {
        self.generator_index(name).map(|k| self.generator(k))
    }

    fn check_owned(&self, x: &Element<F>) -> Result<(), AlgebraError> {
        if x.algebra != self.name || x.coeffs.len() != self.dim() {
            return Err(AlgebraError::AlgebraMismatch { expected: self.name.clone(), found: x.algebra.clone() });
        }
        Ok(())
    }

    /// Bilinear extension of the structure constants.
    pub fn multiply(&self, x: &Element<F>, y: &Element<F>) -> Result<Element<F>, AlgebraError> {
        self.check_owned(x)?;
        self.check_owned(y)?;
        let prod = self.multiply_sparse(&x.to_sparse(), &y.to_sparse());
        Ok(self.from_sparse(&prod))
    }

    pub fn multiply_sparse(&self, x: &[(usize, F)], y: &[(usize, F)]) -> SparseVec<F> {
        let mut acc: HashMap<usize, F> = HashMap::new();
        for (i, a) in x {
            for (j, b) in y {
                let ab = a.clone() * b.clone();
                for (k, c) in self.basis_product(*i, *j) {
                    add_scaled(&mut acc, *k, c, &ab);
                }
            }
        }
        let mut out: SparseVec<F> = acc.into_iter().filter(|(_, v)| !v.is_zero()).collect();
        out.sort_by_key(|(k, _)| *k);
        out
    }

    pub fn power(&self, x: &Element<F>, k: usize) -> Result<Element<F>, AlgebraError> {
        let mut acc = self.one();
        for _ in 0..k {
            acc = self.multiply(&acc, x)?;
        }
        Ok(acc)
    }

    /// Ordered product of generators named by a word.
    pub fn word_product(&self, word: &[usize]) -> SparseVec<F> {
        let mut acc: SparseVec<F> = vec![(self.unit, F::one())];
        for &g in word {
            acc = self.multiply_sparse(&acc, &self.generators[g].element);
        }
        acc
    }

    /// Degree of a homogeneous element; `None` for zero or mixed elements.
    pub fn homogeneous_degree(&self, x: &[(usize, F)]) -> Option<usize> {
        let mut degs = x.iter().filter(|(_, c)| !c.is_zero()).map(|(i, _)| self.degree(*i));
        let first = degs.next()?;
        degs.all(|d| d == first).then_some(first)
    }

    fn validate(&self) -> Result<(), AlgebraError> {
        let dim = self.dim();
        for (&(i, j), v) in &self.mult {
            let target = self.degree(i) + self.degree(j);
            if v.iter().any(|(k, _)| self.degree(*k) != target) {
                return Err(AlgebraError::NotDegreeAdditive { i, j });
            }
        }
        for i in 0..dim {
            let left = self.basis_product(self.unit, i);
            let right = self.basis_product(i, self.unit);
            let expected = [(i, F::one())];
            if left != expected || right != expected {
                return Err(AlgebraError::UnitLaw { index: i });
            }
            for j in 0..dim {
                let sign_odd = self.basis[i].is_odd() && self.basis[j].is_odd();
                let ij = self.basis_product(i, j);
                let ji: SparseVec<F> = self
                    .basis_product(j, i)
                    .iter()
                    .map(|(k, c)| (*k, if sign_odd { -c.clone() } else { c.clone() }))
                    .collect();
                if ij != ji.as_slice() {
                    return Err(AlgebraError::NotGradedCommutative { i, j });
                }
            }
        }
        self.check_associativity()?;
        for (k, g) in self.generators.iter().enumerate() {
            if !g.element.is_empty() && self.homogeneous_degree(&g.element) != Some(g.degree) {
                return Err(AlgebraError::NotHomogeneous { what: format!("generator {}", g.name) });
            }
            if g.element.iter().any(|(i, _)| *i >= dim) {
                return Err(AlgebraError::IndexOutOfRange { index: k, dim });
            }
        }
        for i in 0..dim {
            if self.word_product(&self.words[i]) != vec![(i, F::one())] {
                return Err(AlgebraError::BadWord { index: i });
            }
        }
        Ok(())
    }

    fn associative_on(&self, i: usize, j: usize, k: usize) -> bool {
        let left = self.multiply_sparse(self.basis_product(i, j), &[(k, F::one())]);
        let right = self.multiply_sparse(&[(i, F::one())], self.basis_product(j, k));
        left == right
    }

    fn check_associativity(&self) -> Result<(), AlgebraError> {
        let dim = self.dim();
        if dim <= EXHAUSTIVE_ASSOCIATIVITY_LIMIT {
            for i in 0..dim {
                for j in 0..dim {
                    for k in 0..dim {
                        if !self.associative_on(i, j, k) {
                            return Err(AlgebraError::NotAssociative { i, j, k });
                        }
                    }
                }
            }
        } else {
            let mut rng = StdRng::seed_from_u64(0xa550c);
            for _ in 0..SAMPLED_TRIPLES {
                let (i, j, k) = (rng.gen_range(0..dim), rng.gen_range(0..dim), rng.gen_range(0..dim));
                if !self.associative_on(i, j, k) {
                    return Err(AlgebraError::NotAssociative { i, j, k });
                }
            }
        }
        Ok(())
    }

    /// True when `dims(d) == dims(top - d)` for every degree.
    pub fn satisfies_poincare_duality(&self) -> bool {
        let b = self.betti();
        let top = self.top_degree();
        b.reflect(top).as_ref() == Some(&b)
    }

    /// Copy under a new name (elements of the copy are not interchangeable with the original's).
    pub fn renamed(&self, name: impl Into<String>) -> Self {
        PresentedAlgebra { name: name.into(), ..self.clone() }
    }
}
