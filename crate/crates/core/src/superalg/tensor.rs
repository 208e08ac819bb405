use std::collections::HashMap;

use super::koszul::{koszul_sign, permutation_sign};
use super::{AlgebraError, PresentedAlgebra};
use crate::qexact::{sign, Field};

/// Element of `A^{⊗p} ⊗ B`: a slot tuple of `A`-basis indices paired with a
/// `B`-basis index. With no tail algebra, `B` is the ground field and the tail
/// index is always 0.
#[derive(Clone, Debug, PartialEq)]
pub struct TensorElement<F> {
    p: usize,
    terms: HashMap<(Vec<usize>, usize), F>,
}

impl<F: Field> TensorElement<F> {
    pub fn new(p: usize) -> Self {
        TensorElement { p, terms: HashMap::new() }
    }

    pub fn pure(slots: Vec<usize>, tail: usize) -> Self {
        let mut t = TensorElement::new(slots.len());
        t.add_term(slots, tail, F::one());
        t
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[usize], usize, &F)> {
        self.terms.iter().map(|((s, t), c)| (s.as_slice(), *t, c))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, slots: &[usize], tail: usize) -> F {
        self.terms.get(&(slots.to_vec(), tail)).cloned().unwrap_or_else(F::zero)
    }

    pub fn add_term(&mut self, slots: Vec<usize>, tail: usize, c: F) {
        assert_eq!(slots.len(), self.p, "slot count must match the tensor power");
        if c.is_zero() {
            return;
        }
        let key = (slots, tail);
        match self.terms.get_mut(&key) {
            Some(v) => {
                let nv = v.clone() + c;
                if nv.is_zero() {
                    self.terms.remove(&key);
                } else {
                    *v = nv;
                }
            }
            None => {
                self.terms.insert(key, c);
            }
        }
    }

    pub fn add_assign(&mut self, other: &TensorElement<F>) {
        for ((s, t), c) in &other.terms {
            self.add_term(s.clone(), *t, c.clone());
        }
    }

    pub fn add_then(mut self, other: &TensorElement<F>) -> Self {
        self.add_assign(other);
        self
    }

    pub fn scale(&self, s: &F) -> Self {
        let mut out = TensorElement::new(self.p);
        for ((slots, t), c) in &self.terms {
            out.add_term(slots.clone(), *t, c.clone() * s.clone());
        }
        out
    }

    /// Koszul-signed slot permutation: output slot `k` receives input slot `perm[k]`.
    pub fn permute_slots(&self, perm: &[usize], slot_alg: &PresentedAlgebra<F>) -> Self {
        assert_eq!(perm.len(), self.p);
        let mut out = TensorElement::new(self.p);
        for ((slots, t), c) in &self.terms {
            let degs: Vec<usize> = slots.iter().map(|&a| slot_alg.degree(a)).collect();
            let moved: Vec<usize> = perm.iter().map(|&src| slots[src]).collect();
            let s = koszul_sign(perm, &degs);
            out.add_term(moved, *t, sign::<F>(s < 0) * c.clone());
        }
        out
    }

    /// The sign-twisted action: permutation sign times the Koszul action.
    pub fn twisted_permute_slots(&self, perm: &[usize], slot_alg: &PresentedAlgebra<F>) -> Self {
        let t = self.permute_slots(perm, slot_alg);
        if permutation_sign(perm) < 0 {
            t.scale(&-F::one())
        } else {
            t
        }
    }

    /// Product in the graded tensor product algebra `A^{⊗p} ⊗ B`.
    pub fn mul(
        &self,
        other: &TensorElement<F>,
        slot_alg: &PresentedAlgebra<F>,
        tail_alg: Option<&PresentedAlgebra<F>>,
    ) -> Result<Self, AlgebraError> {
        if self.p != other.p {
            return Err(AlgebraError::AlgebraMismatch {
                expected: format!("tensor power {}", self.p),
                found: format!("tensor power {}", other.p),
            });
        }
        let tail_deg = |b: usize| tail_alg.map_or(0, |t| t.degree(b));
        let mut out = TensorElement::new(self.p);
        for ((s, x), a) in &self.terms {
            for ((t, y), b) in &other.terms {
                // moving each t_j past s_{j+1..}, then the whole of t past x
                let mut odd = 0usize;
                let mut s_after = 0usize;
                let mut t_total = 0usize;
                for j in (0..self.p).rev() {
                    let dt = slot_alg.degree(t[j]);
                    odd += dt * s_after;
                    s_after += slot_alg.degree(s[j]);
                    t_total += dt;
                }
                odd += tail_deg(*x) * t_total;
                let coeff = sign::<F>(odd % 2 == 1) * a.clone() * b.clone();

                let tails: Vec<(usize, F)> = match tail_alg {
                    Some(alg) => alg.basis_product(*x, *y).to_vec(),
                    None => vec![(0, F::one())],
                };
                if tails.is_empty() {
                    continue;
                }
                // expand the slotwise products
                let mut partial: Vec<(Vec<usize>, F)> = vec![(Vec::with_capacity(self.p), coeff)];
                for j in 0..self.p {
                    let prod = slot_alg.basis_product(s[j], t[j]);
                    let mut next = Vec::with_capacity(partial.len() * prod.len());
                    for (prefix, c) in &partial {
                        for (k, v) in prod {
                            let mut np = prefix.clone();
                            np.push(*k);
                            next.push((np, c.clone() * v.clone()));
                        }
                    }
                    partial = next;
                    if partial.is_empty() {
                        break;
                    }
                }
                for (slots, c) in partial {
                    for (z, v) in &tails {
                        out.add_term(slots.clone(), *z, c.clone() * v.clone());
                    }
                }
            }
        }
        Ok(out)
    }
}
