use std::sync::Arc;

use crate::qexact::{sign, Field};
use crate::superalg::{AlgebraError, AlgebraHom, TensorElement};

/// The pullback along the `i`-th face: `A^{⊗p} ⊗ H(X) -> A^{⊗(p+1)} ⊗ H(X')`.
///
/// Source slot `j` moves to target slot `j` (`j < i`) or `j + 1` (`j >= i`); the
/// tail is sent through the family template, whose slot class lands in the
/// new slot `i`.
#[derive(Clone, Debug)]
pub struct FacePullback<F> {
    p: usize,
    i: usize,
    hom: Arc<AlgebraHom<F>>,
}

impl<F: Field> FacePullback<F> {
    pub(crate) fn new(p: usize, i: usize, hom: Arc<AlgebraHom<F>>) -> Self {
        FacePullback { p, i, hom }
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn face(&self) -> usize {
        self.i
    }

    pub fn tail_hom(&self) -> &AlgebraHom<F> {
        &self.hom
    }

    /// Adds `c * f(slots ⊗ tail)` to `out`.
    pub fn apply_term(&self, slots: &[usize], tail: usize, c: &F, out: &mut TensorElement<F>) {
        let a = &self.hom.target().slot;
        let pos = self.i - 1;
        let after: usize = slots[pos..].iter().map(|&w| a.degree(w)).sum();
        for (s, b, v) in self.hom.basis_image(tail).terms() {
            let s = s[0];
            let mut new_slots = Vec::with_capacity(self.p + 1);
            new_slots.extend_from_slice(&slots[..pos]);
            new_slots.push(s);
            new_slots.extend_from_slice(&slots[pos..]);
            let k: F = sign(a.degree(s) * after % 2 == 1);
            out.add_term(new_slots, b, k * v.clone() * c.clone());
        }
    }

    pub fn apply(&self, x: &TensorElement<F>) -> TensorElement<F> {
        let mut out = TensorElement::new(self.p + 1);
        for (slots, tail, c) in x.terms() {
            self.apply_term(slots, tail, c, &mut out);
        }
        out
    }

    /// Source algebra generators: each slot generator placed in each slot, and
    /// each tail generator.
    fn source_generators(&self) -> Vec<(String, TensorElement<F>)> {
        let a = &self.hom.target().slot;
        let x = self.hom.source();
        let mut gens = Vec::new();
        for j in 0..self.p {
            for g in a.generators() {
                let mut t = TensorElement::new(self.p);
                for (k, c) in &g.element {
                    let mut slots = vec![a.unit_index(); self.p];
                    slots[j] = *k;
                    t.add_term(slots, x.unit_index(), c.clone());
                }
                gens.push((format!("{}[{}]", g.name, j + 1), t));
            }
        }
        for g in x.generators() {
            let mut t = TensorElement::new(self.p);
            for (k, c) in &g.element {
                t.add_term(vec![a.unit_index(); self.p], *k, c.clone());
            }
            gens.push((g.name.clone(), t));
        }
        gens
    }

    /// Checks degree preservation and `f(xy) = f(x) f(y)` on generator pairs.
    pub fn check_multiplicative(&self) -> Result<(), AlgebraError> {
        self.hom.check_multiplicative()?;
        let a = &self.hom.target().slot;
        let src_tail = self.hom.source();
        let tgt_tail = &self.hom.target().tail;
        let gens = self.source_generators();
        for (na, x) in &gens {
            for (nb, y) in &gens {
                let xy = x.mul(y, a, Some(src_tail))?;
                let lhs = self.apply(&xy);
                let rhs = self.apply(x).mul(&self.apply(y), a, Some(tgt_tail))?;
                if lhs != rhs {
                    return Err(AlgebraError::NotMultiplicative { what: format!("face {} on {na}*{nb}", self.i) });
                }
            }
        }
        Ok(())
    }
}
