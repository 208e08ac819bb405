use std::collections::{BTreeMap, HashMap};

use num_integer::binomial;

use super::{AlgebraError, PresentedAlgebra, TensorElement};
use crate::qexact::{sign, Field};
use crate::GradedDims;

/// A basis vector of the sign-twisted invariants of `A^{⊗p}`: a multiset of
/// odd-degree basis indices and a set of even-degree ones.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct InvMonomial {
    pub odd: Vec<usize>,
    pub even: Vec<usize>,
    pub degree: usize,
}

impl InvMonomial {
    /// The canonical arrangement: odd indices weakly increasing, then even
    /// indices strictly increasing.
    pub fn slots(&self) -> Vec<usize> {
        self.odd.iter().chain(&self.even).copied().collect()
    }

    pub fn p(&self) -> usize {
        self.odd.len() + self.even.len()
    }
}

#[derive(Clone, Debug)]
pub struct SgnInvariantBasis {
    p: usize,
    monomials: Vec<InvMonomial>,
    index: HashMap<Vec<usize>, usize>,
}

impl SgnInvariantBasis {
    fn from_monomials(p: usize, monomials: Vec<InvMonomial>) -> Self {
        let index = monomials.iter().enumerate().map(|(i, m)| (m.slots(), i)).collect();
        SgnInvariantBasis { p, monomials, index }
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn len(&self) -> usize {
        self.monomials.len()
    }

    pub fn is_empty(&self) -> bool {
        self.monomials.is_empty()
    }

    pub fn monomials(&self) -> &[InvMonomial] {
        &self.monomials
    }

    pub fn monomial(&self, i: usize) -> &InvMonomial {
        &self.monomials[i]
    }

    /// Position of the monomial with the given canonical arrangement.
    pub fn index_of(&self, canonical: &[usize]) -> Option<usize> {
        self.index.get(canonical).copied()
    }

    pub fn dims(&self) -> GradedDims {
        GradedDims::from_pairs(self.monomials.iter().map(|m| (m.degree, 1)))
    }

    /// Indices of the monomials of one degree, in basis order.
    pub fn in_degree(&self, d: usize) -> Vec<usize> {
        (0..self.monomials.len()).filter(|&i| self.monomials[i].degree == d).collect()
    }

    /// Same monomials, opposite order.
    pub fn reversed(&self) -> Self {
        let mut m = self.monomials.clone();
        m.reverse();
        Self::from_monomials(self.p, m)
    }

    pub fn label<F: Field>(&self, alg: &PresentedAlgebra<F>, i: usize) -> String {
        let m = &self.monomials[i];
        if m.p() == 0 {
            return "1".to_string();
        }
        m.slots().iter().map(|&a| alg.label(a)).collect::<Vec<_>>().join("|")
    }

    /// The orbit sum of a monomial with its sign-twisted signs, not normalized.
    pub fn representative<F: Field>(&self, alg: &PresentedAlgebra<F>, i: usize) -> TensorElement<F> {
        let mut out = TensorElement::new(self.p);
        for (w, negative) in orbit(alg, &self.monomials[i].slots()) {
            out.add_term(w, 0, sign(negative));
        }
        out
    }

    /// Invariant tensor with the given coordinates, indexed by (monomial, tail).
    pub fn reconstruct<F: Field>(&self, alg: &PresentedAlgebra<F>, coords: &[(usize, usize, F)]) -> TensorElement<F> {
        let mut out = TensorElement::new(self.p);
        for (i, tail, c) in coords {
            for (w, negative) in orbit(alg, &self.monomials[*i].slots()) {
                out.add_term(w, *tail, sign::<F>(negative) * c.clone());
            }
        }
        out
    }
}

/// Basis of `(A^{⊗p} ⊗ sgn)^{S_p}`: Sym on odd classes, Λ on even classes.
/// Monomials are listed in lexicographic order of their canonical arrangement.
pub fn sgn_invariant_basis<F: Field>(alg: &PresentedAlgebra<F>, p: usize) -> SgnInvariantBasis {
    let odd: Vec<usize> = (0..alg.dim()).filter(|&a| alg.degree(a) % 2 == 1).collect();
    let even: Vec<usize> = (0..alg.dim()).filter(|&a| alg.degree(a).is_multiple_of(2)).collect();
    let mut monomials = Vec::new();
    for i in 0..=p {
        let odd_parts = multisets(&odd, i);
        let even_parts = subsets(&even, p - i);
        for o in &odd_parts {
            for e in &even_parts {
                let degree = o.iter().chain(e).map(|&a| alg.degree(a)).sum();
                monomials.push(InvMonomial { odd: o.clone(), even: e.clone(), degree });
            }
        }
    }
    monomials.sort_by_key(InvMonomial::slots);
    SgnInvariantBasis::from_monomials(p, monomials)
}

fn multisets(items: &[usize], k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn go(items: &[usize], start: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for s in start..items.len() {
            cur.push(items[s]);
            go(items, s, k, cur, out);
            cur.pop();
        }
    }
    go(items, 0, k, &mut cur, &mut out);
    out
}

fn subsets(items: &[usize], k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn go(items: &[usize], start: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for s in start..items.len() {
            cur.push(items[s]);
            go(items, s + 1, k, cur, out);
            cur.pop();
        }
    }
    go(items, 0, k, &mut cur, &mut out);
    out
}

/// Canonical arrangement of a slot tuple and the sign with which the tuple
/// occurs in that monomial's representative (`true` for negative). `None` when
/// an even-degree class repeats, since such tuples never occur in an invariant.
pub fn canonicalize<F: Field>(alg: &PresentedAlgebra<F>, slots: &[usize]) -> Option<(Vec<usize>, bool)> {
    let key = |a: usize| (alg.degree(a).is_multiple_of(2), a);
    let mut flips = 0usize;
    for x in 0..slots.len() {
        for y in x + 1..slots.len() {
            let (kx, ky) = (key(slots[x]), key(slots[y]));
            if kx == ky && kx.0 {
                return None;
            }
            if kx > ky && (kx.0 || ky.0) {
                flips += 1;
            }
        }
    }
    let mut canon = slots.to_vec();
    canon.sort_by_key(|&a| key(a));
    Some((canon, flips % 2 == 1))
}

/// Number of distinct arrangements of a monomial: `p! / ∏ (odd multiplicity)!`.
pub fn orbit_size(m: &InvMonomial) -> u64 {
    let mut size: u64 = (1..=m.p() as u64).product();
    let mut counts: BTreeMap<usize, u64> = BTreeMap::new();
    for &a in &m.odd {
        *counts.entry(a).or_default() += 1;
    }
    for c in counts.values() {
        size /= (1..=*c).product::<u64>();
    }
    size
}

/// All distinct arrangements of a canonical slot tuple with their signs.
fn orbit<F: Field>(alg: &PresentedAlgebra<F>, canonical: &[usize]) -> Vec<(Vec<usize>, bool)> {
    let mut w = canonical.to_vec();
    w.sort_unstable();
    let mut out = Vec::new();
    loop {
        let (_, negative) = canonicalize(alg, &w).expect("orbit of a valid monomial");
        out.push((w.clone(), negative));
        if !next_permutation(&mut w) {
            break;
        }
    }
    out
}

fn next_permutation(v: &mut [usize]) -> bool {
    if v.len() < 2 {
        return false;
    }
    let mut i = v.len() - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = v.len() - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

/// Coordinates `(monomial, tail, coefficient)` of an invariant tensor, sorted.
pub fn project_to_invariants<F: Field>(
    basis: &SgnInvariantBasis,
    alg: &PresentedAlgebra<F>,
    x: &TensorElement<F>,
) -> Result<Vec<(usize, usize, F)>, AlgebraError> {
    let mut coords: BTreeMap<(usize, usize), F> = BTreeMap::new();
    let mut seen: Vec<(usize, usize, bool, F)> = Vec::with_capacity(x.len());
    for (slots, tail, c) in x.terms() {
        let not_inv = || AlgebraError::NotInvariant { slots: slots.to_vec() };
        let (canon, negative) = canonicalize(alg, slots).ok_or_else(not_inv)?;
        let i = basis.index_of(&canon).ok_or_else(not_inv)?;
        if canon == slots {
            coords.insert((i, tail), c.clone());
        }
        seen.push((i, tail, negative, c.clone()));
    }
    // every arrangement must carry the canonical coefficient times its sign
    let mut counts: HashMap<(usize, usize), u64> = HashMap::new();
    for (i, tail, negative, c) in &seen {
        let expected = coords.get(&(*i, *tail)).cloned().unwrap_or_else(F::zero) * sign(*negative);
        if *c != expected {
            let m = basis.monomial(*i);
            return Err(AlgebraError::NotInvariant { slots: m.slots() });
        }
        *counts.entry((*i, *tail)).or_default() += 1;
    }
    for (&(i, tail), n) in &counts {
        if *n != orbit_size(basis.monomial(i)) {
            return Err(AlgebraError::NotInvariant { slots: basis.monomial(i).slots() });
        }
        debug_assert!(coords.contains_key(&(i, tail)));
    }
    Ok(coords.into_iter().map(|((i, t), c)| (i, t, c)).collect())
}

/// Graded dimensions of `⊕_{i+j=p} Sym^i(V^odd) ⊗ Λ^j(V^even)` from the Betti
/// numbers of `V` alone.
pub fn sym_ext_dims(dims: &GradedDims, p: usize) -> GradedDims {
    graded_power_coefficient(dims, p, true)
}

/// Coefficient of `y^p` in `∏ (1 - y t^d)^{-b_d}` over the degrees of one parity
/// times `∏ (1 + y t^d)^{b_d}` over the other. With `sym_on_odd` the symmetric
/// factors sit on odd degrees; otherwise on even degrees.
pub(crate) fn graded_power_coefficient(dims: &GradedDims, p: usize, sym_on_odd: bool) -> GradedDims {
    // series[k] = graded dims of the y^k coefficient so far
    let mut series: Vec<GradedDims> =
        (0..=p).map(|k| if k == 0 { GradedDims::unit() } else { GradedDims::new() }).collect();
    for (d, b) in dims.iter() {
        if b == 0 {
            continue;
        }
        let symmetric = (d % 2 == 1) == sym_on_odd;
        let factor: Vec<usize> =
            (0..=p).map(|k| if symmetric { binomial(b + k - 1, k) } else { binomial(b, k) }).collect();
        let mut next: Vec<GradedDims> = vec![GradedDims::new(); p + 1];
        for (k, f) in factor.iter().enumerate() {
            if *f == 0 {
                continue;
            }
            for j in 0..=p - k {
                for (deg, r) in series[j].iter() {
                    next[j + k].add(deg + d * k, r * f);
                }
            }
        }
        series = next;
    }
    series.swap_remove(p)
}
