use std::collections::HashMap;

use super::RingError;
use crate::qexact::{rref, Field, SparseMatrix};
use crate::superalg::{BasisElement, Element, Generator, PresentedAlgebra, SparseVec};

/// Exponent vector of a monomial in `c_1, ..., c_k`.
type Exps = Vec<usize>;
type Poly<F> = HashMap<Exps, F>;

fn weight(e: &[usize]) -> usize {
    e.iter().enumerate().map(|(i, a)| (i + 1) * a).sum()
}

/// Monomials of weight `w`, lexicographically descending (powers of `c_1` first).
fn monomials_of_weight(k: usize, w: usize) -> Vec<Exps> {
    fn go(k: usize, var: usize, rest: usize, cur: &mut Exps, out: &mut Vec<Exps>) {
        if var == k {
            if rest == 0 {
                out.push(cur.clone());
            }
            return;
        }
        let step = var + 1;
        for a in (0..=rest / step).rev() {
            cur[var] = a;
            go(k, var + 1, rest - a * step, cur, out);
        }
        cur[var] = 0;
    }
    let mut out = Vec::new();
    if k == 0 {
        if w == 0 {
            out.push(Vec::new());
        }
        return out;
    }
    go(k, 0, w, &mut vec![0; k], &mut out);
    out
}

fn poly_mul<F: Field>(a: &Poly<F>, b: &Poly<F>) -> Poly<F> {
    let mut out: Poly<F> = HashMap::new();
    for (ea, ca) in a {
        for (eb, cb) in b {
            let e: Exps = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
            let v = ca.clone() * cb.clone();
            let slot = out.entry(e).or_insert_with(F::zero);
            *slot = slot.clone() + v;
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

fn variable<F: Field>(k: usize, i: usize) -> Poly<F> {
    let mut e = vec![0; k];
    e[i] = 1;
    HashMap::from([(e, F::one())])
}

/// Quotient-bundle Chern classes `s_0, ..., s_upto` as polynomials in the `c_i`.
fn quotient_classes<F: Field>(k: usize, upto: usize) -> Vec<Poly<F>> {
    let mut s: Vec<Poly<F>> = vec![HashMap::from([(vec![0; k], F::one())])];
    for j in 1..=upto {
        let mut acc: Poly<F> = HashMap::new();
        for i in 1..=k.min(j) {
            for (e, c) in poly_mul(&variable(k, i - 1), &s[j - i]) {
                let slot = acc.entry(e).or_insert_with(F::zero);
                *slot = slot.clone() - c;
            }
        }
        acc.retain(|_, c| !c.is_zero());
        s.push(acc);
    }
    s
}

/// Normal-form data for `H^*(G(k, N))` in every weight up to the top one.
struct NormalForm<F> {
    k: usize,
    top: usize,
    /// per weight: monomial -> basis position or its reduction in basis monomials
    reduce: Vec<HashMap<Exps, SparseVec<F>>>,
    basis: Vec<Exps>,
}

impl<F: Field> NormalForm<F> {
    fn new(k: usize, n: usize) -> Self {
        let top = k * (n - k);
        let gens = quotient_classes::<F>(k, n);
        let mut basis: Vec<Exps> = Vec::new();
        let mut reduce = Vec::with_capacity(top + 1);
        for w in 0..=top {
            let cols = monomials_of_weight(k, w);
            let col_of: HashMap<&Exps, usize> = cols.iter().enumerate().map(|(i, e)| (e, i)).collect();
            let mut trip = Vec::new();
            let mut row = 0;
            for (j, s) in gens.iter().enumerate().skip(n - k + 1) {
                if j > w {
                    break;
                }
                for m in monomials_of_weight(k, w - j) {
                    let mp: Poly<F> = HashMap::from([(m, F::one())]);
                    for (e, c) in poly_mul(&mp, s) {
                        trip.push((row, col_of[&e], c));
                    }
                    row += 1;
                }
            }
            let ideal = SparseMatrix::from_triplets(row, cols.len(), trip).expect("ideal rows in range");
            let ech = rref(&ideal);
            let reduced = ech.reduced();
            let mut is_pivot = vec![false; cols.len()];
            for &p in ech.pivots() {
                is_pivot[p] = true;
            }
            let mut position = vec![usize::MAX; cols.len()];
            for c in 0..cols.len() {
                if !is_pivot[c] {
                    position[c] = basis.len();
                    basis.push(cols[c].clone());
                }
            }
            let mut table = HashMap::new();
            for c in 0..cols.len() {
                if !is_pivot[c] {
                    table.insert(cols[c].clone(), vec![(position[c], F::one())]);
                }
            }
            for (r, &p) in ech.pivots().iter().enumerate() {
                // pivot monomial = - (rest of its echelon row)
                let v: SparseVec<F> =
                    reduced.row(r).iter().filter(|(c, _)| *c != p).map(|(c, x)| (position[*c], -x.clone())).collect();
                table.insert(cols[p].clone(), v);
            }
            reduce.push(table);
        }
        NormalForm { k, top, reduce, basis }
    }

    fn reduce_monomial(&self, e: &[usize]) -> SparseVec<F> {
        let w = weight(e);
        if w > self.top {
            return Vec::new();
        }
        let mut v = self.reduce[w][e].clone();
        v.sort_by_key(|(i, _)| *i);
        v
    }

    fn reduce_poly(&self, p: &Poly<F>) -> SparseVec<F> {
        let mut acc: HashMap<usize, F> = HashMap::new();
        for (e, c) in p {
            for (i, x) in self.reduce_monomial(e) {
                let slot = acc.entry(i).or_insert_with(F::zero);
                *slot = slot.clone() + c.clone() * x;
            }
        }
        let mut v: SparseVec<F> = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        v.sort_by_key(|(i, _)| *i);
        v
    }

    fn label(e: &[usize]) -> String {
        let parts: Vec<String> = e
            .iter()
            .enumerate()
            .filter(|(_, a)| **a > 0)
            .map(|(i, a)| if *a == 1 { format!("c{}", i + 1) } else { format!("c{}^{}", i + 1, a) })
            .collect();
        if parts.is_empty() {
            "1".into()
        } else {
            parts.join("*")
        }
    }

    fn algebra(&self, name: String) -> PresentedAlgebra<F> {
        let index: HashMap<&Exps, usize> = self.basis.iter().enumerate().map(|(i, e)| (e, i)).collect();
        let basis = self.basis.iter().map(|e| BasisElement::new(Self::label(e), 2 * weight(e))).collect();
        let mut mult = HashMap::new();
        for (i, a) in self.basis.iter().enumerate() {
            for (j, b) in self.basis.iter().enumerate() {
                let e: Exps = a.iter().zip(b).map(|(x, y)| x + y).collect();
                let v = self.reduce_monomial(&e);
                if !v.is_empty() {
                    mult.insert((i, j), v);
                }
            }
        }
        let generators = (0..self.k)
            .map(|i| {
                let mut e = vec![0; self.k];
                e[i] = 1;
                Generator { name: format!("c{}", i + 1), degree: 2 * (i + 1), element: self.reduce_monomial(&e) }
            })
            .collect();
        let words = self
            .basis
            .iter()
            .map(|e| e.iter().enumerate().flat_map(|(i, a)| std::iter::repeat_n(i, *a)).collect())
            .collect();
        let unit = index[&vec![0; self.k]];
        PresentedAlgebra::new(name, basis, unit, mult, generators, words)
            .expect("a quotient of a polynomial ring is a graded-commutative algebra")
    }
}

/// `H^*(G(k, N))` for any `N >= k` (`G(k, k)` is a point); `None` when `N < k`
/// and the Grassmannian is empty.
pub fn grassmannian_cohomology<F: Field>(k: usize, n: usize) -> Option<PresentedAlgebra<F>> {
    if n < k {
        return None;
    }
    Some(NormalForm::<F>::new(k, n).algebra(format!("H(G({k},{n}))")))
}

/// `H^*(G(k, N))` as the polynomial ring in `c_1..c_k` (`deg c_i = 2i`) modulo
/// the quotient classes `s_j`, `j > N - k`, in monomial normal form.
pub fn grassmann_algebra<F: Field>(k: usize, n: usize) -> Result<PresentedAlgebra<F>, RingError> {
    if k == 0 || k >= n {
        return Err(RingError::InvalidShape { k, n });
    }
    Ok(grassmannian_cohomology(k, n).expect("shape checked"))
}

/// `H^*(P^m)`, presented as `G(1, m + 1)`.
pub fn projective_space<F: Field>(m: usize) -> PresentedAlgebra<F> {
    grassmannian_cohomology(1, m + 1).expect("nonempty").renamed(format!("H(P^{m})"))
}

/// The quotient-bundle Chern class `s_j` of `G(k, N)` as an element of
/// `grassmann_algebra(k, N)` (passed in as `alg`).
pub fn quotient_chern_class<F: Field>(alg: &PresentedAlgebra<F>, k: usize, n: usize, j: usize) -> Element<F> {
    let nf = NormalForm::<F>::new(k, n);
    let s = quotient_classes::<F>(k, j);
    alg.from_sparse(&nf.reduce_poly(&s[j]))
}

/// The top nonvanishing quotient class `s_{N-2}` of `G(2, N)`.
pub fn quotient_top_chern<F: Field>(alg: &PresentedAlgebra<F>, n: usize) -> Element<F> {
    quotient_chern_class(alg, 2, n, n - 2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Rational;

    #[test]
    fn weight_enumeration_is_lex_descending() {
        assert_eq!(monomials_of_weight(2, 4), vec![vec![4, 0], vec![2, 1], vec![0, 2]]);
        assert_eq!(monomials_of_weight(0, 0), vec![Vec::<usize>::new()]);
    }

    #[test]
    fn low_quotient_classes() {
        let s = quotient_classes::<Rational>(2, 2);
        assert_eq!(s[1], HashMap::from([(vec![1, 0], Rational::from_i64(-1))]));
        assert_eq!(s[2], HashMap::from([(vec![2, 0], Rational::from_i64(1)), (vec![0, 1], Rational::from_i64(-1))]));
    }
}
