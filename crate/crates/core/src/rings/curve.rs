use std::collections::HashMap;

use crate::qexact::{sign, Field};
use crate::superalg::{BasisElement, Generator, PresentedAlgebra};

/// `H^*(C)` for a genus-`g` curve: basis `1, alpha1..alpha2g, e` with
/// `alpha_k alpha_{g+k} = e = -alpha_{g+k} alpha_k` and every other product of
/// positive-degree classes zero.
pub fn curve_algebra<F: Field>(g: usize) -> PresentedAlgebra<F> {
    let identity: Vec<usize> = (0..2 * g).collect();
    build_curve(g, &identity)
}

/// `H^*(C)` with the `alpha` labels permuted: the class stored at position `k`
/// is named `alpha{sigma[k-1]+1}`. `sigma` must preserve the pairing
/// `{k, g+k}`, so the result is the same ring with relabeled generators.
pub fn curve_algebra_relabeled<F: Field>(g: usize, sigma: &[usize]) -> Option<PresentedAlgebra<F>> {
    let n = 2 * g;
    let mut seen = vec![false; n];
    if sigma.len() != n || sigma.iter().any(|&s| s >= n || std::mem::replace(&mut seen[s], true)) {
        return None;
    }
    let partner = |k: usize| if k < g { k + g } else { k - g };
    if (0..n).any(|k| sigma[partner(k)] != partner(sigma[k])) {
        return None;
    }
    Some(build_curve(g, sigma))
}

fn build_curve<F: Field>(g: usize, sigma: &[usize]) -> PresentedAlgebra<F> {
    let dim = 2 * g + 2;
    let top = dim - 1;
    let mut basis = vec![BasisElement::new("1", 0)];
    basis.extend(sigma.iter().map(|s| BasisElement::new(format!("alpha{}", s + 1), 1)));
    basis.push(BasisElement::new("e", 2));

    let mut mult = HashMap::new();
    for i in 0..dim {
        mult.insert((0, i), vec![(i, F::one())]);
        mult.insert((i, 0), vec![(i, F::one())]);
    }
    // position of label alpha_{l+1}
    let mut at = vec![0; 2 * g];
    for (k, &l) in sigma.iter().enumerate() {
        at[l] = k + 1;
    }
    for l in 0..g {
        let (x, y) = (at[l], at[l + g]);
        mult.insert((x, y), vec![(top, F::one())]);
        mult.insert((y, x), vec![(top, -F::one())]);
    }
    let mut generators: Vec<Generator<F>> = (1..=2 * g)
        .map(|k| Generator { name: basis[k].label.clone(), degree: 1, element: vec![(k, F::one())] })
        .collect();
    generators.push(Generator { name: "e".into(), degree: 2, element: vec![(top, F::one())] });
    let mut words: Vec<Vec<usize>> = vec![Vec::new()];
    words.extend((0..2 * g).map(|k| vec![k]));
    words.push(vec![2 * g]);

    PresentedAlgebra::new(format!("H(C_{g})"), basis, 0, mult, generators, words).expect("curve algebra is well formed")
}

/// `H^*(Pic(C)) = Λ(a_1, ..., a_2g)` with all `a_r` in degree 1. Basis: subsets
/// ordered by size, then lexicographically.
pub fn picard_algebra<F: Field>(g: usize) -> PresentedAlgebra<F> {
    let n = 2 * g;
    let mut subsets: Vec<Vec<usize>> =
        (0u32..1 << n).map(|mask| (0..n).filter(|r| mask & (1 << r) != 0).collect()).collect();
    subsets.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    let index: HashMap<Vec<usize>, usize> = subsets.iter().cloned().enumerate().map(|(i, s)| (s, i)).collect();

    let basis = subsets
        .iter()
        .map(|s| {
            let label = if s.is_empty() {
                "1".to_string()
            } else {
                s.iter().map(|r| format!("a{}", r + 1)).collect::<Vec<_>>().join("*")
            };
            BasisElement::new(label, s.len())
        })
        .collect();
    let mut mult = HashMap::new();
    for (i, s) in subsets.iter().enumerate() {
        for (j, t) in subsets.iter().enumerate() {
            if s.iter().any(|x| t.contains(x)) {
                continue;
            }
            let swaps = s.iter().map(|x| t.iter().filter(|y| *y < x).count()).sum::<usize>();
            let mut u: Vec<usize> = s.iter().chain(t).copied().collect();
            u.sort_unstable();
            mult.insert((i, j), vec![(index[&u], sign::<F>(swaps % 2 == 1))]);
        }
    }
    let generators = (0..n)
        .map(|r| Generator { name: format!("a{}", r + 1), degree: 1, element: vec![(index[&vec![r]], F::one())] })
        .collect();
    let words = subsets.clone();
    PresentedAlgebra::new(format!("H(Pic_{g})"), basis, 0, mult, generators, words)
        .expect("exterior algebra is well formed")
}
