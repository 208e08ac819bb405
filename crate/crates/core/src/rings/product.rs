use std::collections::HashMap;

use crate::qexact::{sign, Field};
use crate::superalg::{BasisElement, Generator, PresentedAlgebra};

/// Graded tensor product `A ⊗ B` with
/// `(x ⊗ y)(x' ⊗ y') = (-1)^{|y||x'|} xx' ⊗ yy'`. Basis pairs are ordered with
/// the `A` index major; generators are those of `A` followed by those of `B`.
pub fn tensor_algebra<F: Field>(a: &PresentedAlgebra<F>, b: &PresentedAlgebra<F>) -> PresentedAlgebra<F> {
    let (na, nb) = (a.dim(), b.dim());
    let idx = |i: usize, j: usize| i * nb + j;
    let mut basis = Vec::with_capacity(na * nb);
    let mut words = Vec::with_capacity(na * nb);
    let ga = a.generators().len();
    for i in 0..na {
        for j in 0..nb {
            let label = match (i == a.unit_index(), j == b.unit_index()) {
                (true, true) => "1".to_string(),
                (true, false) => b.label(j).to_string(),
                (false, true) => a.label(i).to_string(),
                (false, false) => format!("{}*{}", a.label(i), b.label(j)),
            };
            basis.push(BasisElement::new(label, a.degree(i) + b.degree(j)));
            words.push(a.word(i).iter().copied().chain(b.word(j).iter().map(|g| g + ga)).collect());
        }
    }
    let mut mult = HashMap::new();
    for i in 0..na {
        for j in 0..nb {
            for i2 in 0..na {
                let pa = a.basis_product(i, i2);
                if pa.is_empty() {
                    continue;
                }
                let s: F = sign(b.degree(j) * a.degree(i2) % 2 == 1);
                for j2 in 0..nb {
                    let pb = b.basis_product(j, j2);
                    if pb.is_empty() {
                        continue;
                    }
                    let mut v = Vec::with_capacity(pa.len() * pb.len());
                    for (k, x) in pa {
                        for (l, y) in pb {
                            v.push((idx(*k, *l), s.clone() * x.clone() * y.clone()));
                        }
                    }
                    mult.insert((idx(i, j), idx(i2, j2)), v);
                }
            }
        }
    }
    let mut generators: Vec<Generator<F>> = a
        .generators()
        .iter()
        .map(|g| Generator {
            name: g.name.clone(),
            degree: g.degree,
            element: g.element.iter().map(|(k, c)| (idx(*k, b.unit_index()), c.clone())).collect(),
        })
        .collect();
    generators.extend(b.generators().iter().map(|g| Generator {
        name: g.name.clone(),
        degree: g.degree,
        element: g.element.iter().map(|(k, c)| (idx(a.unit_index(), *k), c.clone())).collect(),
    }));
    let name = if nb == 1 && b.degree(0) == 0 && b.generators().is_empty() {
        a.name().to_string()
    } else {
        format!("{} (x) {}", a.name(), b.name())
    };
    PresentedAlgebra::new_unchecked(name, basis, idx(a.unit_index(), b.unit_index()), mult, generators, words)
        .expect("indices of a product of valid algebras are in range")
}
