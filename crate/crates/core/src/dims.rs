use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

/// Betti table: degree -> rank, finitely supported, zero ranks never stored.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct GradedDims(BTreeMap<usize, usize>);

impl GradedDims {
    pub fn new() -> Self {
        GradedDims(BTreeMap::new())
    }

    /// The ground field: rank one in degree zero.
    pub fn unit() -> Self {
        Self::from_pairs([(0, 1)])
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (usize, usize)>) -> Self {
        let mut d = GradedDims::new();
        for (deg, rank) in pairs {
            d.add(deg, rank);
        }
        d
    }

    pub fn get(&self, degree: usize) -> usize {
        self.0.get(&degree).copied().unwrap_or(0)
    }

    pub fn add(&mut self, degree: usize, rank: usize) {
        if rank > 0 {
            *self.0.entry(degree).or_insert(0) += rank;
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.0.iter().map(|(d, r)| (*d, *r))
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn total(&self) -> usize {
        self.0.values().sum()
    }

    pub fn top_degree(&self) -> Option<usize> {
        self.0.keys().next_back().copied()
    }

    /// Alternating sum of ranks.
    pub fn euler_characteristic(&self) -> i64 {
        self.iter().map(|(d, r)| if d % 2 == 0 { r as i64 } else { -(r as i64) }).sum()
    }

    /// Künneth product of Betti tables.
    pub fn convolve(&self, other: &GradedDims) -> GradedDims {
        let mut out = GradedDims::new();
        for (a, ra) in self.iter() {
            for (b, rb) in other.iter() {
                out.add(a + b, ra * rb);
            }
        }
        out
    }

    /// Shifts every degree up by `by`.
    pub fn shift(&self, by: usize) -> GradedDims {
        GradedDims::from_pairs(self.iter().map(|(d, r)| (d + by, r)))
    }

    /// `d -> total - d`; degrees above `total` are an error.
    pub fn reflect(&self, total: usize) -> Option<GradedDims> {
        let mut out = GradedDims::new();
        for (d, r) in self.iter() {
            out.add(total.checked_sub(d)?, r);
        }
        Some(out)
    }
}

impl fmt::Display for GradedDims {
    /// Poincaré polynomial in `t`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return write!(f, "0");
        }
        let terms: Vec<String> = self
            .iter()
            .map(|(d, r)| match (d, r) {
                (0, r) => format!("{r}"),
                (1, 1) => "t".to_string(),
                (1, r) => format!("{r}t"),
                (d, 1) => format!("t^{d}"),
                (d, r) => format!("{r}t^{d}"),
            })
            .collect();
        write!(f, "{}", terms.join(" + "))
    }
}

impl FromIterator<(usize, usize)> for GradedDims {
    fn from_iter<T: IntoIterator<Item = (usize, usize)>>(iter: T) -> Self {
        GradedDims::from_pairs(iter)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn convolution_is_kunneth() {
        let circle = GradedDims::from_pairs([(0, 1), (1, 1)]);
        let torus = circle.convolve(&circle);
        assert_eq!(torus, GradedDims::from_pairs([(0, 1), (1, 2), (2, 1)]));
        assert_eq!(torus.euler_characteristic(), 0);
        assert_eq!(torus.to_string(), "1 + 2t + t^2");
    }

    #[test]
    fn reflection_and_zero_ranks() {
        let d = GradedDims::from_pairs([(0, 1), (3, 0), (4, 2)]);
        assert_eq!(d.iter().count(), 2);
        assert_eq!(d.reflect(4).unwrap(), GradedDims::from_pairs([(4, 1), (0, 2)]));
        assert!(d.reflect(3).is_none());
    }
}
