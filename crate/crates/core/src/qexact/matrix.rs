use std::fmt;

use super::field::Field;
use super::QError;

/// Sparse row-major matrix over an exact field.
///
/// Each row is a list of `(column, value)` pairs sorted by column with no stored
/// zeros. A matrix with `rows` rows and `cols` columns represents a linear map
/// `F^cols -> F^rows`.
#[derive(Clone, PartialEq)]
pub struct SparseMatrix<F> {
    rows: usize,
    cols: usize,
    data: Vec<Vec<(usize, F)>>,
}

impl<F: Field> SparseMatrix<F> {
    pub fn zero(rows: usize, cols: usize) -> Self {
        SparseMatrix { rows, cols, data: vec![Vec::new(); rows] }
    }

    pub fn identity(n: usize) -> Self {
        let data = (0..n).map(|i| vec![(i, F::one())]).collect();
        SparseMatrix { rows: n, cols: n, data }
    }

    /// Builds a matrix from `(row, col, value)` triplets; repeated positions are summed.
    pub fn from_triplets(
        rows: usize,
        cols: usize,
        triplets: impl IntoIterator<Item = (usize, usize, F)>,
    ) -> Result<Self, QError> {
        let mut data: Vec<Vec<(usize, F)>> = vec![Vec::new(); rows];
        for (r, c, v) in triplets {
            if r >= rows || c >= cols {
                return Err(QError::IndexOutOfRange { row: r, col: c, rows, cols });
            }
            data[r].push((c, v));
        }
        for row in &mut data {
            normalize_row(row);
        }
        Ok(SparseMatrix { rows, cols, data })
    }

    pub fn from_dense(dense: &[Vec<F>]) -> Result<Self, QError> {
        let rows = dense.len();
        let cols = dense.first().map_or(0, Vec::len);
        if dense.iter().any(|r| r.len() != cols) {
            return Err(QError::ShapeMismatch(format!("ragged dense input with {rows} rows")));
        }
        let data = dense
            .iter()
            .map(|r| r.iter().enumerate().filter(|(_, v)| !v.is_zero()).map(|(c, v)| (c, v.clone())).collect())
            .collect();
        Ok(SparseMatrix { rows, cols, data })
    }

    /// Matrix whose columns are the given vectors (each of length `rows`).
    pub fn from_columns(rows: usize, columns: &[Vec<F>]) -> Result<Self, QError> {
        let cols = columns.len();
        let mut trip = Vec::new();
        for (c, v) in columns.iter().enumerate() {
            if v.len() != rows {
                return Err(QError::ShapeMismatch(format!(
                    "column {c} has length {} but the matrix has {rows} rows",
                    v.len()
                )));
            }
            for (r, x) in v.iter().enumerate() {
                if !x.is_zero() {
                    trip.push((r, c, x.clone()));
                }
            }
        }
        Self::from_triplets(rows, cols, trip)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn row(&self, r: usize) -> &[(usize, F)] {
        &self.data[r]
    }

    pub fn get(&self, r: usize, c: usize) -> F {
        match self.data[r].binary_search_by_key(&c, |(k, _)| *k) {
            Ok(pos) => self.data[r][pos].1.clone(),
            Err(_) => F::zero(),
        }
    }

    pub fn nnz(&self) -> usize {
        self.data.iter().map(Vec::len).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Vec::is_empty)
    }

    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &F)> {
        self.data.iter().enumerate().flat_map(|(r, row)| row.iter().map(move |(c, v)| (r, *c, v)))
    }

    pub fn transpose(&self) -> Self {
        let mut data: Vec<Vec<(usize, F)>> = vec![Vec::new(); self.cols];
        for (r, c, v) in self.entries() {
            data[c].push((r, v.clone()));
        }
        SparseMatrix { rows: self.cols, cols: self.rows, data }
    }

    pub fn to_dense(&self) -> Vec<Vec<F>> {
        let mut out = vec![vec![F::zero(); self.cols]; self.rows];
        for (r, c, v) in self.entries() {
            out[r][c] = v.clone();
        }
        out
    }

    /// `self * rhs`.
    pub fn mul(&self, rhs: &SparseMatrix<F>) -> Result<Self, QError> {
        if self.cols != rhs.rows {
            return Err(QError::ShapeMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let data = self
            .data
            .iter()
            .map(|row| {
                let mut acc: Vec<(usize, F)> = Vec::new();
                for (k, a) in row {
                    for (c, b) in &rhs.data[*k] {
                        acc.push((*c, a.clone() * b.clone()));
                    }
                }
                normalize_row(&mut acc);
                acc
            })
            .collect();
        Ok(SparseMatrix { rows: self.rows, cols: rhs.cols, data })
    }

    pub fn mul_vec(&self, v: &[F]) -> Result<Vec<F>, QError> {
        if v.len() != self.cols {
            return Err(QError::ShapeMismatch(format!("vector of length {} against {} columns", v.len(), self.cols)));
        }
        Ok(self
            .data
            .iter()
            .map(|row| row.iter().fold(F::zero(), |acc, (c, a)| acc + a.clone() * v[*c].clone()))
            .collect())
    }

    pub fn scale(&self, s: &F) -> Self {
        if s.is_zero() {
            return Self::zero(self.rows, self.cols);
        }
        let data = self.data.iter().map(|row| row.iter().map(|(c, v)| (*c, v.clone() * s.clone())).collect()).collect();
        SparseMatrix { rows: self.rows, cols: self.cols, data }
    }

    /// Submatrix keeping the listed columns, in the listed order.
    pub fn select_columns(&self, keep: &[usize]) -> Self {
        let mut position = vec![usize::MAX; self.cols];
        for (new, &old) in keep.iter().enumerate() {
            position[old] = new;
        }
        let data = self
            .data
            .iter()
            .map(|row| {
                let mut r: Vec<(usize, F)> = row
                    .iter()
                    .filter(|(c, _)| position[*c] != usize::MAX)
                    .map(|(c, v)| (position[*c], v.clone()))
                    .collect();
                r.sort_by_key(|(c, _)| *c);
                r
            })
            .collect();
        SparseMatrix { rows: self.rows, cols: keep.len(), data }
    }

    pub(crate) fn into_rows(self) -> Vec<Vec<(usize, F)>> {
        self.data
    }
}

impl<F: Field> fmt::Debug for SparseMatrix<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "SparseMatrix {}x{} [", self.rows, self.cols)?;
        for row in &self.data {
            let line: Vec<String> = row.iter().map(|(c, v)| format!("{c}:{v}")).collect();
            writeln!(f, "  {}", line.join(" "))?;
        }
        write!(f, "]")
    }
}

/// Sorts by column, merges duplicates and drops zeros.
pub(crate) fn normalize_row<F: Field>(row: &mut Vec<(usize, F)>) {
    row.sort_by_key(|(c, _)| *c);
    let mut out: Vec<(usize, F)> = Vec::with_capacity(row.len());
    for (c, v) in row.drain(..) {
        match out.last_mut() {
            Some((lc, lv)) if *lc == c => *lv = lv.clone() + v,
            _ => out.push((c, v)),
        }
    }
    out.retain(|(_, v)| !v.is_zero());
    *row = out;
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Rational;

    fn q(v: i64) -> Rational {
        Rational::from_i64(v)
    }

    #[test]
    fn triplets_merge_and_drop_zeros() {
        let m = SparseMatrix::from_triplets(2, 2, vec![(0, 0, q(1)), (0, 0, q(-1)), (1, 1, q(3))]).unwrap();
        assert_eq!(m.nnz(), 1);
        assert_eq!(m.get(1, 1), q(3));
        assert!(SparseMatrix::<Rational>::from_triplets(1, 1, vec![(1, 0, q(1))]).is_err());
    }

    #[test]
    fn product_and_transpose() {
        let a = SparseMatrix::from_dense(&[vec![q(1), q(2)], vec![q(0), q(1)]]).unwrap();
        let b = SparseMatrix::from_dense(&[vec![q(1), q(-2)], vec![q(0), q(1)]]).unwrap();
        assert_eq!(a.mul(&b).unwrap(), SparseMatrix::identity(2));
        assert_eq!(a.transpose().get(1, 0), q(2));
        assert!(a.mul(&SparseMatrix::zero(3, 1)).is_err());
        assert_eq!(a.mul_vec(&[q(1), q(1)]).unwrap(), vec![q(3), q(1)]);
    }
}
