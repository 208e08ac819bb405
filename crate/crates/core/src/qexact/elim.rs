use super::field::Field;
use super::matrix::SparseMatrix;
use super::QError;

/// Matrices narrower than this are reduced with dense rows.
pub const DENSE_COLUMN_LIMIT: usize = 64;

/// Reduced row echelon form: `rank` rows, each with a leading 1 in its pivot
/// column and zeros in every other pivot column.
#[derive(Clone, Debug, PartialEq)]
pub struct Rref<F> {
    cols: usize,
    pivots: Vec<usize>,
    rows: Vec<Vec<(usize, F)>>,
}

impl<F: Field> Rref<F> {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// The nonzero rows of the echelon form as a `rank x cols` matrix.
    pub fn reduced(&self) -> SparseMatrix<F> {
        let trip = self.rows.iter().enumerate().flat_map(|(r, row)| row.iter().map(move |(c, v)| (r, *c, v.clone())));
        SparseMatrix::from_triplets(self.rows.len(), self.cols, trip).expect("echelon rows are in range")
    }

    /// Basis of the null space, one vector per free column.
    pub fn kernel(&self) -> Vec<Vec<F>> {
        let mut is_pivot = vec![false; self.cols];
        for &p in &self.pivots {
            is_pivot[p] = true;
        }
        (0..self.cols)
            .filter(|c| !is_pivot[*c])
            .map(|free| {
                let mut v = vec![F::zero(); self.cols];
                v[free] = F::one();
                for (row, &p) in self.rows.iter().zip(&self.pivots) {
                    if let Ok(pos) = row.binary_search_by_key(&free, |(c, _)| *c) {
                        v[p] = -row[pos].1.clone();
                    }
                }
                v
            })
            .collect()
    }
}

/// Full reduced row echelon form of `m`.
pub fn rref<F: Field>(m: &SparseMatrix<F>) -> Rref<F> {
    let (pivots, mut rows) = if m.cols() < DENSE_COLUMN_LIMIT { echelon_dense(m) } else { echelon_sparse(m) };
    back_substitute(&pivots, &mut rows);
    Rref { cols: m.cols(), pivots, rows }
}

pub fn rank<F: Field>(m: &SparseMatrix<F>) -> usize {
    // fewer rows than columns: eliminate the transpose, same rank, less work
    if m.rows() < m.cols() && m.rows() >= DENSE_COLUMN_LIMIT {
        return rank(&m.transpose());
    }
    if m.cols() < DENSE_COLUMN_LIMIT {
        echelon_dense(m).0.len()
    } else {
        echelon_sparse(m).0.len()
    }
}

/// Rank together with an exact basis of the kernel of `m : F^cols -> F^rows`.
pub fn rank_and_kernel<F: Field>(m: &SparseMatrix<F>) -> (usize, Vec<Vec<F>>) {
    let r = rref(m);
    (r.rank(), r.kernel())
}

/// Dimension of `ker(d_out) / im(d_in)` at the middle spot of
/// `F^a --d_in--> F^b --d_out--> F^c`.
pub fn complex_cohomology<F: Field>(d_in: &SparseMatrix<F>, d_out: &SparseMatrix<F>) -> Result<usize, QError> {
    if d_in.rows() != d_out.cols() {
        return Err(QError::ShapeMismatch(format!(
            "incoming map lands in dimension {} but outgoing map starts from {}",
            d_in.rows(),
            d_out.cols()
        )));
    }
    let composite = d_out.mul(d_in)?;
    if !composite.is_zero() {
        let (r, c, _) = composite.entries().next().expect("nonzero composite");
        return Err(QError::CompositionNonzero { row: r, col: c });
    }
    let middle = d_in.rows();
    Ok(middle - rank(d_out) - rank(d_in))
}

fn pick_pivot<'a, F: Field>(candidates: impl Iterator<Item = (usize, &'a F)>) -> Option<usize> {
    candidates.min_by_key(|(idx, v)| (v.height(), *idx)).map(|(idx, _)| idx)
}

/// Forward elimination over sparse rows bucketed by leading column.
///
/// Once column `c` has been processed no active row has an entry in any column
/// `<= c`, so the rows with an entry in column `c` are exactly the rows whose
/// leading entry sits there.
fn echelon_sparse<F: Field>(m: &SparseMatrix<F>) -> (Vec<usize>, Vec<Vec<(usize, F)>>) {
    let cols = m.cols();
    let mut buckets: Vec<Vec<Vec<(usize, F)>>> = vec![Vec::new(); cols];
    for row in m.clone().into_rows() {
        if let Some(&(lead, _)) = row.first() {
            buckets[lead].push(row);
        }
    }
    let mut pivots = Vec::new();
    let mut out = Vec::new();
    for c in 0..cols {
        let mut bucket = std::mem::take(&mut buckets[c]);
        let Some(best) = pick_pivot(bucket.iter().enumerate().map(|(i, r)| (i, &r[0].1))) else {
            continue;
        };
        let mut pivot = bucket.swap_remove(best);
        let inv = F::one() / pivot[0].1.clone();
        for (_, v) in pivot.iter_mut() {
            *v = v.clone() * inv.clone();
        }
        for row in bucket {
            let factor = row[0].1.clone();
            let reduced = axpy(&row, &pivot, &factor);
            if let Some(&(lead, _)) = reduced.first() {
                buckets[lead].push(reduced);
            }
        }
        pivots.push(c);
        out.push(pivot);
    }
    (pivots, out)
}

fn echelon_dense<F: Field>(m: &SparseMatrix<F>) -> (Vec<usize>, Vec<Vec<(usize, F)>>) {
    let cols = m.cols();
    let mut rows = m.to_dense();
    let mut pivots = Vec::new();
    let mut done = 0usize;
    for c in 0..cols {
        let Some(best) =
            pick_pivot(rows.iter().enumerate().skip(done).filter(|(_, r)| !r[c].is_zero()).map(|(i, r)| (i, &r[c])))
        else {
            continue;
        };
        rows.swap(done, best);
        let inv = F::one() / rows[done][c].clone();
        for v in rows[done][c..].iter_mut() {
            *v = v.clone() * inv.clone();
        }
        let (head, tail) = rows.split_at_mut(done + 1);
        let pivot = &head[done];
        for row in tail.iter_mut() {
            if row[c].is_zero() {
                continue;
            }
            let factor = row[c].clone();
            for k in c..cols {
                if !pivot[k].is_zero() {
                    row[k] = row[k].clone() - factor.clone() * pivot[k].clone();
                }
            }
        }
        pivots.push(c);
        done += 1;
    }
    rows.truncate(done);
    let sparse = rows.into_iter().map(|r| r.into_iter().enumerate().filter(|(_, v)| !v.is_zero()).collect()).collect();
    (pivots, sparse)
}

/// Clears every pivot column above its pivot, last pivot first.
fn back_substitute<F: Field>(pivots: &[usize], rows: &mut [Vec<(usize, F)>]) {
    for k in (0..pivots.len()).rev() {
        let p = pivots[k];
        let (above, rest) = rows.split_at_mut(k);
        let pivot = &rest[0];
        for row in above.iter_mut() {
            if let Ok(pos) = row.binary_search_by_key(&p, |(c, _)| *c) {
                let factor = row[pos].1.clone();
                *row = axpy(row, pivot, &factor);
            }
        }
    }
}

/// `row - factor * pivot` over sorted sparse rows.
fn axpy<F: Field>(row: &[(usize, F)], pivot: &[(usize, F)], factor: &F) -> Vec<(usize, F)> {
    let mut out = Vec::with_capacity(row.len() + pivot.len());
    let (mut i, mut j) = (0, 0);
    while i < row.len() || j < pivot.len() {
        let take_row = j >= pivot.len() || (i < row.len() && row[i].0 < pivot[j].0);
        let take_piv = i >= row.len() || (j < pivot.len() && pivot[j].0 < row[i].0);
        if take_row {
            out.push(row[i].clone());
            i += 1;
        } else if take_piv {
            out.push((pivot[j].0, -(factor.clone() * pivot[j].1.clone())));
            j += 1;
        } else {
            let v = row[i].1.clone() - factor.clone() * pivot[j].1.clone();
            if !v.is_zero() {
                out.push((row[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Rational;

    fn q(v: i64) -> Rational {
        Rational::from_i64(v)
    }

    fn mat(rows: &[&[i64]]) -> SparseMatrix<Rational> {
        let dense: Vec<Vec<Rational>> = rows.iter().map(|r| r.iter().map(|&v| q(v)).collect()).collect();
        SparseMatrix::from_dense(&dense).unwrap()
    }

    #[test]
    fn zero_and_identity() {
        let z = SparseMatrix::<Rational>::zero(3, 3);
        let (r, k) = rank_and_kernel(&z);
        assert_eq!((r, k.len()), (0, 3));
        let id = SparseMatrix::<Rational>::identity(4);
        let (r, k) = rank_and_kernel(&id);
        assert_eq!((r, k.len()), (4, 0));
    }

    #[test]
    fn empty_matrix_has_rank_zero() {
        let e = SparseMatrix::<Rational>::zero(0, 0);
        assert_eq!(rank(&e), 0);
        let wide = SparseMatrix::<Rational>::zero(0, 5);
        assert_eq!(rank_and_kernel(&wide).1.len(), 5);
    }

    #[test]
    fn small_complexes() {
        let k = 4;
        let d_in = SparseMatrix::<Rational>::zero(k, 0);
        let d_out = SparseMatrix::<Rational>::zero(0, k);
        assert_eq!(complex_cohomology(&d_in, &d_out).unwrap(), 4);
        let id = SparseMatrix::<Rational>::identity(k);
        assert_eq!(complex_cohomology(&d_in, &id).unwrap(), 0);

        // Q -> Q^2 -> Q with (1,1)^T then (1,-1)
        let d_in = mat(&[&[1], &[1]]);
        let d_out = mat(&[&[1, -1]]);
        assert_eq!(complex_cohomology(&d_in, &d_out).unwrap(), 0);
    }

    #[test]
    fn complex_errors() {
        let d_in = mat(&[&[1], &[0]]);
        let d_out = mat(&[&[1, 0]]);
        assert_eq!(complex_cohomology(&d_in, &d_out), Err(QError::CompositionNonzero { row: 0, col: 0 }));
        let bad = mat(&[&[1, 0, 0]]);
        assert!(matches!(complex_cohomology(&d_in, &bad), Err(QError::ShapeMismatch(_))));
    }

    #[test]
    fn kernel_vectors_are_annihilated() {
        let m = mat(&[&[1, 2, 3, 4], &[2, 4, 6, 8], &[0, 1, 1, 0]]);
        let (r, ker) = rank_and_kernel(&m);
        assert_eq!(r, 2);
        assert_eq!(ker.len(), 2);
        for v in &ker {
            assert!(m.mul_vec(v).unwrap().iter().all(|x| *x == q(0)));
        }
    }

    #[test]
    fn sparse_and_dense_paths_agree() {
        // 3 x 70 forces the sparse path; the first 20 columns go through the dense one
        let mut trip = Vec::new();
        for c in 0..70usize {
            trip.push((c % 3, c, q((c as i64 % 5) - 2)));
            if c % 7 == 0 {
                trip.push(((c + 1) % 3, c, q(1)));
            }
        }
        let wide = SparseMatrix::from_triplets(3, 70, trip).unwrap();
        let narrow = wide.select_columns(&(0..20).collect::<Vec<_>>());
        let by_sparse = rref(&narrow.transpose().transpose());
        let (p, rows) = echelon_sparse(&narrow);
        let mut rows = rows;
        back_substitute(&p, &mut rows);
        assert_eq!(by_sparse.pivots(), &p[..]);
        assert_eq!(by_sparse.rows, rows);
        assert_eq!(rank(&wide), rank(&wide.transpose()));
    }
}
