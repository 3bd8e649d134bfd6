use super::LinalgError;
use crate::scalar::Real;

/// Triplet accumulator; duplicates are summed by [`finalize`](Self::finalize).
#[derive(Debug, Clone)]
pub struct SparseBuilder<T> {
    nrows: usize,
    ncols: usize,
    triplets: Vec<(usize, usize, T)>,
}

impl<T: Real> SparseBuilder<T> {
    pub fn new(nrows: usize, ncols: usize) -> Self {
        SparseBuilder { nrows, ncols, triplets: Vec::new() }
    }

    pub fn square(n: usize) -> Self {
        Self::new(n, n)
    }

    pub fn with_capacity(nrows: usize, ncols: usize, capacity: usize) -> Self {
        SparseBuilder { nrows, ncols, triplets: Vec::with_capacity(capacity) }
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn add(&mut self, i: usize, j: usize, value: T) -> Result<(), LinalgError> {
        if i >= self.nrows || j >= self.ncols {
            return Err(LinalgError::IndexOutOfRange { row: i, col: j, nrows: self.nrows, ncols: self.ncols });
        }
        self.triplets.push((i, j, value));
        Ok(())
    }

    /// Appends all entries of `other` after the entries of `self`.
    pub fn append(&mut self, other: SparseBuilder<T>) -> Result<(), LinalgError> {
        if other.nrows != self.nrows || other.ncols != self.ncols {
            return Err(LinalgError::DimensionMismatch {
                expected: self.nrows,
                found: other.nrows,
            });
        }
        self.triplets.extend(other.triplets);
        Ok(())
    }

    /// Compressed row form. Entries at the same position are summed in
    /// insertion order; sums that are exactly zero are not stored.
    pub fn finalize(mut self) -> SparseMatrix<T> {
        self.triplets.sort_by_key(|&(i, j, _)| (i, j));
        let mut row_ptr = vec![0usize; self.nrows + 1];
        let mut cols = Vec::with_capacity(self.triplets.len());
        let mut values: Vec<T> = Vec::with_capacity(self.triplets.len());
        let mut k = 0;
        while k < self.triplets.len() {
            let (i, j, mut v) = self.triplets[k];
            k += 1;
            while k < self.triplets.len() && self.triplets[k].0 == i && self.triplets[k].1 == j {
                v += self.triplets[k].2;
                k += 1;
            }
            if v != T::zero() {
                cols.push(j);
                values.push(v);
                row_ptr[i + 1] += 1;
            }
        }
        for i in 0..self.nrows {
            row_ptr[i + 1] += row_ptr[i];
        }
        SparseMatrix { nrows: self.nrows, ncols: self.ncols, row_ptr, cols, values }
    }
}

/// Compressed sparse row matrix with sorted column indices per row.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseMatrix<T> {
    nrows: usize,
    ncols: usize,
    row_ptr: Vec<usize>,
    cols: Vec<usize>,
    values: Vec<T>,
}

impl<T: Real> SparseMatrix<T> {
    pub fn zeros(nrows: usize, ncols: usize) -> Self {
        SparseBuilder::new(nrows, ncols).finalize()
    }

    pub fn identity(n: usize) -> Self {
        let mut b = SparseBuilder::square(n);
        for i in 0..n {
            b.triplets.push((i, i, T::one()));
        }
        b.finalize()
    }

    pub fn from_dense(rows: &[Vec<T>]) -> Self {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, Vec::len);
        let mut b = SparseBuilder::new(nrows, ncols);
        for (i, row) in rows.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                b.triplets.push((i, j, v));
            }
        }
        b.finalize()
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    /// Column indices and values of row `i`.
    pub fn row(&self, i: usize) -> (&[usize], &[T]) {
        let r = self.row_ptr[i]..self.row_ptr[i + 1];
        (&self.cols[r.clone()], &self.values[r])
    }

    pub fn get(&self, i: usize, j: usize) -> T {
        let (cols, vals) = self.row(i);
        cols.binary_search(&j).map_or(T::zero(), |k| vals[k])
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, usize, T)> + '_ {
        (0..self.nrows).flat_map(move |i| {
            let (c, v) = self.row(i);
            c.iter().zip(v).map(move |(&j, &x)| (i, j, x))
        })
    }

    pub fn mul_vec(&self, x: &[T]) -> Vec<T> {
        assert_eq!(x.len(), self.ncols, "vector length");
        (0..self.nrows)
            .map(|i| {
                let (c, v) = self.row(i);
                c.iter().zip(v).map(|(&j, &a)| a * x[j]).sum()
            })
            .collect()
    }

    /// `x^T A y`.
    pub fn bilinear(&self, x: &[T], y: &[T]) -> T {
        let ay = self.mul_vec(y);
        x.iter().zip(&ay).map(|(&a, &b)| a * b).sum()
    }

    pub fn transpose(&self) -> Self {
        let mut b = SparseBuilder::with_capacity(self.ncols, self.nrows, self.nnz());
        for (i, j, v) in self.iter() {
            b.triplets.push((j, i, v));
        }
        b.finalize()
    }

    pub fn scaled(&self, s: T) -> Self {
        let mut m = self.clone();
        m.values.iter_mut().for_each(|v| *v *= s);
        m
    }

    /// `self + s * other`.
    pub fn add_scaled(&self, other: &Self, s: T) -> Self {
        assert_eq!((self.nrows, self.ncols), (other.nrows, other.ncols), "matrix shapes");
        let mut b = SparseBuilder::with_capacity(self.nrows, self.ncols, self.nnz() + other.nnz());
        b.triplets.extend(self.iter());
        b.triplets.extend(other.iter().map(|(i, j, v)| (i, j, s * v)));
        b.finalize()
    }

    pub fn max_abs(&self) -> T {
        self.values.iter().fold(T::zero(), |m, v| m.max(v.abs()))
    }

    /// `max |A - A^T| < tol * max |A|`.
    pub fn is_symmetric(&self, tol: T) -> bool {
        if self.nrows != self.ncols {
            return false;
        }
        let scale = self.max_abs();
        let t = self.transpose();
        let d = self.add_scaled(&t, -T::one()).max_abs();
        d <= tol * scale
    }

    /// Rows `rows` and columns `cols` (given in the new order).
    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Self {
        let mut map = vec![usize::MAX; self.ncols];
        for (k, &j) in cols.iter().enumerate() {
            map[j] = k;
        }
        let mut b = SparseBuilder::new(rows.len(), cols.len());
        for (ri, &i) in rows.iter().enumerate() {
            let (c, v) = self.row(i);
            for (&j, &x) in c.iter().zip(v) {
                if map[j] != usize::MAX {
                    b.triplets.push((ri, map[j], x));
                }
            }
        }
        b.finalize()
    }

    pub fn to_dense(&self) -> Vec<Vec<T>> {
        let mut d = vec![vec![T::zero(); self.ncols]; self.nrows];
        for (i, j, v) in self.iter() {
            d[i][j] = v;
        }
        d
    }
}
