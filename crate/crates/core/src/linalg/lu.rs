use log::warn;

use super::ordering::{adjacency, bandwidths, reverse_cuthill_mckee};
use super::{LinalgError, SparseMatrix};
use crate::scalar::Real;

/// Pivots below this fraction of the largest pivot trigger a warning.
const SMALL_PIVOT: f64 = 1e-13;
/// Upper bound on the number of unknowns split off as a dense border.
const MAX_BORDER: usize = 16;

/// Controls for [`SparseLu::factor_with`].
#[derive(Debug, Clone, Default)]
pub struct LuOptions {
    /// Factor without row exchanges; the pivots then are the diagonal of
    /// the `U` factor of `A` itself (positive for SPD matrices).
    pub no_pivoting: bool,
    /// Row/column count above which an unknown is eliminated through the
    /// dense border. `None` picks `max(64, 3 sqrt(n))`.
    pub dense_threshold: Option<usize>,
    /// Extra candidate orderings (permutations of all unknowns, `order[k]`
    /// is the unknown placed at position `k`); the one with the smallest
    /// band is used, reverse Cuthill-McKee and the natural order are always
    /// candidates.
    pub orderings: Vec<Vec<usize>>,
}

/// Banded LU with partial pivoting in the `gbtrf` layout: row `i` stores
/// columns `i - kl ..= i + kl + ku`, multipliers stay in place and row
/// exchanges are replayed during the solve.
#[derive(Debug, Clone)]
struct BandLu<T> {
    n: usize,
    kl: usize,
    width: usize,
    data: Vec<T>,
    last: Vec<usize>,
    piv: Vec<usize>,
}

impl<T: Real> BandLu<T> {
    #[inline]
    fn idx(&self, i: usize, j: usize) -> usize {
        i * self.width + (j + self.kl - i)
    }

    fn new(a: &SparseMatrix<T>, kl: usize, ku: usize) -> Self {
        let n = a.nrows();
        let width = 2 * kl + ku + 1;
        let mut band = BandLu {
            n,
            kl,
            width,
            data: vec![T::zero(); n * width],
            last: (0..n).collect(),
            piv: (0..n).collect(),
        };
        for (i, j, v) in a.iter() {
            let k = band.idx(i, j);
            band.data[k] = v;
            band.last[i] = band.last[i].max(j);
        }
        band
    }

    /// Returns the position of a zero pivot on failure.
    fn factor(&mut self, pivoting: bool) -> Result<(), usize> {
        let n = self.n;
        for k in 0..n {
            let lower = (k + self.kl).min(n - 1);
            let mut p = k;
            if pivoting {
                let mut best = self.data[self.idx(k, k)].abs();
                for r in k + 1..=lower {
                    let v = self.data[self.idx(r, k)].abs();
                    if v > best {
                        best = v;
                        p = r;
                    }
                }
            }
            if self.data[self.idx(p, k)] == T::zero() {
                return Err(k);
            }
            self.piv[k] = p;
            if p != k {
                let end = self.last[k].max(self.last[p]);
                for j in k..=end {
                    let (a, b) = (self.idx(k, j), self.idx(p, j));
                    self.data.swap(a, b);
                }
                self.last.swap(k, p);
            }
            let pivot = self.data[self.idx(k, k)];
            let end = self.last[k];
            let w = self.width;
            for r in k + 1..=lower {
                let ir = self.idx(r, k);
                if self.data[ir] == T::zero() {
                    continue;
                }
                let l = self.data[ir] / pivot;
                self.data[ir] = l;
                if end > k {
                    let src0 = self.idx(k, k + 1);
                    let dst0 = self.idx(r, k + 1);
                    let len = end - k;
                    let (head, tail) = self.data.split_at_mut(r * w);
                    let src = &head[src0..src0 + len];
                    let dst = &mut tail[dst0 - r * w..dst0 - r * w + len];
                    for (d, &s) in dst.iter_mut().zip(src) {
                        *d -= l * s;
                    }
                }
                self.last[r] = self.last[r].max(end);
            }
        }
        Ok(())
    }

    fn pivot(&self, k: usize) -> T {
        self.data[self.idx(k, k)]
    }

    fn solve_in_place(&self, b: &mut [T]) {
        let n = self.n;
        for k in 0..n {
            let p = self.piv[k];
            if p != k {
                b.swap(k, p);
            }
            let bk = b[k];
            if bk != T::zero() {
                for r in k + 1..=(k + self.kl).min(n.saturating_sub(1)) {
                    b[r] -= self.data[self.idx(r, k)] * bk;
                }
            }
        }
        for k in (0..n).rev() {
            let mut s = b[k];
            if self.last[k] > k {
                let i0 = self.idx(k, k + 1);
                let row = &self.data[i0..i0 + self.last[k] - k];
                for (a, &x) in row.iter().zip(&b[k + 1..=self.last[k]]) {
                    s -= *a * x;
                }
            }
            b[k] = s / self.data[self.idx(k, k)];
        }
    }
}

/// Small dense LU with partial pivoting.
#[derive(Debug, Clone)]
struct DenseLu<T> {
    n: usize,
    a: Vec<T>,
    piv: Vec<usize>,
}

impl<T: Real> DenseLu<T> {
    fn factor(mut a: Vec<T>, n: usize) -> Result<Self, usize> {
        let mut piv = vec![0; n];
        for k in 0..n {
            let p = (k..n)
                .max_by(|&x, &y| a[x * n + k].abs().partial_cmp(&a[y * n + k].abs()).unwrap())
                .expect("nonempty");
            if a[p * n + k] == T::zero() {
                return Err(k);
            }
            piv[k] = p;
            if p != k {
                for j in 0..n {
                    a.swap(k * n + j, p * n + j);
                }
            }
            for r in k + 1..n {
                let l = a[r * n + k] / a[k * n + k];
                a[r * n + k] = l;
                for j in k + 1..n {
                    let v = a[k * n + j];
                    a[r * n + j] -= l * v;
                }
            }
        }
        Ok(DenseLu { n, a, piv })
    }

    fn solve_in_place(&self, b: &mut [T]) {
        let n = self.n;
        for k in 0..n {
            b.swap(k, self.piv[k]);
            for r in k + 1..n {
                let v = self.a[r * n + k] * b[k];
                b[r] -= v;
            }
        }
        for k in (0..n).rev() {
            let mut s = b[k];
            for j in k + 1..n {
                s -= self.a[k * n + j] * b[j];
            }
            b[k] = s / self.a[k * n + k];
        }
    }
}

/// Direct solver for the sparse systems of the discretization.
///
/// Unknowns whose rows or columns are dense (the global singular function
/// couples to every unknown within the cut-off radius) are split off as a
/// border and eliminated through a dense Schur complement; the remaining
/// block is reordered to a narrow band and factored with a banded LU.
#[derive(Debug, Clone)]
pub struct SparseLu<T> {
    n: usize,
    order: Vec<usize>,
    dense: Vec<usize>,
    band: BandLu<T>,
    /// `B^-1 C`, one column per border unknown.
    binv_c: Vec<Vec<T>>,
    /// Border rows restricted to the banded unknowns, in band positions.
    d_rows: Vec<Vec<(usize, T)>>,
    schur: Option<DenseLu<T>>,
    pivots: Vec<T>,
}

impl<T: Real> SparseLu<T> {
    pub fn factor(a: &SparseMatrix<T>) -> Result<Self, LinalgError> {
        Self::factor_with(a, &LuOptions::default())
    }

    pub fn factor_with(a: &SparseMatrix<T>, opts: &LuOptions) -> Result<Self, LinalgError> {
        let n = a.nrows();
        if a.ncols() != n {
            return Err(LinalgError::NotSquare { nrows: n, ncols: a.ncols() });
        }

        let threshold = opts
            .dense_threshold
            .unwrap_or_else(|| 64usize.max((3.0 * (n as f64).sqrt()) as usize));
        let mut count = vec![0usize; n];
        for (i, j, _) in a.iter() {
            count[i] += 1;
            if i != j {
                count[j] += 1;
            }
        }
        let mut dense: Vec<usize> = (0..n).filter(|&i| count[i] > 2 * threshold).collect();
        dense.sort_by_key(|&i| std::cmp::Reverse(count[i]));
        dense.truncate(MAX_BORDER);
        dense.sort_unstable();
        let mut is_dense = vec![false; n];
        for &d in &dense {
            is_dense[d] = true;
        }

        // local numbering of the sparse unknowns
        let sparse: Vec<usize> = (0..n).filter(|&i| !is_dense[i]).collect();
        let mut local = vec![usize::MAX; n];
        for (k, &i) in sparse.iter().enumerate() {
            local[i] = k;
        }
        let pattern: Vec<(usize, usize)> = a
            .iter()
            .filter(|&(i, j, _)| !is_dense[i] && !is_dense[j])
            .map(|(i, j, _)| (local[i], local[j]))
            .collect();
        let ns = sparse.len();
        let mut candidates: Vec<Vec<usize>> = vec![(0..ns).collect()];
        candidates.push(reverse_cuthill_mckee(&adjacency(&pattern, ns)));
        for o in &opts.orderings {
            if o.len() == n {
                candidates.push(o.iter().filter(|&&i| !is_dense[i]).map(|&i| local[i]).collect());
            }
        }
        let (perm, kl, ku) = candidates
            .into_iter()
            .map(|c| {
                let (kl, ku) = bandwidths(&pattern, &c);
                (c, kl, ku)
            })
            .min_by_key(|&(_, kl, ku)| kl * (kl + ku) + ku)
            .expect("at least one ordering");
        let order: Vec<usize> = perm.iter().map(|&k| sparse[k]).collect();

        let b = a.submatrix(&order, &order);
        let mut band = BandLu::new(&b, kl, ku);
        band.factor(!opts.no_pivoting)
            .map_err(|k| LinalgError::ZeroPivot { index: order[k] })?;

        let mut pos = vec![usize::MAX; n];
        for (k, &i) in order.iter().enumerate() {
            pos[i] = k;
        }
        let mut binv_c = Vec::with_capacity(dense.len());
        for &d in &dense {
            let mut col = vec![T::zero(); ns];
            for (i, j, v) in a.iter() {
                if j == d && !is_dense[i] {
                    col[pos[i]] = v;
                }
            }
            band.solve_in_place(&mut col);
            binv_c.push(col);
        }
        let d_rows: Vec<Vec<(usize, T)>> = dense
            .iter()
            .map(|&d| {
                let (cols, vals) = a.row(d);
                cols.iter()
                    .zip(vals)
                    .filter(|(&j, _)| !is_dense[j])
                    .map(|(&j, &v)| (pos[j], v))
                    .collect()
            })
            .collect();

        let m = dense.len();
        let mut pivots = vec![T::zero(); n];
        for (k, &i) in order.iter().enumerate() {
            pivots[i] = band.pivot(k);
        }
        let schur = if m > 0 {
            let mut s = vec![T::zero(); m * m];
            for (r, &dr) in dense.iter().enumerate() {
                for (c, &dc) in dense.iter().enumerate() {
                    let dot: T = d_rows[r].iter().map(|&(k, v)| v * binv_c[c][k]).sum();
                    s[r * m + c] = a.get(dr, dc) - dot;
                }
            }
            let lu = DenseLu::factor(s, m).map_err(|k| LinalgError::ZeroPivot { index: dense[k] })?;
            for (k, &d) in dense.iter().enumerate() {
                pivots[d] = lu.a[k * m + k];
            }
            Some(lu)
        } else {
            None
        };

        let max_pivot = pivots.iter().fold(T::zero(), |acc, p| acc.max(p.abs()));
        for (i, p) in pivots.iter().enumerate() {
            if p.abs() < T::lit(SMALL_PIVOT) * max_pivot {
                warn!("near-singular pivot {p} at unknown {i} (largest pivot {max_pivot})");
            }
        }

        Ok(SparseLu { n, order, dense, band, binv_c, d_rows, schur, pivots })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    /// Pivot attached to each unknown (original numbering).
    pub fn pivots(&self) -> &[T] {
        &self.pivots
    }

    /// Lower and upper bandwidth of the banded block.
    pub fn bandwidth(&self) -> (usize, usize) {
        (self.band.kl, self.band.width - 2 * self.band.kl - 1)
    }

    /// Unknowns eliminated through the dense border.
    pub fn border(&self) -> &[usize] {
        &self.dense
    }

    pub fn solve(&self, rhs: &[T]) -> Result<Vec<T>, LinalgError> {
        if rhs.len() != self.n {
            return Err(LinalgError::DimensionMismatch { expected: self.n, found: rhs.len() });
        }
        let mut xs: Vec<T> = self.order.iter().map(|&i| rhs[i]).collect();
        self.band.solve_in_place(&mut xs);
        let mut x = vec![T::zero(); self.n];
        if let Some(schur) = &self.schur {
            let mut xd: Vec<T> = self
                .dense
                .iter()
                .zip(&self.d_rows)
                .map(|(&d, row)| rhs[d] - row.iter().map(|&(k, v)| v * xs[k]).sum::<T>())
                .collect();
            schur.solve_in_place(&mut xd);
            for (c, col) in self.binv_c.iter().enumerate() {
                let s = xd[c];
                for (x, &v) in xs.iter_mut().zip(col) {
                    *x -= v * s;
                }
            }
            for (&d, &v) in self.dense.iter().zip(&xd) {
                x[d] = v;
            }
        }
        for (&i, &v) in self.order.iter().zip(&xs) {
            x[i] = v;
        }
        Ok(x)
    }
}
