use super::{Field, Label, QuadCache};
use crate::linalg::{SparseBuilder, SparseMatrix};

/// Sums element matrices `sum_q w_q k(q, i, j)` into an `n x n` matrix.
fn assemble_matrix<K>(n: usize, cache: &QuadCache, mut kernel: K) -> SparseMatrix<f64>
where
    K: FnMut(usize, usize, f64, &[f64], &[crate::Point], &mut [f64]),
{
    let nnz: usize = cache.elements().iter().map(|e| e.dofs.len().pow(2)).sum();
    let mut b = SparseBuilder::with_capacity(n, n, nnz);
    let mut local = Vec::new();
    for (t, e) in cache.elements().iter().enumerate() {
        let m = e.dofs.len();
        local.clear();
        local.resize(m * m, 0.0);
        for q in 0..e.len() {
            let (v, g) = e.basis(q);
            kernel(cache.offset(t) + q, m, e.weights[q], v, g, &mut local);
        }
        for (a, &da) in e.dofs.iter().enumerate() {
            for (c, &dc) in e.dofs.iter().enumerate() {
                b.add(da, dc, local[a * m + c]).expect("dof inside the space");
            }
        }
    }
    b.finalize()
}

/// `A(i, j) = (grad psi_i, grad psi_j) + c (psi_i, psi_j)`.
pub fn assemble_operator(n: usize, cache: &QuadCache, reaction: f64) -> SparseMatrix<f64> {
    assemble_matrix(n, cache, |_, m, w, v, g, local| {
        for a in 0..m {
            for c in 0..m {
                local[a * m + c] += w * (g[a][0] * g[c][0] + g[a][1] * g[c][1] + reaction * v[a] * v[c]);
            }
        }
    })
}

/// `M(i, j) = (psi_i, psi_j)`.
pub fn assemble_mass(n: usize, cache: &QuadCache) -> SparseMatrix<f64> {
    assemble_indicator_mass(n, cache, |_| true)
}

/// Mass matrix restricted to the quadrature points (global numbering of
/// `cache`) where `indicator` holds.
pub fn assemble_indicator_mass<I>(n: usize, cache: &QuadCache, indicator: I) -> SparseMatrix<f64>
where
    I: Fn(usize) -> bool,
{
    assemble_matrix(n, cache, |gq, m, w, v, _, local| {
        if !indicator(gq) {
            return;
        }
        for a in 0..m {
            let wa = w * v[a];
            for c in 0..m {
                local[a * m + c] += wa * v[c];
            }
        }
    })
}

/// `F(j) = (f, psi_j)`.
pub fn assemble_load(n: usize, cache: &QuadCache, field: &Field) -> Vec<f64> {
    assemble_weighted_load(n, cache, |_, x| field.eval(x, None))
}

/// `F(j) = sum_q w_q s(q, x_q) psi_j(x_q)` with `q` in the global point numbering.
pub fn assemble_weighted_load<S>(n: usize, cache: &QuadCache, mut source: S) -> Vec<f64>
where
    S: FnMut(usize, crate::Point) -> f64,
{
    let mut out = vec![0.0; n];
    for (t, e) in cache.elements().iter().enumerate() {
        for q in 0..e.len() {
            let s = source(cache.offset(t) + q, e.points[q]);
            if s == 0.0 {
                continue;
            }
            let (v, _) = e.basis(q);
            let ws = e.weights[q] * s;
            for (&d, &b) in e.dofs.iter().zip(v) {
                out[d] += ws * b;
            }
        }
    }
    out
}

/// `int_{A0} u0 psi_j + int_{A1} u1 psi_j` over the points labelled active.
pub fn assemble_active_load(
    n: usize,
    cache: &QuadCache,
    labels: &[Label],
    lower: Option<&Field>,
    upper: Option<&Field>,
) -> Vec<f64> {
    assemble_weighted_load(n, cache, |gq, x| match labels[gq] {
        Label::Inactive => 0.0,
        Label::Lower => lower.map_or(0.0, |f| f.eval(x, None)),
        Label::Upper => upper.map_or(0.0, |f| f.eval(x, None)),
    })
}
