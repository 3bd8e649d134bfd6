use super::{BoundaryEdge, BoundaryTag, Mesh, MeshError};
use crate::Point;

/// Uniform `n x n` triangulation of `[-1,1]^2`, each square split along the
/// diagonal from its top-left to its bottom-right corner.
///
/// With `fitted == false`, `n` must be odd and the crack from `(-1,0)` to the
/// origin crosses element interiors (the tip lies on the diagonal of the
/// central square). With `fitted == true`, `n` must be even; the lattice nodes
/// on the crack strictly left of the tip are duplicated, the copies below the
/// crack are appended after the regular lattice, and the two crack faces are
/// tagged.
pub fn build_structured_crack_mesh(n: usize, fitted: bool) -> Result<Mesh, MeshError> {
    if n == 0 {
        return Err(MeshError::InvalidParameter("N must be positive".into()));
    }
    if fitted && n % 2 != 0 {
        return Err(MeshError::InvalidParameter(format!(
            "fitted crack meshes need an even N (got {n})"
        )));
    }
    if !fitted && n % 2 == 0 {
        return Err(MeshError::InvalidParameter(format!(
            "unfitted crack meshes need an odd N (got {n})"
        )));
    }

    let stride = n + 1;
    let coord = |k: usize| -1.0 + 2.0 * k as f64 / n as f64;
    let mut nodes: Vec<Point> = Vec::with_capacity(stride * stride + n / 2);
    for j in 0..=n {
        for i in 0..=n {
            nodes.push([coord(i), coord(j)]);
        }
    }
    let lattice = |i: usize, j: usize| j * stride + i;

    // Lower copies of the crack nodes (i < n/2 on row n/2).
    let crack_row = n / 2;
    let mut lower_copy = vec![usize::MAX; stride];
    if fitted {
        for (i, slot) in lower_copy.iter_mut().enumerate().take(n / 2) {
            *slot = nodes.len();
            nodes.push([coord(i), 0.0]);
        }
    }
    // Node index seen from a triangle lying below (`below == true`) or above the row.
    let node = |i: usize, j: usize, below: bool| {
        if fitted && below && j == crack_row && i < n / 2 {
            lower_copy[i]
        } else {
            lattice(i, j)
        }
    };

    let mut triangles = Vec::with_capacity(2 * n * n);
    for j in 0..n {
        let below = fitted && j < crack_row;
        for i in 0..n {
            let bl = node(i, j, below);
            let br = node(i + 1, j, below);
            let tl = node(i, j + 1, below);
            let tr = node(i + 1, j + 1, below);
            triangles.push([bl, br, tl]);
            triangles.push([br, tr, tl]);
        }
    }

    let mut boundary = Vec::with_capacity(4 * n + n);
    let outer = |a, b| BoundaryEdge { nodes: [a, b], tag: BoundaryTag::Outer };
    for i in 0..n {
        boundary.push(outer(node(i, 0, true), node(i + 1, 0, true)));
    }
    for j in 0..n {
        let below = fitted && j < crack_row;
        boundary.push(outer(node(n, j, below), node(n, j + 1, below)));
    }
    for i in (0..n).rev() {
        boundary.push(outer(node(i + 1, n, false), node(i, n, false)));
    }
    for j in (0..n).rev() {
        let below = fitted && j < crack_row;
        boundary.push(outer(node(0, j + 1, below), node(0, j, below)));
    }
    if fitted {
        for i in 0..n / 2 {
            boundary.push(BoundaryEdge {
                nodes: [node(i, crack_row, false), node(i + 1, crack_row, false)],
                tag: BoundaryTag::CrackUpper,
            });
            boundary.push(BoundaryEdge {
                nodes: [node(i + 1, crack_row, true), node(i, crack_row, true)],
                tag: BoundaryTag::CrackLower,
            });
        }
    }

    Mesh::new(nodes, triangles, boundary)
}
