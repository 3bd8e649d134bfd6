use std::collections::HashMap;
use super::{BoundaryEdge, BoundaryTag, Mesh, MeshError};
use crate::scalar::{norm, orient, sub};
use crate::Point;

/// Knobs of the force-based smoother.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiskMesherOptions {
    pub max_iterations: usize,
    /// Stop once interior nodes move less than `move_tol * h` per step.
    pub move_tol: f64,
    /// Retriangulate once any node moved more than `retri_tol * h`.
    pub retri_tol: f64,
    /// Ratio between the rest length of the springs and the mean edge length.
    pub force_scale: f64,
    pub step: f64,
}

impl Default for DiskMesherOptions {
    fn default() -> Self {
        DiskMesherOptions {
            max_iterations: 1000,
            move_tol: 1e-3,
            retri_tol: 0.1,
            force_scale: 1.2,
            step: 0.2,
        }
    }
}

/// Signed distance to the unit disk minus the open quadrant `{x > 0, y < 0}`.
pub(crate) fn three_quarter_disk_distance(p: Point) -> f64 {
    let disk = norm(p) - 1.0;
    let [x, y] = p;
    // signed distance to the quadrant Q = {x > 0, y < 0}
    let quadrant = if x > 0.0 && y < 0.0 {
        -x.min(-y)
    } else {
        (x.min(0.0).powi(2) + y.max(0.0).powi(2)).sqrt()
    };
    disk.max(-quadrant)
}

/// Quasi-uniform triangulation of the three-quarter unit disk with target edge length `h`.
pub fn build_three_quarter_disk_mesh(h: f64) -> Result<Mesh, MeshError> {
    build_three_quarter_disk_mesh_with(h, DiskMesherOptions::default())
}

pub fn build_three_quarter_disk_mesh_with(
    h: f64,
    opts: DiskMesherOptions,
) -> Result<Mesh, MeshError> {
    if !(h > 0.0 && h < 1.0) {
        return Err(MeshError::InvalidParameter(format!(
            "disk mesh size must satisfy 0 < h < 1 (got {h})"
        )));
    }
    let dist = three_quarter_disk_distance;
    let geps = 1e-3 * h;

    // Fixed nodes along the two straight edges, the corner included.
    let m = (1.0 / h).round().max(1.0) as usize;
    let mut fixed: Vec<Point> = vec![[0.0, 0.0]];
    for k in 1..=m {
        let s = k as f64 / m as f64;
        fixed.push([s, 0.0]);
        fixed.push([0.0, -s]);
    }

    // Hexagonal lattice inside the domain, away from the fixed nodes.
    let mut points = fixed.clone();
    let dy = h * 3f64.sqrt() / 2.0;
    let rows = (2.0 / dy).ceil() as i64;
    let cols = (2.0 / h).ceil() as i64 + 1;
    for j in 0..=rows {
        let y = -1.0 + j as f64 * dy;
        let shift = if j % 2 == 1 { 0.5 * h } else { 0.0 };
        for i in 0..=cols {
            let p = [-1.0 + shift + i as f64 * h, y];
            if dist(p) < -geps && fixed.iter().all(|&f| norm(sub(p, f)) > 0.6 * h) {
                points.push(p);
            }
        }
    }
    let nfix = fixed.len();

    let mut last = vec![[f64::INFINITY, f64::INFINITY]; points.len()];
    let mut bars: Vec<(usize, usize)> = Vec::new();
    let mut converged = false;
    for _ in 0..opts.max_iterations {
        let moved = points
            .iter()
            .zip(&last)
            .map(|(p, q)| norm(sub(*p, *q)))
            .fold(0.0, f64::max);
        if moved > opts.retri_tol * h {
            last.clone_from(&points);
            let tris = delaunay_inside(&points, geps);
            bars = unique_edges(&tris);
        }

        let mut sum_sq = 0.0;
        let lengths: Vec<f64> = bars
            .iter()
            .map(|&(a, b)| {
                let l = norm(sub(points[a], points[b]));
                sum_sq += l * l;
                l
            })
            .collect();
        let rest = opts.force_scale * (sum_sq / bars.len().max(1) as f64).sqrt();
        let mut force = vec![[0.0, 0.0]; points.len()];
        for (&(a, b), &l) in bars.iter().zip(&lengths) {
            let f = (rest - l).max(0.0);
            if f == 0.0 || l == 0.0 {
                continue;
            }
            let d = sub(points[a], points[b]);
            let fv = [f / l * d[0], f / l * d[1]];
            force[a][0] += fv[0];
            force[a][1] += fv[1];
            force[b][0] -= fv[0];
            force[b][1] -= fv[1];
        }

        let mut max_move: f64 = 0.0;
        for k in nfix..points.len() {
            let step = [opts.step * force[k][0], opts.step * force[k][1]];
            points[k][0] += step[0];
            points[k][1] += step[1];
            let d = dist(points[k]);
            if d > 0.0 {
                points[k] = project_to_domain(points[k]);
            } else if d < -geps {
                max_move = max_move.max(norm(step));
            }
        }
        if max_move < opts.move_tol * h {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(MeshError::Quality(format!(
            "smoother did not settle within {} iterations",
            opts.max_iterations
        )));
    }

    let tris = delaunay_inside(&points, geps);
    let mesh = finish(&points, &tris)?;
    check_quality(&mesh, h)?;
    Ok(mesh)
}

/// Closest point of the closed domain to a point outside it.
fn project_to_domain(p: Point) -> Point {
    let r = norm(p);
    let mut candidates = vec![[p[0].clamp(0.0, 1.0), 0.0], [0.0, p[1].clamp(-1.0, 0.0)]];
    let q = [p[0] / r, p[1] / r];
    if !(q[0] > 0.0 && q[1] < 0.0) {
        candidates.push(q);
    }
    candidates
        .into_iter()
        .min_by(|a, b| norm(sub(*a, p)).total_cmp(&norm(sub(*b, p))))
        .expect("at least one candidate")
}

/// Delaunay triangles (counterclockwise) whose centroid lies inside the domain.
fn delaunay_inside(points: &[Point], geps: f64) -> Vec<[usize; 3]> {
    let pts: Vec<delaunator::Point> = points
        .iter()
        .map(|p| delaunator::Point { x: p[0], y: p[1] })
        .collect();
    let tri = delaunator::triangulate(&pts);
    tri.triangles
        .chunks_exact(3)
        .filter_map(|c| {
            let (a, b, cc) = (c[0], c[1], c[2]);
            let area2 = orient(points[a], points[b], points[cc]);
            if area2.abs() < 1e-14 {
                return None;
            }
            let centroid = [
                (points[a][0] + points[b][0] + points[cc][0]) / 3.0,
                (points[a][1] + points[b][1] + points[cc][1]) / 3.0,
            ];
            if three_quarter_disk_distance(centroid) >= -geps {
                return None;
            }
            Some(if area2 > 0.0 { [a, b, cc] } else { [a, cc, b] })
        })
        .collect()
}

fn unique_edges(tris: &[[usize; 3]]) -> Vec<(usize, usize)> {
    let mut edges: Vec<(usize, usize)> = tris
        .iter()
        .flat_map(|t| {
            (0..3).map(move |k| {
                let (a, b) = (t[k], t[(k + 1) % 3]);
                (a.min(b), a.max(b))
            })
        })
        .collect();
    edges.sort_unstable();
    edges.dedup();
    edges
}

fn finish(points: &[Point], tris: &[[usize; 3]]) -> Result<Mesh, MeshError> {
    let mut used = vec![usize::MAX; points.len()];
    let mut nodes = Vec::new();
    for t in tris {
        for &v in t {
            if used[v] == usize::MAX {
                used[v] = nodes.len();
                nodes.push(points[v]);
            }
        }
    }
    let triangles: Vec<[usize; 3]> = tris
        .iter()
        .map(|t| [used[t[0]], used[t[1]], used[t[2]]])
        .collect();

    let mut count: HashMap<(usize, usize), usize> = HashMap::new();
    for t in &triangles {
        for k in 0..3 {
            let (a, b) = (t[k], t[(k + 1) % 3]);
            *count.entry((a.min(b), a.max(b))).or_default() += 1;
        }
    }
    let mut boundary = Vec::new();
    for t in &triangles {
        for k in 0..3 {
            let (a, b) = (t[k], t[(k + 1) % 3]);
            if count[&(a.min(b), a.max(b))] == 1 {
                boundary.push(BoundaryEdge { nodes: [a, b], tag: BoundaryTag::Outer });
            }
        }
    }
    Mesh::new(nodes, triangles, boundary)
}

fn check_quality(mesh: &Mesh, h: f64) -> Result<(), MeshError> {
    for (a, b) in mesh.edges() {
        let l = norm(sub(mesh.nodes()[a], mesh.nodes()[b]));
        if l < 0.5 * h || l > 2.0 * h {
            return Err(MeshError::Quality(format!(
                "edge ({a}, {b}) has length {l:.4} outside [{:.4}, {:.4}]",
                0.5 * h,
                2.0 * h
            )));
        }
    }
    let mut owner: HashMap<(usize, usize), usize> = HashMap::new();
    for (t, tri) in mesh.triangles().iter().enumerate() {
        for k in 0..3 {
            let (a, b) = (tri[k], tri[(k + 1) % 3]);
            if let Some(&s) = owner.get(&(a.min(b), a.max(b))) {
                let (d1, d2) = (mesh.diameter(t), mesh.diameter(s));
                if d1.max(d2) > 2.0 * d1.min(d2) {
                    return Err(MeshError::Quality(format!(
                        "neighbouring triangles {s} and {t} differ in size by more than 2x"
                    )));
                }
            } else {
                owner.insert((a.min(b), a.max(b)), t);
            }
        }
    }
    if mesh.boundary_edges().iter().any(|e| {
        let [a, b] = e.nodes;
        let mid = [
            0.5 * (mesh.nodes()[a][0] + mesh.nodes()[b][0]),
            0.5 * (mesh.nodes()[a][1] + mesh.nodes()[b][1]),
        ];
        three_quarter_disk_distance(mid) < -0.25 * h
    }) {
        return Err(MeshError::Quality("boundary edge runs through the interior".into()));
    }
    Ok(())
}
