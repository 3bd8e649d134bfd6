//! Triangulations of the crack square and the three-quarter disk, the corner
//! geometry attached to them, and a plain-text interchange format.

mod disk;
mod io;
mod structured;

use std::collections::HashMap;
use std::f64::consts::PI;
use std::fmt;

use thiserror::Error;

use crate::scalar::{norm, orient, sub};
use crate::Point;

pub use disk::{build_three_quarter_disk_mesh, DiskMesherOptions};
pub use io::{export_mesh, import_mesh};
pub use structured::build_structured_crack_mesh;

/// Absolute tolerance for geometric predicates on O(1) domains.
pub const GEOM_TOL: f64 = 1e-12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MeshError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("triangle {0} has non-positive signed area")]
    NonPositiveArea(usize),
    #[error("{entity} {index} references node {node} out of range")]
    IndexOutOfRange {
        entity: &'static str,
        index: usize,
        node: usize,
    },
    #[error("edge ({0}, {1}) is shared by more than two triangles")]
    OverSharedEdge(usize, usize),
    #[error("boundary edge {index}: {message}")]
    BoundaryEdge { index: usize, message: String },
    #[error("invalid mesh parameter: {0}")]
    InvalidParameter(String),
    #[error("mesh quality requirement not met: {0}")]
    Quality(String),
}

/// Which side of the mesh boundary an edge belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BoundaryTag {
    Outer,
    CrackUpper,
    CrackLower,
}

impl BoundaryTag {
    pub fn as_str(self) -> &'static str {
        match self {
            BoundaryTag::Outer => "outer",
            BoundaryTag::CrackUpper => "crack_upper",
            BoundaryTag::CrackLower => "crack_lower",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "outer" => Some(BoundaryTag::Outer),
            "crack_upper" => Some(BoundaryTag::CrackUpper),
            "crack_lower" => Some(BoundaryTag::CrackLower),
            _ => None,
        }
    }

    /// Crack face the edge lies on, if any.
    pub fn face(self) -> Option<Face> {
        match self {
            BoundaryTag::Outer => None,
            BoundaryTag::CrackUpper => Some(Face::Upper),
            BoundaryTag::CrackLower => Some(Face::Lower),
        }
    }
}

impl fmt::Display for BoundaryTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// The two faces of a crack. `Upper` is the side where the Heaviside sign is +1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Face {
    Upper,
    Lower,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BoundaryEdge {
    pub nodes: [usize; 2],
    pub tag: BoundaryTag,
}

/// Immutable triangulation with counterclockwise triangles.
#[derive(Debug, Clone, PartialEq)]
pub struct Mesh {
    nodes: Vec<Point>,
    triangles: Vec<[usize; 3]>,
    boundary: Vec<BoundaryEdge>,
    boundary_owner: Vec<usize>,
    node_tri_offsets: Vec<usize>,
    node_tri: Vec<usize>,
}

impl Mesh {
    /// Builds and validates a mesh.
    pub fn new(
        nodes: Vec<Point>,
        triangles: Vec<[usize; 3]>,
        boundary: Vec<BoundaryEdge>,
    ) -> Result<Self, MeshError> {
        let n = nodes.len();
        for (t, tri) in triangles.iter().enumerate() {
            if let Some(&bad) = tri.iter().find(|&&v| v >= n) {
                return Err(MeshError::IndexOutOfRange {
                    entity: "triangle",
                    index: t,
                    node: bad,
                });
            }
            let [a, b, c] = *tri;
            if !(orient(nodes[a], nodes[b], nodes[c]) > 0.0) {
                return Err(MeshError::NonPositiveArea(t));
            }
        }
        for (e, edge) in boundary.iter().enumerate() {
            if let Some(&bad) = edge.nodes.iter().find(|&&v| v >= n) {
                return Err(MeshError::IndexOutOfRange {
                    entity: "boundary edge",
                    index: e,
                    node: bad,
                });
            }
        }

        let mut edge_tris: HashMap<(usize, usize), Vec<usize>> = HashMap::new();
        for (t, tri) in triangles.iter().enumerate() {
            for k in 0..3 {
                let key = edge_key(tri[k], tri[(k + 1) % 3]);
                let owners = edge_tris.entry(key).or_default();
                owners.push(t);
                if owners.len() > 2 {
                    return Err(MeshError::OverSharedEdge(key.0, key.1));
                }
            }
        }

        let mut listed = HashMap::new();
        let mut boundary_owner = Vec::with_capacity(boundary.len());
        for (e, edge) in boundary.iter().enumerate() {
            let key = edge_key(edge.nodes[0], edge.nodes[1]);
            match edge_tris.get(&key) {
                Some(owners) if owners.len() == 1 => boundary_owner.push(owners[0]),
                Some(_) => {
                    return Err(MeshError::BoundaryEdge {
                        index: e,
                        message: "edge is shared by two triangles".into(),
                    })
                }
                None => {
                    return Err(MeshError::BoundaryEdge {
                        index: e,
                        message: "edge does not belong to any triangle".into(),
                    })
                }
            }
            if listed.insert(key, e).is_some() {
                return Err(MeshError::BoundaryEdge {
                    index: e,
                    message: "edge listed twice".into(),
                });
            }
        }
        let mut open: Vec<_> = edge_tris
            .iter()
            .filter(|(k, owners)| owners.len() == 1 && !listed.contains_key(*k))
            .map(|(k, _)| *k)
            .collect();
        open.sort_unstable();
        if let Some(&(a, b)) = open.first() {
            return Err(MeshError::BoundaryEdge {
                index: boundary.len(),
                message: format!("mesh boundary edge ({a}, {b}) is missing from the boundary list"),
            });
        }

        validate_crack_faces(&nodes, &boundary)?;

        let mut counts = vec![0usize; n + 1];
        for tri in &triangles {
            for &v in tri {
                counts[v + 1] += 1;
            }
        }
        for i in 0..n {
            counts[i + 1] += counts[i];
        }
        let mut fill = counts.clone();
        let mut node_tri = vec![0; counts[n]];
        for (t, tri) in triangles.iter().enumerate() {
            for &v in tri {
                node_tri[fill[v]] = t;
                fill[v] += 1;
            }
        }

        Ok(Mesh {
            nodes,
            triangles,
            boundary,
            boundary_owner,
            node_tri_offsets: counts,
            node_tri,
        })
    }

    pub fn nodes(&self) -> &[Point] {
        &self.nodes
    }

    pub fn triangles(&self) -> &[[usize; 3]] {
        &self.triangles
    }

    pub fn boundary_edges(&self) -> &[BoundaryEdge] {
        &self.boundary
    }

    pub fn num_nodes(&self) -> usize {
        self.nodes.len()
    }

    pub fn num_triangles(&self) -> usize {
        self.triangles.len()
    }

    /// Triangle owning boundary edge `e`.
    pub fn boundary_owner(&self, e: usize) -> usize {
        self.boundary_owner[e]
    }

    /// Triangles containing node `v`.
    pub fn node_triangles(&self, v: usize) -> &[usize] {
        &self.node_tri[self.node_tri_offsets[v]..self.node_tri_offsets[v + 1]]
    }

    pub fn vertices(&self, t: usize) -> [Point; 3] {
        let [a, b, c] = self.triangles[t];
        [self.nodes[a], self.nodes[b], self.nodes[c]]
    }

    pub fn area(&self, t: usize) -> f64 {
        let [a, b, c] = self.vertices(t);
        0.5 * orient(a, b, c)
    }

    pub fn total_area(&self) -> f64 {
        (0..self.triangles.len()).map(|t| self.area(t)).sum()
    }

    /// Longest edge of triangle `t`.
    pub fn diameter(&self, t: usize) -> f64 {
        let [a, b, c] = self.vertices(t);
        norm(sub(a, b)).max(norm(sub(b, c))).max(norm(sub(c, a)))
    }

    /// Largest element diameter.
    pub fn mesh_size(&self) -> f64 {
        (0..self.triangles.len())
            .map(|t| self.diameter(t))
            .fold(0.0, f64::max)
    }

    /// Number of distinct edges.
    pub fn num_edges(&self) -> usize {
        self.edges().len()
    }

    /// Sorted list of distinct edges as node pairs `(min, max)`.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut edges: Vec<_> = self
            .triangles
            .iter()
            .flat_map(|t| (0..3).map(move |k| edge_key(t[k], t[(k + 1) % 3])))
            .collect();
        edges.sort_unstable();
        edges.dedup();
        edges
    }

    /// Flags nodes lying on a boundary edge with the given tag.
    pub fn nodes_on(&self, tag: BoundaryTag) -> Vec<bool> {
        let mut on = vec![false; self.nodes.len()];
        for e in self.boundary.iter().filter(|e| e.tag == tag) {
            on[e.nodes[0]] = true;
            on[e.nodes[1]] = true;
        }
        on
    }
}

fn edge_key(a: usize, b: usize) -> (usize, usize) {
    if a < b {
        (a, b)
    } else {
        (b, a)
    }
}

fn validate_crack_faces(nodes: &[Point], boundary: &[BoundaryEdge]) -> Result<(), MeshError> {
    let lower: Vec<(usize, &BoundaryEdge)> = boundary
        .iter()
        .enumerate()
        .filter(|(_, e)| e.tag == BoundaryTag::CrackLower)
        .collect();
    let upper_count = boundary
        .iter()
        .filter(|e| e.tag == BoundaryTag::CrackUpper)
        .count();
    if upper_count != lower.len() {
        return Err(MeshError::BoundaryEdge {
            index: 0,
            message: format!(
                "{upper_count} crack_upper edges but {} crack_lower edges",
                lower.len()
            ),
        });
    }
    let same = |p: Point, q: Point| norm(sub(p, q)) <= GEOM_TOL;
    for (e, edge) in boundary.iter().enumerate() {
        if edge.tag != BoundaryTag::CrackUpper {
            continue;
        }
        let [a, b] = edge.nodes;
        let partner = lower.iter().find(|(_, l)| {
            let [c, d] = l.nodes;
            (same(nodes[a], nodes[c]) && same(nodes[b], nodes[d]))
                || (same(nodes[a], nodes[d]) && same(nodes[b], nodes[c]))
        });
        match partner {
            None => {
                return Err(MeshError::BoundaryEdge {
                    index: e,
                    message: "crack_upper edge has no coincident crack_lower edge".into(),
                })
            }
            Some((_, l)) => {
                let distinct = l.nodes.iter().filter(|v| !edge.nodes.contains(v)).count();
                if distinct == 0 {
                    return Err(MeshError::BoundaryEdge {
                        index: e,
                        message: "crack faces share both node indices".into(),
                    });
                }
            }
        }
    }
    Ok(())
}

/// Direction in which the angular coordinate increases.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AngularSense {
    CounterClockwise,
    Clockwise,
}

/// A straight crack running from a point on the outer boundary to the tip.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Crack {
    /// Boundary endpoint of the crack.
    pub origin: Point,
    /// Unit vector pointing from the tip toward `origin`.
    pub dir: Point,
}

impl Crack {
    /// Unit normal; the Heaviside sign is +1 on the side it points to.
    pub fn normal(&self) -> Point {
        [self.dir[1], -self.dir[0]]
    }
}

/// Location and opening of the single re-entrant corner (or crack tip).
///
/// The angular coordinate starts at `edge_angle_start` (the direction of the
/// first corner edge, as a Cartesian angle) and runs in `sense` through the
/// domain up to `pi / beta` on the second edge.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CornerGeometry {
    pub tip: Point,
    pub edge_angle_start: f64,
    pub sense: AngularSense,
    pub beta: f64,
    pub crack: Option<Crack>,
}

impl CornerGeometry {
    /// Slit square `[-1,1]^2` with the crack from `(-1,0)` to the tip at the origin.
    ///
    /// The angle is 0 on the upper face and `2 pi` on the lower face, and
    /// grows clockwise, so `(0,1)` sits at `pi/2` and `(1,0)` at `pi`.
    pub fn crack_square() -> Self {
        CornerGeometry {
            tip: [0.0, 0.0],
            edge_angle_start: PI,
            sense: AngularSense::Clockwise,
            beta: 0.5,
            crack: Some(Crack {
                origin: [-1.0, 0.0],
                dir: [-1.0, 0.0],
            }),
        }
    }

    /// Unit disk minus the open quadrant `{x > 0, y < 0}`, corner at the origin.
    pub fn three_quarter_disk() -> Self {
        CornerGeometry {
            tip: [0.0, 0.0],
            edge_angle_start: 0.0,
            sense: AngularSense::CounterClockwise,
            beta: 2.0 / 3.0,
            crack: None,
        }
    }

    /// Angle of the sector, `pi / beta`.
    pub fn opening(&self) -> f64 {
        PI / self.beta
    }

    pub fn is_crack(&self) -> bool {
        self.crack.is_some()
    }
}
