use log::warn;

use super::functions::{cutoff_eval, face_sign, heaviside, polar_impl, singular_eval};
use super::geometry::{
    clip_segment, contains_closed, distance_to_triangle, polygon_area, split_by_line,
};
use super::{EnrichmentConfig, EnrichmentError, Method};
use crate::mesh::{CornerGeometry, Face, Mesh, GEOM_TOL};
use crate::quadrature::gauss_legendre;
use crate::scalar::{dot, norm, orient, sub};
use crate::Point;

/// Area fraction below which a piece of a cut support is considered empty.
const CUT_AREA_FRACTION: f64 = 1e-10;
/// Trace magnitude below which a basis function counts as vanishing on the boundary.
const TRACE_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum DofKind {
    Standard,
    Heaviside,
    NodalSingular,
    GlobalSingular,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DofEntry {
    pub kind: DofKind,
    pub node: Option<usize>,
}

/// Global numbering of the basis functions of the discrete space.
///
/// Entries are ordered standard (node order), Heaviside, nodal singular, and
/// finally the global singular function.
#[derive(Debug, Clone, PartialEq)]
pub struct DofMap {
    entries: Vec<DofEntry>,
    constrained: Vec<usize>,
    is_constrained: Vec<bool>,
    theta_s: Vec<usize>,
    theta_h: Vec<usize>,
    heaviside_of: Vec<Option<usize>>,
    singular_of: Vec<Option<usize>>,
    global: Option<usize>,
}

impl DofMap {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[DofEntry] {
        &self.entries
    }

    /// Entries with a nonzero trace on the strongly constrained boundary, ascending.
    pub fn constrained(&self) -> &[usize] {
        &self.constrained
    }

    pub fn is_constrained(&self, dof: usize) -> bool {
        self.is_constrained[dof]
    }

    /// Unconstrained entries, ascending.
    pub fn free(&self) -> Vec<usize> {
        (0..self.len()).filter(|&d| !self.is_constrained[d]).collect()
    }

    /// Nodes carrying nodal singular enrichment.
    pub fn theta_s(&self) -> &[usize] {
        &self.theta_s
    }

    /// Nodes carrying Heaviside enrichment.
    pub fn theta_h(&self) -> &[usize] {
        &self.theta_h
    }

    pub fn standard(&self, node: usize) -> usize {
        node
    }

    pub fn heaviside(&self, node: usize) -> Option<usize> {
        self.heaviside_of[node]
    }

    pub fn nodal_singular(&self, node: usize) -> Option<usize> {
        self.singular_of[node]
    }

    pub fn global_singular(&self) -> Option<usize> {
        self.global
    }

    pub fn count(&self, kind: DofKind) -> usize {
        self.entries.iter().filter(|e| e.kind == kind).count()
    }
}

/// One basis function supported on an element.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LocalFn {
    Standard { vertex: usize, dof: usize },
    Heaviside { vertex: usize, dof: usize },
    NodalSingular { vertex: usize, dof: usize },
    Global { dof: usize },
}

impl LocalFn {
    pub fn dof(&self) -> usize {
        match *self {
            LocalFn::Standard { dof, .. }
            | LocalFn::Heaviside { dof, .. }
            | LocalFn::NodalSingular { dof, .. }
            | LocalFn::Global { dof } => dof,
        }
    }
}

/// Geometric and basis data of one triangle.
#[derive(Debug, Clone, PartialEq)]
pub struct ElementInfo {
    pub vertices: [Point; 3],
    pub area: f64,
    pub diameter: f64,
    /// Gradients of the three hat functions.
    pub hat_grads: [Point; 3],
    /// The tip lies in the closed triangle.
    pub tip_inside: bool,
    /// Piece of the crack running through the interior, ordered from the crack
    /// origin side toward the tip.
    pub crack_piece: Option<[Point; 2]>,
    /// Distance from the tip to the closed triangle.
    pub r_min: f64,
    /// Largest vertex distance from the tip.
    pub r_max: f64,
    pub local: Vec<LocalFn>,
    needs_polar: bool,
    needs_heaviside: bool,
}

impl ElementInfo {
    pub fn is_cut(&self) -> bool {
        self.crack_piece.is_some()
    }

    pub fn dofs(&self) -> impl Iterator<Item = usize> + '_ {
        self.local.iter().map(LocalFn::dof)
    }
}

/// A basis function value at a point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BasisValue {
    pub dof: usize,
    pub value: f64,
    pub grad: Point,
}

/// Mesh, corner geometry and enrichment choice bound together with the
/// resulting degree-of-freedom map.
#[derive(Debug, Clone)]
pub struct EnrichedSpace<'m> {
    mesh: &'m Mesh,
    geom: CornerGeometry,
    config: EnrichmentConfig,
    dofmap: DofMap,
    elements: Vec<ElementInfo>,
}

/// Builds the degree-of-freedom map of the space selected by `config`.
pub fn classify_nodes(
    mesh: &Mesh,
    geom: &CornerGeometry,
    config: &EnrichmentConfig,
) -> Result<DofMap, EnrichmentError> {
    Ok(EnrichedSpace::new(mesh, *geom, *config)?.dofmap)
}

impl<'m> EnrichedSpace<'m> {
    pub fn new(
        mesh: &'m Mesh,
        geom: CornerGeometry,
        config: EnrichmentConfig,
    ) -> Result<Self, EnrichmentError> {
        config.validate()?;
        let nt = mesh.num_triangles();
        let mut elements: Vec<ElementInfo> = (0..nt).map(|t| element_geometry(mesh, &geom, t)).collect();
        if !elements.iter().any(|e| e.tip_inside) {
            return Err(EnrichmentError::TipOutsideDomain(geom.tip));
        }

        let nn = mesh.num_nodes();
        let theta_s: Vec<usize> = if config.method == Method::ClassicXfem {
            (0..nn)
                .filter(|&i| norm(sub(mesh.nodes()[i], geom.tip)) <= config.enrichment_radius)
                .collect()
        } else {
            Vec::new()
        };
        let theta_h: Vec<usize> = if geom.is_crack() && config.method != Method::P1Plain {
            (0..nn)
                .filter(|&i| support_completely_cut(mesh, &geom, &elements, i))
                .collect()
        } else {
            Vec::new()
        };

        let mut entries: Vec<DofEntry> = (0..nn)
            .map(|i| DofEntry { kind: DofKind::Standard, node: Some(i) })
            .collect();
        let mut heaviside_of = vec![None; nn];
        for &i in &theta_h {
            heaviside_of[i] = Some(entries.len());
            entries.push(DofEntry { kind: DofKind::Heaviside, node: Some(i) });
        }
        let mut singular_of = vec![None; nn];
        for &i in &theta_s {
            singular_of[i] = Some(entries.len());
            entries.push(DofEntry { kind: DofKind::NodalSingular, node: Some(i) });
        }
        let global = (config.method == Method::CutXfem).then(|| {
            entries.push(DofEntry { kind: DofKind::GlobalSingular, node: None });
            entries.len() - 1
        });

        for (t, info) in elements.iter_mut().enumerate() {
            let tri = mesh.triangles()[t];
            let mut local: Vec<LocalFn> = (0..3)
                .map(|k| LocalFn::Standard { vertex: k, dof: tri[k] })
                .collect();
            for (k, &v) in tri.iter().enumerate() {
                if let Some(dof) = heaviside_of[v] {
                    local.push(LocalFn::Heaviside { vertex: k, dof });
                }
            }
            for (k, &v) in tri.iter().enumerate() {
                if let Some(dof) = singular_of[v] {
                    local.push(LocalFn::NodalSingular { vertex: k, dof });
                }
            }
            if let Some(dof) = global {
                if info.r_min < config.cutoff.r1 {
                    local.push(LocalFn::Global { dof });
                }
            }
            info.needs_polar = local
                .iter()
                .any(|f| matches!(f, LocalFn::NodalSingular { .. } | LocalFn::Global { .. }));
            info.needs_heaviside = local.iter().any(|f| matches!(f, LocalFn::Heaviside { .. }));
            info.local = local;
        }

        let n = entries.len();
        let mut space = EnrichedSpace {
            mesh,
            geom,
            config,
            dofmap: DofMap {
                entries,
                constrained: Vec::new(),
                is_constrained: vec![false; n],
                theta_s,
                theta_h,
                heaviside_of,
                singular_of,
                global,
            },
            elements,
        };
        let constrained = space.boundary_trace_support();
        for &d in &constrained {
            space.dofmap.is_constrained[d] = true;
        }
        if constrained.iter().any(|&d| {
            space.dofmap.entries[d].kind == DofKind::NodalSingular
        }) {
            warn!(
                "singular enrichment radius {} reaches the Dirichlet boundary",
                config.enrichment_radius
            );
        }
        if global.is_some_and(|g| space.dofmap.is_constrained[g]) {
            warn!("global singular function has a nonzero boundary trace; it is constrained");
        }
        space.dofmap.constrained = constrained;
        Ok(space)
    }

    pub fn mesh(&self) -> &'m Mesh {
        self.mesh
    }

    pub fn geometry(&self) -> &CornerGeometry {
        &self.geom
    }

    pub fn config(&self) -> &EnrichmentConfig {
        &self.config
    }

    pub fn dofmap(&self) -> &DofMap {
        &self.dofmap
    }

    pub fn element(&self, t: usize) -> &ElementInfo {
        &self.elements[t]
    }

    pub fn elements(&self) -> &[ElementInfo] {
        &self.elements
    }

    /// Representative location of every entry (its node, or the tip for the
    /// global function); used to order unknowns.
    pub fn dof_locations(&self) -> Vec<Point> {
        self.dofmap
            .entries
            .iter()
            .map(|e| e.node.map_or(self.geom.tip, |v| self.mesh.nodes()[v]))
            .collect()
    }

    /// Values and gradients of the element's local basis at `x`, in the order
    /// of `element(t).local`. On a crack, `face` selects the one-sided limit.
    /// At the tip the singular gradients are reported as zero.
    pub fn eval_local(
        &self,
        t: usize,
        x: Point,
        face: Option<Face>,
        values: &mut Vec<f64>,
        grads: &mut Vec<Point>,
    ) {
        let info = &self.elements[t];
        values.clear();
        grads.clear();
        let [a, b, c] = info.vertices;
        let two_area = 2.0 * info.area;
        let lambda = [
            orient(x, b, c) / two_area,
            orient(a, x, c) / two_area,
            orient(a, b, x) / two_area,
        ];

        let mut sing = (0.0, [0.0, 0.0]);
        let mut polar = None;
        if info.needs_polar {
            let p = polar_impl(x, &self.geom, face);
            let (v, g) = singular_eval(self.geom.beta, &p);
            sing = (v, g.unwrap_or([0.0, 0.0]));
            polar = Some(p);
        }
        let h = if info.needs_heaviside {
            match face {
                Some(f) if self.geom.is_crack() => face_sign(f),
                _ => heaviside(x, &self.geom),
            }
        } else {
            1.0
        };

        for f in &info.local {
            match *f {
                LocalFn::Standard { vertex, .. } => {
                    values.push(lambda[vertex]);
                    grads.push(info.hat_grads[vertex]);
                }
                LocalFn::Heaviside { vertex, .. } => {
                    values.push(h * lambda[vertex]);
                    let g = info.hat_grads[vertex];
                    grads.push([h * g[0], h * g[1]]);
                }
                LocalFn::NodalSingular { vertex, .. } => {
                    let (s, ds) = sing;
                    let l = lambda[vertex];
                    let g = info.hat_grads[vertex];
                    values.push(l * s);
                    grads.push([s * g[0] + l * ds[0], s * g[1] + l * ds[1]]);
                }
                LocalFn::Global { .. } => {
                    let p = polar.expect("polar frame for global enrichment");
                    let (chi, dchi) = cutoff_eval(&self.config.cutoff, p.r);
                    let (s, ds) = sing;
                    values.push(chi * s);
                    grads.push([
                        dchi * s * p.e_r[0] + chi * ds[0],
                        dchi * s * p.e_r[1] + chi * ds[1],
                    ]);
                }
            }
        }
    }

    /// All basis functions supported on element `t`, evaluated at `x`.
    pub fn shape_eval(&self, t: usize, x: Point) -> Result<Vec<BasisValue>, EnrichmentError> {
        self.shape_eval_on(t, x, None)
    }

    /// [`shape_eval`](Self::shape_eval) with an explicit crack face for points on the crack.
    pub fn shape_eval_on(
        &self,
        t: usize,
        x: Point,
        face: Option<Face>,
    ) -> Result<Vec<BasisValue>, EnrichmentError> {
        let info = &self.elements[t];
        if !contains_closed(&info.vertices, x) {
            return Err(EnrichmentError::PointOutsideElement { element: t, point: x });
        }
        if norm(sub(x, self.geom.tip)) == 0.0 {
            return Err(EnrichmentError::PointAtTip(t));
        }
        let mut values = Vec::new();
        let mut grads = Vec::new();
        self.eval_local(t, x, face, &mut values, &mut grads);
        Ok(info
            .local
            .iter()
            .zip(values.into_iter().zip(grads))
            .map(|(f, (value, grad))| BasisValue { dof: f.dof(), value, grad })
            .collect())
    }

    /// Points subdividing boundary edge `e` at a crossing with the crack.
    pub fn boundary_edge_pieces(&self, e: usize) -> Vec<[Point; 2]> {
        let edge = self.mesh.boundary_edges()[e];
        let a = self.mesh.nodes()[edge.nodes[0]];
        let b = self.mesh.nodes()[edge.nodes[1]];
        if let Some(crack) = self.geom.crack {
            let n = crack.normal();
            let sa = dot(sub(a, self.geom.tip), n);
            let sb = dot(sub(b, self.geom.tip), n);
            if (sa > GEOM_TOL && sb < -GEOM_TOL) || (sa < -GEOM_TOL && sb > GEOM_TOL) {
                let s = sa / (sa - sb);
                let x = [a[0] + s * (b[0] - a[0]), a[1] + s * (b[1] - a[1])];
                if dot(sub(x, self.geom.tip), crack.dir) >= -GEOM_TOL {
                    return vec![[a, x], [x, b]];
                }
            }
        }
        vec![[a, b]]
    }

    fn boundary_trace_support(&self) -> Vec<usize> {
        let (gx, _) = gauss_legendre::<f64>(6);
        let mut hit = vec![false; self.dofmap.len()];
        let mut values = Vec::new();
        let mut grads = Vec::new();
        for (e, edge) in self.mesh.boundary_edges().iter().enumerate() {
            let t = self.mesh.boundary_owner(e);
            let face = edge.tag.face();
            for [a, b] in self.boundary_edge_pieces(e) {
                for &s in &gx {
                    let x = [a[0] + s * (b[0] - a[0]), a[1] + s * (b[1] - a[1])];
                    self.eval_local(t, x, face, &mut values, &mut grads);
                    for (f, v) in self.elements[t].local.iter().zip(&values) {
                        if v.abs() > TRACE_TOL {
                            hit[f.dof()] = true;
                        }
                    }
                }
            }
        }
        (0..hit.len()).filter(|&d| hit[d]).collect()
    }
}

fn element_geometry(mesh: &Mesh, geom: &CornerGeometry, t: usize) -> ElementInfo {
    let vertices = mesh.vertices(t);
    let [a, b, c] = vertices;
    let area = mesh.area(t);
    let two_area = 2.0 * area;
    let hat_grads = [
        [(b[1] - c[1]) / two_area, (c[0] - b[0]) / two_area],
        [(c[1] - a[1]) / two_area, (a[0] - c[0]) / two_area],
        [(a[1] - b[1]) / two_area, (b[0] - a[0]) / two_area],
    ];
    let tip_inside = contains_closed(&vertices, geom.tip);
    let crack_piece = geom
        .crack
        .and_then(|cr| clip_segment(&vertices, cr.origin, geom.tip));
    ElementInfo {
        vertices,
        area,
        diameter: mesh.diameter(t),
        hat_grads,
        tip_inside,
        crack_piece,
        r_min: distance_to_triangle(&vertices, geom.tip),
        r_max: vertices
            .iter()
            .map(|&v| norm(sub(v, geom.tip)))
            .fold(0.0, f64::max),
        local: Vec::new(),
        needs_polar: false,
        needs_heaviside: false,
    }
}

/// The crack runs through the interior of the node's support, the tip stays
/// outside the closed support, and both sides keep a non-negligible area.
fn support_completely_cut(
    mesh: &Mesh,
    geom: &CornerGeometry,
    elements: &[ElementInfo],
    node: usize,
) -> bool {
    let Some(crack) = geom.crack else {
        return false;
    };
    let support = mesh.node_triangles(node);
    if support.iter().any(|&t| elements[t].tip_inside) {
        return false;
    }
    if !support.iter().any(|&t| elements[t].crack_piece.is_some()) {
        return false;
    }
    let n = crack.normal();
    let (mut above, mut below, mut total) = (0.0, 0.0, 0.0);
    for &t in support {
        let tri = elements[t].vertices;
        total += elements[t].area;
        if elements[t].crack_piece.is_some() {
            let (pos, neg) = split_by_line(&tri, geom.tip, n);
            above += polygon_area(&pos);
            below += polygon_area(&neg);
        } else if dot(sub(centroid(&tri), geom.tip), n) >= 0.0 {
            above += elements[t].area;
        } else {
            below += elements[t].area;
        }
    }
    above.min(below) >= CUT_AREA_FRACTION * total
}

fn centroid(tri: &[Point; 3]) -> Point {
    [
        (tri[0][0] + tri[1][0] + tri[2][0]) / 3.0,
        (tri[0][1] + tri[1][1] + tri[2][1]) / 3.0,
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::enrichment::CutoffSpec;
    use crate::mesh::{build_structured_crack_mesh, BoundaryEdge, BoundaryTag};

    fn lattice_within(n: usize, radius: f64) -> usize {
        let mut count = 0;
        for i in 0..=n {
            for j in 0..=n {
                let x = 2.0 * i as f64 / n as f64 - 1.0;
                let y = 2.0 * j as f64 / n as f64 - 1.0;
                if x.hypot(y) <= radius {
                    count += 1;
                }
            }
        }
        count
    }

    #[test]
    fn theta_s_on_nine_mesh() {
        let mesh = build_structured_crack_mesh(9, false).unwrap();
        let g = CornerGeometry::crack_square();
        let dm = classify_nodes(&mesh, &g, &EnrichmentConfig::classic(0.5)).unwrap();
        let expected = lattice_within(9, 0.5);
        assert_eq!(expected, 16);
        assert_eq!(dm.theta_s().len(), expected);
        assert_eq!(dm.count(DofKind::NodalSingular), expected);
    }

    #[test]
    fn p1_has_only_standard_entries() {
        let mesh = build_structured_crack_mesh(9, false).unwrap();
        let dm = classify_nodes(&mesh, &CornerGeometry::crack_square(), &EnrichmentConfig::p1()).unwrap();
        assert_eq!(dm.len(), mesh.num_nodes());
        assert!(dm.entries().iter().all(|e| e.kind == DofKind::Standard));
    }

    #[test]
    fn theta_h_rows_next_to_crack() {
        let n = 9;
        let mesh = build_structured_crack_mesh(n, false).unwrap();
        let g = CornerGeometry::crack_square();
        let space = EnrichedSpace::new(&mesh, g, EnrichmentConfig::cut(CutoffSpec::default())).unwrap();
        let dm = space.dofmap();
        let h = 1.0 / n as f64;
        for &v in dm.theta_h() {
            let p = mesh.nodes()[v];
            assert!((p[1].abs() - h).abs() < 1e-12, "node {p:?}");
            // support must not contain the tip
            assert!(mesh.node_triangles(v).iter().all(|&t| !space.element(t).tip_inside));
        }
        // nodes at x <= -3/9 on both rows y = +-1/9: x in {-1,-7/9,-5/9,-3/9}
        assert_eq!(dm.theta_h().len(), 8);
        assert_eq!(dm.global_singular(), Some(dm.len() - 1));
        // entry order: standard, heaviside, global
        let kinds: Vec<_> = dm.entries().iter().map(|e| e.kind).collect();
        let mut sorted = kinds.clone();
        sorted.sort();
        assert_eq!(kinds, sorted);
    }

    #[test]
    fn support_touching_crack_at_vertex_is_not_cut() {
        // two triangles above the crack line, one vertex on it
        let nodes = vec![[-0.6, 0.0], [-0.4, 0.2], [-0.8, 0.2], [0.2, -0.3], [0.3, 0.3]];
        // a small mesh containing the tip too
        let tris = vec![[0, 1, 2], [0, 3, 1], [3, 4, 1]];
        let boundary = vec![
            BoundaryEdge { nodes: [1, 2], tag: BoundaryTag::Outer },
            BoundaryEdge { nodes: [2, 0], tag: BoundaryTag::Outer },
            BoundaryEdge { nodes: [0, 3], tag: BoundaryTag::Outer },
            BoundaryEdge { nodes: [3, 4], tag: BoundaryTag::Outer },
            BoundaryEdge { nodes: [4, 1], tag: BoundaryTag::Outer },
        ];
        let mesh = Mesh::new(nodes, tris, boundary).unwrap();
        let g = CornerGeometry::crack_square();
        let space = EnrichedSpace::new(&mesh, g, EnrichmentConfig::cut(CutoffSpec::default())).unwrap();
        assert!(!space.dofmap().theta_h().contains(&2));
    }

    #[test]
    fn constrained_entries_on_outer_boundary() {
        let mesh = build_structured_crack_mesh(9, false).unwrap();
        let g = CornerGeometry::crack_square();
        let space = EnrichedSpace::new(&mesh, g, EnrichmentConfig::classic(0.5)).unwrap();
        let dm = space.dofmap();
        let on_outer = mesh.nodes_on(BoundaryTag::Outer);
        for &d in dm.constrained() {
            let e = dm.entries()[d];
            assert!(on_outer[e.node.unwrap()]);
            assert_ne!(e.kind, DofKind::NodalSingular);
        }
        assert_eq!(dm.count(DofKind::Standard), 100);
        let std_constrained = dm
            .constrained()
            .iter()
            .filter(|&&d| dm.entries()[d].kind == DofKind::Standard)
            .count();
        assert_eq!(std_constrained, 36);
        // the two Heaviside nodes on x = -1 have nonzero traces
        let h_constrained = dm
            .constrained()
            .iter()
            .filter(|&&d| dm.entries()[d].kind == DofKind::Heaviside)
            .count();
        assert_eq!(h_constrained, 2);
    }

    #[test]
    fn shape_eval_examples() {
        let nodes = vec![[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]];
        let boundary = vec![
            BoundaryEdge { nodes: [0, 1], tag: BoundaryTag::Outer },
            BoundaryEdge { nodes: [1, 2], tag: BoundaryTag::Outer },
            BoundaryEdge { nodes: [2, 0], tag: BoundaryTag::Outer },
        ];
        let mesh = Mesh::new(nodes, vec![[0, 1, 2]], boundary).unwrap();
        let g = CornerGeometry::three_quarter_disk();
        let space = EnrichedSpace::new(&mesh, g, EnrichmentConfig::p1()).unwrap();
        let vals = space.shape_eval(0, [1.0 / 3.0, 1.0 / 3.0]).unwrap();
        assert_eq!(vals.len(), 3);
        for v in &vals {
            assert!((v.value - 1.0 / 3.0).abs() < 1e-15);
        }
        assert!(matches!(
            space.shape_eval(0, [0.8, 0.8]),
            Err(EnrichmentError::PointOutsideElement { .. })
        ));
        assert!(matches!(space.shape_eval(0, [0.0, 0.0]), Err(EnrichmentError::PointAtTip(0))));
    }

    #[test]
    fn global_function_vanishes_beyond_r1() {
        let mesh = build_structured_crack_mesh(9, false).unwrap();
        let g = CornerGeometry::crack_square();
        let cut = CutoffSpec::new(0.1, 0.5).unwrap();
        let space = EnrichedSpace::new(&mesh, g, EnrichmentConfig::cut(cut)).unwrap();
        let gdof = space.dofmap().global_singular().unwrap();
        for t in 0..mesh.num_triangles() {
            let [a, b, c] = space.element(t).vertices;
            let x = [(a[0] + b[0] + c[0]) / 3.0, (a[1] + b[1] + c[1]) / 3.0];
            if norm(x) <= 0.5 {
                continue;
            }
            for v in space.shape_eval(t, x).unwrap() {
                if v.dof == gdof {
                    assert_eq!(v.value, 0.0);
                    assert_eq!(v.grad, [0.0, 0.0]);
                }
            }
        }
        assert!(!space.dofmap().is_constrained(gdof));
    }

    #[test]
    fn tip_outside_rejected() {
        let mesh = build_structured_crack_mesh(9, false).unwrap();
        let mut g = CornerGeometry::crack_square();
        g.tip = [3.0, 3.0];
        assert!(matches!(
            EnrichedSpace::new(&mesh, g, EnrichmentConfig::p1()),
            Err(EnrichmentError::TipOutsideDomain(_))
        ));
    }
}
