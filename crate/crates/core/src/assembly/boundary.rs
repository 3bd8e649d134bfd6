use super::{AssemblyError, Field};
use crate::enrichment::EnrichedSpace;
use crate::linalg::{LinalgError, SparseBuilder, SparseLu, SparseMatrix};
use crate::mesh::Face;
use crate::quadrature::{graded_line_rule, line_rule, QuadratureSettings};
use crate::scalar::{dot, norm, sub};

/// How Dirichlet data is imposed on crack faces that cut through elements.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CrackFaceMode {
    /// Symmetric Nitsche terms.
    Nitsche,
    /// Penalty `gamma / h^2` without consistency terms.
    Penalty,
    /// No condition on the crack faces.
    Free,
}

impl CrackFaceMode {
    pub fn as_str(self) -> &'static str {
        match self {
            CrackFaceMode::Nitsche => "nitsche",
            CrackFaceMode::Penalty => "penalty",
            CrackFaceMode::Free => "free",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "nitsche" => Some(CrackFaceMode::Nitsche),
            "penalty" => Some(CrackFaceMode::Penalty),
            "free" | "off" => Some(CrackFaceMode::Free),
            _ => None,
        }
    }
}

/// Values of the constrained entries (in the order of
/// `dofmap().constrained()`) from the L2 projection of `data` onto their
/// traces: `B g = r` with `B(i, j) = int psi_i psi_j ds` and
/// `r(i) = int data psi_i ds` over the strongly constrained boundary.
pub fn trace_projection(
    space: &EnrichedSpace<'_>,
    data: &Field,
    points_per_segment: usize,
) -> Result<Vec<f64>, AssemblyError> {
    let dm = space.dofmap();
    let constrained = dm.constrained();
    let nc = constrained.len();
    if nc == 0 {
        return Ok(Vec::new());
    }
    let mut local_of = vec![usize::MAX; dm.len()];
    for (k, &d) in constrained.iter().enumerate() {
        local_of[d] = k;
    }
    let mesh = space.mesh();
    let mut gram = SparseBuilder::square(nc);
    let mut rhs = vec![0.0; nc];
    let mut values = Vec::new();
    let mut grads = Vec::new();
    for (e, edge) in mesh.boundary_edges().iter().enumerate() {
        let t = mesh.boundary_owner(e);
        let face = edge.tag.face();
        let info = space.element(t);
        for [a, b] in space.boundary_edge_pieces(e) {
            let rule = line_rule(a, b, points_per_segment);
            for (x, w) in rule.iter() {
                space.eval_local(t, x, face, &mut values, &mut grads);
                let g = data.eval(x, face);
                for (fa, &va) in info.local.iter().zip(&values) {
                    let ia = local_of[fa.dof()];
                    if ia == usize::MAX || va == 0.0 {
                        continue;
                    }
                    rhs[ia] += w * g * va;
                    for (fc, &vc) in info.local.iter().zip(&values) {
                        let ic = local_of[fc.dof()];
                        if ic != usize::MAX && vc != 0.0 {
                            gram.add(ia, ic, w * va * vc)?;
                        }
                    }
                }
            }
        }
    }
    let gram = gram.finalize();
    let lu = SparseLu::factor(&gram).map_err(|err| match err {
        LinalgError::ZeroPivot { index } => AssemblyError::SingularTraceGram { dof: constrained[index] },
        other => AssemblyError::Linalg(other),
    })?;
    Ok(lu.solve(&rhs)?)
}

/// Crack-face terms for elements cut by the crack: matrix contribution and
/// right-hand side for the data `data` (one-sided values per face).
pub fn crack_face_terms(
    space: &EnrichedSpace<'_>,
    data: &Field,
    mode: CrackFaceMode,
    gamma: f64,
    settings: &QuadratureSettings,
) -> (SparseMatrix<f64>, Vec<f64>) {
    let n = space.dofmap().len();
    let mut mat = SparseBuilder::square(n);
    let mut rhs = vec![0.0; n];
    let geom = space.geometry();
    let Some(crack) = geom.crack else {
        return (mat.finalize(), rhs);
    };
    if mode == CrackFaceMode::Free {
        return (mat.finalize(), rhs);
    }
    let normal = crack.normal();
    let mut values = Vec::new();
    let mut grads = Vec::new();
    for (t, info) in space.elements().iter().enumerate() {
        let Some([a, b]) = info.crack_piece else {
            continue;
        };
        let rule = if norm(sub(b, geom.tip)) <= crate::mesh::GEOM_TOL {
            graded_line_rule(b, a, settings.levels, settings.line_points)
        } else {
            line_rule(a, b, settings.line_points)
        };
        let h = info.diameter;
        let m = info.local.len();
        let mut local = vec![0.0; m * m];
        let mut local_rhs = vec![0.0; m];
        for face in [Face::Upper, Face::Lower] {
            // outward normal of the domain on this face
            let out = match face {
                Face::Upper => [-normal[0], -normal[1]],
                Face::Lower => normal,
            };
            for (x, w) in rule.iter() {
                space.eval_local(t, x, Some(face), &mut values, &mut grads);
                let g = data.eval(x, Some(face));
                match mode {
                    CrackFaceMode::Nitsche => {
                        let pen = gamma / h;
                        for i in 0..m {
                            let dni = dot(grads[i], out);
                            local_rhs[i] += w * g * (pen * values[i] - dni);
                            for j in 0..m {
                                let dnj = dot(grads[j], out);
                                local[i * m + j] += w * (pen * values[i] * values[j]
                                    - dni * values[j]
                                    - values[i] * dnj);
                            }
                        }
                    }
                    CrackFaceMode::Penalty => {
                        let pen = gamma / (h * h);
                        for i in 0..m {
                            local_rhs[i] += w * g * pen * values[i];
                            for j in 0..m {
                                local[i * m + j] += w * pen * values[i] * values[j];
                            }
                        }
                    }
                    CrackFaceMode::Free => unreachable!(),
                }
            }
        }
        for (i, fi) in info.local.iter().enumerate() {
            rhs[fi.dof()] += local_rhs[i];
            for (j, fj) in info.local.iter().enumerate() {
                mat.add(fi.dof(), fj.dof(), local[i * m + j]).expect("dof inside the space");
            }
        }
    }
    (mat.finalize(), rhs)
}
