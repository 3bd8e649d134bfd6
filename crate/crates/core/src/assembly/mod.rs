//! Discrete operators, mass matrices, loads and boundary conditions of the
//! state and costate equations.

mod boundary;
mod cache;
mod field;
mod forms;

pub use boundary::{crack_face_terms, trace_projection, CrackFaceMode};
pub use cache::{ElementQuad, QuadCache};
pub use field::Field;
pub use forms::{
    assemble_active_load, assemble_indicator_mass, assemble_load, assemble_mass,
    assemble_operator, assemble_weighted_load,
};

use thiserror::Error;

use crate::enrichment::{EnrichedSpace, EnrichmentConfig, EnrichmentError};
use crate::linalg::{LinalgError, SparseMatrix};
use crate::mesh::{CornerGeometry, Mesh};
use crate::quadrature::{Purpose, QuadratureSettings};
use crate::Point;

/// Default Nitsche penalty.
pub const NITSCHE_GAMMA: f64 = 100.0;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AssemblyError {
    #[error(transparent)]
    Enrichment(#[from] EnrichmentError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error("boundary trace Gram matrix is singular at entry {dof}")]
    SingularTraceGram { dof: usize },
    #[error("lower bound exceeds upper bound at {0:?}")]
    BoundsCrossed(Point),
    #[error("invalid problem: {0}")]
    InvalidProblem(String),
}

/// Position of a control value relative to the bounds at a quadrature point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Label {
    Inactive,
    Lower,
    Upper,
}

/// `min J(y, u) = 1/2 |y - y_d|^2 + alpha/2 |u|^2` subject to
/// `-Laplace y + c y = u + f`, `y = y_b` on the boundary and `u0 <= u <= u1`.
#[derive(Debug, Clone)]
pub struct ControlProblem {
    pub geom: CornerGeometry,
    pub config: EnrichmentConfig,
    /// Coefficient `c` of the zeroth-order term.
    pub reaction: f64,
    pub source: Field,
    pub target: Field,
    pub alpha: f64,
    pub lower: Option<Field>,
    pub upper: Option<Field>,
    pub dirichlet: Field,
    pub crack_faces: CrackFaceMode,
    pub nitsche_gamma: f64,
    pub quadrature: QuadratureSettings,
    /// Build the element quadrature data in parallel.
    pub parallel: bool,
}

impl ControlProblem {
    /// Homogeneous problem with zero data and no bounds.
    pub fn new(geom: CornerGeometry, config: EnrichmentConfig, alpha: f64) -> Self {
        ControlProblem {
            geom,
            config,
            reaction: 0.0,
            source: Field::zero(),
            target: Field::zero(),
            alpha,
            lower: None,
            upper: None,
            dirichlet: Field::zero(),
            crack_faces: CrackFaceMode::Nitsche,
            nitsche_gamma: NITSCHE_GAMMA,
            quadrature: QuadratureSettings::default(),
            parallel: false,
        }
    }

    pub fn validate(&self) -> Result<(), AssemblyError> {
        if !(self.alpha > 0.0 && self.alpha.is_finite()) {
            return Err(AssemblyError::InvalidProblem(format!("alpha must be positive (got {})", self.alpha)));
        }
        if !(self.reaction >= 0.0 && self.reaction.is_finite()) {
            return Err(AssemblyError::InvalidProblem(format!(
                "reaction coefficient must be non-negative (got {})",
                self.reaction
            )));
        }
        if !(self.nitsche_gamma > 0.0) {
            return Err(AssemblyError::InvalidProblem("Nitsche penalty must be positive".into()));
        }
        self.config.validate()?;
        Ok(())
    }
}

/// Everything the active-set iteration needs that does not depend on the labels.
#[derive(Debug, Clone)]
pub struct AssembledSystem<'m> {
    pub space: EnrichedSpace<'m>,
    pub cache: QuadCache,
    /// Operator including crack-face terms.
    pub a: SparseMatrix<f64>,
    pub m: SparseMatrix<f64>,
    /// `(f, psi_j)`.
    pub f1: Vec<f64>,
    /// `(y_d, psi_j)`.
    pub f2: Vec<f64>,
    /// Right-hand side of the crack-face terms for the state data.
    pub face_rhs: Vec<f64>,
    /// Strongly constrained entries, ascending.
    pub constrained: Vec<usize>,
    /// State values of the constrained entries.
    pub dirichlet_values: Vec<f64>,
    /// Unconstrained entries, ascending.
    pub free: Vec<usize>,
    pub alpha: f64,
    /// Bounds sampled at the quadrature points of `cache`.
    pub lower_at: Option<Vec<f64>>,
    pub upper_at: Option<Vec<f64>>,
    pub lower: Option<Field>,
    pub upper: Option<Field>,
    pub target: Field,
}

impl AssembledSystem<'_> {
    pub fn num_dofs(&self) -> usize {
        self.space.dofmap().len()
    }

    /// Full-length vector holding the Dirichlet values on constrained entries.
    pub fn dirichlet_vector(&self) -> Vec<f64> {
        let mut g = vec![0.0; self.num_dofs()];
        for (&c, &v) in self.constrained.iter().zip(&self.dirichlet_values) {
            g[c] = v;
        }
        g
    }
}

pub fn assemble<'m>(mesh: &'m Mesh, problem: &ControlProblem) -> Result<AssembledSystem<'m>, AssemblyError> {
    problem.validate()?;
    let space = EnrichedSpace::new(mesh, problem.geom, problem.config)?;
    let n = space.dofmap().len();
    let cache = QuadCache::build(&space, &problem.quadrature, Purpose::Assembly, problem.parallel);

    let mut a = assemble_operator(n, &cache, problem.reaction);
    let (face_mat, face_rhs) = crack_face_terms(
        &space,
        &problem.dirichlet,
        problem.crack_faces,
        problem.nitsche_gamma,
        &problem.quadrature,
    );
    if face_mat.nnz() > 0 {
        a = a.add_scaled(&face_mat, 1.0);
    }
    let m = assemble_mass(n, &cache);
    let f1 = assemble_load(n, &cache, &problem.source);
    let f2 = assemble_load(n, &cache, &problem.target);
    let dirichlet_values = trace_projection(&space, &problem.dirichlet, problem.quadrature.line_points)?;

    let sample = |f: &Option<Field>| {
        f.as_ref()
            .map(|f| cache.iter_points().map(|(_, _, x, _)| f.eval(x, None)).collect::<Vec<_>>())
    };
    let lower_at = sample(&problem.lower);
    let upper_at = sample(&problem.upper);
    if let (Some(lo), Some(up)) = (&lower_at, &upper_at) {
        for ((_, _, x, _), (l, u)) in cache.iter_points().zip(lo.iter().zip(up)) {
            if l > u {
                return Err(AssemblyError::BoundsCrossed(x));
            }
        }
    }

    let constrained = space.dofmap().constrained().to_vec();
    let free = space.dofmap().free();
    Ok(AssembledSystem {
        space,
        cache,
        a,
        m,
        f1,
        f2,
        face_rhs,
        constrained,
        dirichlet_values,
        free,
        alpha: problem.alpha,
        lower_at,
        upper_at,
        lower: problem.lower.clone(),
        upper: problem.upper.clone(),
        target: problem.target.clone(),
    })
}
