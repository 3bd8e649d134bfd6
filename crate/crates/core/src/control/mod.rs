//! Variational discretization of the control and the semi-smooth Newton
//! (primal-dual active set) iteration for the discrete optimality system.

mod ssn;

pub use ssn::{objective, solve_at_labels, ssn_solve, Solution, SsnOptions};

use thiserror::Error;

pub use crate::assembly::Label;
use crate::assembly::{assemble_weighted_load, AssembledSystem, AssemblyError, Field};
use crate::enrichment::{EnrichedSpace, EnrichmentError};
use crate::linalg::{LinalgError, SparseLu};
use crate::scalar::Real;
use crate::Point;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ControlError {
    #[error(transparent)]
    Assembly(#[from] AssemblyError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Enrichment(#[from] EnrichmentError),
    #[error("active-set iteration did not converge in {iterations} iterations")]
    NotConverged { iterations: usize },
    #[error("active-set iteration cycles: labels of iteration {iteration} repeat those of iteration {previous}")]
    Cycling { iteration: usize, previous: usize },
    #[error("vector of length {found} where {expected} entries are expected")]
    Length { expected: usize, found: usize },
}

/// `min{u1, max{u0, -p/alpha}}`; absent bounds are passed as infinities.
pub fn clamp<T: Real>(p: T, alpha: T, u0: T, u1: T) -> T {
    u1.min(u0.max(-p / alpha))
}

/// Label of the unconstrained control value `v = -p/alpha`; values equal to
/// a bound count as active.
pub fn label_of(v: f64, u0: f64, u1: f64) -> Label {
    if v <= u0 {
        Label::Lower
    } else if v >= u1 {
        Label::Upper
    } else {
        Label::Inactive
    }
}

/// The discrete control `u_h = P_[u0,u1](-p_h/alpha)` of a costate `p_h`.
#[derive(Debug, Clone)]
pub struct ControlEvaluator<'a> {
    space: &'a EnrichedSpace<'a>,
    p: &'a [f64],
    alpha: f64,
    lower: Option<&'a Field>,
    upper: Option<&'a Field>,
}

impl<'a> ControlEvaluator<'a> {
    pub fn new(
        space: &'a EnrichedSpace<'a>,
        p: &'a [f64],
        alpha: f64,
        lower: Option<&'a Field>,
        upper: Option<&'a Field>,
    ) -> Self {
        ControlEvaluator { space, p, alpha, lower, upper }
    }

    pub fn for_system(system: &'a AssembledSystem<'a>, p: &'a [f64]) -> Self {
        Self::new(&system.space, p, system.alpha, system.lower.as_ref(), system.upper.as_ref())
    }

    /// Control at `x` inside element `t`.
    pub fn eval(&self, t: usize, x: Point) -> Result<f64, ControlError> {
        let basis = self.space.shape_eval(t, x)?;
        let p: f64 = basis.iter().map(|b| self.p[b.dof] * b.value).sum();
        Ok(self.from_costate(p, x))
    }

    /// Control value for a costate value `p` at `x`.
    pub fn from_costate(&self, p: f64, x: Point) -> f64 {
        let u0 = self.lower.map_or(f64::NEG_INFINITY, |f| f.eval(x, None));
        let u1 = self.upper.map_or(f64::INFINITY, |f| f.eval(x, None));
        clamp(p, self.alpha, u0, u1)
    }
}

/// Labels of every assembly quadrature point for the costate `p`.
pub fn labels_from_costate(system: &AssembledSystem<'_>, p: &[f64]) -> Vec<Label> {
    let pv = system.cache.values_of(p);
    pv.iter()
        .enumerate()
        .map(|(q, &pq)| {
            let u0 = system.lower_at.as_ref().map_or(f64::NEG_INFINITY, |b| b[q]);
            let u1 = system.upper_at.as_ref().map_or(f64::INFINITY, |b| b[q]);
            label_of(-pq / system.alpha, u0, u1)
        })
        .collect()
}

/// Control values `P(-p_h/alpha)` at the assembly quadrature points.
pub fn control_at_points(system: &AssembledSystem<'_>, p: &[f64]) -> Vec<f64> {
    system
        .cache
        .values_of(p)
        .iter()
        .enumerate()
        .map(|(q, &pq)| {
            let u0 = system.lower_at.as_ref().map_or(f64::NEG_INFINITY, |b| b[q]);
            let u1 = system.upper_at.as_ref().map_or(f64::INFINITY, |b| b[q]);
            clamp(pq, system.alpha, u0, u1)
        })
        .collect()
}

fn check_len(v: &[f64], n: usize) -> Result<(), ControlError> {
    if v.len() != n {
        return Err(ControlError::Length { expected: n, found: v.len() });
    }
    Ok(())
}

/// Solves `A y = (u + f, psi) + crack-face data` on the free entries with the
/// Dirichlet values on the constrained ones. `control` holds `u` at the
/// assembly quadrature points.
pub fn solve_state(system: &AssembledSystem<'_>, control: &[f64]) -> Result<Vec<f64>, ControlError> {
    check_len(control, system.cache.num_points())?;
    let n = system.num_dofs();
    let fu = assemble_weighted_load(n, &system.cache, |q, _| control[q]);
    let g = system.dirichlet_vector();
    let ag = system.a.mul_vec(&g);
    let rhs: Vec<f64> = (0..n)
        .map(|i| system.f1[i] + fu[i] + system.face_rhs[i] - ag[i])
        .collect();
    let mut y = solve_free(system, &rhs)?;
    for (&c, &v) in system.constrained.iter().zip(&system.dirichlet_values) {
        y[c] = v;
    }
    Ok(y)
}

/// Solves `A p = M y - F2` on the free entries with homogeneous boundary values.
pub fn solve_costate(system: &AssembledSystem<'_>, y: &[f64]) -> Result<Vec<f64>, ControlError> {
    check_len(y, system.num_dofs())?;
    let my = system.m.mul_vec(y);
    let rhs: Vec<f64> = my.iter().zip(&system.f2).map(|(a, b)| a - b).collect();
    solve_free(system, &rhs)
}

/// `A_FF x_F = rhs_F`, zero on the constrained entries.
fn solve_free(system: &AssembledSystem<'_>, rhs: &[f64]) -> Result<Vec<f64>, ControlError> {
    let free = &system.free;
    let aff = system.a.submatrix(free, free);
    let b: Vec<f64> = free.iter().map(|&i| rhs[i]).collect();
    let x = SparseLu::factor(&aff)?.solve(&b)?;
    let mut out = vec![0.0; system.num_dofs()];
    for (&i, v) in free.iter().zip(x) {
        out[i] = v;
    }
    Ok(out)
}
