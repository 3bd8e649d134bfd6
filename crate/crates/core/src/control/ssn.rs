use log::{debug, info};

use super::{control_at_points, labels_from_costate, ControlError, Label};
use crate::assembly::{assemble_active_load, assemble_indicator_mass, AssembledSystem};
use crate::linalg::{LuOptions, SparseBuilder, SparseLu};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SsnOptions {
    pub max_iterations: usize,
    /// Stop when the L2 change of the control between iterates falls below this.
    pub step_tol: f64,
}

impl Default for SsnOptions {
    fn default() -> Self {
        SsnOptions { max_iterations: 50, step_tol: 1e-12 }
    }
}

/// Result of the active-set iteration.
#[derive(Debug, Clone)]
pub struct Solution {
    pub y: Vec<f64>,
    pub p: Vec<f64>,
    /// Labels at the assembly quadrature points, consistent with `p`.
    pub labels: Vec<Label>,
    /// Number of coupled solves.
    pub iterations: usize,
    pub converged: bool,
    /// Objective of each iterate, its control taken from the labels it was solved with.
    pub objective: Vec<f64>,
}

impl Solution {
    pub fn count(&self, label: Label) -> usize {
        self.labels.iter().filter(|&&l| l == label).count()
    }
}

/// Solves the optimality system with the labels held fixed:
///
/// `A Y + M_I P / alpha = F1 + b_active`, `-M Y + A P = -F2`
///
/// where `M_I` is the mass matrix over the inactive points and `b_active`
/// integrates the bounds over the active points. The unknowns are the free
/// entries of `Y` and `P`, interleaved.
pub fn solve_at_labels(system: &AssembledSystem<'_>, labels: &[Label]) -> Result<(Vec<f64>, Vec<f64>), ControlError> {
    let npts = system.cache.num_points();
    if labels.len() != npts {
        return Err(ControlError::Length { expected: npts, found: labels.len() });
    }
    let n = system.num_dofs();
    let free = &system.free;
    let nf = free.len();
    let mut pos = vec![usize::MAX; n];
    for (k, &i) in free.iter().enumerate() {
        pos[i] = k;
    }

    let m_inactive = assemble_indicator_mass(n, &system.cache, |q| labels[q] == Label::Inactive);
    let b_active = assemble_active_load(n, &system.cache, labels, system.lower.as_ref(), system.upper.as_ref());
    let g = system.dirichlet_vector();
    let ag = system.a.mul_vec(&g);
    let mg = system.m.mul_vec(&g);

    let inv_alpha = 1.0 / system.alpha;
    let mut b = SparseBuilder::with_capacity(2 * nf, 2 * nf, 2 * system.a.nnz() + 2 * system.m.nnz());
    for (i, j, v) in system.a.iter() {
        if pos[i] != usize::MAX && pos[j] != usize::MAX {
            b.add(2 * pos[i], 2 * pos[j], v)?;
            b.add(2 * pos[i] + 1, 2 * pos[j] + 1, v)?;
        }
    }
    for (i, j, v) in system.m.iter() {
        if pos[i] != usize::MAX && pos[j] != usize::MAX {
            b.add(2 * pos[i] + 1, 2 * pos[j], -v)?;
        }
    }
    for (i, j, v) in m_inactive.iter() {
        if pos[i] != usize::MAX && pos[j] != usize::MAX {
            b.add(2 * pos[i], 2 * pos[j] + 1, inv_alpha * v)?;
        }
    }
    let kkt = b.finalize();
    let mut rhs = vec![0.0; 2 * nf];
    for (k, &i) in free.iter().enumerate() {
        rhs[2 * k] = system.f1[i] + b_active[i] + system.face_rhs[i] - ag[i];
        rhs[2 * k + 1] = -system.f2[i] + mg[i];
    }

    let opts = LuOptions { orderings: coordinate_orderings(system), ..LuOptions::default() };
    let x = SparseLu::factor_with(&kkt, &opts)?.solve(&rhs)?;
    let mut y = g;
    let mut p = vec![0.0; n];
    for (k, &i) in free.iter().enumerate() {
        y[i] = x[2 * k];
        p[i] = x[2 * k + 1];
    }
    Ok((y, p))
}

/// Interleaved state/costate orderings sweeping the free entries by
/// location, row by row and column by column.
fn coordinate_orderings(system: &AssembledSystem<'_>) -> Vec<Vec<usize>> {
    let loc = system.space.dof_locations();
    let mut out = Vec::new();
    for axis in [1usize, 0] {
        let mut ks: Vec<usize> = (0..system.free.len()).collect();
        ks.sort_by(|&a, &b| {
            let (pa, pb) = (loc[system.free[a]], loc[system.free[b]]);
            pa[axis]
                .total_cmp(&pb[axis])
                .then(pa[1 - axis].total_cmp(&pb[1 - axis]))
                .then(a.cmp(&b))
        });
        out.push(ks.iter().flat_map(|&k| [2 * k, 2 * k + 1]).collect());
    }
    out
}

/// `1/2 |y_h - y_d|^2 + alpha/2 |u_h|^2` by the assembly quadrature, with
/// `u_h = P(-p_h/alpha)`.
pub fn objective(system: &AssembledSystem<'_>, y: &[f64], p: &[f64]) -> f64 {
    objective_with(system, y, &control_at_points(system, p))
}

/// Control of an active-set iterate: the bound on active points, `-p_h/alpha` elsewhere.
/// The state of the coupled solve is exactly the state of this control.
fn control_at_labels(system: &AssembledSystem<'_>, labels: &[Label], p: &[f64]) -> Vec<f64> {
    let pv = system.cache.values_of(p);
    labels
        .iter()
        .enumerate()
        .map(|(q, l)| match l {
            Label::Inactive => -pv[q] / system.alpha,
            Label::Lower => system.lower_at.as_ref().map_or(f64::NEG_INFINITY, |b| b[q]),
            Label::Upper => system.upper_at.as_ref().map_or(f64::INFINITY, |b| b[q]),
        })
        .collect()
}

fn objective_with(system: &AssembledSystem<'_>, y: &[f64], u: &[f64]) -> f64 {
    let yv = system.cache.values_of(y);
    system
        .cache
        .iter_points()
        .enumerate()
        .map(|(q, (_, _, x, w))| {
            let d = yv[q] - system.target.eval(x, None);
            0.5 * w * (d * d + system.alpha * u[q] * u[q])
        })
        .sum()
}

fn l2_distance(system: &AssembledSystem<'_>, a: &[f64], b: &[f64]) -> f64 {
    system
        .cache
        .iter_points()
        .enumerate()
        .map(|(q, (_, _, _, w))| w * (a[q] - b[q]).powi(2))
        .sum::<f64>()
        .sqrt()
}

/// Primal-dual active set iteration starting from all points inactive.
///
/// Stops when the labels derived from the new costate equal the labels used
/// to compute it, or when the control changes by less than `step_tol` in L2.
pub fn ssn_solve(system: &AssembledSystem<'_>, opts: &SsnOptions) -> Result<Solution, ControlError> {
    let mut labels = vec![Label::Inactive; system.cache.num_points()];
    let mut history: Vec<Vec<Label>> = vec![labels.clone()];
    let mut objective_history = Vec::new();
    let mut previous_u: Option<Vec<f64>> = None;
    for iteration in 1..=opts.max_iterations {
        let (y, p) = solve_at_labels(system, &labels)?;
        let next = labels_from_costate(system, &p);
        objective_history.push(objective_with(system, &y, &control_at_labels(system, &labels, &p)));
        let u = control_at_points(system, &p);
        let step = previous_u.as_ref().map(|prev| l2_distance(system, prev, &u));
        debug!(
            "active-set iteration {iteration}: {} lower, {} upper, control step {:?}",
            next.iter().filter(|&&l| l == Label::Lower).count(),
            next.iter().filter(|&&l| l == Label::Upper).count(),
            step
        );
        if next == labels || step.is_some_and(|s| s < opts.step_tol) {
            info!("active-set iteration converged after {iteration} solves");
            return Ok(Solution {
                y,
                p,
                labels: next,
                iterations: iteration,
                converged: true,
                objective: objective_history,
            });
        }
        if let Some(previous) = history.iter().position(|h| *h == next) {
            return Err(ControlError::Cycling { iteration, previous });
        }
        history.push(next.clone());
        labels = next;
        previous_u = Some(u);
    }
    Err(ControlError::NotConverged { iterations: opts.max_iterations })
}
