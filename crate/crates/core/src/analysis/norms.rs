use super::ExactTriple;
use crate::assembly::QuadCache;
use crate::control::clamp;
use crate::enrichment::EnrichedSpace;
use crate::quadrature::{Purpose, QuadratureSettings};

/// Absolute errors and exact-solution norms.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ErrorNorms {
    pub y_h1: f64,
    pub y_l2: f64,
    pub p_h1: f64,
    pub p_l2: f64,
    pub u_l2: f64,
    pub y_h1_exact: f64,
    pub y_l2_exact: f64,
    pub p_h1_exact: f64,
    pub p_l2_exact: f64,
    pub u_l2_exact: f64,
}

impl ErrorNorms {
    /// `|y - y_h|_1 / |y|_1`, `||y - y_h|| / ||y||`, the same for `p`, and
    /// `||u - u_h|| / ||u||`.
    pub fn relative(&self) -> [f64; 5] {
        [
            self.y_h1 / self.y_h1_exact,
            self.y_l2 / self.y_l2_exact,
            self.p_h1 / self.p_h1_exact,
            self.p_l2 / self.p_l2_exact,
            self.u_l2 / self.u_l2_exact,
        ]
    }
}

/// Bounds used to form the discrete control from the discrete costate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ControlLaw {
    pub alpha: f64,
    pub lower: f64,
    pub upper: f64,
}

/// Errors of a discrete state/costate pair against an exact triple, with
/// the discrete control formed pointwise from the costate.
pub fn error_norms(
    space: &EnrichedSpace<'_>,
    y: &[f64],
    p: &[f64],
    law: ControlLaw,
    exact: &ExactTriple,
    settings: &QuadratureSettings,
    parallel: bool,
) -> ErrorNorms {
    let cache = QuadCache::build(space, settings, Purpose::ErrorNorm, parallel);
    error_norms_on(&cache, y, p, law, exact)
}

/// [`error_norms`] on a prebuilt quadrature cache.
pub fn error_norms_on(cache: &QuadCache, y: &[f64], p: &[f64], law: ControlLaw, exact: &ExactTriple) -> ErrorNorms {
    let mut s = ErrorNorms::default();
    for e in cache.elements() {
        for q in 0..e.len() {
            let x = e.points[q];
            let w = e.weights[q];
            let (yh, gyh) = (e.value(q, y), e.gradient(q, y));
            let (ph, gph) = (e.value(q, p), e.gradient(q, p));
            let (ye, gye) = (exact.y.value(x, None), exact.y.grad(x, None));
            let (pe, gpe) = (exact.p.value(x, None), exact.p.grad(x, None));
            let ue = exact.u.eval(x, None);
            let uh = clamp(ph, law.alpha, law.lower, law.upper);
            s.y_h1 += w * ((gye[0] - gyh[0]).powi(2) + (gye[1] - gyh[1]).powi(2));
            s.y_l2 += w * (ye - yh).powi(2);
            s.p_h1 += w * ((gpe[0] - gph[0]).powi(2) + (gpe[1] - gph[1]).powi(2));
            s.p_l2 += w * (pe - ph).powi(2);
            s.u_l2 += w * (ue - uh).powi(2);
            s.y_h1_exact += w * (gye[0] * gye[0] + gye[1] * gye[1]);
            s.y_l2_exact += w * ye * ye;
            s.p_h1_exact += w * (gpe[0] * gpe[0] + gpe[1] * gpe[1]);
            s.p_l2_exact += w * pe * pe;
            s.u_l2_exact += w * ue * ue;
        }
    }
    for v in [
        &mut s.y_h1,
        &mut s.y_l2,
        &mut s.p_h1,
        &mut s.p_l2,
        &mut s.u_l2,
        &mut s.y_h1_exact,
        &mut s.y_l2_exact,
        &mut s.p_h1_exact,
        &mut s.p_l2_exact,
        &mut s.u_l2_exact,
    ] {
        *v = v.sqrt();
    }
    s
}
