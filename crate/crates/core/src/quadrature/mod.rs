//! Quadrature on triangles and segments: symmetric standard rules, rules for
//! elements split by the crack and geometrically graded rules toward the tip.

mod gauss;
mod triangle;

pub use gauss::gauss_legendre;
pub use triangle::{cut_element_rule, standard_rule, tip_graded_rule};

use thiserror::Error;

use crate::enrichment::{ElementInfo, EnrichmentConfig, Method};
use crate::mesh::CornerGeometry;
use crate::scalar::{Real, Vec2};
use crate::Point;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum QuadratureError {
    #[error("no triangle rule of degree {0} (supported: 1..=10)")]
    UnsupportedDegree(usize),
    #[error("the tip does not lie in the element")]
    TipOutsideElement,
    #[error("the crack does not cut the element")]
    NotCut,
}

/// Points and weights; weights carry the measure (area or length).
#[derive(Debug, Clone, PartialEq, Default)]
pub struct QuadratureRule<T> {
    pub points: Vec<Vec2<T>>,
    pub weights: Vec<T>,
}

impl<T: Real> QuadratureRule<T> {
    pub fn new() -> Self {
        QuadratureRule { points: Vec::new(), weights: Vec::new() }
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn push(&mut self, point: Vec2<T>, weight: T) {
        self.points.push(point);
        self.weights.push(weight);
    }

    pub fn extend(&mut self, other: QuadratureRule<T>) {
        self.points.extend(other.points);
        self.weights.extend(other.weights);
    }

    pub fn total_weight(&self) -> T {
        self.weights.iter().copied().sum()
    }

    pub fn integrate<F: FnMut(Vec2<T>) -> T>(&self, mut f: F) -> T {
        self.points.iter().zip(&self.weights).map(|(&p, &w)| w * f(p)).sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = (Vec2<T>, T)> + '_ {
        self.points.iter().copied().zip(self.weights.iter().copied())
    }
}

/// What a rule is used for; error norms integrate the singular exact
/// solutions and get a higher degree.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Purpose {
    Assembly,
    ErrorNorm,
}

/// Degrees and grading used by [`select_rule`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSettings {
    pub levels: usize,
    pub tip_degree: usize,
    pub enriched_degree: usize,
    pub far_degree: usize,
    pub error_boost: usize,
    /// Points per segment of the boundary rules.
    pub line_points: usize,
    /// Use this standard degree everywhere instead of the dispatch.
    pub fixed_degree: Option<usize>,
}

impl Default for QuadratureSettings {
    fn default() -> Self {
        QuadratureSettings {
            levels: 12,
            tip_degree: 6,
            enriched_degree: 6,
            far_degree: 4,
            error_boost: 2,
            line_points: 6,
            fixed_degree: None,
        }
    }
}

/// Which rule family [`select_rule`] picks for an element.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RuleKind {
    TipGraded,
    Cut,
    Enriched,
    Far,
}

pub fn rule_kind(info: &ElementInfo, config: &EnrichmentConfig) -> RuleKind {
    if info.tip_inside {
        RuleKind::TipGraded
    } else if info.is_cut() {
        RuleKind::Cut
    } else {
        let zone = match config.method {
            Method::ClassicXfem => info.r_min <= config.enrichment_radius,
            Method::CutXfem => info.r_min < config.cutoff.r1,
            Method::P1Plain => false,
        };
        if zone {
            RuleKind::Enriched
        } else {
            RuleKind::Far
        }
    }
}

/// Rule for one element of an enriched space.
pub fn select_rule(
    info: &ElementInfo,
    geom: &CornerGeometry,
    config: &EnrichmentConfig,
    settings: &QuadratureSettings,
    purpose: Purpose,
) -> QuadratureRule<f64> {
    let boost = match purpose {
        Purpose::Assembly => 0,
        Purpose::ErrorNorm => settings.error_boost,
    };
    let tri = info.vertices;
    if let Some(d) = settings.fixed_degree {
        return standard_rule(&tri, d).expect("fixed quadrature degree in 1..=10");
    }
    let rule = match rule_kind(info, config) {
        RuleKind::TipGraded => tip_graded_rule(&tri, geom, settings.levels, settings.tip_degree + boost),
        RuleKind::Cut => cut_element_rule(&tri, geom, settings.enriched_degree + boost),
        RuleKind::Enriched => standard_rule(&tri, settings.enriched_degree + boost),
        RuleKind::Far => standard_rule(&tri, settings.far_degree + boost),
    };
    rule.expect("dispatch only requests supported rules")
}

/// Gauss rule with `n` points on the segment `a`-`b`; weights are lengths.
pub fn line_rule(a: Point, b: Point, n: usize) -> QuadratureRule<f64> {
    let (x, w) = gauss_legendre::<f64>(n);
    let len = (b[0] - a[0]).hypot(b[1] - a[1]);
    let mut rule = QuadratureRule::new();
    for (s, ws) in x.into_iter().zip(w) {
        rule.push(lerp(a, b, s), ws * len);
    }
    rule
}

/// Gauss rule on `near`-`far`, graded geometrically toward `near`: layers
/// `[2^-(k+1), 2^-k]` of the parameter for `k < levels` and, on the innermost
/// piece, the substitution `s = h t^6`, which turns `s^(-1/2)` and
/// `s^(-1/3)` type singularities at `near` into polynomials.
pub fn graded_line_rule(near: Point, far: Point, levels: usize, n: usize) -> QuadratureRule<f64> {
    let (x, w) = gauss_legendre::<f64>(n);
    let len = (far[0] - near[0]).hypot(far[1] - near[1]);
    let mut rule = QuadratureRule::new();
    let mut hi = 1.0;
    for _ in 0..levels {
        let lo = 0.5 * hi;
        for (&s, &ws) in x.iter().zip(&w) {
            rule.push(lerp(near, far, lo + s * (hi - lo)), ws * (hi - lo) * len);
        }
        hi = lo;
    }
    for (&t, &wt) in x.iter().zip(&w) {
        rule.push(lerp(near, far, hi * t.powi(6)), wt * 6.0 * hi * t.powi(5) * len);
    }
    rule
}

fn lerp(a: Point, b: Point, s: f64) -> Point {
    [a[0] + s * (b[0] - a[0]), a[1] + s * (b[1] - a[1])]
}
