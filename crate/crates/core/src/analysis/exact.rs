use std::fmt;
use std::sync::Arc;

use crate::assembly::{ControlProblem, Field};
use crate::control::clamp;
use crate::enrichment::{polar_impl, singular_eval, EnrichmentConfig};
use crate::mesh::{CornerGeometry, Face};
use crate::Point;

type ValueFn = dyn Fn(Point, Option<Face>) -> f64 + Send + Sync;
type GradFn = dyn Fn(Point, Option<Face>) -> Point + Send + Sync;

/// Closed-form field with its gradient.
#[derive(Clone)]
pub struct ExactField {
    value: Arc<ValueFn>,
    grad: Arc<GradFn>,
}

impl ExactField {
    pub fn new<V, G>(value: V, grad: G) -> Self
    where
        V: Fn(Point, Option<Face>) -> f64 + Send + Sync + 'static,
        G: Fn(Point, Option<Face>) -> Point + Send + Sync + 'static,
    {
        ExactField { value: Arc::new(value), grad: Arc::new(grad) }
    }

    pub fn value(&self, x: Point, face: Option<Face>) -> f64 {
        (self.value)(x, face)
    }

    pub fn grad(&self, x: Point, face: Option<Face>) -> Point {
        (self.grad)(x, face)
    }

    pub fn as_field(&self) -> Field {
        let v = self.value.clone();
        Field::new(move |x, face| v(x, face))
    }
}

impl fmt::Debug for ExactField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("ExactField(..)")
    }
}

/// Built-in manufactured test problems.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Example {
    /// Crack domain, no control bounds.
    Unconstrained,
    /// Crack domain, control bounds +-1/5.
    Constrained,
    /// Three-quarter disk with a reaction term.
    Disk,
}

impl Example {
    pub const ALL: [Example; 3] = [Example::Unconstrained, Example::Constrained, Example::Disk];

    pub fn as_str(self) -> &'static str {
        match self {
            Example::Unconstrained => "example1",
            Example::Constrained => "example2",
            Example::Disk => "example3",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|e| e.as_str() == s)
    }

    pub fn geometry(self) -> CornerGeometry {
        match self {
            Example::Unconstrained | Example::Constrained => CornerGeometry::crack_square(),
            Example::Disk => CornerGeometry::three_quarter_disk(),
        }
    }
}

impl fmt::Display for Example {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Exact state, costate and control of a benchmark with the data they induce.
#[derive(Debug, Clone)]
pub struct ExactTriple {
    pub y: ExactField,
    pub p: ExactField,
    pub u: Field,
    pub source: Field,
    pub target: Field,
    pub dirichlet: Field,
}

/// A benchmark: exact solution plus the problem data without discretization choices.
#[derive(Debug, Clone)]
pub struct Benchmark {
    pub example: Example,
    pub geom: CornerGeometry,
    pub alpha: f64,
    pub reaction: f64,
    pub lower: Option<f64>,
    pub upper: Option<f64>,
    pub exact: ExactTriple,
}

impl Benchmark {
    pub fn new(example: Example) -> Self {
        match example {
            Example::Unconstrained => crack_benchmark(example, 0.01, None),
            Example::Constrained => crack_benchmark(example, 1.0, Some(0.2)),
            Example::Disk => disk_benchmark(),
        }
    }

    /// Control problem for a discretization choice.
    pub fn problem(&self, config: EnrichmentConfig) -> ControlProblem {
        let mut pb = ControlProblem::new(self.geom, config, self.alpha);
        pb.reaction = self.reaction;
        pb.source = self.exact.source.clone();
        pb.target = self.exact.target.clone();
        pb.dirichlet = self.exact.dirichlet.clone();
        pb.lower = self.lower.map(Field::constant);
        pb.upper = self.upper.map(Field::constant);
        pb
    }

    pub fn lower_or_inf(&self) -> f64 {
        self.lower.unwrap_or(f64::NEG_INFINITY)
    }

    pub fn upper_or_inf(&self) -> f64 {
        self.upper.unwrap_or(f64::INFINITY)
    }
}

/// The three built-in benchmarks.
pub fn builtin_benchmarks() -> Vec<Benchmark> {
    Example::ALL.into_iter().map(Benchmark::new).collect()
}

/// `S`, `grad S`, `Laplace`-free: `r^beta sin(beta theta)` about the corner.
fn singular(geom: &CornerGeometry, x: Point, face: Option<Face>) -> (f64, Point) {
    let polar = polar_impl(x, geom, face);
    let (s, g) = singular_eval(geom.beta, &polar);
    (s, g.unwrap_or([0.0, 0.0]))
}

/// Crack benchmarks:
/// `y = S - r^2/4`, `p = x2^2 (1 - x2^2)(1 - x1^2) + S (1 - x1^2)(1 - x2^2) / 2`.
fn crack_benchmark(example: Example, alpha: f64, bound: Option<f64>) -> Benchmark {
    let geom = CornerGeometry::crack_square();
    let (lo, hi) = match bound {
        Some(b) => (-b, b),
        None => (f64::NEG_INFINITY, f64::INFINITY),
    };

    let y_value = move |x: Point, face: Option<Face>| {
        let (s, _) = singular(&geom, x, face);
        s - 0.25 * (x[0] * x[0] + x[1] * x[1])
    };
    let y_grad = move |x: Point, face: Option<Face>| {
        let (_, g) = singular(&geom, x, face);
        [g[0] - 0.5 * x[0], g[1] - 0.5 * x[1]]
    };
    let p_parts = move |x: Point, face: Option<Face>| -> (f64, Point, f64) {
        let (s, gs) = singular(&geom, x, face);
        let [x1, x2] = x;
        let (a, b) = (1.0 - x1 * x1, 1.0 - x2 * x2);
        let q = x2 * x2 * b * a;
        let gq = [x2 * x2 * b * (-2.0 * x1), (2.0 * x2 - 4.0 * x2.powi(3)) * a];
        let lq = -2.0 * x2 * x2 * b + (2.0 - 12.0 * x2 * x2) * a;
        let w = a * b;
        let gw = [-2.0 * x1 * b, -2.0 * x2 * a];
        let lw = -2.0 * b - 2.0 * a;
        let value = q + 0.5 * s * w;
        let grad = [
            gq[0] + 0.5 * (w * gs[0] + s * gw[0]),
            gq[1] + 0.5 * (w * gs[1] + s * gw[1]),
        ];
        // S is harmonic, so Laplace(S w) = 2 grad S . grad w + S Laplace w
        let lap = lq + 0.5 * (2.0 * (gs[0] * gw[0] + gs[1] * gw[1]) + s * lw);
        (value, grad, lap)
    };
    let control = move |x: Point, face: Option<Face>| clamp(p_parts(x, face).0, alpha, lo, hi);

    let exact = ExactTriple {
        y: ExactField::new(y_value, y_grad),
        p: ExactField::new(move |x, f| p_parts(x, f).0, move |x, f| p_parts(x, f).1),
        u: Field::new(control),
        // -Laplace y = 1
        source: Field::new(move |x, f| 1.0 - control(x, f)),
        target: Field::new(move |x, f| y_value(x, f) + p_parts(x, f).2),
        dirichlet: Field::new(y_value),
    };
    Benchmark {
        example,
        geom,
        alpha,
        reaction: 0.0,
        lower: bound.map(|b| -b),
        upper: bound,
        exact,
    }
}

/// Disk benchmark: `y = (r^(3/2) - r^(5/2)) sin(2 theta / 3)`, `p = alpha y`,
/// `-Laplace y + y = u + f`.
fn disk_benchmark() -> Benchmark {
    let geom = CornerGeometry::three_quarter_disk();
    let alpha = 0.01;
    let (lo, hi) = (-0.3, 1.0);
    let lambda = geom.beta;

    // value, gradient, Laplacian
    let y_parts = move |x: Point| -> (f64, Point, f64) {
        let polar = polar_impl(x, &geom, None);
        let r = polar.r;
        if r == 0.0 {
            return (0.0, [0.0, 0.0], 0.0);
        }
        let (s, c) = (lambda * polar.theta).sin_cos();
        let rad = r.powf(1.5) - r.powf(2.5);
        let d_rad = 1.5 * r.sqrt() - 2.5 * r.powf(1.5);
        let value = rad * s;
        let grad = polar.gradient(d_rad * s, lambda * rad * c);
        let lap = (65.0 / 36.0 / r.sqrt() - 209.0 / 36.0 * r.sqrt()) * s;
        (value, grad, lap)
    };
    let control = move |x: Point| clamp(alpha * y_parts(x).0, alpha, lo, hi);
    let exact = ExactTriple {
        y: ExactField::new(move |x, _| y_parts(x).0, move |x, _| y_parts(x).1),
        p: ExactField::new(
            move |x, _| alpha * y_parts(x).0,
            move |x, _| {
                let g = y_parts(x).1;
                [alpha * g[0], alpha * g[1]]
            },
        ),
        u: Field::from_fn(control),
        source: Field::from_fn(move |x| {
            let (v, _, lap) = y_parts(x);
            -lap + v - control(x)
        }),
        // -Laplace p + p = y - y_d
        target: Field::from_fn(move |x| {
            let (v, _, lap) = y_parts(x);
            v - alpha * (-lap + v)
        }),
        dirichlet: Field::zero(),
    };
    Benchmark {
        example: Example::Disk,
        geom,
        alpha,
        reaction: 1.0,
        lower: Some(lo),
        upper: Some(hi),
        exact,
    }
}
