use xfem_control::analysis::{error_norms_on, Benchmark, ControlLaw, ExactField, ExactTriple, Example};
use xfem_control::assembly::{Field, QuadCache};
use xfem_control::control::clamp;
use xfem_control::enrichment::{EnrichedSpace, EnrichmentConfig};
use xfem_control::mesh::{build_structured_crack_mesh, build_three_quarter_disk_mesh, CornerGeometry, Mesh};
use xfem_control::quadrature::{Purpose, QuadratureSettings};
use xfem_control::Point;

/// Five-point Laplacian with one Richardson step, O(h^4).
fn fd_laplacian(f: &ExactField, x: Point, h: f64) -> f64 {
    let lap = |h: f64| {
        (f.value([x[0] + h, x[1]], None)
            + f.value([x[0] - h, x[1]], None)
            + f.value([x[0], x[1] + h], None)
            + f.value([x[0], x[1] - h], None)
            - 4.0 * f.value(x, None))
            / (h * h)
    };
    (4.0 * lap(h / 2.0) - lap(h)) / 3.0
}

fn centroids(mesh: &Mesh) -> Vec<Point> {
    (0..mesh.num_triangles())
        .map(|t| {
            let v = mesh.vertices(t);
            [(v[0][0] + v[1][0] + v[2][0]) / 3.0, (v[0][1] + v[1][1] + v[2][1]) / 3.0]
        })
        .collect()
}

/// Sample points at least 0.05 from the tip whose stencils stay off the crack or outside edges.
fn sample_points(example: Example) -> Vec<Point> {
    match example {
        Example::Disk => centroids(&build_three_quarter_disk_mesh(0.1).unwrap())
            .into_iter()
            .filter(|x| {
                let r = x[0].hypot(x[1]);
                let near_edges = (x[0] > -0.02 && x[1] < 0.02) && (x[0] < 0.02 || x[1] > -0.02);
                r > 0.05 && r < 0.97 && !near_edges
            })
            .collect(),
        _ => centroids(&build_structured_crack_mesh(15, false).unwrap())
            .into_iter()
            .filter(|x| x[0].hypot(x[1]) > 0.05 && !(x[0] < 0.02 && x[1].abs() < 0.02))
            .collect(),
    }
}

#[test]
fn manufactured_data_solve_the_optimality_system() {
    for example in Example::ALL {
        let b = Benchmark::new(example);
        let e = &b.exact;
        let pts = sample_points(example);
        assert!(pts.len() > 50);
        for &x in &pts {
            let (y, p) = (e.y.value(x, None), e.p.value(x, None));
            let state = -fd_laplacian(&e.y, x, 2e-3) + b.reaction * y - e.u.eval(x, None) - e.source.eval(x, None);
            let costate = -fd_laplacian(&e.p, x, 2e-3) + b.reaction * p - y + e.target.eval(x, None);
            assert!(state.abs() < 1e-5, "{example} state residual {state} at {x:?}");
            assert!(costate.abs() < 1e-5, "{example} costate residual {costate} at {x:?}");
        }
    }
}

#[test]
fn gradients_match_differences() {
    let h = 1e-6;
    for example in Example::ALL {
        let b = Benchmark::new(example);
        for f in [&b.exact.y, &b.exact.p] {
            for &x in &sample_points(example) {
                let g = f.grad(x, None);
                let dx = (f.value([x[0] + h, x[1]], None) - f.value([x[0] - h, x[1]], None)) / (2.0 * h);
                let dy = (f.value([x[0], x[1] + h], None) - f.value([x[0], x[1] - h], None)) / (2.0 * h);
                assert!((g[0] - dx).abs() < 1e-6 && (g[1] - dy).abs() < 1e-6, "{example} at {x:?}");
            }
        }
    }
}

#[test]
fn control_is_the_clamped_costate() {
    for example in Example::ALL {
        let b = Benchmark::new(example);
        for &x in &sample_points(example) {
            let u = b.exact.u.eval(x, None);
            let p = b.exact.p.value(x, None);
            assert_eq!(u, clamp(p, b.alpha, b.lower_or_inf(), b.upper_or_inf()));
            if example == Example::Unconstrained {
                assert_eq!(u, -p / b.alpha);
            }
            if example == Example::Constrained {
                assert!(u.abs() <= 0.2);
            }
        }
    }
    let b = Benchmark::new(Example::Constrained);
    assert_eq!((b.alpha, b.lower, b.upper), (1.0, Some(-0.2), Some(0.2)));
    assert_eq!(Benchmark::new(Example::Unconstrained).alpha, 0.01);
    let d = Benchmark::new(Example::Disk);
    assert_eq!((d.alpha, d.reaction, d.lower, d.upper), (0.01, 1.0, Some(-0.3), Some(1.0)));
}

#[test]
fn boundary_data_is_the_state_trace() {
    let b = Benchmark::new(Example::Unconstrained);
    for k in 0..=40 {
        let s = -1.0 + k as f64 / 20.0;
        for x in [[s, -1.0], [s, 1.0], [-1.0, s], [1.0, s]] {
            assert_eq!(b.exact.dirichlet.eval(x, None), b.exact.y.value(x, None));
        }
    }
    // The disk state vanishes on the arc and both straight edges.
    let d = Benchmark::new(Example::Disk);
    for k in 1..40 {
        let t = k as f64 / 40.0;
        let a = t * 1.5 * std::f64::consts::PI;
        for x in [[a.cos(), a.sin()], [t, 0.0], [0.0, -t]] {
            assert!(d.exact.y.value(x, None).abs() < 1e-14, "{x:?}");
            assert!(d.exact.p.value(x, None).abs() < 1e-14);
        }
    }
}

#[test]
fn norm_of_a_coordinate_function() {
    let mesh = build_structured_crack_mesh(9, false).unwrap();
    let space = EnrichedSpace::new(&mesh, CornerGeometry::crack_square(), EnrichmentConfig::p1()).unwrap();
    let cache = QuadCache::build(&space, &QuadratureSettings::default(), Purpose::ErrorNorm, false);
    let x1 = ExactField::new(|x, _| x[0], |_, _| [1.0, 0.0]);
    let exact = ExactTriple {
        y: x1.clone(),
        p: x1.clone(),
        u: x1.as_field(),
        source: Field::zero(),
        target: Field::zero(),
        dirichlet: Field::zero(),
    };
    let zero = vec![0.0; space.dofmap().len()];
    let law = ControlLaw { alpha: 1.0, lower: f64::NEG_INFINITY, upper: f64::INFINITY };
    let n = error_norms_on(&cache, &zero, &zero, law, &exact);
    assert!((n.y_l2 - 2.0 / 3f64.sqrt()).abs() < 1e-12);
    assert!((n.y_h1 - 2.0).abs() < 1e-12);
    assert!((n.u_l2 - 2.0 / 3f64.sqrt()).abs() < 1e-12);
    assert!(n.relative().iter().all(|r| (r - 1.0).abs() < 1e-14));
}
