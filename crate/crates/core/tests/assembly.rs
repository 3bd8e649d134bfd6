use approx::assert_abs_diff_eq;
use xfem_control::assembly::{
    assemble, assemble_active_load, assemble_indicator_mass, assemble_load, assemble_mass, assemble_operator,
    trace_projection, ControlProblem, Field, Label, QuadCache,
};
use xfem_control::control::solve_state;
use xfem_control::enrichment::{CutoffSpec, EnrichedSpace, EnrichmentConfig, LocalFn};
use xfem_control::linalg::{LuOptions, SparseLu};
use xfem_control::mesh::{build_structured_crack_mesh, BoundaryEdge, BoundaryTag, CornerGeometry, Mesh};
use xfem_control::quadrature::{standard_rule, Purpose, QuadratureSettings};

fn unit_triangle() -> Mesh {
    let edge = |a, b| BoundaryEdge { nodes: [a, b], tag: BoundaryTag::Outer };
    Mesh::new(
        vec![[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]],
        vec![[0, 1, 2]],
        vec![edge(0, 1), edge(1, 2), edge(2, 0)],
    )
    .unwrap()
}

fn cache(space: &EnrichedSpace<'_>) -> QuadCache {
    QuadCache::build(space, &QuadratureSettings::default(), Purpose::Assembly, false)
}

#[test]
fn unit_triangle_stiffness_and_mass() {
    let mesh = unit_triangle();
    let space = EnrichedSpace::new(&mesh, CornerGeometry::three_quarter_disk(), EnrichmentConfig::p1()).unwrap();
    let c = cache(&space);
    let a = assemble_operator(3, &c, 0.0);
    let expect = [[1.0, -0.5, -0.5], [-0.5, 0.5, 0.0], [-0.5, 0.0, 0.5]];
    let m = assemble_mass(3, &c);
    let a1 = assemble_operator(3, &c, 1.0);
    for i in 0..3 {
        for j in 0..3 {
            assert_abs_diff_eq!(a.get(i, j), expect[i][j], epsilon = 1e-13);
            let mass = 0.5 * if i == j { 1.0 / 6.0 } else { 1.0 / 12.0 };
            assert_abs_diff_eq!(m.get(i, j), mass, epsilon = 1e-13);
            assert_abs_diff_eq!(a1.get(i, j), expect[i][j] + mass, epsilon = 1e-13);
        }
    }
}

#[test]
fn cut_operator_is_symmetric() {
    let mesh = build_structured_crack_mesh(9, false).unwrap();
    let pb = ControlProblem::new(CornerGeometry::crack_square(), EnrichmentConfig::cut(CutoffSpec::default()), 0.01);
    let sys = assemble(&mesh, &pb).unwrap();
    let tol = 1e-12 * sys.a.max_abs();
    assert!(sys.a.is_symmetric(tol));
    assert!(sys.m.is_symmetric(1e-12 * sys.m.max_abs()));
    assert_eq!(sys.a.nrows(), sys.space.dofmap().len());
}

#[test]
fn unit_load_sums_to_area() {
    let mesh = build_structured_crack_mesh(10, true).unwrap();
    let space = EnrichedSpace::new(&mesh, CornerGeometry::crack_square(), EnrichmentConfig::p1()).unwrap();
    let n = space.dofmap().len();
    let f = assemble_load(n, &cache(&space), &Field::constant(1.0));
    assert_abs_diff_eq!(f.iter().sum::<f64>(), 4.0, epsilon = 1e-12);
}

#[test]
fn indicator_masses_partition_the_mass() {
    let mesh = build_structured_crack_mesh(9, false).unwrap();
    let space = EnrichedSpace::new(
        &mesh,
        CornerGeometry::crack_square(),
        EnrichmentConfig::cut(CutoffSpec::default()),
    )
    .unwrap();
    let n = space.dofmap().len();
    let c = cache(&space);
    let m = assemble_mass(n, &c);
    let phi = |q: usize| (q * 7919) % 3 == 0;
    let m_in = assemble_indicator_mass(n, &c, phi);
    let m_out = assemble_indicator_mass(n, &c, |q| !phi(q));
    let sum = m_in.add_scaled(&m_out, 1.0);
    for (i, j, v) in m.iter() {
        assert!((sum.get(i, j) - v).abs() <= 1e-14, "({i},{j})");
    }
    let all = assemble_indicator_mass(n, &c, |_| true);
    for (i, j, v) in m.iter() {
        assert_eq!(all.get(i, j), v);
    }
    assert!(assemble_indicator_mass(n, &c, |_| false).iter().all(|(_, _, v)| v == 0.0));
}

#[test]
fn half_domain_indicator_mass() {
    let mesh = build_structured_crack_mesh(10, true).unwrap();
    let space = EnrichedSpace::new(&mesh, CornerGeometry::crack_square(), EnrichmentConfig::p1()).unwrap();
    let n = space.dofmap().len();
    let c = cache(&space);
    let pts: Vec<_> = c.iter_points().map(|(_, _, x, _)| x).collect();
    let m = assemble_indicator_mass(n, &c, |q| pts[q][0] < 0.0);
    // Element mass matrices of the triangles left of x = 0.
    let mut oracle = vec![vec![0.0; n]; n];
    for t in 0..mesh.num_triangles() {
        let v = mesh.vertices(t);
        if (v[0][0] + v[1][0] + v[2][0]) / 3.0 >= 0.0 {
            continue;
        }
        let tri = mesh.triangles()[t];
        let area = mesh.area(t);
        for a in 0..3 {
            for b in 0..3 {
                let i = space.dofmap().standard(tri[a]);
                let j = space.dofmap().standard(tri[b]);
                oracle[i][j] += area * if a == b { 1.0 / 6.0 } else { 1.0 / 12.0 };
            }
        }
    }
    for i in 0..n {
        for j in 0..n {
            assert!((m.get(i, j) - oracle[i][j]).abs() < 1e-8);
        }
    }
}

#[test]
fn active_load_cases() {
    let mesh = build_structured_crack_mesh(9, false).unwrap();
    let space = EnrichedSpace::new(
        &mesh,
        CornerGeometry::crack_square(),
        EnrichmentConfig::cut(CutoffSpec::default()),
    )
    .unwrap();
    let n = space.dofmap().len();
    let c = cache(&space);
    let lo = Field::constant(-0.5);
    let hi = Field::constant(1.0);
    let inactive = vec![Label::Inactive; c.num_points()];
    let b = assemble_active_load(n, &c, &inactive, Some(&lo), Some(&hi));
    assert!(b.iter().all(|&v| v == 0.0));
    let upper = vec![Label::Upper; c.num_points()];
    let b = assemble_active_load(n, &c, &upper, Some(&lo), Some(&hi));
    let f = assemble_load(n, &c, &Field::constant(1.0));
    for (x, y) in b.iter().zip(&f) {
        assert_abs_diff_eq!(*x, *y, epsilon = 1e-14);
    }
    // Half active: the lower bound on x < 0, inactive elsewhere.
    let pts: Vec<_> = c.iter_points().map(|(_, _, x, _)| x).collect();
    let labels: Vec<Label> = pts.iter().map(|x| if x[0] < 0.0 { Label::Lower } else { Label::Inactive }).collect();
    let b = assemble_active_load(n, &c, &labels, Some(&lo), Some(&hi));
    let oracle = xfem_control::assembly::assemble_weighted_load(n, &c, |_, x| if x[0] < 0.0 { -0.5 } else { 0.0 });
    for (x, y) in b.iter().zip(&oracle) {
        assert_abs_diff_eq!(*x, *y, epsilon = 1e-14);
    }
}

#[test]
fn trace_projection_zero_and_linear() {
    let mesh = build_structured_crack_mesh(6, true).unwrap();
    let space = EnrichedSpace::new(&mesh, CornerGeometry::crack_square(), EnrichmentConfig::p1()).unwrap();
    let g = trace_projection(&space, &Field::zero(), 6).unwrap();
    assert!(g.iter().all(|&v| v == 0.0));
    let lin = |x: [f64; 2]| 0.3 - 1.2 * x[0] + 2.5 * x[1];
    let g = trace_projection(&space, &Field::from_fn(move |x| lin(x)), 6).unwrap();
    let locs = space.dof_locations();
    for (&c, v) in space.dofmap().constrained().iter().zip(g) {
        assert_abs_diff_eq!(v, lin(locs[c]), epsilon = 1e-12);
    }
}

#[test]
fn linear_solution_is_reproduced() {
    let mesh = build_structured_crack_mesh(8, true).unwrap();
    let lin = |x: [f64; 2]| 1.0 + 2.0 * x[0] - 3.0 * x[1];
    let mut pb = ControlProblem::new(CornerGeometry::crack_square(), EnrichmentConfig::p1(), 1.0);
    pb.dirichlet = Field::from_fn(move |x| lin(x));
    let sys = assemble(&mesh, &pb).unwrap();
    let y = solve_state(&sys, &vec![0.0; sys.cache.num_points()]).unwrap();
    let locs = sys.space.dof_locations();
    for (i, x) in locs.iter().enumerate() {
        assert!((y[i] - lin(*x)).abs() < 1e-10, "dof {i}");
    }
    // Galerkin residual on the free entries.
    let r = sys.a.mul_vec(&y);
    let scale = sys.a.max_abs() * y.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    for &i in &sys.free {
        assert!((r[i] - sys.f1[i] - sys.face_rhs[i]).abs() < 1e-9 * scale);
    }
}

#[test]
fn nitsche_operator_has_positive_pivots() {
    let mesh = build_structured_crack_mesh(9, false).unwrap();
    for config in [EnrichmentConfig::cut(CutoffSpec::default()), EnrichmentConfig::classic(0.5)] {
        let pb = ControlProblem::new(CornerGeometry::crack_square(), config, 0.01);
        let sys = assemble(&mesh, &pb).unwrap();
        let aff = sys.a.submatrix(&sys.free, &sys.free);
        let lu = SparseLu::factor_with(&aff, &LuOptions { no_pivoting: true, ..Default::default() }).unwrap();
        assert!(lu.pivots().iter().all(|&p| p > 0.0), "{:?}", config.method);
    }
}

#[test]
fn enriched_element_mass_matches_subdivision_oracle() {
    let mesh = build_structured_crack_mesh(9, false).unwrap();
    let space = EnrichedSpace::new(
        &mesh,
        CornerGeometry::crack_square(),
        EnrichmentConfig::cut(CutoffSpec::default()),
    )
    .unwrap();
    let t = (0..mesh.num_triangles())
        .find(|&t| {
            let e = space.element(t);
            !e.is_cut() && e.r_min > 0.2 && e.local.iter().any(|f| matches!(f, LocalFn::Global { .. }))
        })
        .unwrap();
    let c = cache(&space);
    let e = c.element(t);
    let m = e.dofs.len();
    let mut local = vec![0.0; m * m];
    for q in 0..e.len() {
        let (v, _) = e.basis(q);
        for a in 0..m {
            for b in 0..m {
                local[a * m + b] += e.weights[q] * v[a] * v[b];
            }
        }
    }
    // Degree-6 rule on 4^4 subtriangles.
    let mut tris = vec![mesh.vertices(t)];
    for _ in 0..4 {
        let mut next = Vec::new();
        for [a, b, c] in tris {
            let mid = |p: [f64; 2], q: [f64; 2]| [(p[0] + q[0]) / 2.0, (p[1] + q[1]) / 2.0];
            let (ab, bc, ca) = (mid(a, b), mid(b, c), mid(c, a));
            next.extend([[a, ab, ca], [ab, b, bc], [ca, bc, c], [ab, bc, ca]]);
        }
        tris = next;
    }
    let mut oracle = vec![0.0; m * m];
    for tri in tris {
        for (x, w) in standard_rule(&tri, 6).unwrap().iter() {
            let vals = space.shape_eval(t, x).unwrap();
            for i in 0..m {
                for j in 0..m {
                    oracle[i * m + j] += w * vals[i].value * vals[j].value;
                }
            }
        }
    }
    for k in 0..m * m {
        assert!((local[k] - oracle[k]).abs() < 1e-8, "entry {k}: {} vs {}", local[k], oracle[k]);
    }
}
