use super::{gauss_legendre, QuadratureError, QuadratureRule};
use crate::enrichment::geometry::{
    clip_segment, contains_closed, fan_from, fan_polygon, insert_on_boundary, polygon_area,
    split_by_line,
};
use crate::mesh::CornerGeometry;
use crate::scalar::{orient, Real, Vec2};
use crate::Point;

/// Pieces of a split element smaller than this are merged into the other side.
const SLIVER_AREA: f64 = 1e-14;
/// Gauss points across the angle of each tip sub-triangle.
const ANGULAR_POINTS: usize = 16;

/// Symmetric rule in barycentric coordinates: orbits of `(a, a, 1 - 2a)`
/// type and fully asymmetric `(a, b, 1 - a - b)` orbits, weights relative to area.
struct Orbits {
    centroid: Option<f64>,
    s21: &'static [(f64, f64)],
    s111: &'static [(f64, f64, f64)],
}

const DEG1: Orbits = Orbits { centroid: Some(1.0), s21: &[], s111: &[] };
const DEG2: Orbits = Orbits {
    centroid: None,
    s21: &[(1.0 / 6.0, 1.0 / 3.0)],
    s111: &[],
};
const DEG4: Orbits = Orbits {
    centroid: None,
    s21: &[
        (0.445948490915965, 0.223381589678011),
        (0.091576213509771, 0.109951743655322),
    ],
    s111: &[],
};
const DEG6: Orbits = Orbits {
    centroid: None,
    s21: &[
        (0.249286745170910, 0.116786275726379),
        (0.063089014491502, 0.050844906370207),
    ],
    s111: &[(0.053145049844817, 0.310352451033784, 0.082851075618374)],
};

fn radon_orbits<T: Real>() -> Vec<([T; 3], T)> {
    let s15 = T::lit(15.0).sqrt();
    let mut out = vec![([T::lit(1.0 / 3.0); 3], T::lit(0.225))];
    for sign in [-T::one(), T::one()] {
        let a = (T::lit(6.0) + sign * s15) / T::lit(21.0);
        let w = (T::lit(155.0) + sign * s15) / T::lit(1200.0);
        push_s21(&mut out, a, w);
    }
    out
}

fn push_s21<T: Real>(out: &mut Vec<([T; 3], T)>, a: T, w: T) {
    let b = T::one() - a - a;
    out.push(([b, a, a], w));
    out.push(([a, b, a], w));
    out.push(([a, a, b], w));
}

fn expand<T: Real>(o: &Orbits) -> Vec<([T; 3], T)> {
    let mut out = Vec::new();
    if let Some(w) = o.centroid {
        out.push(([T::lit(1.0 / 3.0); 3], T::lit(w)));
    }
    for &(a, w) in o.s21 {
        push_s21(&mut out, T::lit(a), T::lit(w));
    }
    for &(a, b, w) in o.s111 {
        let (a, b, w) = (T::lit(a), T::lit(b), T::lit(w));
        let c = T::one() - a - b;
        for l in [[a, b, c], [b, a, c], [a, c, b], [c, a, b], [b, c, a], [c, b, a]] {
            out.push((l, w));
        }
    }
    out
}

/// Standard rule exact for polynomials of total degree `degree` on `tri`.
///
/// Degrees 1 to 6 use symmetric rules with 1, 3, 6, 6, 7 and 12 points;
/// degrees 7 to 10 use a collapsed tensor Gauss rule.
pub fn standard_rule<T: Real>(tri: &[Vec2<T>; 3], degree: usize) -> Result<QuadratureRule<T>, QuadratureError> {
    let area = orient(tri[0], tri[1], tri[2]) / T::lit(2.0);
    let bary = match degree {
        1 => expand::<T>(&DEG1),
        2 => expand(&DEG2),
        3 | 4 => expand(&DEG4),
        5 => radon_orbits(),
        6 => expand(&DEG6),
        7..=10 => {
            let n = gauss_points(degree);
            return Ok(collapsed_rule(tri, n, n, None));
        }
        _ => return Err(QuadratureError::UnsupportedDegree(degree)),
    };
    let mut rule = QuadratureRule::new();
    for (l, w) in bary {
        let p = [
            l[0] * tri[0][0] + l[1] * tri[1][0] + l[2] * tri[2][0],
            l[0] * tri[0][1] + l[1] * tri[1][1] + l[2] * tri[2][1],
        ];
        rule.push(p, w * area);
    }
    Ok(rule)
}

fn gauss_points(degree: usize) -> usize {
    (degree + 2).div_ceil(2)
}

/// Collapsed Gauss rule with apex `tri[0]`: `x = a + u (b - a) + u v (c - b)`,
/// Jacobian `2 |T| u`, `nu` by `nv` Gauss points, `u` restricted to
/// `[lo, hi]` when given.
fn collapsed_rule<T: Real>(
    tri: &[Vec2<T>; 3],
    nu: usize,
    nv: usize,
    range: Option<(T, T)>,
) -> QuadratureRule<T> {
    let two_area = orient(tri[0], tri[1], tri[2]);
    let (x, w) = gauss_legendre::<T>(nu);
    let (y, wy) = gauss_legendre::<T>(nv);
    let (lo, hi) = range.unwrap_or((T::zero(), T::one()));
    let [a, b, c] = *tri;
    let mut rule = QuadratureRule::new();
    for (&su, &wu) in x.iter().zip(&w) {
        let u = lo + su * (hi - lo);
        for (&v, &wv) in y.iter().zip(&wy) {
            let p = [
                a[0] + u * (b[0] - a[0]) + u * v * (c[0] - b[0]),
                a[1] + u * (b[1] - a[1]) + u * v * (c[1] - b[1]),
            ];
            rule.push(p, wu * (hi - lo) * wv * two_area * u);
        }
    }
    rule
}

/// Rule for an element traversed by the crack: the element is split along
/// the crack line, each side is fan-triangulated and gets a standard rule.
pub fn cut_element_rule(
    tri: &[Point; 3],
    geom: &CornerGeometry,
    degree: usize,
) -> Result<QuadratureRule<f64>, QuadratureError> {
    let crack = geom.crack.ok_or(QuadratureError::NotCut)?;
    if clip_segment(tri, crack.origin, geom.tip).is_none() {
        return Err(QuadratureError::NotCut);
    }
    if degree == 0 || degree > 10 {
        return Err(QuadratureError::UnsupportedDegree(degree));
    }
    let (pos, neg) = split_by_line(tri, geom.tip, crack.normal());
    if polygon_area(&pos) < SLIVER_AREA || polygon_area(&neg) < SLIVER_AREA {
        return standard_rule(tri, degree);
    }
    let mut rule = QuadratureRule::new();
    for piece in [pos, neg] {
        for sub in fan_polygon(&piece) {
            if orient(sub[0], sub[1], sub[2]) / 2.0 < SLIVER_AREA {
                continue;
            }
            rule.extend(standard_rule(&sub, degree)?);
        }
    }
    Ok(rule)
}

/// Rule for an element whose closure contains the tip.
///
/// The element is fanned from the tip (with the crack exit point inserted
/// when the crack runs through it, so that no sub-triangle straddles the
/// crack). Each sub-triangle is collapsed onto the tip and split into layers
/// `[2^-(k+1), 2^-k]` of the radial parameter for `k < levels`, plus the
/// innermost layer; every layer gets a tensor Gauss rule of the given degree.
pub fn tip_graded_rule(
    tri: &[Point; 3],
    geom: &CornerGeometry,
    levels: usize,
    degree: usize,
) -> Result<QuadratureRule<f64>, QuadratureError> {
    if !contains_closed(tri, geom.tip) {
        return Err(QuadratureError::TipOutsideElement);
    }
    if degree == 0 || degree > 10 {
        return Err(QuadratureError::UnsupportedDegree(degree));
    }
    let mut poly = tri.to_vec();
    if let Some(crack) = geom.crack {
        if let Some(piece) = clip_segment(tri, crack.origin, geom.tip) {
            insert_on_boundary(&mut poly, piece[0]);
        }
    }
    // In the angular direction the integrand of a radial power behaves like
    // a power of |b - a + v (c - b)|, analytic but with complex poles close
    // to [0, 1], so it needs more points than the polynomial degree suggests.
    let nu = gauss_points(degree).max(ANGULAR_POINTS / 2);
    let nv = gauss_points(degree).max(ANGULAR_POINTS);
    let mut rule = QuadratureRule::new();
    for sub in fan_from(geom.tip, &poly) {
        let mut hi = 1.0;
        for _ in 0..levels {
            let lo = 0.5 * hi;
            rule.extend(collapsed_rule(&sub, nu, nv, Some((lo, hi))));
            hi = lo;
        }
        rule.extend(collapsed_rule(&sub, nu, nv, Some((0.0, hi))));
    }
    Ok(rule)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::Crack;
    use proptest::prelude::*;

    const UNIT: [Point; 3] = [[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]];

    fn factorial(n: u32) -> f64 {
        (1..=n).map(f64::from).product()
    }

    /// Integral of l0^a l1^b l2^c over a triangle of area `area`.
    fn bary_moment(area: f64, a: u32, b: u32, c: u32) -> f64 {
        2.0 * area * factorial(a) * factorial(b) * factorial(c) / factorial(a + b + c + 2)
    }

    fn bary(tri: &[Point; 3], p: Point) -> [f64; 3] {
        let two = orient(tri[0], tri[1], tri[2]);
        [
            orient(p, tri[1], tri[2]) / two,
            orient(tri[0], p, tri[2]) / two,
            orient(tri[0], tri[1], p) / two,
        ]
    }

    #[test]
    fn centroid_rule() {
        let r = standard_rule(&UNIT, 1).unwrap();
        assert_eq!(r.len(), 1);
        assert!((r.points[0][0] - 1.0 / 3.0).abs() < 1e-16);
        assert!((r.weights[0] - 0.5).abs() < 1e-16);
    }

    #[test]
    fn cubic_moment() {
        let r = standard_rule(&UNIT, 3).unwrap();
        let q = r.integrate(|p| p[0] * p[0] * p[1]);
        assert!((q - 1.0 / 60.0).abs() < 1e-15);
    }

    #[test]
    fn exact_up_to_degree() {
        let tri = [[0.3, -0.2], [1.7, 0.4], [0.1, 1.1]];
        let area = orient(tri[0], tri[1], tri[2]) / 2.0;
        for degree in 1..=10 {
            let r = standard_rule(&tri, degree).unwrap();
            for a in 0..=degree as u32 {
                for b in 0..=(degree as u32 - a) {
                    let c = degree as u32 - a - b;
                    let q = r.integrate(|p| {
                        let l = bary(&tri, p);
                        l[0].powi(a as i32) * l[1].powi(b as i32) * l[2].powi(c as i32)
                    });
                    let exact = bary_moment(area, a, b, c);
                    assert!((q - exact).abs() < 1e-12 * exact, "deg {degree} ({a},{b},{c})");
                }
            }
        }
        assert_eq!(standard_rule(&tri, 11), Err(QuadratureError::UnsupportedDegree(11)));
        assert_eq!(standard_rule(&tri, 0), Err(QuadratureError::UnsupportedDegree(0)));
    }

    #[test]
    fn single_precision_rule() {
        let tri: [[f32; 2]; 3] = [[0.0, 0.0], [2.0, 0.0], [0.0, 1.0]];
        let r = standard_rule(&tri, 6).unwrap();
        assert!((r.total_weight() - 1.0).abs() < 1e-6);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]
        #[test]
        fn weights_sum_to_area(
            x in proptest::array::uniform6(-5.0f64..5.0),
            degree in 1usize..=10,
        ) {
            let mut tri = [[x[0], x[1]], [x[2], x[3]], [x[4], x[5]]];
            let mut two = orient(tri[0], tri[1], tri[2]);
            prop_assume!(two.abs() > 1e-3);
            if two < 0.0 {
                tri.swap(1, 2);
                two = -two;
            }
            let r = standard_rule(&tri, degree).unwrap();
            prop_assert!(r.weights.iter().all(|&w| w > 0.0));
            prop_assert!((r.total_weight() - two / 2.0).abs() <= 1e-12 * two);
        }
    }

    fn horizontal_crack(tip: Point) -> CornerGeometry {
        let mut g = CornerGeometry::crack_square();
        g.tip = tip;
        g.crack = Some(Crack { origin: [tip[0] - 10.0, tip[1]], dir: [-1.0, 0.0] });
        g
    }

    #[test]
    fn bisected_element() {
        let tri = [[0.0, -1.0], [1.0, 0.0], [0.0, 1.0]];
        let g = horizontal_crack([5.0, 0.0]);
        let r = cut_element_rule(&tri, &g, 6).unwrap();
        let up: f64 = r.iter().filter(|(p, _)| p[1] > 0.0).map(|(_, w)| w).sum();
        let down: f64 = r.iter().filter(|(p, _)| p[1] < 0.0).map(|(_, w)| w).sum();
        assert!((up - 0.5).abs() < 1e-14 && (down - 0.5).abs() < 1e-14);
        assert!(r.points.iter().all(|p| p[1].abs() > 1e-14));
        let h = r.integrate(|p| if p[1] >= 0.0 { 1.0 } else { -1.0 });
        assert!(h.abs() < 1e-12);
        let far = horizontal_crack([5.0, 3.0]);
        assert_eq!(cut_element_rule(&tri, &far, 6), Err(QuadratureError::NotCut));
    }

    /// Polygon area and centroid by the shoelace formula.
    fn area_centroid(poly: &[Point]) -> (f64, Point) {
        let (mut a, mut cx, mut cy) = (0.0, 0.0, 0.0);
        for k in 0..poly.len() {
            let p = poly[k];
            let q = poly[(k + 1) % poly.len()];
            let c = p[0] * q[1] - q[0] * p[1];
            a += c;
            cx += (p[0] + q[0]) * c;
            cy += (p[1] + q[1]) * c;
        }
        (a / 2.0, [cx / (3.0 * a), cy / (3.0 * a)])
    }

    #[test]
    fn hat_times_heaviside_on_cut_element() {
        let tri = [[-0.3, -0.2], [0.4, 0.1], [-0.1, 0.5]];
        let g = horizontal_crack([2.0, 0.05]);
        let r = cut_element_rule(&tri, &g, 6).unwrap();
        let hat = |p: Point| bary(&tri, p)[1];
        let q = r.integrate(|p| hat(p) * if p[1] >= 0.05 { 1.0 } else { -1.0 });
        // exact pieces cut by y = 0.05, listed counter-clockwise
        let x_on = |a: Point, b: Point| a[0] + (0.05 - a[1]) / (b[1] - a[1]) * (b[0] - a[0]);
        let e1 = [x_on(tri[0], tri[1]), 0.05];
        let e2 = [x_on(tri[2], tri[0]), 0.05];
        let (a_lo, c_lo) = area_centroid(&[tri[0], e1, e2]);
        let (a_hi, c_hi) = area_centroid(&[e1, tri[1], tri[2], e2]);
        let exact = a_hi * hat(c_hi) - a_lo * hat(c_lo);
        assert!((q - exact).abs() < 1e-10, "{q} {exact}");
    }

    /// Integral of r^p over the unit right triangle with the tip at the
    /// origin, in polar form: int_0^{pi/2} R(t)^{p+2}/(p+2) dt with
    /// R(t) = 1/(cos t + sin t), by composite Gauss on the smooth integrand.
    fn radial_oracle(p: f64) -> f64 {
        let (x, w) = gauss_legendre::<f64>(20);
        let panels = 64;
        let h = std::f64::consts::FRAC_PI_2 / panels as f64;
        let mut s = 0.0;
        for k in 0..panels {
            for (xi, wi) in x.iter().zip(&w) {
                let t = (k as f64 + xi) * h;
                let r = 1.0 / (t.cos() + t.sin());
                s += wi * h * r.powf(p + 2.0) / (p + 2.0);
            }
        }
        s
    }

    fn no_crack_tip(tip: Point) -> CornerGeometry {
        let mut g = CornerGeometry::three_quarter_disk();
        g.tip = tip;
        g
    }

    #[test]
    fn graded_singular_integrals() {
        let g = no_crack_tip([0.0, 0.0]);
        let r = tip_graded_rule(&UNIT, &g, 12, 6).unwrap();
        assert!((r.total_weight() - 0.5).abs() < 1e-14);
        let rad = |p: Point| p[0].hypot(p[1]);
        let q = r.integrate(|p| rad(p).powf(-0.5));
        let exact = radial_oracle(-0.5);
        assert!((q - exact).abs() < 1e-8 * exact, "{q} {exact}");
        // |grad S_1/2|^2 = 1/(4 r)
        let q = r.integrate(|p| 0.25 / rad(p));
        let exact = 0.25 * radial_oracle(-1.0);
        assert!((q - exact).abs() < 1e-6 * exact, "{q} {exact}");
    }

    #[test]
    fn graded_smooth_matches_standard() {
        let tri = [[-0.2, -0.1], [0.5, 0.0], [0.1, 0.6]];
        let g = no_crack_tip([0.1, 0.1]);
        let r = tip_graded_rule(&tri, &g, 12, 6).unwrap();
        let s = standard_rule(&tri, 6).unwrap();
        let f = |p: Point| (1.0 + p[0] - 2.0 * p[1]).powi(4) * (0.5 + p[0] * p[1]);
        assert!((r.integrate(f) - s.integrate(f)).abs() < 1e-10);
        assert!(matches!(
            tip_graded_rule(&tri, &no_crack_tip([3.0, 0.0]), 12, 6),
            Err(QuadratureError::TipOutsideElement)
        ));
    }

    #[test]
    fn graded_refinement_stability() {
        for (tip, beta) in [([0.0, 0.0], 0.5), ([0.25, 0.0], 2.0 / 3.0), ([0.2, 0.3], 2.0 / 3.0)] {
            let g = no_crack_tip(tip);
            let f = |p: Point| {
                let r = (p[0] - tip[0]).hypot(p[1] - tip[1]);
                beta * beta * r.powf(2.0 * beta - 2.0)
            };
            let a = tip_graded_rule(&UNIT, &g, 12, 6).unwrap().integrate(f);
            let b = tip_graded_rule(&UNIT, &g, 24, 6).unwrap().integrate(f);
            assert!((a - b).abs() < 1e-8 * b, "tip {tip:?} beta {beta}: {a} {b}");
        }
    }

    #[test]
    fn graded_with_crack_tip_on_edge() {
        // tip on the hypotenuse, crack coming in from the left through the interior
        let tri = [[-1.0, -1.0], [1.0, -1.0], [-1.0, 1.0]];
        let g = horizontal_crack([0.0, 0.0]);
        let r = tip_graded_rule(&tri, &g, 12, 6).unwrap();
        assert!((r.total_weight() - 2.0).abs() < 1e-13);
        let up: f64 = r.iter().filter(|(p, _)| p[1] > 0.0).map(|(_, w)| w).sum();
        assert!((up - 0.5).abs() < 1e-13);
        assert!(r.points.iter().all(|p| p[1].abs() > 1e-14));
    }
}
