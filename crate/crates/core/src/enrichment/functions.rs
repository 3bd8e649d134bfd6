use crate::mesh::{AngularSense, CornerGeometry, Face};
use crate::scalar::{Real, Vec2};

/// Polar coordinates about the corner plus the local orthonormal frame.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Polar<T> {
    pub r: T,
    pub theta: T,
    /// Unit radial direction (arbitrary at the tip).
    pub e_r: Vec2<T>,
    /// Unit direction of increasing `theta`.
    pub e_theta: Vec2<T>,
    /// The point coincides with the tip; `theta` was set to 0.
    pub at_tip: bool,
}

impl<T: Real> Polar<T> {
    /// Frame at radius `r` and angle `theta` in the convention of `geom`.
    pub fn from_angle(r: T, theta: T, geom: &CornerGeometry) -> Self {
        let start = T::lit(geom.edge_angle_start);
        let phi = match geom.sense {
            AngularSense::CounterClockwise => start + theta,
            AngularSense::Clockwise => start - theta,
        };
        let e_r = [phi.cos(), phi.sin()];
        Polar {
            r,
            theta,
            e_r,
            e_theta: tangent(e_r, geom.sense),
            at_tip: r == T::zero(),
        }
    }

    /// Cartesian point described by this frame.
    pub fn point(&self, geom: &CornerGeometry) -> Vec2<T> {
        [
            T::lit(geom.tip[0]) + self.r * self.e_r[0],
            T::lit(geom.tip[1]) + self.r * self.e_r[1],
        ]
    }

    /// Cartesian gradient from polar partial derivatives `d/dr` and `d/dtheta`.
    pub fn gradient(&self, d_r: T, d_theta: T) -> Vec2<T> {
        let t = d_theta / self.r;
        [
            d_r * self.e_r[0] + t * self.e_theta[0],
            d_r * self.e_r[1] + t * self.e_theta[1],
        ]
    }
}

fn tangent<T: Real>(e_r: Vec2<T>, sense: AngularSense) -> Vec2<T> {
    match sense {
        AngularSense::CounterClockwise => [-e_r[1], e_r[0]],
        AngularSense::Clockwise => [e_r[1], -e_r[0]],
    }
}

/// Polar coordinates of `point`. The angle lies in `[0, pi/beta]`; on a crack
/// the faces map to 0 (upper, Heaviside +1, includes points exactly on the
/// crack) and `2 pi` (lower). At the tip `r = 0`, `theta = 0` and `at_tip` is set.
pub fn polar_coords<T: Real>(point: Vec2<T>, geom: &CornerGeometry) -> Polar<T> {
    polar_impl(point, geom, None)
}

/// Like [`polar_coords`] for a point on the crack seen from the given face.
pub fn polar_coords_on_face<T: Real>(point: Vec2<T>, geom: &CornerGeometry, face: Face) -> Polar<T> {
    polar_impl(point, geom, Some(face))
}

pub(crate) fn polar_impl<T: Real>(
    point: Vec2<T>,
    geom: &CornerGeometry,
    face: Option<Face>,
) -> Polar<T> {
    let dx = point[0] - T::lit(geom.tip[0]);
    let dy = point[1] - T::lit(geom.tip[1]);
    let r = dx.hypot(dy);
    if r == T::zero() {
        return Polar {
            r,
            theta: T::zero(),
            e_r: [T::one(), T::zero()],
            e_theta: tangent([T::one(), T::zero()], geom.sense),
            at_tip: true,
        };
    }
    let e_r = [dx / r, dy / r];
    let phi = dy.atan2(dx);
    let start = T::lit(geom.edge_angle_start);
    let two_pi = T::TAU();
    let mut theta = match geom.sense {
        AngularSense::CounterClockwise => phi - start,
        AngularSense::Clockwise => start - phi,
    };
    theta = theta % two_pi;
    if theta < T::zero() {
        theta += two_pi;
    }
    if theta >= two_pi {
        theta -= two_pi;
    }

    let opening = T::PI() / T::lit(geom.beta);
    if geom.crack.is_some() {
        match face {
            Some(Face::Upper) if theta > T::PI() => theta = T::zero(),
            Some(Face::Lower) if theta < T::PI() => theta = two_pi,
            _ => {}
        }
    } else if theta > opening {
        // outside the sector by round-off: snap to the nearer edge
        theta = if theta - opening < two_pi - theta {
            opening
        } else {
            T::zero()
        };
    }
    Polar {
        r,
        theta,
        e_r,
        e_theta: tangent(e_r, geom.sense),
        at_tip: false,
    }
}

/// `r^beta sin(beta theta)` and its Cartesian gradient. The gradient is `None` at the tip.
pub fn singular_eval<T: Real>(beta: T, polar: &Polar<T>) -> (T, Option<Vec2<T>>) {
    let Polar { r, theta, .. } = *polar;
    if r == T::zero() {
        return (T::zero(), None);
    }
    let rb = r.powf(beta);
    let (s, c) = (beta * theta).sin_cos();
    let value = rb * s;
    let d_r = beta * rb / r * s;
    let d_theta = beta * rb * c;
    (value, Some(polar.gradient(d_r, d_theta)))
}

/// Radii of the cut-off transition, `0 < r0 < r1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CutoffSpec {
    pub r0: f64,
    pub r1: f64,
}

impl CutoffSpec {
    pub fn new(r0: f64, r1: f64) -> Option<Self> {
        (r0 > 0.0 && r1 > r0 && r1.is_finite()).then_some(CutoffSpec { r0, r1 })
    }
}

impl Default for CutoffSpec {
    fn default() -> Self {
        CutoffSpec { r0: 0.01, r1: 0.99 }
    }
}

/// Cut-off `chi(r)` and `d chi / dr`: 1 below `r0`, 0 above `r1`, and the
/// quintic smoothstep `1 - t^3 (10 - 15 t + 6 t^2)` with `t = (r - r0)/(r1 - r0)`
/// in between (twice continuously differentiable).
pub fn cutoff_eval<T: Real>(spec: &CutoffSpec, r: T) -> (T, T) {
    let r0 = T::lit(spec.r0);
    let r1 = T::lit(spec.r1);
    if r <= r0 {
        return (T::one(), T::zero());
    }
    if r >= r1 {
        return (T::zero(), T::zero());
    }
    let width = r1 - r0;
    let t = (r - r0) / width;
    let t2 = t * t;
    let chi = T::one() - t2 * t * (T::lit(10.0) - T::lit(15.0) * t + T::lit(6.0) * t2);
    let one_minus = T::one() - t;
    let dchi = -T::lit(30.0) * t2 * one_minus * one_minus / width;
    (chi, dchi)
}

/// Heaviside sign across the crack: +1 where `(x - tip) . n >= 0`, else -1.
/// Geometries without a crack give +1 everywhere.
pub fn heaviside<T: Real>(point: Vec2<T>, geom: &CornerGeometry) -> T {
    match geom.crack {
        None => T::one(),
        Some(crack) => {
            let n = crack.normal();
            let s = (point[0] - T::lit(geom.tip[0])) * T::lit(n[0])
                + (point[1] - T::lit(geom.tip[1])) * T::lit(n[1]);
            if s >= T::zero() {
                T::one()
            } else {
                -T::one()
            }
        }
    }
}

/// Heaviside sign of a point on a given crack face.
pub fn face_sign<T: Real>(face: Face) -> T {
    match face {
        Face::Upper => T::one(),
        Face::Lower => -T::one(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn crack() -> CornerGeometry {
        CornerGeometry::crack_square()
    }

    #[test]
    fn crack_polar_examples() {
        let p = polar_coords::<f64>([1.0, 0.0], &crack());
        assert!((p.r - 1.0).abs() < 1e-15 && (p.theta - PI).abs() < 1e-15);
        let p = polar_coords::<f64>([0.0, 1.0], &crack());
        assert!((p.r - 1.0).abs() < 1e-15 && (p.theta - PI / 2.0).abs() < 1e-15);
    }

    /// Independent oracle: rotate the point by the clockwise angle and compare
    /// with the upper crack direction.
    #[test]
    fn crack_angle_matches_rotation_oracle() {
        for k in 1..64 {
            let theta = 2.0 * PI * k as f64 / 64.0;
            let r = 0.3 + 0.01 * k as f64;
            // rotate (-1, 0) clockwise by theta
            let (s, c) = theta.sin_cos();
            let x = [r * (-c), r * s];
            let p = polar_coords(x, &crack());
            assert!((p.theta - theta).abs() < 1e-12, "theta {theta} got {}", p.theta);
        }
    }

    #[test]
    fn crack_faces() {
        let g = crack();
        assert_eq!(polar_coords([-0.5, 0.0], &g).theta, 0.0);
        assert_eq!(polar_coords_on_face([-0.5, 0.0], &g, Face::Lower).theta, 2.0 * PI);
        assert_eq!(polar_coords_on_face([-0.5, -0.0], &g, Face::Upper).theta, 0.0);
        assert!(polar_coords([-0.5, -1e-9], &g).theta > 2.0 * PI - 1e-8);
    }

    #[test]
    fn disk_polar() {
        let g = CornerGeometry::three_quarter_disk();
        let p = polar_coords([0.0, 1.0], &g);
        assert!((p.theta - PI / 2.0).abs() < 1e-15);
        let p = polar_coords([0.0, -1.0], &g);
        assert!((p.theta - 1.5 * PI).abs() < 1e-15);
        // round-off below the +x edge snaps to theta = 0
        let p = polar_coords([0.5, -1e-17], &g);
        assert_eq!(p.theta, 0.0);
    }

    #[test]
    fn tip_flagged() {
        let p = polar_coords([0.0, 0.0], &crack());
        assert!(p.at_tip && p.r == 0.0 && p.theta == 0.0);
        assert!(singular_eval(0.5, &p).1.is_none());
    }

    #[test]
    fn singular_examples() {
        let g = crack();
        let p = Polar::from_angle(1.0, PI, &g);
        assert!((singular_eval(0.5, &p).0 - 1.0).abs() < 1e-15);
        let d = CornerGeometry::three_quarter_disk();
        let p = Polar::from_angle(1.0, 1.5 * PI, &d);
        assert!(singular_eval(2.0 / 3.0, &p).0.abs() < 1e-15);
        for k in 0..10 {
            let p = Polar::from_angle(0.25, 0.6 * k as f64, &g);
            let (_, grad) = singular_eval(0.5, &p);
            let g = grad.unwrap();
            assert!(((g[0].hypot(g[1])) - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn singular_gradient_matches_finite_differences() {
        for geom in [crack(), CornerGeometry::three_quarter_disk()] {
            let beta = geom.beta;
            for &(x, y) in &[(0.3, 0.4), (-0.2, 0.7), (0.6, 0.1), (-0.5, -0.3)] {
                let x = [x, y];
                let p = polar_coords(x, &geom);
                let (_, grad) = singular_eval(beta, &p);
                let grad = grad.unwrap();
                let h = 1e-6;
                let f = |q: [f64; 2]| singular_eval(beta, &polar_coords(q, &geom)).0;
                let fx = (f([x[0] + h, x[1]]) - f([x[0] - h, x[1]])) / (2.0 * h);
                let fy = (f([x[0], x[1] + h]) - f([x[0], x[1] - h])) / (2.0 * h);
                assert!((fx - grad[0]).abs() < 1e-7 && (fy - grad[1]).abs() < 1e-7);
            }
        }
    }

    #[test]
    fn singular_in_f32() {
        let g = crack();
        let p: Polar<f32> = polar_coords([0.0f32, 1.0], &g);
        let (v, _) = singular_eval(0.5f32, &p);
        assert!((v - (PI as f32 / 4.0).sin()).abs() < 1e-6);
    }

    #[test]
    fn cutoff_examples() {
        let spec = CutoffSpec::default();
        assert_eq!(cutoff_eval(&spec, 0.005), (1.0, 0.0));
        assert_eq!(cutoff_eval(&spec, 1.5), (0.0, 0.0));
        let (chi, d) = cutoff_eval(&spec, 0.5f64);
        assert!((chi - 0.5).abs() < 1e-15);
        let expected = -15.0 / (8.0 * 0.98);
        assert!((d - expected).abs() < 1e-12);
        // central differences at step 1e-6
        let h = 1e-6f64;
        let fd = (cutoff_eval(&spec, 0.5f64 + h).0 - cutoff_eval(&spec, 0.5 - h).0) / (2.0 * h);
        assert!((fd - d).abs() < 1e-8);
        assert!((d + 1.913_265_306).abs() < 1e-8);
    }

    #[test]
    fn cutoff_is_c2_at_ends() {
        let spec = CutoffSpec::new(0.2, 0.7).unwrap();
        let h = 1e-6;
        for r in [0.2f64, 0.7] {
            let (_, dl) = cutoff_eval(&spec, r - h);
            let (_, dr) = cutoff_eval(&spec, r + h);
            assert!(dl.abs() < 1e-8 && dr.abs() < 1e-8);
        }
        for k in 1..50 {
            let r = 0.2 + 0.5 * k as f64 / 50.0;
            let (chi, _) = cutoff_eval(&spec, r);
            assert!(chi > 0.0 && chi < 1.0);
        }
        assert!(CutoffSpec::new(0.5, 0.4).is_none());
    }

    #[test]
    fn heaviside_examples() {
        let g = crack();
        assert_eq!(heaviside([-0.5, 0.3], &g), 1.0);
        assert_eq!(heaviside([-0.5, -0.3], &g), -1.0);
        assert_eq!(heaviside([-0.5, 0.0], &g), 1.0);
        assert_eq!(heaviside([-0.5f32, -0.3], &g), -1.0f32);
    }
}
