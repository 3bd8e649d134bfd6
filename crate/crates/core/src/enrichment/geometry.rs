//! Planar predicates on triangles and convex polygons.

use crate::mesh::GEOM_TOL;
use crate::scalar::{cross, dot, norm, orient, sub};
use crate::Point;

/// Signed distances (positive inside) of `p` to the three edges of a CCW triangle.
pub fn edge_distances(tri: &[Point; 3], p: Point) -> [f64; 3] {
    let mut d = [0.0; 3];
    for k in 0..3 {
        let a = tri[k];
        let b = tri[(k + 1) % 3];
        let e = sub(b, a);
        d[k] = cross(e, sub(p, a)) / norm(e);
    }
    d
}

/// Whether `p` lies in the closed triangle within [`GEOM_TOL`].
pub fn contains_closed(tri: &[Point; 3], p: Point) -> bool {
    edge_distances(tri, p).iter().all(|&d| d >= -GEOM_TOL)
}

/// Whether `p` lies strictly inside the triangle, at least `GEOM_TOL` from every edge.
pub fn contains_open(tri: &[Point; 3], p: Point) -> bool {
    edge_distances(tri, p).iter().all(|&d| d > GEOM_TOL)
}

/// Euclidean distance from `p` to the closed triangle.
pub fn distance_to_triangle(tri: &[Point; 3], p: Point) -> f64 {
    if contains_closed(tri, p) {
        return 0.0;
    }
    (0..3)
        .map(|k| distance_to_segment(tri[k], tri[(k + 1) % 3], p))
        .fold(f64::INFINITY, f64::min)
}

pub fn distance_to_segment(a: Point, b: Point, p: Point) -> f64 {
    let e = sub(b, a);
    let len2 = dot(e, e);
    let t = if len2 > 0.0 {
        (dot(sub(p, a), e) / len2).clamp(0.0, 1.0)
    } else {
        0.0
    };
    norm(sub(p, [a[0] + t * e[0], a[1] + t * e[1]]))
}

/// Part of the segment `from -> to` inside the triangle, if that part has
/// positive length and runs through the interior (a segment lying along an
/// edge does not count). Endpoints are returned in the order of the segment.
pub fn clip_segment(tri: &[Point; 3], from: Point, to: Point) -> Option<[Point; 2]> {
    let d = sub(to, from);
    let (mut t0, mut t1) = (0.0f64, 1.0f64);
    for k in 0..3 {
        let a = tri[k];
        let e = sub(tri[(k + 1) % 3], a);
        // inside when cross(e, p - a) >= 0
        let f0 = cross(e, sub(from, a));
        let df = cross(e, d);
        if df.abs() < 1e-300 {
            if f0 < 0.0 {
                return None;
            }
            continue;
        }
        let t = -f0 / df;
        if df > 0.0 {
            t0 = t0.max(t);
        } else {
            t1 = t1.min(t);
        }
    }
    if t1 <= t0 {
        return None;
    }
    let p0 = [from[0] + t0 * d[0], from[1] + t0 * d[1]];
    let p1 = [from[0] + t1 * d[0], from[1] + t1 * d[1]];
    if norm(sub(p1, p0)) <= GEOM_TOL {
        return None;
    }
    let mid = [0.5 * (p0[0] + p1[0]), 0.5 * (p0[1] + p1[1])];
    contains_open(tri, mid).then_some([p0, p1])
}

pub fn polygon_area(poly: &[Point]) -> f64 {
    let n = poly.len();
    if n < 3 {
        return 0.0;
    }
    0.5 * (0..n).map(|k| cross(poly[k], poly[(k + 1) % n])).sum::<f64>()
}

/// Splits a convex polygon by the line `{x : (x - origin) . normal = 0}` into
/// the parts with non-negative and negative signed distance.
pub fn split_by_line(poly: &[Point], origin: Point, normal: Point) -> (Vec<Point>, Vec<Point>) {
    let side = |p: Point| dot(sub(p, origin), normal);
    let mut pos = Vec::new();
    let mut neg = Vec::new();
    let n = poly.len();
    for k in 0..n {
        let a = poly[k];
        let b = poly[(k + 1) % n];
        let (sa, sb) = (side(a), side(b));
        if sa >= 0.0 {
            pos.push(a);
        }
        if sa <= 0.0 {
            neg.push(a);
        }
        if (sa > 0.0 && sb < 0.0) || (sa < 0.0 && sb > 0.0) {
            let t = sa / (sa - sb);
            let x = [a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])];
            pos.push(x);
            neg.push(x);
        }
    }
    (pos, neg)
}

/// Inserts `p` into the boundary of the CCW polygon if it lies on an edge and
/// is not already a vertex.
pub fn insert_on_boundary(poly: &mut Vec<Point>, p: Point) {
    if poly.iter().any(|&v| norm(sub(v, p)) <= GEOM_TOL) {
        return;
    }
    let n = poly.len();
    for k in 0..n {
        if distance_to_segment(poly[k], poly[(k + 1) % n], p) <= GEOM_TOL {
            poly.insert(k + 1, p);
            return;
        }
    }
}

/// Fan of triangles `(apex, v_k, v_k+1)` over the polygon edges not passing
/// through `apex`; `apex` must lie inside or on the boundary of the polygon.
pub fn fan_from(apex: Point, poly: &[Point]) -> Vec<[Point; 3]> {
    let n = poly.len();
    let mut fan = Vec::with_capacity(n);
    for k in 0..n {
        let a = poly[k];
        let b = poly[(k + 1) % n];
        if distance_to_segment(a, b, apex) <= GEOM_TOL {
            continue;
        }
        if orient(apex, a, b) > 0.0 {
            fan.push([apex, a, b]);
        }
    }
    fan
}

/// Fan triangulation of a convex polygon from its first vertex.
pub fn fan_polygon(poly: &[Point]) -> Vec<[Point; 3]> {
    (1..poly.len().saturating_sub(1))
        .map(|k| [poly[0], poly[k], poly[k + 1]])
        .filter(|t| orient(t[0], t[1], t[2]) > 0.0)
        .collect()
}
