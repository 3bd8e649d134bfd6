use rayon::prelude::*;

use crate::enrichment::EnrichedSpace;
use crate::quadrature::{select_rule, Purpose, QuadratureSettings};
use crate::Point;

/// Quadrature points of one element with the local basis evaluated there.
#[derive(Debug, Clone, Default)]
pub struct ElementQuad {
    /// Global entries of the local basis functions.
    pub dofs: Vec<usize>,
    pub points: Vec<Point>,
    pub weights: Vec<f64>,
    /// `values[q * dofs.len() + a]`.
    pub values: Vec<f64>,
    pub grads: Vec<Point>,
}

impl ElementQuad {
    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    #[inline]
    pub fn basis(&self, q: usize) -> (&[f64], &[Point]) {
        let n = self.dofs.len();
        (&self.values[q * n..(q + 1) * n], &self.grads[q * n..(q + 1) * n])
    }

    /// Value of the discrete function with global coefficients `c` at point `q`.
    pub fn value(&self, q: usize, c: &[f64]) -> f64 {
        let (v, _) = self.basis(q);
        self.dofs.iter().zip(v).map(|(&d, &b)| c[d] * b).sum()
    }

    pub fn gradient(&self, q: usize, c: &[f64]) -> Point {
        let (_, g) = self.basis(q);
        let mut out = [0.0, 0.0];
        for (&d, b) in self.dofs.iter().zip(g) {
            out[0] += c[d] * b[0];
            out[1] += c[d] * b[1];
        }
        out
    }
}

/// Element quadrature for a whole space, computed once and reused by every
/// assembly pass and by the active-set iteration, which labels exactly these
/// points.
#[derive(Debug, Clone)]
pub struct QuadCache {
    elements: Vec<ElementQuad>,
    offsets: Vec<usize>,
    purpose: Purpose,
}

impl QuadCache {
    pub fn build(
        space: &EnrichedSpace<'_>,
        settings: &QuadratureSettings,
        purpose: Purpose,
        parallel: bool,
    ) -> Self {
        let nt = space.mesh().num_triangles();
        let elements: Vec<ElementQuad> = if parallel {
            (0..nt)
                .into_par_iter()
                .map(|t| element_quad(space, settings, purpose, t))
                .collect()
        } else {
            (0..nt).map(|t| element_quad(space, settings, purpose, t)).collect()
        };
        let mut offsets = Vec::with_capacity(nt + 1);
        offsets.push(0);
        for e in &elements {
            offsets.push(offsets.last().copied().unwrap_or(0) + e.len());
        }
        QuadCache { elements, offsets, purpose }
    }

    pub fn purpose(&self) -> Purpose {
        self.purpose
    }

    pub fn elements(&self) -> &[ElementQuad] {
        &self.elements
    }

    pub fn element(&self, t: usize) -> &ElementQuad {
        &self.elements[t]
    }

    /// Index of the first point of element `t` in the global point numbering.
    pub fn offset(&self, t: usize) -> usize {
        self.offsets[t]
    }

    pub fn num_points(&self) -> usize {
        *self.offsets.last().unwrap_or(&0)
    }

    /// All points in global order: `(element, local index, point, weight)`.
    pub fn iter_points(&self) -> impl Iterator<Item = (usize, usize, Point, f64)> + '_ {
        self.elements.iter().enumerate().flat_map(|(t, e)| {
            e.points
                .iter()
                .zip(&e.weights)
                .enumerate()
                .map(move |(q, (&x, &w))| (t, q, x, w))
        })
    }

    /// Values of a discrete function at all points, in global order.
    pub fn values_of(&self, c: &[f64]) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.num_points());
        for e in &self.elements {
            for q in 0..e.len() {
                out.push(e.value(q, c));
            }
        }
        out
    }
}

fn element_quad(
    space: &EnrichedSpace<'_>,
    settings: &QuadratureSettings,
    purpose: Purpose,
    t: usize,
) -> ElementQuad {
    let info = space.element(t);
    let rule = select_rule(info, space.geometry(), space.config(), settings, purpose);
    let n = info.local.len();
    let mut out = ElementQuad {
        dofs: info.dofs().collect(),
        points: rule.points.clone(),
        weights: rule.weights.clone(),
        values: Vec::with_capacity(n * rule.len()),
        grads: Vec::with_capacity(n * rule.len()),
    };
    let mut v = Vec::with_capacity(n);
    let mut g = Vec::with_capacity(n);
    for &x in &rule.points {
        space.eval_local(t, x, None, &mut v, &mut g);
        out.values.extend_from_slice(&v);
        out.grads.extend_from_slice(&g);
    }
    out
}
