use std::fmt;
use std::sync::Arc;

use crate::mesh::Face;
use crate::Point;

type FieldFn = dyn Fn(Point, Option<Face>) -> f64 + Send + Sync;

/// Scalar field on the domain. On a crack the optional face selects the
/// one-sided value; elsewhere it is `None`.
#[derive(Clone)]
pub struct Field(Arc<FieldFn>);

impl Field {
    pub fn new<F>(f: F) -> Self
    where
        F: Fn(Point, Option<Face>) -> f64 + Send + Sync + 'static,
    {
        Field(Arc::new(f))
    }

    /// Field not depending on the crack face.
    pub fn from_fn<F>(f: F) -> Self
    where
        F: Fn(Point) -> f64 + Send + Sync + 'static,
    {
        Field(Arc::new(move |x, _| f(x)))
    }

    pub fn constant(c: f64) -> Self {
        Field(Arc::new(move |_, _| c))
    }

    pub fn zero() -> Self {
        Self::constant(0.0)
    }

    #[inline]
    pub fn eval(&self, x: Point, face: Option<Face>) -> f64 {
        (self.0)(x, face)
    }
}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("Field(..)")
    }
}
