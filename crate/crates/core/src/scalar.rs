//! Scalar abstraction shared by the numerical kernels.

use std::fmt::{Debug, Display};
use std::iter::Sum;
use std::ops::{AddAssign, DivAssign, MulAssign, SubAssign};

use num_traits::{Float, FloatConst, FromPrimitive};

/// Real floating point scalar: `f32` or `f64`.
///
/// The quadrature, enrichment and sparse linear algebra kernels are written
/// against this trait. Mesh construction, assembly and the optimal control
/// driver work in `f64`, which the tolerances of the convergence studies
/// require.
pub trait Real:
    Float
    + FloatConst
    + FromPrimitive
    + Debug
    + Display
    + Default
    + Sum
    + AddAssign
    + SubAssign
    + MulAssign
    + DivAssign
    + Send
    + Sync
    + 'static
{
    /// Converts an `f64` literal, panicking only for values not representable at all.
    #[inline]
    fn lit(v: f64) -> Self {
        Self::from_f64(v).expect("literal representable in scalar type")
    }

    /// Converts a count or index.
    #[inline]
    fn count(n: usize) -> Self {
        Self::from_usize(n).expect("count representable in scalar type")
    }
}

impl<T> Real for T where
    T: Float
        + FloatConst
        + FromPrimitive
        + Debug
        + Display
        + Default
        + Sum
        + AddAssign
        + SubAssign
        + MulAssign
        + DivAssign
        + Send
        + Sync
        + 'static
{
}

/// 2D point or vector.
pub type Vec2<T> = [T; 2];

#[inline]
pub fn sub<T: Real>(a: Vec2<T>, b: Vec2<T>) -> Vec2<T> {
    [a[0] - b[0], a[1] - b[1]]
}

#[inline]
pub fn add<T: Real>(a: Vec2<T>, b: Vec2<T>) -> Vec2<T> {
    [a[0] + b[0], a[1] + b[1]]
}

#[inline]
pub fn scale<T: Real>(a: Vec2<T>, s: T) -> Vec2<T> {
    [a[0] * s, a[1] * s]
}

#[inline]
pub fn dot<T: Real>(a: Vec2<T>, b: Vec2<T>) -> T {
    a[0] * b[0] + a[1] * b[1]
}

#[inline]
pub fn cross<T: Real>(a: Vec2<T>, b: Vec2<T>) -> T {
    a[0] * b[1] - a[1] * b[0]
}

#[inline]
pub fn norm<T: Real>(a: Vec2<T>) -> T {
    a[0].hypot(a[1])
}

/// Twice the signed area of the triangle `(a, b, c)`; positive when counterclockwise.
#[inline]
pub fn orient<T: Real>(a: Vec2<T>, b: Vec2<T>, c: Vec2<T>) -> T {
    cross(sub(b, a), sub(c, a))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn orientation_sign() {
        assert!(orient([0.0, 0.0], [1.0, 0.0], [0.0, 1.0]) > 0.0);
        assert!(orient([0.0f32, 0.0], [0.0, 1.0], [1.0, 0.0]) < 0.0);
    }

    #[test]
    fn literal_conversion() {
        assert_eq!(<f32 as Real>::lit(0.5), 0.5f32);
        assert_eq!(<f64 as Real>::count(3), 3.0);
    }
}
