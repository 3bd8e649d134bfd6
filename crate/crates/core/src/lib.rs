//! Extended finite element discretizations of box-constrained
//! linear-quadratic optimal control problems governed by elliptic equations
//! on planar domains with one re-entrant corner or crack.
//!
//! The state and costate are discretized either by a P1 space enriched with
//! one globally supported, cut-off singular function (`cut` XFEM), by a P1
//! space enriched with nodal singular functions on a fixed disk around the
//! tip (`classic` XFEM), or by plain P1 elements. On cracked domains nodes
//! whose support is split by the crack additionally carry Heaviside
//! enrichment. The control is not discretized: it is the pointwise clamp of
//! the scaled costate, and the optimality system is solved with a
//! semi-smooth Newton (primal-dual active set) iteration.

pub mod analysis;
pub mod assembly;
pub mod control;
pub mod enrichment;
pub mod linalg;
pub mod mesh;
pub mod quadrature;
pub mod scalar;
pub mod study;

mod error;

pub use error::Error;
pub use scalar::Real;

/// Points and vectors in the plane.
pub type Point = [f64; 2];
/// Quadrature rule in double precision.
pub type Rule = quadrature::QuadratureRule<f64>;
/// Compressed sparse matrix in double precision.
pub type Matrix = linalg::SparseMatrix<f64>;
/// Sparse LU factorization in double precision.
pub type Factorization = linalg::SparseLu<f64>;
