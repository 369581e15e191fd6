//! Good triples and doubly ruled parameterized surfaces in compact
//! matrix Lie groups with bi-invariant metrics.
//!
//! A triple `{X, V, A}` in the Lie algebra is *good* when the two
//! exponential parameterizations built from its induced Jacobi fields
//! sweep out the same surface. This crate decides goodness by several
//! independent routes (a finite Krylov-bracket certificate, a series
//! condition, a left/right frequency test, and a direct numerical
//! surface comparison), constructs the known example families, and
//! provides the supporting spectral and Jacobi-field machinery.
//!
//! The core is generic over the real scalar type; `f64` aliases are
//! exported at the root for everyday use.

pub mod algebra;
pub mod error;
pub mod io;
pub mod jacobi;
pub mod scalar;
pub mod spectral;
pub mod tol;
pub mod triples;

pub use algebra::{
    curvature, exp_matrix, is_subalgebra, random_vector, riemannian_exp, sectional_curvature,
    AlgebraRef, AlgebraVector, Family, GroupElement, LieAlgebra,
};
pub use error::{Error, Result};
pub use scalar::Real;

/// Concrete `f64` aliases.
pub type Algebra64 = algebra::LieAlgebra<f64>;
pub type AlgebraRef64 = algebra::AlgebraRef<f64>;
pub type Vector64 = algebra::AlgebraVector<f64>;
pub type Group64 = algebra::GroupElement<f64>;
pub type Spectral64 = spectral::SpectralDecomposition<f64>;
pub type Roots64 = spectral::RootDecomposition<f64>;
pub type Jacobi64 = jacobi::JacobiField<f64>;
pub type Triple64 = triples::Triple<f64>;
pub type Verdict64 = triples::Verdict<f64>;
