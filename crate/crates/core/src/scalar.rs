//! Scalar abstraction for the real field underlying every computation.
//!
//! All linear algebra is real: complex matrices are only the carrier
//! representation of the algebra elements, and every operator we
//! diagonalize (`ad_X`, `ad_X^2`) is real in the orthonormal basis.

use nalgebra::RealField;

/// Real scalar type the whole crate is generic over (`f32`, `f64`).
pub trait Real: RealField + Copy {}

impl<T: RealField + Copy> Real for T {}

/// Convert an `f64` literal into the working scalar type.
#[inline]
pub fn real<T: Real>(x: f64) -> T {
    nalgebra::convert(x)
}
