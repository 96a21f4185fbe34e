//! Floating-point scalar abstraction for the solver kernels.

use std::fmt::{Debug, Display};

use num_traits::{Float, FloatConst, NumCast};

/// Scalar type the numerical kernels are generic over.
///
/// Implemented for `f32` and `f64`. Tolerances throughout the crate are
/// quoted at `f64` scale; `f32` runs the same code paths but cannot be
/// expected to meet them.
pub trait Scalar: Float + FloatConst + Debug + Display + Send + Sync + 'static {
    #[inline]
    fn from_f64(v: f64) -> Self {
        <Self as NumCast>::from(v).expect("f64 -> Scalar conversion")
    }

    #[inline]
    fn to_f64(self) -> f64 {
        num_traits::cast(self).expect("Scalar -> f64 conversion")
    }

    #[inline]
    fn from_usize(v: usize) -> Self {
        <Self as NumCast>::from(v).expect("usize -> Scalar conversion")
    }

    #[inline]
    fn two() -> Self {
        Self::one() + Self::one()
    }

    #[inline]
    fn half() -> Self {
        Self::one() / Self::two()
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}
