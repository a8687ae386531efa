//! Floating-point scalar abstraction used throughout the crate.

use num_traits as nt;

/// Scalar type the whole library is generic over: `f32` or `f64`.
pub trait Scalar:
    nt::Float + nt::FromPrimitive + nt::NumAssign + std::fmt::Debug + std::fmt::Display + Send + Sync + 'static
{
}

impl Scalar for f32 {}
impl Scalar for f64 {}

/// Shorthand for converting an `f64` constant into the working scalar type.
#[inline]
pub fn cast<T: Scalar>(x: f64) -> T {
    T::from_f64(x).expect("f64 constant not representable in scalar type")
}
