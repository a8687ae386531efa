//! The family of closed intervals `[a, b] ⊆ [0, 1]` under the Hausdorff
//! distance, with endpoint-wise linear interpolation as the convex
//! structure. For closed intervals the Hausdorff distance reduces to
//! `max(|a₁ − a₂|, |b₁ − b₂|)`.

use serde::{Deserialize, Serialize};

use crate::sampling::SampleRng;
use crate::scalar::Scalar;
use crate::space::{ConvexSpace, SpaceError};

/// A closed interval with `0 ≤ a ≤ b ≤ 1`. Out-of-range endpoints are
/// rejected rather than clamped, so caller bugs surface immediately.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interval<T> {
    pub a: T,
    pub b: T,
}

impl<T: Scalar> Interval<T> {
    pub fn new(a: T, b: T) -> Result<Self, SpaceError> {
        if !(T::zero() <= a && a <= b && b <= T::one()) {
            return Err(SpaceError::InvalidPoint(format!(
                "interval [{a}, {b}] must satisfy 0 <= a <= b <= 1"
            )));
        }
        Ok(Self { a, b })
    }

    pub fn length(&self) -> T {
        self.b - self.a
    }
}

/// Closed-form Hausdorff distance between two closed intervals.
pub fn hausdorff_interval_distance<T: Scalar>(i: &Interval<T>, j: &Interval<T>) -> T {
    (i.a - j.a).abs().max((i.b - j.b).abs())
}

/// The interval space.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct IntervalSpace<T> {
    _marker: std::marker::PhantomData<T>,
}

impl<T: Scalar> IntervalSpace<T> {
    pub fn new() -> Self {
        Self {
            _marker: std::marker::PhantomData,
        }
    }
}

impl<T: Scalar> ConvexSpace<T> for IntervalSpace<T> {
    type Point = Interval<T>;

    fn dim_hint(&self) -> usize {
        2
    }

    fn dist(&self, a: &Interval<T>, b: &Interval<T>) -> T {
        hausdorff_interval_distance(a, b)
    }

    fn combine(&self, x: &Interval<T>, y: &Interval<T>, t: T) -> Interval<T> {
        let s = T::one() - t;
        Interval {
            a: s * x.a + t * y.a,
            b: s * x.b + t * y.b,
        }
    }

    // Endpoint-wise extension can leave [0, 1] or break the endpoint order,
    // so the extension capability is left unsupported here.

    fn sample(&self, rng: &mut SampleRng) -> Interval<T> {
        let u: T = rng.uniform(0.0, 1.0);
        let v: T = rng.uniform(0.0, 1.0);
        Interval {
            a: u.min(v),
            b: u.max(v),
        }
    }
}
