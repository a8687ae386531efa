//! The space of closed balls `B(ξ, r)` in `ℝⁿ`, metrized by
//! `d(B₁, B₂) = ‖ξ₁ − ξ₂‖₂ + |r₁ − r₂|`, with `W` interpolating centers and
//! radii linearly. The classical statement fixes `n = 3`; the formula is
//! dimension-agnostic so the dimension is a parameter with default 3.

use serde::{Deserialize, Serialize};

use crate::sampling::SampleRng;
use crate::scalar::Scalar;
use crate::space::{ConvexSpace, SpaceError};

/// A closed ball descriptor: center and positive radius.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Ball<T> {
    pub center: Vec<T>,
    pub radius: T,
}

impl<T: Scalar> Ball<T> {
    pub fn new(center: Vec<T>, radius: T) -> Result<Self, SpaceError> {
        if radius <= T::zero() || radius.is_nan() {
            return Err(SpaceError::InvalidPoint(format!(
                "ball radius must be positive, got {radius}"
            )));
        }
        Ok(Self { center, radius })
    }
}

/// The space of closed balls in `ℝⁿ`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BallSpace<T> {
    dim: usize,
    _marker: std::marker::PhantomData<T>,
}

impl<T: Scalar> BallSpace<T> {
    pub fn new(dim: usize) -> Result<Self, SpaceError> {
        if dim == 0 {
            return Err(SpaceError::ZeroDimension);
        }
        Ok(Self {
            dim,
            _marker: std::marker::PhantomData,
        })
    }

    /// The dimension from the classical statement.
    pub fn standard() -> Self {
        Self::new(3).unwrap()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    fn center_dist(a: &[T], b: &[T]) -> T {
        a.iter()
            .zip(b)
            .fold(T::zero(), |acc, (x, y)| acc + (*x - *y) * (*x - *y))
            .sqrt()
    }
}

impl<T: Scalar> ConvexSpace<T> for BallSpace<T> {
    type Point = Ball<T>;

    fn dim_hint(&self) -> usize {
        self.dim + 1
    }

    fn dist(&self, a: &Ball<T>, b: &Ball<T>) -> T {
        Self::center_dist(&a.center, &b.center) + (a.radius - b.radius).abs()
    }

    fn combine(&self, x: &Ball<T>, y: &Ball<T>, t: T) -> Ball<T> {
        let s = T::one() - t;
        Ball {
            center: x
                .center
                .iter()
                .zip(&y.center)
                .map(|(a, b)| s * *a + t * *b)
                .collect(),
            radius: s * x.radius + t * y.radius,
        }
    }

    fn supports_extension(&self) -> bool {
        true
    }

    /// Linear extension in (center, radius); fails when the extended radius
    /// would leave the space.
    fn extend(&self, y: &Ball<T>, x: &Ball<T>, lambda: T) -> Option<Ball<T>> {
        if lambda <= T::zero() || lambda >= T::one() {
            return None;
        }
        let radius = y.radius + (x.radius - y.radius) / lambda;
        if radius <= T::zero() || radius.is_nan() {
            return None;
        }
        let center = y
            .center
            .iter()
            .zip(&x.center)
            .map(|(yi, xi)| *yi + (*xi - *yi) / lambda)
            .collect();
        Some(Ball { center, radius })
    }

    fn sample(&self, rng: &mut SampleRng) -> Ball<T> {
        Ball {
            center: (0..self.dim).map(|_| rng.uniform(-1.0, 1.0)).collect(),
            radius: rng.uniform(0.1, 2.1),
        }
    }
}
