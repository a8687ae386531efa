//! The convex metric space abstraction.
//!
//! A convex metric space is a metric space `(X, d)` carrying a convex
//! structure `W : X × X × [0,1] → X` with
//!
//! ```text
//! d(u, W(x, y; t)) ≤ (1 − t)·d(u, x) + t·d(u, y)      for all u, x, y, t.
//! ```
//!
//! `W` plays the role of linear interpolation in spaces without a linear
//! structure. Two consequences used everywhere below: `d(x, W(x,y;t)) =
//! t·d(x,y)` and `d(y, W(x,y;t)) = (1−t)·d(x,y)`, so combinations sit on
//! metric segments between their endpoints.
//!
//! Each implementor supplies a single-valued selection of `W` (all concrete
//! geometries in this crate are single-valued) together with a seeded point
//! sampler used by the property verifiers.

use serde::Serialize;
use thiserror::Error;

use crate::sampling::SampleRng;
use crate::scalar::{cast, Scalar};

/// Errors from space operations and point construction.
#[derive(Debug, Error, PartialEq)]
pub enum SpaceError {
    #[error("interpolation parameter {0} outside [0, 1]")]
    ParamOutOfRange(f64),
    #[error("extension parameter {0} outside (0, 1)")]
    ExtensionParamOutOfRange(f64),
    #[error("space does not support segment extension")]
    ExtensionUnsupported,
    #[error("segment endpoints coincide (metric distance {0})")]
    DegenerateSegment(f64),
    #[error("invalid point: {0}")]
    InvalidPoint(String),
    #[error("space dimension must be at least 1")]
    ZeroDimension,
}

/// A metric space with a convex structure.
pub trait ConvexSpace<T: Scalar> {
    type Point: Clone + std::fmt::Debug + Send + Sync;

    /// Sampling dimensionality hint (number of degrees of freedom).
    fn dim_hint(&self) -> usize;

    /// The metric `d`.
    fn dist(&self, a: &Self::Point, b: &Self::Point) -> T;

    /// The convex structure `W(x, y; t)`. Callers must pass `t ∈ [0, 1]`;
    /// use [`combine_checked`] when `t` comes from untrusted input.
    fn combine(&self, x: &Self::Point, y: &Self::Point, t: T) -> Self::Point;

    /// Whether the geodesic-extension oracle is available.
    fn supports_extension(&self) -> bool {
        false
    }

    /// Extension oracle: a point `ξ` with `W(y, ξ; λ) = x`, when one exists
    /// inside the space. `None` signals the capability is absent or the
    /// extension would leave the space; callers must degrade gracefully.
    fn extend(&self, _y: &Self::Point, _x: &Self::Point, _lambda: T) -> Option<Self::Point> {
        None
    }

    /// Draw a point from the space's sampling region.
    fn sample(&self, rng: &mut SampleRng) -> Self::Point;
}

/// Blanket impls so boxed and borrowed spaces can be used interchangeably.
impl<T: Scalar, S: ConvexSpace<T> + ?Sized> ConvexSpace<T> for &S {
    type Point = S::Point;
    fn dim_hint(&self) -> usize {
        (**self).dim_hint()
    }
    fn dist(&self, a: &Self::Point, b: &Self::Point) -> T {
        (**self).dist(a, b)
    }
    fn combine(&self, x: &Self::Point, y: &Self::Point, t: T) -> Self::Point {
        (**self).combine(x, y, t)
    }
    fn supports_extension(&self) -> bool {
        (**self).supports_extension()
    }
    fn extend(&self, y: &Self::Point, x: &Self::Point, lambda: T) -> Option<Self::Point> {
        (**self).extend(y, x, lambda)
    }
    fn sample(&self, rng: &mut SampleRng) -> Self::Point {
        (**self).sample(rng)
    }
}

impl<T: Scalar, S: ConvexSpace<T> + ?Sized> ConvexSpace<T> for Box<S> {
    type Point = S::Point;
    fn dim_hint(&self) -> usize {
        (**self).dim_hint()
    }
    fn dist(&self, a: &Self::Point, b: &Self::Point) -> T {
        (**self).dist(a, b)
    }
    fn combine(&self, x: &Self::Point, y: &Self::Point, t: T) -> Self::Point {
        (**self).combine(x, y, t)
    }
    fn supports_extension(&self) -> bool {
        (**self).supports_extension()
    }
    fn extend(&self, y: &Self::Point, x: &Self::Point, lambda: T) -> Option<Self::Point> {
        (**self).extend(y, x, lambda)
    }
    fn sample(&self, rng: &mut SampleRng) -> Self::Point {
        (**self).sample(rng)
    }
}

/// `W(x, y; t)` with the domain check `t ∈ [0, 1]`.
pub fn combine_checked<T: Scalar, S: ConvexSpace<T>>(
    space: &S,
    x: &S::Point,
    y: &S::Point,
    t: T,
) -> Result<S::Point, SpaceError> {
    if t < T::zero() || t > T::one() {
        return Err(SpaceError::ParamOutOfRange(t.to_f64().unwrap_or(f64::NAN)));
    }
    Ok(space.combine(x, y, t))
}

/// Extension with the domain check `λ ∈ (0, 1)` and an explicit unsupported
/// signal.
pub fn extend_checked<T: Scalar, S: ConvexSpace<T>>(
    space: &S,
    y: &S::Point,
    x: &S::Point,
    lambda: T,
) -> Result<S::Point, SpaceError> {
    if lambda <= T::zero() || lambda >= T::one() {
        return Err(SpaceError::ExtensionParamOutOfRange(
            lambda.to_f64().unwrap_or(f64::NAN),
        ));
    }
    space.extend(y, x, lambda).ok_or(SpaceError::ExtensionUnsupported)
}

/// Numerical tolerances shared by the verifiers.
///
/// All inequality checks are relative: `lhs ≤ rhs` is accepted when
/// `(lhs − rhs) / (1 + |rhs|) ≤ eps_eq`. A strict inequality passes only
/// with margin: `(lhs − rhs) / (1 + |rhs|) ≤ −delta_strict`. Sampled pairs
/// closer than `degenerate` are skipped and counted.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct Tolerances<T> {
    pub eps_eq: T,
    pub delta_strict: T,
    pub degenerate: T,
}

impl<T: Scalar> Default for Tolerances<T> {
    fn default() -> Self {
        Self {
            eps_eq: cast(1e-9),
            delta_strict: cast(1e-7),
            degenerate: cast(1e-12),
        }
    }
}

impl<T: Scalar> Tolerances<T> {
    /// Normalized excess of `lhs ≤ rhs`; positive values are violations.
    #[inline]
    pub fn excess(&self, lhs: T, rhs: T) -> T {
        let e = (lhs - rhs) / (T::one() + rhs.abs());
        if e.is_nan() {
            T::infinity()
        } else {
            e
        }
    }

    /// Normalized deviation of `lhs = rhs`.
    #[inline]
    pub fn mismatch(&self, lhs: T, rhs: T) -> T {
        let e = (lhs - rhs).abs() / (T::one() + rhs.abs());
        if e.is_nan() {
            T::infinity()
        } else {
            e
        }
    }

    /// Metric-based point equality: `d(a, b) ≤ eps_eq`.
    pub fn points_eq<S: ConvexSpace<T>>(&self, space: &S, a: &S::Point, b: &S::Point) -> bool {
        space.dist(a, b) <= self.eps_eq
    }
}

/// Draw a point of the closed ball `B(center, radius)`.
///
/// A sampled ambient point provides the direction and the target distance
/// is uniform in `[0, radius]`. The point is reached by pulling in through
/// `W`, pushing out through the extension oracle when the direction falls
/// short, or extending past the center to cover the opposite side. Without
/// extension support the draw degrades to pulled-in ambient samples, which
/// are still members.
pub fn sample_ball_point<T: Scalar, S: ConvexSpace<T>>(
    space: &S,
    center: &S::Point,
    radius: T,
    rng: &mut SampleRng,
) -> S::Point {
    for _ in 0..8 {
        let z = space.sample(rng);
        let d = space.dist(center, &z);
        let u: T = cast(rng.unit());
        let target = u * radius;
        let flip = rng.unit() < 0.5;
        if d <= cast(1e-12) {
            if target <= d {
                return z;
            }
            continue; // no usable direction
        }
        if flip && target > cast(1e-12) {
            // the point at distance `target` on the far side of the center
            if let Some(xi) = space.extend(&z, center, d / (d + target)) {
                return xi;
            }
        }
        if target <= d {
            return space.combine(center, &z, target / d);
        }
        if let Some(xi) = space.extend(center, &z, d / target) {
            return xi;
        }
        return z;
    }
    center.clone()
}

/// A nondegenerate metric segment `{W(x, y; λ) : λ ∈ [0, 1]}`.
pub struct Segment<'a, T: Scalar, S: ConvexSpace<T>> {
    space: &'a S,
    x: S::Point,
    y: S::Point,
    length: T,
}

impl<'a, T: Scalar, S: ConvexSpace<T>> Segment<'a, T, S> {
    /// Rejects degenerate segments (`d(x, y) = 0` up to the tolerance).
    pub fn new(space: &'a S, x: S::Point, y: S::Point, tol: &Tolerances<T>) -> Result<Self, SpaceError> {
        let length = space.dist(&x, &y);
        if length <= tol.degenerate {
            return Err(SpaceError::DegenerateSegment(length.to_f64().unwrap_or(0.0)));
        }
        Ok(Self { space, x, y, length })
    }

    pub fn start(&self) -> &S::Point {
        &self.x
    }

    pub fn end(&self) -> &S::Point {
        &self.y
    }

    pub fn length(&self) -> T {
        self.length
    }

    /// `W(x, y; λ)` for `λ ∈ [0, 1]`.
    pub fn point_at(&self, lambda: T) -> Result<S::Point, SpaceError> {
        combine_checked(self.space, &self.x, &self.y, lambda)
    }

    /// Materialize the segment on `k` uniform parameters (endpoints included).
    pub fn uniform_points(&self, k: usize) -> Vec<S::Point> {
        if k == 1 {
            return vec![self.x.clone()];
        }
        (0..k)
            .map(|i| {
                let lambda = cast::<T>(i as f64 / (k - 1) as f64);
                self.space.combine(&self.x, &self.y, lambda)
            })
            .collect()
    }
}
