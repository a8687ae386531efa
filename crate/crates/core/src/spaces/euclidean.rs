//! Finite-dimensional normed spaces with the linear convex structure
//! `W(x, y; t) = (1 − t)x + t·y`.

use serde::{Deserialize, Serialize};

use crate::sampling::SampleRng;
use crate::scalar::Scalar;
use crate::space::{ConvexSpace, SpaceError};

/// Norm selector. `L2` gives the canonical strictly convex geometry; `L1`
/// and `LInf` are the standard non-strictly-convex counterparts used to
/// exhibit non-unique projections.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Norm {
    L1,
    L2,
    LInf,
}

/// `ℝⁿ` with an `ℓp` norm, `p ∈ {1, 2, ∞}`. Points are coordinate vectors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Euclidean<T> {
    dim: usize,
    norm: Norm,
    _marker: std::marker::PhantomData<T>,
}

impl<T: Scalar> Euclidean<T> {
    pub fn new(dim: usize, norm: Norm) -> Result<Self, SpaceError> {
        if dim == 0 {
            return Err(SpaceError::ZeroDimension);
        }
        Ok(Self {
            dim,
            norm,
            _marker: std::marker::PhantomData,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn norm_kind(&self) -> Norm {
        self.norm
    }

    pub fn norm_of(&self, v: &[T]) -> T {
        match self.norm {
            Norm::L1 => v.iter().fold(T::zero(), |acc, x| acc + x.abs()),
            Norm::L2 => v.iter().fold(T::zero(), |acc, x| acc + *x * *x).sqrt(),
            Norm::LInf => v.iter().fold(T::zero(), |acc, x| acc.max(x.abs())),
        }
    }
}

impl<T: Scalar> ConvexSpace<T> for Euclidean<T> {
    type Point = Vec<T>;

    fn dim_hint(&self) -> usize {
        self.dim
    }

    fn dist(&self, a: &Vec<T>, b: &Vec<T>) -> T {
        debug_assert_eq!(a.len(), self.dim);
        debug_assert_eq!(b.len(), self.dim);
        let diff: Vec<T> = a.iter().zip(b).map(|(x, y)| *x - *y).collect();
        self.norm_of(&diff)
    }

    fn combine(&self, x: &Vec<T>, y: &Vec<T>, t: T) -> Vec<T> {
        let s = T::one() - t;
        x.iter().zip(y).map(|(a, b)| s * *a + t * *b).collect()
    }

    fn supports_extension(&self) -> bool {
        true
    }

    /// `ξ = y + (x − y)/λ`, so that `W(y, ξ; λ) = x`.
    fn extend(&self, y: &Vec<T>, x: &Vec<T>, lambda: T) -> Option<Vec<T>> {
        if lambda <= T::zero() || lambda >= T::one() {
            return None;
        }
        Some(y.iter().zip(x).map(|(yi, xi)| *yi + (*xi - *yi) / lambda).collect())
    }

    fn sample(&self, rng: &mut SampleRng) -> Vec<T> {
        (0..self.dim).map(|_| rng.uniform(-1.0, 1.0)).collect()
    }
}
