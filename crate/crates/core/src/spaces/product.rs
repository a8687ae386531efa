//! The `d₁` product of two convex metric spaces: the sum metric with the
//! coordinatewise convex structure.

use crate::sampling::SampleRng;
use crate::scalar::Scalar;
use crate::space::ConvexSpace;

/// Product space `X × Y` with `d₁((x₁,y₁),(x₂,y₂)) = d_X(x₁,x₂) + d_Y(y₁,y₂)`
/// and `W` acting on each component with the same parameter.
#[derive(Debug, Clone)]
pub struct Product<L, R> {
    left: L,
    right: R,
}

impl<L, R> Product<L, R> {
    pub fn new(left: L, right: R) -> Self {
        Self { left, right }
    }

    pub fn left(&self) -> &L {
        &self.left
    }

    pub fn right(&self) -> &R {
        &self.right
    }
}

impl<T, L, R> ConvexSpace<T> for Product<L, R>
where
    T: Scalar,
    L: ConvexSpace<T>,
    R: ConvexSpace<T>,
{
    type Point = (L::Point, R::Point);

    fn dim_hint(&self) -> usize {
        self.left.dim_hint() + self.right.dim_hint()
    }

    fn dist(&self, a: &Self::Point, b: &Self::Point) -> T {
        self.left.dist(&a.0, &b.0) + self.right.dist(&a.1, &b.1)
    }

    fn combine(&self, x: &Self::Point, y: &Self::Point, t: T) -> Self::Point {
        (self.left.combine(&x.0, &y.0, t), self.right.combine(&x.1, &y.1, t))
    }

    fn supports_extension(&self) -> bool {
        self.left.supports_extension() && self.right.supports_extension()
    }

    fn extend(&self, y: &Self::Point, x: &Self::Point, lambda: T) -> Option<Self::Point> {
        Some((
            self.left.extend(&y.0, &x.0, lambda)?,
            self.right.extend(&y.1, &x.1, lambda)?,
        ))
    }

    fn sample(&self, rng: &mut SampleRng) -> Self::Point {
        (self.left.sample(rng), self.right.sample(rng))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spaces::{Euclidean, Norm};

    #[test]
    fn sum_metric() {
        let line = Euclidean::<f64>::new(1, Norm::L2).unwrap();
        let p = Product::new(line.clone(), line);
        assert_eq!(p.dist(&(vec![0.0], vec![0.0]), &(vec![3.0], vec![4.0])), 7.0);
    }

    #[test]
    fn combine_is_coordinatewise_and_endpoint_exact() {
        let line = Euclidean::<f64>::new(1, Norm::L2).unwrap();
        let plane = Euclidean::<f64>::new(2, Norm::L2).unwrap();
        let p = Product::new(plane, line);
        let x = (vec![0.0, 1.0], vec![2.0]);
        let y = (vec![4.0, -1.0], vec![0.0]);
        assert_eq!(p.combine(&x, &y, 0.0), x);
        assert_eq!(p.combine(&x, &y, 1.0), y);
        assert_eq!(p.combine(&x, &y, 0.5), (vec![2.0, 0.0], vec![1.0]));
    }

    #[test]
    fn extension_needs_both_components() {
        let line = Euclidean::<f64>::new(1, Norm::L2).unwrap();
        let ivs = crate::spaces::IntervalSpace::<f64>::new();
        let with_ext = Product::new(line.clone(), line.clone());
        assert!(with_ext.supports_extension());
        let without = Product::new(line, ivs);
        assert!(!without.supports_extension());
    }
}
