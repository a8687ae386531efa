//! Runtime-dispatch wrappers over the concrete space families.
//!
//! `SpaceKind`/`DynPoint` let configuration-driven callers (the CLI, the
//! built-in catalog) hold heterogeneous spaces behind one point type. The
//! statically-typed spaces remain the primary API; these wrappers just
//! delegate.

use serde::{Deserialize, Serialize};

use crate::sampling::SampleRng;
use crate::scalar::Scalar;
use crate::space::{ConvexSpace, SpaceError};
use crate::spaces::{Ball, BallSpace, Euclidean, Interval, IntervalSpace, Norm};

/// A point of any registered space family.
///
/// Serialized form matches the config schema: vectors as arrays, balls as
/// `{center, radius}`, intervals as `{a, b}`, product points as two-element
/// arrays of component payloads.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
#[serde(bound(serialize = "T: Serialize", deserialize = "T: serde::de::DeserializeOwned"))]
pub enum DynPoint<T> {
    Vector(Vec<T>),
    Ball(Ball<T>),
    Interval(Interval<T>),
    Pair(Box<DynPoint<T>>, Box<DynPoint<T>>),
}

impl<T: Scalar> DynPoint<T> {
    pub fn vector(coords: &[f64]) -> Self {
        DynPoint::Vector(coords.iter().map(|&c| crate::scalar::cast(c)).collect())
    }

    fn as_vector(&self) -> &Vec<T> {
        match self {
            DynPoint::Vector(v) => v,
            other => panic!("expected vector payload, got {other:?}"),
        }
    }

    fn as_ball(&self) -> &Ball<T> {
        match self {
            DynPoint::Ball(b) => b,
            other => panic!("expected ball payload, got {other:?}"),
        }
    }

    fn as_interval(&self) -> &Interval<T> {
        match self {
            DynPoint::Interval(i) => i,
            other => panic!("expected interval payload, got {other:?}"),
        }
    }

    fn as_pair(&self) -> (&DynPoint<T>, &DynPoint<T>) {
        match self {
            DynPoint::Pair(l, r) => (l, r),
            other => panic!("expected pair payload, got {other:?}"),
        }
    }
}

/// One of the four space families, with products nesting recursively.
#[derive(Debug, Clone)]
pub enum SpaceKind<T> {
    Euclidean(Euclidean<T>),
    Ball(BallSpace<T>),
    Interval(IntervalSpace<T>),
    Product(Box<SpaceKind<T>>, Box<SpaceKind<T>>),
}

impl<T: Scalar> SpaceKind<T> {
    pub fn euclidean(dim: usize, norm: Norm) -> Result<Self, SpaceError> {
        Ok(SpaceKind::Euclidean(Euclidean::new(dim, norm)?))
    }

    pub fn ball(dim: usize) -> Result<Self, SpaceError> {
        Ok(SpaceKind::Ball(BallSpace::new(dim)?))
    }

    pub fn interval() -> Self {
        SpaceKind::Interval(IntervalSpace::new())
    }

    pub fn product(left: SpaceKind<T>, right: SpaceKind<T>) -> Self {
        SpaceKind::Product(Box::new(left), Box::new(right))
    }

    /// Whether a payload structurally fits this space (kinds, dimensions,
    /// point invariants). Used to validate configuration input.
    pub fn admits(&self, p: &DynPoint<T>) -> bool {
        match (self, p) {
            (SpaceKind::Euclidean(e), DynPoint::Vector(v)) => v.len() == e.dim(),
            (SpaceKind::Ball(s), DynPoint::Ball(b)) => {
                b.center.len() == s.dim() && b.radius > T::zero()
            }
            (SpaceKind::Interval(_), DynPoint::Interval(i)) => {
                T::zero() <= i.a && i.a <= i.b && i.b <= T::one()
            }
            (SpaceKind::Product(l, r), DynPoint::Pair(a, b)) => l.admits(a) && r.admits(b),
            _ => false,
        }
    }
}

impl<T: Scalar> ConvexSpace<T> for SpaceKind<T> {
    type Point = DynPoint<T>;

    fn dim_hint(&self) -> usize {
        match self {
            SpaceKind::Euclidean(s) => s.dim_hint(),
            SpaceKind::Ball(s) => s.dim_hint(),
            SpaceKind::Interval(s) => s.dim_hint(),
            SpaceKind::Product(l, r) => l.dim_hint() + r.dim_hint(),
        }
    }

    fn dist(&self, a: &DynPoint<T>, b: &DynPoint<T>) -> T {
        match self {
            SpaceKind::Euclidean(s) => s.dist(a.as_vector(), b.as_vector()),
            SpaceKind::Ball(s) => s.dist(a.as_ball(), b.as_ball()),
            SpaceKind::Interval(s) => s.dist(a.as_interval(), b.as_interval()),
            SpaceKind::Product(l, r) => {
                let (a0, a1) = a.as_pair();
                let (b0, b1) = b.as_pair();
                l.dist(a0, b0) + r.dist(a1, b1)
            }
        }
    }

    fn combine(&self, x: &DynPoint<T>, y: &DynPoint<T>, t: T) -> DynPoint<T> {
        match self {
            SpaceKind::Euclidean(s) => DynPoint::Vector(s.combine(x.as_vector(), y.as_vector(), t)),
            SpaceKind::Ball(s) => DynPoint::Ball(s.combine(x.as_ball(), y.as_ball(), t)),
            SpaceKind::Interval(s) => DynPoint::Interval(s.combine(x.as_interval(), y.as_interval(), t)),
            SpaceKind::Product(l, r) => {
                let (x0, x1) = x.as_pair();
                let (y0, y1) = y.as_pair();
                DynPoint::Pair(Box::new(l.combine(x0, y0, t)), Box::new(r.combine(x1, y1, t)))
            }
        }
    }

    fn supports_extension(&self) -> bool {
        match self {
            SpaceKind::Euclidean(s) => s.supports_extension(),
            SpaceKind::Ball(s) => s.supports_extension(),
            SpaceKind::Interval(_) => false,
            SpaceKind::Product(l, r) => l.supports_extension() && r.supports_extension(),
        }
    }

    fn extend(&self, y: &DynPoint<T>, x: &DynPoint<T>, lambda: T) -> Option<DynPoint<T>> {
        match self {
            SpaceKind::Euclidean(s) => s.extend(y.as_vector(), x.as_vector(), lambda).map(DynPoint::Vector),
            SpaceKind::Ball(s) => s.extend(y.as_ball(), x.as_ball(), lambda).map(DynPoint::Ball),
            SpaceKind::Interval(_) => None,
            SpaceKind::Product(l, r) => {
                let (y0, y1) = y.as_pair();
                let (x0, x1) = x.as_pair();
                Some(DynPoint::Pair(
                    Box::new(l.extend(y0, x0, lambda)?),
                    Box::new(r.extend(y1, x1, lambda)?),
                ))
            }
        }
    }

    fn sample(&self, rng: &mut SampleRng) -> DynPoint<T> {
        match self {
            SpaceKind::Euclidean(s) => DynPoint::Vector(s.sample(rng)),
            SpaceKind::Ball(s) => DynPoint::Ball(s.sample(rng)),
            SpaceKind::Interval(s) => DynPoint::Interval(s.sample(rng)),
            SpaceKind::Product(l, r) => {
                DynPoint::Pair(Box::new(l.sample(rng)), Box::new(r.sample(rng)))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn delegates_match_concrete_spaces() {
        let k = SpaceKind::<f64>::euclidean(2, Norm::L2).unwrap();
        let a = DynPoint::vector(&[0.0, 0.0]);
        let b = DynPoint::vector(&[3.0, 4.0]);
        assert_eq!(k.dist(&a, &b), 5.0);
        assert_eq!(k.combine(&a, &b, 0.5), DynPoint::vector(&[1.5, 2.0]));
    }

    #[test]
    fn product_pairs_nest() {
        let k = SpaceKind::<f64>::product(
            SpaceKind::euclidean(1, Norm::L2).unwrap(),
            SpaceKind::interval(),
        );
        let x = DynPoint::Pair(
            Box::new(DynPoint::vector(&[0.0])),
            Box::new(DynPoint::Interval(Interval::new(0.0, 1.0).unwrap())),
        );
        let y = DynPoint::Pair(
            Box::new(DynPoint::vector(&[2.0])),
            Box::new(DynPoint::Interval(Interval::new(0.5, 0.6).unwrap())),
        );
        assert_eq!(k.dist(&x, &y), 2.5);
        assert!(k.admits(&x));
        assert!(!k.admits(&DynPoint::vector(&[0.0])));
        assert!(!k.supports_extension());
    }

    #[test]
    fn payload_serialization_matches_schema() {
        let v = DynPoint::<f64>::vector(&[1.0, 2.0]);
        assert_eq!(serde_json::to_string(&v).unwrap(), "[1.0,2.0]");

        let b = DynPoint::<f64>::Ball(Ball::new(vec![0.0, 0.0, 0.0], 1.5).unwrap());
        assert_eq!(
            serde_json::to_string(&b).unwrap(),
            r#"{"center":[0.0,0.0,0.0],"radius":1.5}"#
        );

        let i = DynPoint::<f64>::Interval(Interval::new(0.25, 0.75).unwrap());
        assert_eq!(serde_json::to_string(&i).unwrap(), r#"{"a":0.25,"b":0.75}"#);

        let p = DynPoint::Pair(Box::new(v.clone()), Box::new(i.clone()));
        let json = serde_json::to_string(&p).unwrap();
        assert_eq!(json, r#"[[1.0,2.0],{"a":0.25,"b":0.75}]"#);
        let back: DynPoint<f64> = serde_json::from_str(&json).unwrap();
        assert_eq!(back, p);
        let back_v: DynPoint<f64> = serde_json::from_str("[1.0,2.0]").unwrap();
        assert_eq!(back_v, v);
    }
}
