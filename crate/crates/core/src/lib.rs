//! Convex metric spaces, W-convex functions, and solvers built on the
//! convex structure.
//!
//! A convex metric space carries a map `W(x, y; t)` standing in for linear
//! interpolation; a function is W-convex when it lies under its chords
//! through `W`. This crate provides:
//!
//! - the space abstraction and axiom checkers ([`space`], [`axioms`]),
//! - four concrete geometries: normed `ℝⁿ`, the space of closed balls, the
//!   space of closed subintervals of `[0, 1]`, and `d₁` products
//!   ([`spaces`]),
//! - a combinator algebra of W-convex functions and convex sets
//!   ([`functions`]),
//! - seeded property verifiers and counterexample search for the convexity,
//!   Lipschitz, epigraph/sublevel and strict-convexity inequalities
//!   ([`verify`]),
//! - metric projection, Chebyshev diagnostics, and Mann-type fixed-point
//!   iteration through `W` ([`optimize`]),
//! - a built-in catalog of spaces, functions and maps ([`catalog`]).
//!
//! Everything is generic over the floating-point scalar via
//! [`scalar::Scalar`]; the `*64` aliases below fix `f64`, the precision the
//! default tolerances are calibrated for.
//!
//! ```
//! use wconvex::{axioms, Euclidean64, Norm, Tolerances64};
//!
//! let plane = Euclidean64::new(2, Norm::L2).unwrap();
//! let verdict = axioms::check_convex_structure(&plane, 1000, 42, &Tolerances64::default());
//! assert!(verdict.passed());
//! ```

pub mod axioms;
pub mod catalog;
pub mod functions;
pub mod optimize;
pub mod sampling;
pub mod scalar;
pub mod space;
pub mod spaces;
pub mod verdict;
pub mod verify;

pub use sampling::SampleRng;
pub use scalar::Scalar;
pub use space::{combine_checked, extend_checked, ConvexSpace, Segment, SpaceError, Tolerances};
pub use spaces::Norm;
pub use verdict::{Outcome, Verdict, Witness};

/// `f64` instantiations of the concrete geometries.
pub type Euclidean64 = spaces::Euclidean<f64>;
pub type BallSpace64 = spaces::BallSpace<f64>;
pub type Ball64 = spaces::Ball<f64>;
pub type IntervalSpace64 = spaces::IntervalSpace<f64>;
pub type Interval64 = spaces::Interval<f64>;
pub type SpaceKind64 = spaces::SpaceKind<f64>;
pub type DynPoint64 = spaces::DynPoint<f64>;
pub type Tolerances64 = space::Tolerances<f64>;
