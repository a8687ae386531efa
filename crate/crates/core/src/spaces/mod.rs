//! Concrete convex metric spaces: Euclidean/normed spaces, the ball space,
//! the interval space, and the `d₁` product construction.

mod ball;
mod euclidean;
mod interval;
mod kind;
mod product;

pub use ball::{Ball, BallSpace};
pub use euclidean::{Euclidean, Norm};
pub use interval::{hausdorff_interval_distance, Interval, IntervalSpace};
pub use kind::{DynPoint, SpaceKind};
pub use product::Product;
