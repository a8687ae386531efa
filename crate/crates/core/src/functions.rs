//! The W-convex function algebra: distance-based constructors, the
//! composition and combination rules that preserve W-convexity, and convex
//! sets as membership predicates with samplers.
//!
//! Functions evaluate to an [`Eval`] so the `+∞` sentinel and out-of-domain
//! points stay explicit instead of turning into float infinities or NaNs.

use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::sampling::SampleRng;
use crate::scalar::Scalar;
use crate::space::{ConvexSpace, SpaceError, Tolerances};

#[derive(Debug, Error, PartialEq)]
pub enum FunctionError {
    #[error("scale factor must be nonnegative, got {0}")]
    NegativeScale(f64),
    #[error("function family must be nonempty")]
    EmptyFamily,
    #[error("{functions} functions but {weights} weights")]
    WeightCountMismatch { functions: usize, weights: usize },
    #[error("power exponent must exceed 1, got {0}")]
    InvalidExponent(f64),
    #[error(transparent)]
    Space(#[from] SpaceError),
}

/// Result of evaluating a function at a point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Eval<T> {
    Val(T),
    /// The explicit `+∞` sentinel (e.g. outside the finite-supremum domain).
    PlusInf,
    /// The point lies outside the function's domain.
    OutOfDomain,
}

impl<T: Scalar> Eval<T> {
    pub fn finite(self) -> Option<T> {
        match self {
            Eval::Val(v) => Some(v),
            _ => None,
        }
    }
}

/// Scalar post-maps from the distance-based construction: the identity,
/// `χ[0,∞)·x²`, `χ[0,∞)·|x|`, `eˣ`, and `χ[0,∞)·|x|^α` with `α > 1`.
/// All are increasing and convex on the range of a metric; `exp`, `square`
/// and `power` are the strictly convex ones.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScalarMap<T> {
    Identity,
    Square,
    Abs,
    Exp,
    Power(T),
}

impl<T: Scalar> ScalarMap<T> {
    pub fn power(alpha: T) -> Result<Self, FunctionError> {
        if alpha <= T::one() || alpha.is_nan() {
            return Err(FunctionError::InvalidExponent(alpha.to_f64().unwrap_or(f64::NAN)));
        }
        Ok(ScalarMap::Power(alpha))
    }

    pub fn eval(&self, x: T) -> T {
        match self {
            ScalarMap::Identity => x,
            ScalarMap::Square => {
                if x < T::zero() {
                    T::zero()
                } else {
                    x * x
                }
            }
            ScalarMap::Abs => {
                if x < T::zero() {
                    T::zero()
                } else {
                    x.abs()
                }
            }
            ScalarMap::Exp => x.exp(),
            ScalarMap::Power(alpha) => {
                if x < T::zero() {
                    T::zero()
                } else {
                    x.abs().powf(*alpha)
                }
            }
        }
    }

    /// Strictly convex on the nonnegative half-line.
    pub fn strictly_convex(&self) -> bool {
        matches!(self, ScalarMap::Square | ScalarMap::Exp | ScalarMap::Power(_))
    }

    pub fn label(&self) -> String {
        match self {
            ScalarMap::Identity => "id".into(),
            ScalarMap::Square => "sq".into(),
            ScalarMap::Abs => "abs".into(),
            ScalarMap::Exp => "exp".into(),
            ScalarMap::Power(a) => format!("pow{a}"),
        }
    }
}

/// A real-valued function on a space's points, built from the combinator
/// algebra or from a raw closure. Cheap to clone and safe to share across
/// verifier workers.
type EvalFn<P, T> = Arc<dyn Fn(&P) -> Eval<T> + Send + Sync>;

pub struct WFn<P, T> {
    label: String,
    f: EvalFn<P, T>,
}

impl<P, T> Clone for WFn<P, T> {
    fn clone(&self) -> Self {
        Self {
            label: self.label.clone(),
            f: Arc::clone(&self.f),
        }
    }
}

impl<P, T> std::fmt::Debug for WFn<P, T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "WFn({})", self.label)
    }
}

impl<P, T: Scalar> WFn<P, T> {
    pub fn new(label: impl Into<String>, f: impl Fn(&P) -> Eval<T> + Send + Sync + 'static) -> Self {
        Self {
            label: label.into(),
            f: Arc::new(f),
        }
    }

    /// A total finite-valued function.
    pub fn total(label: impl Into<String>, f: impl Fn(&P) -> T + Send + Sync + 'static) -> Self {
        Self::new(label, move |p| Eval::Val(f(p)))
    }

    pub fn eval(&self, p: &P) -> Eval<T> {
        (self.f)(p)
    }

    pub fn eval_finite(&self, p: &P) -> Option<T> {
        self.eval(p).finite()
    }

    pub fn label(&self) -> &str {
        &self.label
    }
}

/// `x ↦ g(d(x, x₀))` for a fixed base point; `W`-convex for every
/// increasing convex `g`, strictly so (away from equidistant pairs in
/// non-strictly-convex spaces) for the strict maps.
pub fn distance_to_point<T, S>(space: &S, x0: S::Point, map: ScalarMap<T>) -> WFn<S::Point, T>
where
    T: Scalar,
    S: ConvexSpace<T> + Clone + Send + Sync + 'static,
{
    let sp = space.clone();
    let label = format!("{}(d(.,x0))", map.label());
    WFn::new(label, move |p| Eval::Val(map.eval(sp.dist(p, &x0))))
}

/// `g ∘ f` for increasing convex `g`; strictness follows the usual
/// composition rule.
pub fn compose_increasing_convex<P, T>(f: &WFn<P, T>, map: ScalarMap<T>) -> WFn<P, T>
where
    P: 'static,
    T: Scalar,
{
    let inner = f.clone();
    let label = format!("{}({})", map.label(), f.label());
    WFn::new(label, move |p| match inner.eval(p) {
        Eval::Val(v) => Eval::Val(map.eval(v)),
        Eval::PlusInf => Eval::PlusInf,
        Eval::OutOfDomain => Eval::OutOfDomain,
    })
}

/// `α·f` for `α ≥ 0`. By the usual convention `0 · (+∞) = 0`.
pub fn scale<P, T>(f: &WFn<P, T>, alpha: T) -> Result<WFn<P, T>, FunctionError>
where
    P: 'static,
    T: Scalar,
{
    if alpha < T::zero() {
        return Err(FunctionError::NegativeScale(alpha.to_f64().unwrap_or(f64::NAN)));
    }
    let inner = f.clone();
    let label = format!("{alpha}*{}", f.label());
    Ok(WFn::new(label, move |p| match inner.eval(p) {
        Eval::Val(v) => Eval::Val(alpha * v),
        Eval::PlusInf => {
            if alpha == T::zero() {
                Eval::Val(T::zero())
            } else {
                Eval::PlusInf
            }
        }
        Eval::OutOfDomain => Eval::OutOfDomain,
    }))
}

fn fold_family<P, T>(
    fs: &[WFn<P, T>],
    label: String,
    combine: impl Fn(T, T) -> T + Send + Sync + 'static,
    on_inf: Eval<T>,
) -> Result<WFn<P, T>, FunctionError>
where
    P: 'static,
    T: Scalar,
{
    if fs.is_empty() {
        return Err(FunctionError::EmptyFamily);
    }
    let fs: Vec<WFn<P, T>> = fs.to_vec();
    Ok(WFn::new(label, move |p| {
        let mut acc: Option<T> = None;
        for f in &fs {
            match f.eval(p) {
                Eval::Val(v) => acc = Some(acc.map_or(v, |a| combine(a, v))),
                Eval::PlusInf => return on_inf,
                Eval::OutOfDomain => return Eval::OutOfDomain,
            }
        }
        Eval::Val(acc.expect("nonempty family"))
    }))
}

/// Pointwise sum of a nonempty family.
pub fn sum<P, T>(fs: &[WFn<P, T>]) -> Result<WFn<P, T>, FunctionError>
where
    P: 'static,
    T: Scalar,
{
    let label = format!("sum[{}]", fs.len());
    fold_family(fs, label, |a, b| a + b, Eval::PlusInf)
}

/// `Σ αᵢ fᵢ` with nonnegative weights.
pub fn conical<P, T>(fs: &[WFn<P, T>], weights: &[T]) -> Result<WFn<P, T>, FunctionError>
where
    P: 'static,
    T: Scalar,
{
    if fs.len() != weights.len() {
        return Err(FunctionError::WeightCountMismatch {
            functions: fs.len(),
            weights: weights.len(),
        });
    }
    let scaled: Vec<WFn<P, T>> = fs
        .iter()
        .zip(weights)
        .map(|(f, w)| scale(f, *w))
        .collect::<Result<_, _>>()?;
    sum(&scaled)
}

/// Pointwise maximum of a nonempty finite family.
pub fn max_of<P, T>(fs: &[WFn<P, T>]) -> Result<WFn<P, T>, FunctionError>
where
    P: 'static,
    T: Scalar,
{
    let label = format!("max[{}]", fs.len());
    fold_family(fs, label, |a, b| a.max(b), Eval::PlusInf)
}

/// Pointwise supremum of a nonempty finite family. The natural domain is
/// where the supremum is finite, so a `+∞` member makes the point
/// out-of-domain.
pub fn sup_family<P, T>(fs: &[WFn<P, T>]) -> Result<WFn<P, T>, FunctionError>
where
    P: 'static,
    T: Scalar,
{
    let label = format!("sup[{}]", fs.len());
    fold_family(fs, label, |a, b| a.max(b), Eval::OutOfDomain)
}

/// Restriction of `f` to a convex set; evaluation outside is out-of-domain.
pub fn restrict<P, T>(f: &WFn<P, T>, set: &ConvexSet<P>) -> WFn<P, T>
where
    P: 'static,
    T: Scalar,
{
    let inner = f.clone();
    let set = set.clone();
    let label = format!("{}|{}", f.label(), set.label());
    WFn::new(label, move |p| {
        if set.contains(p) {
            inner.eval(p)
        } else {
            Eval::OutOfDomain
        }
    })
}

/// A convex subset given by a membership predicate and a member sampler.
/// Closure under `W` is a caller obligation, spot-checked by
/// [`crate::verify::convex_set_check`], never assumed.
pub struct ConvexSet<P> {
    label: String,
    contains: Arc<dyn Fn(&P) -> bool + Send + Sync>,
    sampler: Arc<dyn Fn(&mut SampleRng) -> P + Send + Sync>,
}

impl<P> Clone for ConvexSet<P> {
    fn clone(&self) -> Self {
        Self {
            label: self.label.clone(),
            contains: Arc::clone(&self.contains),
            sampler: Arc::clone(&self.sampler),
        }
    }
}

impl<P> std::fmt::Debug for ConvexSet<P> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "ConvexSet({})", self.label)
    }
}

impl<P> ConvexSet<P> {
    pub fn new(
        label: impl Into<String>,
        contains: impl Fn(&P) -> bool + Send + Sync + 'static,
        sampler: impl Fn(&mut SampleRng) -> P + Send + Sync + 'static,
    ) -> Self {
        Self {
            label: label.into(),
            contains: Arc::new(contains),
            sampler: Arc::new(sampler),
        }
    }

    pub fn contains(&self, p: &P) -> bool {
        (self.contains)(p)
    }

    pub fn sample(&self, rng: &mut SampleRng) -> P {
        (self.sampler)(rng)
    }

    pub fn label(&self) -> &str {
        &self.label
    }
}

/// The whole space as a convex set.
pub fn whole_space<T, S>(space: &S) -> ConvexSet<S::Point>
where
    T: Scalar,
    S: ConvexSpace<T> + Clone + Send + Sync + 'static,
{
    let sp = space.clone();
    ConvexSet::new("X", |_| true, move |rng| sp.sample(rng))
}

/// The metric segment between two points, sampled through `W`.
pub fn segment_set<T, S>(
    space: &S,
    x: S::Point,
    y: S::Point,
    tol: &Tolerances<T>,
) -> Result<ConvexSet<S::Point>, FunctionError>
where
    T: Scalar,
    S: ConvexSpace<T> + Clone + Send + Sync + 'static,
{
    let d = space.dist(&x, &y);
    if d <= tol.degenerate {
        return Err(SpaceError::DegenerateSegment(d.to_f64().unwrap_or(0.0)).into());
    }
    let eps = tol.eps_eq;
    let sp = space.clone();
    let sp2 = space.clone();
    let (cx, cy) = (x.clone(), y.clone());
    let contains = move |p: &S::Point| {
        // on-segment within tolerance: distances to the endpoints add up
        // and the corresponding parameter reproduces the point
        let dx = sp.dist(&cx, p);
        let dy = sp.dist(p, &cy);
        if (dx + dy - d).abs() > eps * (T::one() + d) {
            return false;
        }
        let t = (dx / d).min(T::one());
        sp.dist(&sp.combine(&cx, &cy, t), p) <= eps * (T::one() + d)
    };
    Ok(ConvexSet::new("segment", contains, move |rng| {
        let t: T = rng.uniform(0.0, 1.0);
        sp2.combine(&x, &y, t)
    }))
}

/// The closed metric ball `B(c, r)`, sampled via
/// [`crate::space::sample_ball_point`] (members only; the draw is not
/// uniform).
pub fn metric_ball_set<T, S>(space: &S, center: S::Point, radius: T) -> ConvexSet<S::Point>
where
    T: Scalar,
    S: ConvexSpace<T> + Clone + Send + Sync + 'static,
{
    let sp = space.clone();
    let sp2 = space.clone();
    let c2 = center.clone();
    ConvexSet::new(
        "ball",
        move |p: &S::Point| sp.dist(p, &center) <= radius,
        move |rng| crate::space::sample_ball_point(&sp2, &c2, radius, rng),
    )
}

/// An axis-aligned box in a normed space.
pub fn box_set<T: Scalar>(lo: Vec<T>, hi: Vec<T>) -> ConvexSet<Vec<T>> {
    assert_eq!(lo.len(), hi.len());
    assert!(lo.iter().zip(&hi).all(|(a, b)| a <= b), "box bounds out of order");
    let (l2, h2) = (lo.clone(), hi.clone());
    ConvexSet::new(
        "box",
        move |p: &Vec<T>| p.iter().zip(lo.iter().zip(&hi)).all(|(x, (a, b))| a <= x && x <= b),
        move |rng| {
            l2.iter()
                .zip(&h2)
                .map(|(a, b)| {
                    let u: T = rng.uniform(0.0, 1.0);
                    *a + (*b - *a) * u
                })
                .collect()
        },
    )
}

/// Approximate distance map `x ↦ inf_{y ∈ Y} d(x, y)`, computed by the
/// projection solver with the given per-query budget. The returned value is
/// `d(x, best)` for a member `best` of the set, hence an upper bound on the
/// infimum up to the set's `eps_eq`-wide membership tolerance.
pub fn distance_map<T, S>(space: &S, set: &ConvexSet<S::Point>, budget: usize) -> WFn<S::Point, T>
where
    T: Scalar,
    S: ConvexSpace<T> + Clone + Send + Sync + 'static,
{
    assert!(budget >= 1, "solver budget must be at least 1");
    let sp = space.clone();
    let set = set.clone();
    let cfg = crate::optimize::SolveCfg {
        starts: 4,
        patience: budget,
        max_passes: 8 * budget,
        ..crate::optimize::SolveCfg::default()
    };
    let label = format!("dist_to({})", set.label());
    WFn::new(label, move |p: &S::Point| {
        let r = crate::optimize::project(&sp, &set, p, &cfg);
        Eval::Val(r.distance)
    })
}
