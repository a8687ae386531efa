//! Property verifiers and counterexample search for the inequalities the
//! function algebra is built on: (strict) W-convexity, segment Lipschitz
//! bounds, dyadic and midpoint convexity, local boundedness implying a
//! Lipschitz bound, epigraph/sublevel convexity, and strict convexity of
//! spaces and spheres.
//!
//! Every verifier samples deterministically from an explicit seed, reduces
//! violations worker-count-independently, and returns a [`Verdict`] whose
//! witness can be replayed against the stated inequality. `Inconclusive`
//! verdicts mark runs whose sampling preconditions could not be met.

use serde::Serialize;
use thiserror::Error;

use crate::functions::{ConvexSet, Eval, WFn};
use crate::sampling::{sample_t, sample_t_in, SampleRng};
use crate::scalar::{cast, Scalar};
use crate::space::{ConvexSpace, SpaceError, Tolerances};
use crate::spaces::{Euclidean, Norm, Product};
use crate::verdict::{finish, sweep, CaseEval, Outcome, Verdict, Witness};

#[derive(Debug, Error, PartialEq)]
pub enum VerifyError {
    #[error("dyadic level {requested} exceeds the supported maximum {max}")]
    LevelsTooLarge { requested: u32, max: u32 },
    #[error("space does not support the segment extension this check requires")]
    ExtensionUnsupported,
    #[error("claimed bound violated at a sampled point: |f| = {value} > {bound}")]
    BoundViolated { value: f64, bound: f64 },
    #[error("ball radii must satisfy 0 < inner < outer, got inner {inner}, outer {outer}")]
    InvalidRadii { inner: f64, outer: f64 },
    #[error("function not finite at a required point")]
    NonFiniteValue,
    #[error(transparent)]
    Space(#[from] SpaceError),
}

/// The dyadic parameter grid `Λ_n = {m/2ⁿ : m = 0..2ⁿ}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct DyadicGrid {
    level: u32,
}

impl DyadicGrid {
    pub const MAX_LEVEL: u32 = 12;

    pub fn new(level: u32) -> Result<Self, VerifyError> {
        if level > Self::MAX_LEVEL {
            return Err(VerifyError::LevelsTooLarge {
                requested: level,
                max: Self::MAX_LEVEL,
            });
        }
        Ok(Self { level })
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn len(&self) -> usize {
        (1usize << self.level) + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Grid values in increasing order, endpoints included.
    pub fn values<T: Scalar>(&self) -> Vec<T> {
        let denom = (1u64 << self.level) as f64;
        (0..=(1u64 << self.level)).map(|m| cast(m as f64 / denom)).collect()
    }

    /// Smallest level whose grid contains `m/2^level`.
    fn level_of(&self, m: u64) -> u32 {
        if m == 0 {
            return 0;
        }
        self.level - (m.trailing_zeros().min(self.level))
    }
}

fn eval_pair<P, T: Scalar>(f: &WFn<P, T>, x: &P, y: &P) -> Option<(T, T)> {
    Some((f.eval(x).finite()?, f.eval(y).finite()?))
}

/// Lift a function value at a combined point into a violation magnitude:
/// a non-finite value where the chord is finite is an unbounded violation.
fn combined_value<T: Scalar>(v: Eval<T>) -> T {
    match v {
        Eval::Val(x) => x,
        _ => T::infinity(),
    }
}

/// Check `f(W(x, y; t)) ≤ (1 − t)·f(x) + t·f(y)` on `n` sampled triples,
/// restricted to `domain` when given.
pub fn verify_wconvex<T, S>(
    space: &S,
    f: &WFn<S::Point, T>,
    n: usize,
    seed: u64,
    domain: Option<&ConvexSet<S::Point>>,
    tol: &Tolerances<T>,
) -> Verdict<T, S::Point>
where
    T: Scalar,
    S: ConvexSpace<T> + Sync,
{
    assert!(n >= 1);
    let mut rng = SampleRng::seeded(seed);
    let draw = |rng: &mut SampleRng| match domain {
        Some(set) => set.sample(rng),
        None => space.sample(rng),
    };
    let cases: Vec<(S::Point, S::Point, T)> = (0..n)
        .map(|i| {
            let x = draw(&mut rng);
            let y = draw(&mut rng);
            let t = sample_t(&mut rng, i);
            (x, y, t)
        })
        .collect();

    let sides = |case: &(S::Point, S::Point, T)| {
        let (x, y, t) = case;
        let (fx, fy) = eval_pair(f, x, y)?;
        let lhs = combined_value(f.eval(&space.combine(x, y, *t)));
        let rhs = (T::one() - *t) * fx + *t * fy;
        Some((lhs, rhs))
    };

    let result = sweep(&cases, |case| match sides(case) {
        Some((lhs, rhs)) => CaseEval::Violation(tol.excess(lhs, rhs)),
        None => CaseEval::Skip,
    });
    finish("wconvex", seed, tol.eps_eq, &cases, result, |i, case| {
        let (lhs, rhs) = sides(case).unwrap_or((T::infinity(), T::zero()));
        Witness {
            sample_index: i,
            points: vec![case.0.clone(), case.1.clone()],
            params: vec![case.2],
            lhs,
            rhs,
            violation: tol.excess(lhs, rhs),
        }
    })
}

/// Strict W-convexity with margin: samples are restricted to
/// `d(x, y) ≥ separation` and `t ∈ [0.05, 0.95]`, and the check fails
/// unless `f(W) ≤ chord − δ_strict·(1 + |chord|)`.
pub fn verify_strict_wconvex<T, S>(
    space: &S,
    f: &WFn<S::Point, T>,
    n: usize,
    seed: u64,
    separation: T,
    domain: Option<&ConvexSet<S::Point>>,
    tol: &Tolerances<T>,
) -> Verdict<T, S::Point>
where
    T: Scalar,
    S: ConvexSpace<T> + Sync,
{
    assert!(n >= 1);
    assert!(separation > T::zero(), "separation must be positive");
    let mut rng = SampleRng::seeded(seed);
    let draw = |rng: &mut SampleRng| match domain {
        Some(set) => set.sample(rng),
        None => space.sample(rng),
    };
    let cases: Vec<(S::Point, S::Point, T)> = (0..n)
        .map(|i| {
            let x = draw(&mut rng);
            let y = draw(&mut rng);
            let t = sample_t_in(&mut rng, i, 0.05, 0.95);
            (x, y, t)
        })
        .collect();

    let sides = |case: &(S::Point, S::Point, T)| {
        let (x, y, t) = case;
        if space.dist(x, y) < separation {
            return None;
        }
        let (fx, fy) = eval_pair(f, x, y)?;
        let lhs = combined_value(f.eval(&space.combine(x, y, *t)));
        let rhs = (T::one() - *t) * fx + *t * fy;
        Some((lhs, rhs))
    };

    let result = sweep(&cases, |case| match sides(case) {
        Some((lhs, rhs)) => CaseEval::Violation(tol.excess(lhs, rhs) + tol.delta_strict),
        None => CaseEval::Skip,
    });
    finish("strict_wconvex", seed, T::zero(), &cases, result, |i, case| {
        let (lhs, rhs) = sides(case).unwrap_or((T::infinity(), T::zero()));
        Witness {
            sample_index: i,
            points: vec![case.0.clone(), case.1.clone()],
            params: vec![case.2],
            lhs,
            rhs,
            violation: tol.excess(lhs, rhs) + tol.delta_strict,
        }
    })
}

/// Parameter grid for materializing a segment.
#[derive(Debug, Clone, Copy)]
pub enum SegmentGrid {
    Dyadic(DyadicGrid),
    Uniform(usize),
}

/// Materialize `W(x, y; λ)` over the grid. Degenerate segments are
/// rejected.
pub fn segment_points<T, S>(
    space: &S,
    x: &S::Point,
    y: &S::Point,
    grid: SegmentGrid,
    tol: &Tolerances<T>,
) -> Result<Vec<S::Point>, VerifyError>
where
    T: Scalar,
    S: ConvexSpace<T>,
{
    let d = space.dist(x, y);
    if d <= tol.degenerate {
        return Err(SpaceError::DegenerateSegment(d.to_f64().unwrap_or(0.0)).into());
    }
    let lambdas: Vec<T> = match grid {
        SegmentGrid::Dyadic(g) => g.values(),
        SegmentGrid::Uniform(k) => {
            assert!(k >= 2, "uniform grid needs at least the two endpoints");
            (0..k).map(|i| cast(i as f64 / (k - 1) as f64)).collect()
        }
    };
    Ok(lambdas.into_iter().map(|l| space.combine(x, y, l)).collect())
}

/// Report of a pairwise Lipschitz sweep.
#[derive(Debug, Clone, Serialize)]
pub struct LipschitzReport<T, P> {
    /// The Lipschitz constant the pairs were checked against.
    pub constant: T,
    pub pairs_checked: usize,
    pub skipped: usize,
    /// Largest observed `|f(z) − f(w)| / d(z, w)` over nondegenerate pairs.
    pub max_ratio: T,
    /// Worst normalized excess of `|Δf| ≤ constant·d`; positive fails.
    pub worst_excess: T,
    pub witness: Option<(P, P)>,
    pub passed: bool,
}

/// Check `|f(z) − f(w)| ≤ c·d(z, w)` over all pairs of `samples` uniform
/// segment points, with `c = |f(x) − f(y)| / d(x, y)` by default or a
/// caller-supplied `alpha ≥ |f(x) − f(y)| / d(x, y)`.
pub fn segment_lipschitz_check<T, S>(
    space: &S,
    f: &WFn<S::Point, T>,
    x: &S::Point,
    y: &S::Point,
    samples: usize,
    alpha: Option<T>,
    tol: &Tolerances<T>,
) -> Result<LipschitzReport<T, S::Point>, VerifyError>
where
    T: Scalar,
    S: ConvexSpace<T>,
{
    let d = space.dist(x, y);
    if d <= tol.degenerate {
        return Err(SpaceError::DegenerateSegment(d.to_f64().unwrap_or(0.0)).into());
    }
    let (fx, fy) = eval_pair(f, x, y).ok_or(VerifyError::NonFiniteValue)?;
    let endpoint_slope = (fx - fy).abs() / d;
    let constant = match alpha {
        Some(a) => {
            if (fx - fy).abs() > a * d + tol.eps_eq * (T::one() + a * d) {
                return Err(VerifyError::BoundViolated {
                    value: (fx - fy).abs().to_f64().unwrap_or(f64::NAN),
                    bound: (a * d).to_f64().unwrap_or(f64::NAN),
                });
            }
            a
        }
        None => endpoint_slope,
    };

    let pts = segment_points(space, x, y, SegmentGrid::Uniform(samples.max(2)), tol)?;
    let vals: Vec<T> = pts
        .iter()
        .map(|p| f.eval(p).finite().ok_or(VerifyError::NonFiniteValue))
        .collect::<Result<_, _>>()?;

    let mut pairs_checked = 0;
    let mut skipped = 0;
    let mut max_ratio = T::zero();
    let mut worst_excess = T::neg_infinity();
    let mut witness = None;
    for i in 0..pts.len() {
        for j in (i + 1)..pts.len() {
            let dzw = space.dist(&pts[i], &pts[j]);
            let df = (vals[i] - vals[j]).abs();
            if dzw <= tol.degenerate {
                // coincident samples must have equal values
                if df > tol.eps_eq {
                    worst_excess = T::infinity();
                    witness = Some((pts[i].clone(), pts[j].clone()));
                }
                skipped += 1;
                continue;
            }
            pairs_checked += 1;
            max_ratio = max_ratio.max(df / dzw);
            let excess = tol.excess(df, constant * dzw);
            if excess > worst_excess {
                worst_excess = excess;
                if excess > tol.eps_eq {
                    witness = Some((pts[i].clone(), pts[j].clone()));
                }
            }
        }
    }
    let passed = worst_excess <= tol.eps_eq;
    Ok(LipschitzReport {
        constant,
        pairs_checked,
        skipped,
        max_ratio,
        worst_excess,
        witness: if passed { None } else { witness },
        passed,
    })
}

/// Check the midpoint inequality
/// `f(W(x,y;(μ+ν)/2)) ≤ ½·f(W(x,y;μ)) + ½·f(W(x,y;ν))` on sampled
/// `(x, y, μ, ν)`.
pub fn midpoint_convexity_check<T, S>(
    space: &S,
    f: &WFn<S::Point, T>,
    n: usize,
    seed: u64,
    tol: &Tolerances<T>,
) -> Verdict<T, S::Point>
where
    T: Scalar,
    S: ConvexSpace<T> + Sync,
{
    assert!(n >= 1);
    let mut rng = SampleRng::seeded(seed);
    let cases: Vec<(S::Point, S::Point, T, T)> = (0..n)
        .map(|i| {
            let x = space.sample(&mut rng);
            let y = space.sample(&mut rng);
            let mu = sample_t(&mut rng, i);
            let nu: T = cast(rng.unit());
            (x, y, mu, nu)
        })
        .collect();

    let half: T = cast(0.5);
    let sides = |case: &(S::Point, S::Point, T, T)| {
        let (x, y, mu, nu) = case;
        let fmu = f.eval(&space.combine(x, y, *mu)).finite()?;
        let fnu = f.eval(&space.combine(x, y, *nu)).finite()?;
        let mid = (*mu + *nu) * half;
        let lhs = combined_value(f.eval(&space.combine(x, y, mid)));
        Some((lhs, half * fmu + half * fnu))
    };

    let result = sweep(&cases, |case| match sides(case) {
        Some((lhs, rhs)) => CaseEval::Violation(tol.excess(lhs, rhs)),
        None => CaseEval::Skip,
    });
    finish("midpoint_convexity", seed, tol.eps_eq, &cases, result, |i, case| {
        let (lhs, rhs) = sides(case).unwrap_or((T::infinity(), T::zero()));
        Witness {
            sample_index: i,
            points: vec![case.0.clone(), case.1.clone()],
            params: vec![case.2, case.3],
            lhs,
            rhs,
            violation: tol.excess(lhs, rhs),
        }
    })
}

/// Check the chord bound on every dyadic parameter `λ ∈ Λ_levels` of one
/// segment. On failure the witness params carry `(λ, first failing level)`.
pub fn dyadic_convexity_check<T, S>(
    space: &S,
    f: &WFn<S::Point, T>,
    x: &S::Point,
    y: &S::Point,
    levels: u32,
    tol: &Tolerances<T>,
) -> Result<Verdict<T, S::Point>, VerifyError>
where
    T: Scalar,
    S: ConvexSpace<T> + Sync,
{
    let grid = DyadicGrid::new(levels)?;
    let (fx, fy) = eval_pair(f, x, y).ok_or(VerifyError::NonFiniteValue)?;
    let lambdas: Vec<T> = grid.values();
    let sides = |lambda: &T| {
        let lhs = combined_value(f.eval(&space.combine(x, y, *lambda)));
        let rhs = (T::one() - *lambda) * fx + *lambda * fy;
        (lhs, rhs)
    };
    let result = sweep(&lambdas, |l| {
        let (lhs, rhs) = sides(l);
        CaseEval::Violation(tol.excess(lhs, rhs))
    });

    // locate the smallest dyadic level containing a failing parameter
    let first_fail_level = lambdas
        .iter()
        .enumerate()
        .filter(|(_, l)| {
            let (lhs, rhs) = sides(l);
            tol.excess(lhs, rhs) > tol.eps_eq
        })
        .map(|(m, _)| grid.level_of(m as u64))
        .min();

    let mut verdict = finish("dyadic_convexity", 0, tol.eps_eq, &lambdas, result, |i, l| {
        let (lhs, rhs) = sides(l);
        Witness {
            sample_index: i,
            points: vec![x.clone(), y.clone()],
            params: vec![*l, cast(first_fail_level.unwrap_or(0) as f64)],
            lhs,
            rhs,
            violation: tol.excess(lhs, rhs),
        }
    });
    verdict.property = format!("dyadic_convexity[levels={levels}]");
    Ok(verdict)
}

use crate::space::sample_ball_point as sample_in_ball;

/// Draw a point at distance exactly `radius` from `center` (up to float
/// error), by scaling an ambient sample along the segment toward it.
/// `None` when the sampler cannot reach past the sphere.
pub fn sample_on_sphere<T, S>(
    space: &S,
    center: &S::Point,
    radius: T,
    rng: &mut SampleRng,
    attempts: usize,
) -> Option<S::Point>
where
    T: Scalar,
    S: ConvexSpace<T>,
{
    for _ in 0..attempts {
        let z = space.sample(rng);
        let d = space.dist(center, &z);
        if d >= radius {
            return Some(space.combine(center, &z, radius / d));
        }
    }
    None
}

/// Check `|f(u) − f(v)| ≤ (2M/ρ)·d(u, v)` on sampled pairs of
/// `B(x₀, r − ρ)`, after verifying `|f| ≤ M` on samples of `B(x₀, r)`.
/// Requires the space to support segment extension, the standing hypothesis
/// behind the bound.
#[allow(clippy::too_many_arguments)]
pub fn local_lipschitz_from_bound<T, S>(
    space: &S,
    f: &WFn<S::Point, T>,
    x0: &S::Point,
    r: T,
    rho: T,
    m_bound: T,
    n: usize,
    seed: u64,
    tol: &Tolerances<T>,
) -> Result<LipschitzReport<T, S::Point>, VerifyError>
where
    T: Scalar,
    S: ConvexSpace<T>,
{
    if !(T::zero() < rho && rho < r) {
        return Err(VerifyError::InvalidRadii {
            inner: rho.to_f64().unwrap_or(f64::NAN),
            outer: r.to_f64().unwrap_or(f64::NAN),
        });
    }
    if !space.supports_extension() {
        return Err(VerifyError::ExtensionUnsupported);
    }
    let mut rng = SampleRng::seeded(seed);
    for _ in 0..n {
        let p = sample_in_ball(space, x0, r, &mut rng);
        let v = f.eval(&p).finite().ok_or(VerifyError::NonFiniteValue)?;
        if v.abs() > m_bound + tol.eps_eq * (T::one() + m_bound) {
            return Err(VerifyError::BoundViolated {
                value: v.abs().to_f64().unwrap_or(f64::NAN),
                bound: m_bound.to_f64().unwrap_or(f64::NAN),
            });
        }
    }

    let constant = cast::<T>(2.0) * m_bound / rho;
    let inner = r - rho;
    let mut pairs_checked = 0;
    let mut skipped = 0;
    let mut max_ratio = T::zero();
    let mut worst_excess = T::neg_infinity();
    let mut witness = None;
    for _ in 0..n {
        let u = sample_in_ball(space, x0, inner, &mut rng);
        let v = sample_in_ball(space, x0, inner, &mut rng);
        let duv = space.dist(&u, &v);
        let df = (f.eval(&u).finite().ok_or(VerifyError::NonFiniteValue)?
            - f.eval(&v).finite().ok_or(VerifyError::NonFiniteValue)?)
        .abs();
        if duv <= tol.degenerate {
            skipped += 1;
            continue;
        }
        pairs_checked += 1;
        max_ratio = max_ratio.max(df / duv);
        let excess = tol.excess(df, constant * duv);
        if excess > worst_excess {
            worst_excess = excess;
            witness = Some((u, v));
        }
    }
    let passed = worst_excess <= tol.eps_eq;
    Ok(LipschitzReport {
        constant,
        pairs_checked,
        skipped,
        max_ratio,
        worst_excess,
        witness: if passed { None } else { witness },
        passed,
    })
}

/// The bound-above remark: if `f ≤ c` on `B(x₀, r)` then
/// `|f| ≤ c + 2·|f(x₀)|` there; checks the conclusion on `n` samples.
#[allow(clippy::too_many_arguments)]
pub fn bound_above_implies_bounded<T, S>(
    space: &S,
    f: &WFn<S::Point, T>,
    x0: &S::Point,
    r: T,
    c: T,
    n: usize,
    seed: u64,
    tol: &Tolerances<T>,
) -> Verdict<T, S::Point>
where
    T: Scalar,
    S: ConvexSpace<T> + Sync,
{
    assert!(n >= 1);
    let mut rng = SampleRng::seeded(seed);
    let cases: Vec<S::Point> = (0..n).map(|_| sample_in_ball(space, x0, r, &mut rng)).collect();
    let f_center = match f.eval(x0).finite() {
        Some(v) => v,
        None => return Verdict::inconclusive("bound_above_implies_bounded", seed, n),
    };
    let bound = c + cast::<T>(2.0) * f_center.abs();
    let result = sweep(&cases, |p| match f.eval(p).finite() {
        Some(v) => CaseEval::Violation(tol.excess(v.abs(), bound)),
        None => CaseEval::Skip,
    });
    finish("bound_above_implies_bounded", seed, tol.eps_eq, &cases, result, |i, p| {
        let v = f.eval(p).finite().unwrap_or_else(T::infinity);
        Witness {
            sample_index: i,
            points: vec![p.clone()],
            params: vec![],
            lhs: v.abs(),
            rhs: bound,
            violation: tol.excess(v.abs(), bound),
        }
    })
}

/// Epigraph convexity in the product space `X × ℝ` with the sum metric:
/// sampled epigraph members must have their `W`-combinations inside the
/// epigraph. Matches `verify_wconvex` outcome-for-outcome on the same
/// function (the two sides of the epigraph characterization).
pub fn epigraph_convexity_check<T, S>(
    space: &S,
    f: &WFn<S::Point, T>,
    n: usize,
    seed: u64,
    tol: &Tolerances<T>,
) -> Verdict<T, (S::Point, Vec<T>)>
where
    T: Scalar,
    S: ConvexSpace<T> + Clone + Sync,
{
    assert!(n >= 1);
    let line = Euclidean::<T>::new(1, Norm::L2).expect("dimension 1");
    let product = Product::new(space.clone(), line);
    let mut rng = SampleRng::seeded(seed);
    let epi_point = |rng: &mut SampleRng| -> Option<(S::Point, Vec<T>)> {
        let x = space.sample(rng);
        let fx = f.eval(&x).finite()?;
        let slack: T = rng.uniform(0.0, 2.0);
        Some((x, vec![fx + slack]))
    };
    type EpiCase<P, T> = ((P, Vec<T>), (P, Vec<T>), T);
    let cases: Vec<EpiCase<S::Point, T>> = (0..n)
        .filter_map(|i| {
            let p = epi_point(&mut rng);
            let q = epi_point(&mut rng);
            let t = sample_t(&mut rng, i);
            Some((p?, q?, t))
        })
        .collect();
    if cases.is_empty() {
        return Verdict::inconclusive("epigraph_convexity", seed, n);
    }

    let sides = |case: &EpiCase<S::Point, T>| {
        let (p, q, t) = case;
        let w = product.combine(p, q, *t);
        let fw = combined_value(f.eval(&w.0));
        (fw, w.1[0])
    };
    let result = sweep(&cases, |case| {
        let (lhs, rhs) = sides(case);
        CaseEval::Violation(tol.excess(lhs, rhs))
    });
    finish("epigraph_convexity", seed, tol.eps_eq, &cases, result, |i, case| {
        let (lhs, rhs) = sides(case);
        Witness {
            sample_index: i,
            points: vec![case.0.clone(), case.1.clone()],
            params: vec![case.2],
            lhs,
            rhs,
            violation: tol.excess(lhs, rhs),
        }
    })
}

/// Sublevel-set convexity at height `h`: pairs with `f ≤ h` must keep
/// `f(W(x, y; t)) ≤ h`. Inconclusive when fewer than two members are found
/// within the sampling budget.
pub fn sublevel_convexity_check<T, S>(
    space: &S,
    f: &WFn<S::Point, T>,
    h: T,
    n: usize,
    seed: u64,
    tol: &Tolerances<T>,
) -> Verdict<T, S::Point>
where
    T: Scalar,
    S: ConvexSpace<T> + Sync,
{
    assert!(n >= 1);
    let mut rng = SampleRng::seeded(seed);
    let budget = n.saturating_mul(64).max(1000);
    let mut members = Vec::new();
    for _ in 0..budget {
        if members.len() >= 2 * n {
            break;
        }
        let p = space.sample(&mut rng);
        if matches!(f.eval(&p), Eval::Val(v) if v <= h) {
            members.push(p);
        }
    }
    if members.len() < 2 {
        return Verdict::inconclusive("sublevel_convexity", seed, budget);
    }
    let cases: Vec<(S::Point, S::Point, T)> = (0..n)
        .map(|i| {
            let x = members[rng.index(members.len())].clone();
            let y = members[rng.index(members.len())].clone();
            let t = sample_t(&mut rng, i);
            (x, y, t)
        })
        .collect();

    let lhs_of = |case: &(S::Point, S::Point, T)| {
        combined_value(f.eval(&space.combine(&case.0, &case.1, case.2)))
    };
    let result = sweep(&cases, |case| CaseEval::Violation(tol.excess(lhs_of(case), h)));
    finish("sublevel_convexity", seed, tol.eps_eq, &cases, result, |i, case| {
        let lhs = lhs_of(case);
        Witness {
            sample_index: i,
            points: vec![case.0.clone(), case.1.clone()],
            params: vec![case.2],
            lhs,
            rhs: h,
            violation: tol.excess(lhs, h),
        }
    })
}

/// Strict convexity of the space itself: combinations of distinct points
/// of a sphere must land strictly inside the ball,
/// `d(W(x, y; t), x₀) ≤ ρ·(1 − δ_strict)`. Sphere points are constructed
/// by scaling sampled directions, pairs closer than a tenth of the radius
/// are skipped, and `t ∈ [0.05, 0.95]`.
pub fn strict_space_check<T, S>(space: &S, n: usize, seed: u64, tol: &Tolerances<T>) -> Verdict<T, S::Point>
where
    T: Scalar,
    S: ConvexSpace<T> + Sync,
{
    assert!(n >= 1);
    let mut rng = SampleRng::seeded(seed);
    let mut cases = Vec::with_capacity(n);
    for i in 0..n {
        let center = space.sample(&mut rng);
        let z1 = space.sample(&mut rng);
        let z2 = space.sample(&mut rng);
        let d1 = space.dist(&center, &z1);
        let d2 = space.dist(&center, &z2);
        let rho = cast::<T>(0.5) * d1.min(d2);
        let t = sample_t_in(&mut rng, i, 0.05, 0.95);
        if rho < cast(1e-6) {
            continue;
        }
        let x = space.combine(&center, &z1, rho / d1);
        let y = space.combine(&center, &z2, rho / d2);
        if space.dist(&x, &y) < cast::<T>(0.1) * rho {
            continue;
        }
        cases.push((center, x, y, rho, t));
    }
    if cases.is_empty() {
        return Verdict::inconclusive("strict_space", seed, n);
    }

    // violation normalized by the radius: positive means the combination
    // reached the sphere instead of the open ball
    let violation = |case: &(S::Point, S::Point, S::Point, T, T)| {
        let (center, x, y, rho, t) = case;
        let lhs = space.dist(&space.combine(x, y, *t), center);
        lhs / *rho - T::one() + tol.delta_strict
    };
    let result = sweep(&cases, |case| CaseEval::Violation(violation(case)));
    let skipped_precondition = n - cases.len();
    let mut verdict = finish("strict_space", seed, T::zero(), &cases, result, |i, case| {
        let lhs = space.dist(&space.combine(&case.1, &case.2, case.4), &case.0);
        Witness {
            sample_index: i,
            points: vec![case.0.clone(), case.1.clone(), case.2.clone()],
            params: vec![case.3, case.4],
            lhs,
            rhs: case.3,
            violation: violation(case),
        }
    });
    verdict.skipped += skipped_precondition;
    verdict
}

/// (Strict) W-convexity of `f` restricted to the sphere `S(x₀, σ)` inside
/// `B(x₀, ρ)`: combination arguments are sphere points.
#[allow(clippy::too_many_arguments)]
pub fn sphere_wconvex_check<T, S>(
    space: &S,
    f: &WFn<S::Point, T>,
    x0: &S::Point,
    rho: T,
    sigma: T,
    n: usize,
    seed: u64,
    strict: bool,
    tol: &Tolerances<T>,
) -> Verdict<T, S::Point>
where
    T: Scalar,
    S: ConvexSpace<T> + Sync,
{
    assert!(n >= 1);
    assert!(
        T::zero() < sigma && sigma < rho,
        "sphere radius must satisfy 0 < sigma < rho"
    );
    let mut rng = SampleRng::seeded(seed);
    let mut cases = Vec::with_capacity(n);
    for i in 0..n {
        let x = sample_on_sphere(space, x0, sigma, &mut rng, 64);
        let y = sample_on_sphere(space, x0, sigma, &mut rng, 64);
        let t = if strict {
            sample_t_in(&mut rng, i, 0.05, 0.95)
        } else {
            sample_t(&mut rng, i)
        };
        if let (Some(x), Some(y)) = (x, y) {
            if strict && space.dist(&x, &y) < cast::<T>(0.05) * sigma {
                continue;
            }
            cases.push((x, y, t));
        }
    }
    if cases.is_empty() {
        return Verdict::inconclusive("sphere_wconvex", seed, n);
    }

    let margin = if strict { tol.delta_strict } else { T::zero() };
    let tolerance = if strict { T::zero() } else { tol.eps_eq };
    let sides = |case: &(S::Point, S::Point, T)| {
        let (x, y, t) = case;
        let (fx, fy) = eval_pair(f, x, y)?;
        let lhs = combined_value(f.eval(&space.combine(x, y, *t)));
        Some((lhs, (T::one() - *t) * fx + *t * fy))
    };
    let result = sweep(&cases, |case| match sides(case) {
        Some((lhs, rhs)) => CaseEval::Violation(tol.excess(lhs, rhs) + margin),
        None => CaseEval::Skip,
    });
    let mut verdict = finish("sphere_wconvex", seed, tolerance, &cases, result, |i, case| {
        let (lhs, rhs) = sides(case).unwrap_or((T::infinity(), T::zero()));
        Witness {
            sample_index: i,
            points: vec![case.0.clone(), case.1.clone()],
            params: vec![case.2],
            lhs,
            rhs,
            violation: tol.excess(lhs, rhs) + margin,
        }
    });
    if strict {
        verdict.property = "sphere_strict_wconvex".into();
    }
    verdict
}

/// Aggregate strict-convexity certificate: `d(·, x₀)` must be strictly
/// W-convex w.r.t. sampled spheres. A pass certifies the space strictly
/// convex for the Chebyshev diagnostics.
pub fn strict_convexity_certificate<T, S>(
    space: &S,
    spheres: usize,
    n_per_sphere: usize,
    seed: u64,
    tol: &Tolerances<T>,
) -> Verdict<T, S::Point>
where
    T: Scalar,
    S: ConvexSpace<T> + Clone + Send + Sync + 'static,
{
    assert!(spheres >= 1);
    let mut rng = SampleRng::seeded(seed);
    let mut combined: Option<Verdict<T, S::Point>> = None;
    let mut conclusive = 0;
    for k in 0..spheres {
        let x0 = space.sample(&mut rng);
        let z = space.sample(&mut rng);
        let d = space.dist(&x0, &z);
        if d < cast(1e-3) {
            continue;
        }
        let rho = d; // f is defined on B(x0, rho), the sphere sits inside
        let sigma = cast::<T>(0.8) * rho;
        let f = crate::functions::distance_to_point(space, x0.clone(), crate::functions::ScalarMap::Identity);
        let v = sphere_wconvex_check(
            space,
            &f,
            &x0,
            rho,
            sigma,
            n_per_sphere,
            crate::sampling::derive_seed(seed, k as u64),
            true,
            tol,
        );
        if v.outcome == Outcome::Inconclusive {
            continue;
        }
        conclusive += 1;
        combined = Some(match combined.take() {
            None => v,
            Some(acc) => merge_worst(acc, v),
        });
    }
    match combined {
        Some(mut v) if conclusive > 0 => {
            v.property = "strict_convexity_certificate".into();
            v.seed = seed;
            v
        }
        _ => Verdict::inconclusive("strict_convexity_certificate", seed, spheres),
    }
}

fn merge_worst<T: Scalar, P>(a: Verdict<T, P>, b: Verdict<T, P>) -> Verdict<T, P> {
    let (worse, better) = if b.worst_violation > a.worst_violation { (b, a) } else { (a, b) };
    Verdict {
        property: worse.property.clone(),
        outcome: if worse.outcome == Outcome::Failed || better.outcome == Outcome::Failed {
            Outcome::Failed
        } else {
            Outcome::Passed
        },
        samples_checked: worse.samples_checked + better.samples_checked,
        skipped: worse.skipped + better.skipped,
        worst_violation: worse.worst_violation,
        tolerance: worse.tolerance,
        seed: worse.seed,
        witness: worse.witness.or(better.witness),
    }
}

/// Spot-check closure of a set under `W`: combinations of sampled members
/// must stay members.
pub fn convex_set_check<T, S>(
    space: &S,
    set: &ConvexSet<S::Point>,
    n: usize,
    seed: u64,
) -> Verdict<T, S::Point>
where
    T: Scalar,
    S: ConvexSpace<T> + Sync,
{
    assert!(n >= 1);
    let mut rng = SampleRng::seeded(seed);
    let cases: Vec<(S::Point, S::Point, T)> = (0..n)
        .map(|i| (set.sample(&mut rng), set.sample(&mut rng), sample_t(&mut rng, i)))
        .collect();
    let violation = |case: &(S::Point, S::Point, T)| {
        if set.contains(&space.combine(&case.0, &case.1, case.2)) {
            -T::one()
        } else {
            T::one()
        }
    };
    let result = sweep(&cases, |case| CaseEval::Violation(violation(case)));
    finish("convex_set_closure", seed, T::zero(), &cases, result, |i, case| Witness {
        sample_index: i,
        points: vec![case.0.clone(), case.1.clone(), space.combine(&case.0, &case.1, case.2)],
        params: vec![case.2],
        lhs: T::one(),
        rhs: T::zero(),
        violation: violation(case),
    })
}

/// Membership check on intersections: `W`-combinations of sampled common
/// members must stay in every set. Inconclusive when the intersection
/// cannot be sampled.
pub fn intersection_convexity_check<T, S>(
    space: &S,
    sets: &[&ConvexSet<S::Point>],
    n: usize,
    seed: u64,
) -> Verdict<T, S::Point>
where
    T: Scalar,
    S: ConvexSpace<T> + Sync,
{
    assert!(n >= 1);
    assert!(!sets.is_empty());
    let mut rng = SampleRng::seeded(seed);
    let budget = n.saturating_mul(256).max(1000);
    let mut members = Vec::new();
    for _ in 0..budget {
        if members.len() >= 2 * n {
            break;
        }
        let p = sets[0].sample(&mut rng);
        if sets.iter().all(|s| s.contains(&p)) {
            members.push(p);
        }
    }
    if members.len() < 2 {
        return Verdict::inconclusive("intersection_convexity", seed, budget);
    }
    let cases: Vec<(S::Point, S::Point, T)> = (0..n)
        .map(|i| {
            let x = members[rng.index(members.len())].clone();
            let y = members[rng.index(members.len())].clone();
            (x, y, sample_t(&mut rng, i))
        })
        .collect();
    let violation = |case: &(S::Point, S::Point, T)| {
        let w = space.combine(&case.0, &case.1, case.2);
        if sets.iter().all(|s| s.contains(&w)) {
            -T::one()
        } else {
            T::one()
        }
    };
    let result = sweep(&cases, |case| CaseEval::Violation(violation(case)));
    finish("intersection_convexity", seed, T::zero(), &cases, result, |i, case| Witness {
        sample_index: i,
        points: vec![case.0.clone(), case.1.clone()],
        params: vec![case.2],
        lhs: T::one(),
        rhs: T::zero(),
        violation: violation(case),
    })
}

/// The order-swap bound
/// `d(W(x,y;λ), W(y,x;1−λ)) ≤ ((1−λ)² + λ²)·d(x, y)`; in all bundled
/// geometries `W` is symmetric so the left side is zero, but the inequality
/// itself is what gets checked.
pub fn combine_swap_bound_check<T, S>(
    space: &S,
    n: usize,
    seed: u64,
    tol: &Tolerances<T>,
) -> Verdict<T, S::Point>
where
    T: Scalar,
    S: ConvexSpace<T> + Sync,
{
    assert!(n >= 1);
    let mut rng = SampleRng::seeded(seed);
    let cases: Vec<(S::Point, S::Point, T)> = (0..n)
        .map(|i| (space.sample(&mut rng), space.sample(&mut rng), sample_t(&mut rng, i)))
        .collect();
    let sides = |case: &(S::Point, S::Point, T)| {
        let (x, y, l) = case;
        let lhs = space.dist(&space.combine(x, y, *l), &space.combine(y, x, T::one() - *l));
        let s = T::one() - *l;
        let rhs = (s * s + *l * *l) * space.dist(x, y);
        (lhs, rhs)
    };
    let result = sweep(&cases, |case| {
        let (lhs, rhs) = sides(case);
        CaseEval::Violation(tol.excess(lhs, rhs))
    });
    finish("combine_swap_bound", seed, tol.eps_eq, &cases, result, |i, case| {
        let (lhs, rhs) = sides(case);
        Witness {
            sample_index: i,
            points: vec![case.0.clone(), case.1.clone()],
            params: vec![case.2],
            lhs,
            rhs,
            violation: tol.excess(lhs, rhs),
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::functions::{distance_to_point, metric_ball_set, ScalarMap, WFn};
    use crate::spaces::{Euclidean, Norm};

    fn plane() -> Euclidean<f64> {
        Euclidean::new(2, Norm::L2).unwrap()
    }

    fn line() -> Euclidean<f64> {
        Euclidean::new(1, Norm::L2).unwrap()
    }

    fn tol() -> Tolerances<f64> {
        Tolerances::default()
    }

    #[test]
    fn norm_distance_is_wconvex() {
        let sp = plane();
        let f = distance_to_point(&sp, vec![0.0, 0.0], ScalarMap::Identity);
        assert!(verify_wconvex(&sp, &f, 2000, 7, None, &tol()).passed());
    }

    #[test]
    fn negated_distance_fails_with_replayable_witness() {
        let sp = plane();
        let d0 = distance_to_point(&sp, vec![0.0, 0.0], ScalarMap::Identity);
        let f = WFn::new("neg_dist", move |p: &Vec<f64>| match d0.eval(p) {
            Eval::Val(v) => Eval::Val(-v),
            other => other,
        });
        let v = verify_wconvex(&sp, &f, 2000, 7, None, &tol());
        assert_eq!(v.outcome, Outcome::Failed);
        let w = v.witness.expect("witness");
        // replay: recompute both sides from the witness payload
        let lhs = f
            .eval_finite(&sp.combine(&w.points[0], &w.points[1], w.params[0]))
            .unwrap();
        let rhs = (1.0 - w.params[0]) * f.eval_finite(&w.points[0]).unwrap()
            + w.params[0] * f.eval_finite(&w.points[1]).unwrap();
        assert!(lhs > rhs + tol().eps_eq * (1.0 + rhs.abs()));
    }

    #[test]
    fn strict_square_passes_plain_distance_fails() {
        let sp = plane();
        let sq = distance_to_point(&sp, vec![0.0, 0.0], ScalarMap::Square);
        assert!(verify_strict_wconvex(&sp, &sq, 2000, 5, 0.1, None, &tol()).passed());
        // d(.,0) is affine along rays through the base point
        let d = distance_to_point(&sp, vec![0.0, 0.0], ScalarMap::Identity);
        let v = verify_strict_wconvex(&sp, &d, 2000, 5, 0.1, None, &tol());
        assert_eq!(v.outcome, Outcome::Failed);
    }

    #[test]
    fn dyadic_grid_shape() {
        let g = DyadicGrid::new(4).unwrap();
        let vals: Vec<f64> = g.values();
        assert_eq!(vals.len(), 17);
        assert_eq!(vals[0], 0.0);
        assert_eq!(*vals.last().unwrap(), 1.0);
        assert!(vals.windows(2).all(|w| w[0] < w[1]));
        assert!(DyadicGrid::new(13).is_err());
    }

    #[test]
    fn dyadic_check_level_zero_is_endpoints_only() {
        let sp = line();
        let f = distance_to_point(&sp, vec![0.0], ScalarMap::Square);
        let v = dyadic_convexity_check(&sp, &f, &vec![-1.0], &vec![1.0], 0, &tol()).unwrap();
        assert!(v.passed());
        assert_eq!(v.samples_checked, 2);
    }

    #[test]
    fn dyadic_check_flags_planted_failure_at_midpoint() {
        let sp = line();
        let f = WFn::total("neg_abs", |p: &Vec<f64>| -p[0].abs());
        let v = dyadic_convexity_check(&sp, &f, &vec![-1.0], &vec![1.0], 3, &tol()).unwrap();
        assert_eq!(v.outcome, Outcome::Failed);
        let w = v.witness.unwrap();
        // worst violation is the midpoint, which lives at level 1
        assert_eq!(w.params[0], 0.5);
        assert_eq!(w.params[1], 1.0);
    }

    #[test]
    fn segment_points_materialize_identities() {
        let sp = plane();
        let pts = segment_points(
            &sp,
            &vec![0.0, 0.0],
            &vec![1.0, 0.0],
            SegmentGrid::Uniform(5),
            &tol(),
        )
        .unwrap();
        assert_eq!(pts, vec![
            vec![0.0, 0.0],
            vec![0.25, 0.0],
            vec![0.5, 0.0],
            vec![0.75, 0.0],
            vec![1.0, 0.0]
        ]);
        assert!(segment_points(&sp, &vec![0.0, 0.0], &vec![0.0, 0.0], SegmentGrid::Uniform(5), &tol()).is_err());
    }

    #[test]
    fn segment_lipschitz_on_ray_is_tight() {
        let sp = plane();
        let f = distance_to_point(&sp, vec![0.0, 0.0], ScalarMap::Identity);
        let r = segment_lipschitz_check(&sp, &f, &vec![1.0, 0.0], &vec![5.0, 0.0], 100, None, &tol()).unwrap();
        assert!(r.passed);
        assert!((r.constant - 1.0).abs() < 1e-12);
        assert!(r.max_ratio / r.constant >= 1.0 - 1e-6);
        assert!(r.max_ratio <= r.constant * (1.0 + 1e-9));
    }

    #[test]
    fn segment_lipschitz_constant_function() {
        let sp = plane();
        let f = WFn::total("const", |_: &Vec<f64>| 2.0);
        let r = segment_lipschitz_check(&sp, &f, &vec![0.0, 0.0], &vec![1.0, 1.0], 50, None, &tol()).unwrap();
        assert!(r.passed);
        assert_eq!(r.constant, 0.0);
        assert_eq!(r.max_ratio, 0.0);
    }

    #[test]
    fn midpoint_check_passes_convex_fails_step() {
        let sp = line();
        let f = distance_to_point(&sp, vec![0.0], ScalarMap::Identity);
        assert!(midpoint_convexity_check(&sp, &f, 2000, 11, &tol()).passed());
        let step = WFn::total("step", |p: &Vec<f64>| if p[0] >= 0.0 { 1.0 } else { 0.0 });
        let v = midpoint_convexity_check(&sp, &step, 2000, 11, &tol());
        assert_eq!(v.outcome, Outcome::Failed);
    }

    #[test]
    fn epigraph_agreement_on_convex_and_planted() {
        let sp = line();
        let f = distance_to_point(&sp, vec![0.0], ScalarMap::Identity);
        assert!(epigraph_convexity_check(&sp, &f, 2000, 3, &tol()).passed());
        let neg = WFn::total("neg_abs", |p: &Vec<f64>| -p[0].abs());
        assert_eq!(
            epigraph_convexity_check(&sp, &neg, 2000, 3, &tol()).outcome,
            Outcome::Failed
        );
    }

    #[test]
    fn sublevel_check_and_inconclusive_height() {
        let sp = plane();
        let f = distance_to_point(&sp, vec![0.0, 0.0], ScalarMap::Identity);
        assert!(sublevel_convexity_check(&sp, &f, 1.0, 1000, 13, &tol()).passed());
        // below the minimum the sublevel set is empty
        let v = sublevel_convexity_check(&sp, &f, -1.0, 1000, 13, &tol());
        assert_eq!(v.outcome, Outcome::Inconclusive);
    }

    #[test]
    fn quasiconvex_step_passes_sublevel_fails_wconvex() {
        let sp = line();
        let step = WFn::total("step", |p: &Vec<f64>| if p[0] >= 0.0 { 1.0 } else { 0.0 });
        assert!(sublevel_convexity_check(&sp, &step, 0.5, 1000, 17, &tol()).passed());
        assert_eq!(verify_wconvex(&sp, &step, 2000, 17, None, &tol()).outcome, Outcome::Failed);
    }

    #[test]
    fn strict_space_l2_passes_l1_linf_fail() {
        let t = tol();
        assert!(strict_space_check(&plane(), 2000, 19, &t).passed());
        let l1 = Euclidean::<f64>::new(2, Norm::L1).unwrap();
        assert_eq!(strict_space_check(&l1, 2000, 19, &t).outcome, Outcome::Failed);
        let li = Euclidean::<f64>::new(2, Norm::LInf).unwrap();
        assert_eq!(strict_space_check(&li, 2000, 19, &t).outcome, Outcome::Failed);
    }

    #[test]
    fn planted_l1_strictness_witness() {
        // x = (1,0), y = (0,1) on the unit l1 sphere: the midpoint keeps norm 1
        let l1 = Euclidean::<f64>::new(2, Norm::L1).unwrap();
        let x0 = vec![0.0, 0.0];
        let mid = l1.combine(&vec![1.0, 0.0], &vec![0.0, 1.0], 0.5);
        assert_eq!(l1.dist(&mid, &x0), 1.0);
        let li = Euclidean::<f64>::new(2, Norm::LInf).unwrap();
        let mid = li.combine(&vec![1.0, 1.0], &vec![1.0, -1.0], 0.5);
        assert_eq!(li.dist(&mid, &x0), 1.0);
    }

    #[test]
    fn sphere_checks_follow_space_strictness() {
        let t = tol();
        let sp = plane();
        let f = distance_to_point(&sp, vec![0.0, 0.0], ScalarMap::Identity);
        let v = sphere_wconvex_check(&sp, &f, &vec![0.0, 0.0], 1.0, 0.8, 1000, 23, true, &t);
        assert!(v.passed());
        let l1 = Euclidean::<f64>::new(2, Norm::L1).unwrap();
        let f1 = distance_to_point(&l1, vec![0.0, 0.0], ScalarMap::Identity);
        let v1 = sphere_wconvex_check(&l1, &f1, &vec![0.0, 0.0], 1.0, 0.8, 1000, 23, true, &t);
        assert_eq!(v1.outcome, Outcome::Failed);
    }

    #[test]
    fn certificate_for_l2() {
        let t = tol();
        assert!(strict_convexity_certificate(&plane(), 10, 300, 29, &t).passed());
    }

    #[test]
    fn ball_intersections_stay_convex() {
        let sp = plane();
        let a = metric_ball_set(&sp, vec![0.0, 0.0], 0.8);
        let b = metric_ball_set(&sp, vec![0.4, 0.0], 0.8);
        let c = metric_ball_set(&sp, vec![0.2, 0.2], 0.8);
        let v = intersection_convexity_check(&sp, &[&a, &b, &c], 500, 31);
        assert!(v.passed(), "{v:?}");
    }

    #[test]
    fn swap_bound_holds() {
        let t = tol();
        assert!(combine_swap_bound_check(&plane(), 2000, 37, &t).passed());
    }

    #[test]
    fn local_lipschitz_bound_and_preconditions() {
        let sp = plane();
        let t = tol();
        let f = distance_to_point(&sp, vec![0.0, 0.0], ScalarMap::Identity);
        let r = local_lipschitz_from_bound(&sp, &f, &vec![0.0, 0.0], 2.0, 1.0, 2.0, 2000, 41, &t).unwrap();
        assert!(r.passed);
        assert_eq!(r.constant, 4.0);
        // claimed bound too small for |f| on the ball
        let err = local_lipschitz_from_bound(&sp, &f, &vec![0.0, 0.0], 2.0, 1.0, 0.5, 2000, 41, &t);
        assert!(matches!(err, Err(VerifyError::BoundViolated { .. })));
        // spaces without the extension property refuse the check
        let ivs = crate::spaces::IntervalSpace::<f64>::new();
        let fi = distance_to_point(&ivs, crate::spaces::Interval::new(0.0, 1.0).unwrap(), ScalarMap::Identity);
        let err = local_lipschitz_from_bound(
            &ivs,
            &fi,
            &crate::spaces::Interval::new(0.2, 0.8).unwrap(),
            0.2,
            0.1,
            1.0,
            100,
            41,
            &t,
        );
        assert!(matches!(err, Err(VerifyError::ExtensionUnsupported)));
    }

    #[test]
    fn bound_above_remark_holds_on_samples() {
        let sp = plane();
        let t = tol();
        let f = distance_to_point(&sp, vec![0.0, 0.0], ScalarMap::Square);
        // on B(x0, 1) around (0.5, 0): f <= (1.5)^2 = 2.25
        let v = bound_above_implies_bounded(&sp, &f, &vec![0.5, 0.0], 1.0, 2.25, 2000, 43, &t);
        assert!(v.passed());
    }
}
