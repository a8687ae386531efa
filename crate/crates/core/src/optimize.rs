//! Metric projection onto convex sets, Chebyshev diagnostics, and
//! fixed-point iteration expressed through the convex structure.
//!
//! The projection solver is segment descent: it repeatedly minimizes the
//! objective along `W`-chords between the incumbent and fresh member
//! samples. Chords of a convex set stay inside the set, and along a chord
//! the distance objective obeys the W-convexity chord bound, so this uses
//! only the two operations every convex set in this framework has:
//! membership and `W`.

use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use crate::functions::{ConvexSet, ScalarMap, WFn};
use crate::sampling::SampleRng;
use crate::scalar::{cast, Scalar};
use crate::space::{ConvexSpace, Tolerances};
use crate::verdict::{finish, sweep, CaseEval, Verdict, Witness};

/// Solver configuration.
///
/// `patience` is the number of consecutive chord passes without a `tol`
/// improvement after which a restart stops; `max_passes` is the hard cap.
/// `polish_rounds` runs extra chord passes between restart incumbents,
/// which sharpens clustered optima without disturbing flat optimal sets.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct SolveCfg<T> {
    pub starts: usize,
    pub patience: usize,
    pub max_passes: usize,
    pub tol: T,
    pub golden_tol: T,
    pub polish_rounds: usize,
    pub seed: u64,
}

impl<T: Scalar> Default for SolveCfg<T> {
    fn default() -> Self {
        Self {
            starts: 8,
            patience: 64,
            max_passes: 4000,
            tol: cast(1e-12),
            golden_tol: cast(1e-9),
            polish_rounds: 4,
            seed: 0x5EED,
        }
    }
}

/// Minimize `φ` on `[0, 1]`: a 64-interval grid scan guards against
/// non-unimodal objectives, then golden-section refines the bracketing
/// interval. Returns `(t*, φ(t*))` with `φ(t*)` no worse than the best grid
/// value.
pub fn golden_section_min<T: Scalar>(phi: impl Fn(T) -> T, tol: T) -> (T, T) {
    const GRID: usize = 64;
    let mut best_i = 0usize;
    let mut best_v = T::infinity();
    for i in 0..=GRID {
        let t = cast::<T>(i as f64 / GRID as f64);
        let v = phi(t);
        if v < best_v {
            best_v = v;
            best_i = i;
        }
    }
    let mut grid_best_t = cast::<T>(best_i as f64 / GRID as f64);
    let mut grid_best_v = best_v;

    let mut a = cast::<T>(best_i.saturating_sub(1) as f64 / GRID as f64);
    let mut b = cast::<T>((best_i + 1).min(GRID) as f64 / GRID as f64);
    let inv_phi = cast::<T>(0.618_033_988_749_894_9);
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let mut fc = phi(c);
    let mut fd = phi(d);
    let mut iters = 0;
    while (b - a) > tol && iters < 200 {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = phi(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = phi(d);
        }
        iters += 1;
    }
    let mid = (a + b) / cast(2.0);
    let fmid = phi(mid);
    if fmid < grid_best_v {
        grid_best_t = mid;
        grid_best_v = fmid;
    }
    if fc < grid_best_v {
        grid_best_t = c;
        grid_best_v = fc;
    }
    if fd < grid_best_v {
        grid_best_t = d;
        grid_best_v = fd;
    }
    (grid_best_t, grid_best_v)
}

/// Result of minimizing an objective over a convex set.
#[derive(Debug, Clone)]
pub struct MinimizeResult<P, T> {
    pub best: P,
    pub value: T,
    /// Total chord passes across restarts.
    pub iterations: usize,
    /// Final `(point, value)` of every restart, in restart order.
    pub candidates: Vec<(P, T)>,
    /// All restarts stopped on the stall criterion rather than the cap.
    pub converged: bool,
}

/// Extend past `outer` (seen from `inner`) and clip back to the set: the
/// farthest member on the segment from `inner` through `outer` to the
/// eightfold extension. Falls back to `outer` itself when the space has no
/// extension oracle.
fn extended_clip<T, S>(
    space: &S,
    set: &ConvexSet<S::Point>,
    inner: &S::Point,
    outer: &S::Point,
) -> S::Point
where
    T: Scalar,
    S: ConvexSpace<T>,
{
    let reach: T = cast(0.125);
    let far = match space.extend(inner, outer, reach) {
        Some(p) => p,
        None => return outer.clone(),
    };
    if set.contains(&far) {
        return far;
    }
    let half: T = cast(0.5);
    // the prefix up to `outer` (t = reach) is feasible by convexity
    let mut lo = reach;
    let mut up = T::one();
    for _ in 0..48 {
        let t = (lo + up) * half;
        if set.contains(&space.combine(inner, &far, t)) {
            lo = t;
        } else {
            up = t;
        }
    }
    let p = space.combine(inner, &far, lo);
    if set.contains(&p) {
        p
    } else {
        outer.clone()
    }
}

/// One descent step: minimize over the full feasible secant through
/// `incumbent` and `probe` — both ends extended through the extension
/// oracle and clipped back to the set by membership bisection. Without
/// extension support this degrades to the plain chord between the two
/// points. All evaluated points are members.
fn chord_step<T, S, F>(
    space: &S,
    set: &ConvexSet<S::Point>,
    incumbent: &S::Point,
    probe: &S::Point,
    obj: &F,
    golden_tol: T,
) -> (S::Point, T)
where
    T: Scalar,
    S: ConvexSpace<T>,
    F: Fn(&S::Point) -> T,
{
    let end_a = extended_clip(space, set, incumbent, probe);
    let end_b = extended_clip(space, set, probe, incumbent);
    let (s, v) = golden_section_min(|s: T| obj(&space.combine(&end_a, &end_b, s)), golden_tol);
    let point = space.combine(&end_a, &end_b, s);
    if set.contains(&point) {
        (point, v)
    } else {
        // boundary wiggle from the clipped ends; retreat to the incumbent
        (incumbent.clone(), obj(incumbent))
    }
}

/// Segment descent with restarts: minimize `obj` over `set` using only `W`,
/// the set's membership predicate and sampler, and (when present) the
/// extension oracle.
pub fn minimize_on_set<T, S, F>(
    space: &S,
    set: &ConvexSet<S::Point>,
    obj: F,
    cfg: &SolveCfg<T>,
) -> MinimizeResult<S::Point, T>
where
    T: Scalar,
    S: ConvexSpace<T>,
    F: Fn(&S::Point) -> T,
{
    assert!(cfg.starts >= 1, "solver needs at least one start");
    let root = SampleRng::seeded(cfg.seed);
    let mut candidates: Vec<(S::Point, T)> = Vec::with_capacity(cfg.starts);
    let mut total_passes = 0usize;
    let mut converged = true;

    for start in 0..cfg.starts {
        let mut rng = root.fork(start as u64);
        let mut incumbent = set.sample(&mut rng);
        let mut value = obj(&incumbent);
        let mut stall = 0usize;
        let mut passes = 0usize;
        while stall < cfg.patience && passes < cfg.max_passes {
            let probe = set.sample(&mut rng);
            let (point, v) = chord_step(space, set, &incumbent, &probe, &obj, cfg.golden_tol);
            passes += 1;
            if v < value - cfg.tol {
                incumbent = point;
                value = v;
                stall = 0;
            } else {
                stall += 1;
            }
        }
        if passes >= cfg.max_passes {
            converged = false;
        }
        total_passes += passes;
        candidates.push((incumbent, value));
    }

    // chord passes between restart incumbents; flat optimal sets are left
    // alone because updates require a strict tol improvement
    for _ in 0..cfg.polish_rounds {
        for i in 0..candidates.len() {
            for j in 0..candidates.len() {
                if i == j {
                    continue;
                }
                let (point, v) = chord_step(
                    space,
                    set,
                    &candidates[i].0,
                    &candidates[j].0,
                    &obj,
                    cfg.golden_tol,
                );
                if v < candidates[i].1 - cfg.tol {
                    candidates[i].0 = point;
                    candidates[i].1 = v;
                }
            }
        }
    }

    let best_idx = (0..candidates.len())
        .min_by(|&i, &j| {
            candidates[i]
                .1
                .partial_cmp(&candidates[j].1)
                .unwrap_or(std::cmp::Ordering::Equal)
        })
        .unwrap();
    MinimizeResult {
        best: candidates[best_idx].0.clone(),
        value: candidates[best_idx].1,
        iterations: total_passes,
        candidates,
        converged,
    }
}

/// Result of a metric-projection query.
#[derive(Debug, Clone)]
pub struct ProjectionResult<P, T> {
    pub best: P,
    pub distance: T,
    pub iterations: usize,
    /// Per-restart final points with their distances, for non-uniqueness
    /// detection.
    pub candidates: Vec<(P, T)>,
    pub converged: bool,
}

/// Pull `from` toward the query `x` to the farthest member of the set on
/// the segment `W(from, x; ·)`. Distance to `x` decreases linearly in the
/// parameter, so this never hurts, and it re-anchors iterates on the
/// query-facing boundary.
fn pull_toward<T, S>(
    space: &S,
    set: &ConvexSet<S::Point>,
    x: &S::Point,
    from: &S::Point,
) -> (S::Point, T)
where
    T: Scalar,
    S: ConvexSpace<T>,
{
    if set.contains(x) {
        return (x.clone(), T::zero());
    }
    let half: T = cast(0.5);
    let mut lo = T::zero();
    let mut up = T::one();
    for _ in 0..48 {
        let t = (lo + up) * half;
        if set.contains(&space.combine(from, x, t)) {
            lo = t;
        } else {
            up = t;
        }
    }
    // stay a hair inside the membership boundary so later membership
    // queries around the pulled point are numerically stable
    lo = (lo - cast(1e-9)).max(T::zero());
    let p = space.combine(from, x, lo);
    if set.contains(&p) {
        let d = space.dist(x, &p);
        (p, d)
    } else {
        (from.clone(), space.dist(x, from))
    }
}

/// Nearest-point query: segment descent on `y ↦ d(x, y)` with a pull
/// toward the query after every improvement.
pub fn project<T, S>(
    space: &S,
    set: &ConvexSet<S::Point>,
    x: &S::Point,
    cfg: &SolveCfg<T>,
) -> ProjectionResult<S::Point, T>
where
    T: Scalar,
    S: ConvexSpace<T>,
{
    assert!(cfg.starts >= 1, "solver needs at least one start");
    let obj = |y: &S::Point| space.dist(x, y);
    let root = SampleRng::seeded(cfg.seed);
    let mut candidates: Vec<(S::Point, T)> = Vec::with_capacity(cfg.starts);
    let mut total_passes = 0usize;
    let mut converged = true;

    for start in 0..cfg.starts {
        let mut rng = root.fork(start as u64);
        let s0 = set.sample(&mut rng);
        let (mut incumbent, mut value) = pull_toward(space, set, x, &s0);
        let mut stall = 0usize;
        let mut passes = 0usize;
        while stall < cfg.patience && passes < cfg.max_passes {
            // pulled probes sit on the query-facing boundary, so secants
            // between incumbent and probe can sag toward the optimum
            let probe = pull_toward(space, set, x, &set.sample(&mut rng)).0;
            let (point, v) = chord_step(space, set, &incumbent, &probe, &obj, cfg.golden_tol);
            // pulling the chord minimizer toward the query before judging it
            // rescues chord points that sit deep inside the set
            let (pulled, pv) = pull_toward(space, set, x, &point);
            let (cand, cv) = if pv <= v { (pulled, pv) } else { (point, v) };
            passes += 1;
            if cv < value - cfg.tol {
                incumbent = cand;
                value = cv;
                stall = 0;
            } else {
                stall += 1;
            }
        }
        if passes >= cfg.max_passes {
            converged = false;
        }
        total_passes += passes;
        candidates.push((incumbent, value));
    }

    for _ in 0..cfg.polish_rounds {
        for i in 0..candidates.len() {
            for j in 0..candidates.len() {
                if i == j {
                    continue;
                }
                let (point, v) = chord_step(
                    space,
                    set,
                    &candidates[i].0,
                    &candidates[j].0,
                    &obj,
                    cfg.golden_tol,
                );
                let (pulled, pv) = pull_toward(space, set, x, &point);
                let (cand, cv) = if pv <= v { (pulled, pv) } else { (point, v) };
                if cv < candidates[i].1 - cfg.tol {
                    candidates[i] = (cand, cv);
                }
            }
        }
    }

    let best_idx = (0..candidates.len())
        .min_by(|&i, &j| {
            candidates[i]
                .1
                .partial_cmp(&candidates[j].1)
                .unwrap_or(std::cmp::Ordering::Equal)
        })
        .unwrap();
    ProjectionResult {
        best: candidates[best_idx].0.clone(),
        distance: candidates[best_idx].1,
        iterations: total_passes,
        candidates,
        converged,
    }
}

/// One query of the Chebyshev diagnostic.
#[derive(Debug, Clone)]
pub struct ChebyshevEntry<P, T> {
    pub query: P,
    pub best: P,
    pub distance: T,
    /// Restart endpoints within `optimality_tol` of the best distance.
    pub cluster: Vec<P>,
    /// Metric diameter of the cluster: small means the projection behaves
    /// like a singleton, large is evidence of a non-Chebyshev set.
    pub diameter: T,
}

#[derive(Debug, Clone)]
pub struct ChebyshevReport<P, T> {
    pub entries: Vec<ChebyshevEntry<P, T>>,
    pub max_diameter: T,
}

/// For each query point, project with many restarts and measure how spread
/// out the near-optimal candidates are.
pub fn chebyshev_diagnostic<T, S>(
    space: &S,
    set: &ConvexSet<S::Point>,
    queries: &[S::Point],
    cfg: &SolveCfg<T>,
    optimality_tol: T,
) -> ChebyshevReport<S::Point, T>
where
    T: Scalar,
    S: ConvexSpace<T> + Sync,
    S::Point: Send,
{
    let entries: Vec<ChebyshevEntry<S::Point, T>> = queries
        .par_iter()
        .enumerate()
        .map(|(i, x)| {
            let mut qcfg = *cfg;
            qcfg.seed = crate::sampling::derive_seed(cfg.seed, i as u64);
            let r = project(space, set, x, &qcfg);
            let cluster: Vec<S::Point> = r
                .candidates
                .iter()
                .filter(|(_, d)| *d <= r.distance + optimality_tol * (T::one() + r.distance))
                .map(|(p, _)| p.clone())
                .collect();
            let mut diameter = T::zero();
            for a in 0..cluster.len() {
                for b in (a + 1)..cluster.len() {
                    diameter = diameter.max(space.dist(&cluster[a], &cluster[b]));
                }
            }
            ChebyshevEntry {
                query: x.clone(),
                best: r.best,
                distance: r.distance,
                cluster,
                diameter,
            }
        })
        .collect();
    let max_diameter = entries
        .iter()
        .fold(T::zero(), |acc, e| acc.max(e.diameter));
    ChebyshevReport {
        entries,
        max_diameter,
    }
}

/// A self-map of a space, the object fixed-point iteration studies.
/// Nonexpansiveness is checked by [`check_nonexpansive`], never assumed.
pub struct SelfMap<P> {
    label: String,
    apply: Arc<dyn Fn(&P) -> P + Send + Sync>,
}

impl<P> Clone for SelfMap<P> {
    fn clone(&self) -> Self {
        Self {
            label: self.label.clone(),
            apply: Arc::clone(&self.apply),
        }
    }
}

impl<P> std::fmt::Debug for SelfMap<P> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "SelfMap({})", self.label)
    }
}

impl<P> SelfMap<P> {
    pub fn new(label: impl Into<String>, apply: impl Fn(&P) -> P + Send + Sync + 'static) -> Self {
        Self {
            label: label.into(),
            apply: Arc::new(apply),
        }
    }

    pub fn apply(&self, p: &P) -> P {
        (self.apply)(p)
    }

    pub fn label(&self) -> &str {
        &self.label
    }
}

/// Averaging schedule for the fixed-point iteration; values must stay in
/// `(0, 1)`.
#[derive(Debug, Clone, Copy, Serialize)]
pub enum StepSchedule<T> {
    Constant(T),
    /// `t_n = 1/(n + 2)`.
    Harmonic,
}

impl<T: Scalar> StepSchedule<T> {
    pub fn value(&self, n: usize) -> T {
        match self {
            StepSchedule::Constant(t) => *t,
            StepSchedule::Harmonic => T::one() / cast(n as f64 + 2.0),
        }
    }
}

impl<T: Scalar> Default for StepSchedule<T> {
    fn default() -> Self {
        StepSchedule::Constant(cast(0.5))
    }
}

/// Outcome of the averaging iteration `x_{n+1} = W(x_n, T x_n; t_n)`.
#[derive(Debug, Clone)]
pub struct FixedPointResult<P, T> {
    pub point: P,
    /// `d(point, T point)` at the final iterate.
    pub residual: T,
    pub iterations: usize,
    /// Residual at every visited iterate; recorded, not asserted monotone.
    pub trace: Vec<T>,
    pub converged: bool,
    pub diverged: bool,
}

/// Run the averaging iteration until the residual drops below `fp_tol` or
/// the iteration budget is exhausted. Residual growth beyond `10⁶` times
/// the initial value raises the divergence flag.
pub fn mann_iterate<T, S>(
    space: &S,
    map: &SelfMap<S::Point>,
    x0: &S::Point,
    schedule: &StepSchedule<T>,
    fp_tol: T,
    max_iter: usize,
) -> FixedPointResult<S::Point, T>
where
    T: Scalar,
    S: ConvexSpace<T>,
{
    if let StepSchedule::Constant(t) = schedule {
        assert!(
            *t > T::zero() && *t < T::one(),
            "schedule values must lie in (0, 1)"
        );
    }
    let mut x = x0.clone();
    let mut trace = Vec::new();
    let mut initial = None;
    for n in 0..=max_iter {
        let tx = map.apply(&x);
        let r = space.dist(&x, &tx);
        trace.push(r);
        let r0 = *initial.get_or_insert(r);
        if r <= fp_tol {
            return FixedPointResult {
                point: x,
                residual: r,
                iterations: n,
                trace,
                converged: true,
                diverged: false,
            };
        }
        if r0 > T::zero() && r > cast::<T>(1e6) * r0 {
            return FixedPointResult {
                point: x,
                residual: r,
                iterations: n,
                trace,
                converged: false,
                diverged: true,
            };
        }
        if n == max_iter {
            break;
        }
        x = space.combine(&x, &tx, schedule.value(n));
    }
    let residual = *trace.last().unwrap();
    FixedPointResult {
        point: x,
        residual,
        iterations: max_iter,
        trace,
        converged: false,
        diverged: false,
    }
}

/// The residual function `f(x) = d(x, T x)`; its zeros are the fixed
/// points, and a strict-verifier-certified residual with a minimizer at
/// tolerance certifies a fixed point.
pub fn residual_function<T, S>(space: &S, map: &SelfMap<S::Point>) -> WFn<S::Point, T>
where
    T: Scalar,
    S: ConvexSpace<T> + Clone + Send + Sync + 'static,
    S::Point: 'static,
{
    let sp = space.clone();
    let m = map.clone();
    WFn::total(format!("residual({})", map.label()), move |p: &S::Point| {
        sp.dist(p, &m.apply(p))
    })
}

/// Check `d(Tx, Ty) ≤ d(x, y)` on `n` sampled pairs.
pub fn check_nonexpansive<T, S>(
    space: &S,
    map: &SelfMap<S::Point>,
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
    let cases: Vec<(S::Point, S::Point)> = (0..n)
        .map(|_| (space.sample(&mut rng), space.sample(&mut rng)))
        .collect();
    let sides = |case: &(S::Point, S::Point)| {
        let lhs = space.dist(&map.apply(&case.0), &map.apply(&case.1));
        let rhs = space.dist(&case.0, &case.1);
        (lhs, rhs)
    };
    let result = sweep(&cases, |case| {
        let (lhs, rhs) = sides(case);
        CaseEval::Violation(tol.excess(lhs, rhs))
    });
    finish("nonexpansive", seed, tol.eps_eq, &cases, result, |i, case| {
        let (lhs, rhs) = sides(case);
        Witness {
            sample_index: i,
            points: vec![case.0.clone(), case.1.clone()],
            params: vec![],
            lhs,
            rhs,
            violation: tol.excess(lhs, rhs),
        }
    })
}

/// Result of probing whether best distances stabilize as the projection
/// budget grows, the numeric surrogate for proximality of a closed set.
#[derive(Debug, Clone)]
pub struct ProximalityReport<P, T> {
    pub stabilized: bool,
    /// Best distance per budget round.
    pub distances: Vec<T>,
    pub best: P,
}

/// Run `project` with doubling budgets; stabilized means two successive
/// rounds agreed within `tol`.
pub fn proximality_probe<T, S>(
    space: &S,
    set: &ConvexSet<S::Point>,
    x: &S::Point,
    budget: usize,
    seed: u64,
    tol: T,
) -> ProximalityReport<S::Point, T>
where
    T: Scalar,
    S: ConvexSpace<T>,
{
    assert!(budget >= 1);
    let mut distances: Vec<T> = Vec::new();
    let mut best: Option<(S::Point, T)> = None;
    let mut stabilized = false;
    let mut m = budget;
    for round in 0..6 {
        let cfg = SolveCfg {
            patience: m,
            max_passes: 8 * m,
            seed: seed.wrapping_add(round),
            ..SolveCfg::default()
        };
        let r = project(space, set, x, &cfg);
        if best.as_ref().is_none_or(|(_, d)| r.distance < *d) {
            best = Some((r.best.clone(), r.distance));
        }
        if let Some(prev) = distances.last() {
            if (*prev - r.distance).abs() <= tol {
                distances.push(r.distance);
                stabilized = true;
                break;
            }
        }
        distances.push(r.distance);
        m *= 2;
    }
    let (best, _) = best.expect("at least one round ran");
    ProximalityReport {
        stabilized,
        distances,
        best,
    }
}

/// Joint diagnostic for the residual-minimizer fixed-point criterion.
#[derive(Debug, Clone)]
pub struct ResidualMinimizerReport<P, T> {
    /// Strict W-convexity verdict for the (optionally surrogate-composed)
    /// residual function.
    pub strict_verdict: Verdict<T, P>,
    pub minimizer: P,
    pub residual_at_minimizer: T,
    /// False only when the strict certificate and a converged minimization
    /// coexist with a residual above `10 × fp_tol` — which would contradict
    /// the fixed-point criterion.
    pub consistent: bool,
}

/// Certify strict W-convexity of the residual (through an optional
/// increasing strictly-convex surrogate, which shares its minimizer),
/// minimize it over the domain, and cross-check the fixed-point criterion.
#[allow(clippy::too_many_arguments)]
pub fn residual_minimizer_check<T, S>(
    space: &S,
    map: &SelfMap<S::Point>,
    domain: &ConvexSet<S::Point>,
    surrogate: Option<ScalarMap<T>>,
    n: usize,
    seed: u64,
    cfg: &SolveCfg<T>,
    fp_tol: T,
    tol: &Tolerances<T>,
) -> ResidualMinimizerReport<S::Point, T>
where
    T: Scalar,
    S: ConvexSpace<T> + Clone + Send + Sync + 'static,
{
    let f: WFn<S::Point, T> = residual_function(space, map);
    let certified = match surrogate {
        Some(m) => crate::functions::compose_increasing_convex(&f, m),
        None => f.clone(),
    };
    let strict_verdict = crate::verify::verify_strict_wconvex(
        space,
        &certified,
        n,
        seed,
        cast(0.1),
        Some(domain),
        tol,
    );
    let min = minimize_on_set(space, domain, |p| f.eval_finite(p).unwrap_or_else(T::infinity), cfg);
    let residual_at_minimizer = min.value;
    let consistent = !(strict_verdict.passed()
        && min.converged
        && residual_at_minimizer > cast::<T>(10.0) * fp_tol);
    ResidualMinimizerReport {
        strict_verdict,
        minimizer: min.best,
        residual_at_minimizer,
        consistent,
    }
}
