//! Oracle-backed expected values: every nontrivial number asserted here is
//! computed by an independent brute-force or closed-form oracle defined in
//! this file, never by the code path under test.

use wconvex::axioms::check_convex_structure;
use wconvex::functions::{distance_map, distance_to_point, segment_set, ScalarMap};
use wconvex::optimize::{
    chebyshev_diagnostic, golden_section_min, mann_iterate, SelfMap, SolveCfg, StepSchedule,
};
use wconvex::sampling::SampleRng;
use wconvex::space::{ConvexSpace, Tolerances};
use wconvex::spaces::{hausdorff_interval_distance, Euclidean, Interval, IntervalSpace, Norm};
use wconvex::verify::segment_lipschitz_check;

type Plane = Euclidean<f64>;

fn l2_plane() -> Plane {
    Euclidean::new(2, Norm::L2).unwrap()
}

fn tol() -> Tolerances<f64> {
    Tolerances::default()
}

// ---------------------------------------------------------------------------
// Hausdorff distance: brute-force two-sided sup-inf oracle over discretized
// point sets.
// ---------------------------------------------------------------------------

fn hausdorff_oracle(a: &Interval<f64>, b: &Interval<f64>, step: f64) -> f64 {
    let grid = |i: &Interval<f64>| -> Vec<f64> {
        let n = ((i.b - i.a) / step).ceil() as usize;
        let mut pts: Vec<f64> = (0..=n).map(|k| (i.a + k as f64 * step).min(i.b)).collect();
        pts.push(i.b);
        pts
    };
    let directed = |from: &[f64], to: &[f64]| -> f64 {
        from.iter()
            .map(|x| {
                to.iter()
                    .map(|y| (x - y).abs())
                    .fold(f64::INFINITY, f64::min)
            })
            .fold(0.0, f64::max)
    };
    let (ga, gb) = (grid(a), grid(b));
    directed(&ga, &gb).max(directed(&gb, &ga))
}

#[test]
fn interval_distance_agrees_with_brute_force_hausdorff() {
    let step = 1e-3;
    // the worked pair: endpoints (0.25, 0.5) differences, max is 0.5
    let i = Interval::new(0.0, 0.5).unwrap();
    let j = Interval::new(0.25, 1.0).unwrap();
    let oracle = hausdorff_oracle(&i, &j, step);
    assert!((oracle - 0.5).abs() <= 2.0 * step);
    assert!((hausdorff_interval_distance(&i, &j) - oracle).abs() <= 2.0 * step);
    assert_eq!(hausdorff_interval_distance(&i, &j), 0.5);

    // 100 sampled pairs
    let space = IntervalSpace::<f64>::new();
    let mut rng = SampleRng::seeded(2024);
    for _ in 0..100 {
        let a = space.sample(&mut rng);
        let b = space.sample(&mut rng);
        let closed = hausdorff_interval_distance(&a, &b);
        let oracle = hausdorff_oracle(&a, &b, step);
        assert!(
            (closed - oracle).abs() <= 2.0 * step,
            "closed {closed} vs oracle {oracle} for {a:?} {b:?}"
        );
    }
}

#[test]
fn interval_combination_follows_hausdorff_identities() {
    // W([0,1],[0.5,0.6];0.5) = [0.25,0.8] and d(x, W) = 0.5 * d(x, y)
    let space = IntervalSpace::<f64>::new();
    let x = Interval::new(0.0, 1.0).unwrap();
    let y = Interval::new(0.5, 0.6).unwrap();
    let w = space.combine(&x, &y, 0.5);
    assert_eq!((w.a, w.b), (0.25, 0.8));
    let oracle = hausdorff_oracle(&x, &w, 1e-3);
    assert!((space.dist(&x, &w) - oracle).abs() <= 2e-3);
    assert!((space.dist(&x, &w) - 0.5 * space.dist(&x, &y)).abs() < 1e-12);
}

// ---------------------------------------------------------------------------
// Product metrics beyond the sum metric: counterexample search for the
// chord inequality under the l2-combined product distance. For the bundled
// geometries the coordinatewise interpolation map is affine and component
// distances are norms of differences, so the two-dimensional Minkowski
// inequality makes the chord bound hold for any exponent; the search is
// expected to come back empty, and that outcome is recorded here.
// ---------------------------------------------------------------------------

#[derive(Clone)]
struct D2Product {
    left: Plane,
    right: Plane,
}

impl ConvexSpace<f64> for D2Product {
    type Point = (Vec<f64>, Vec<f64>);
    fn dim_hint(&self) -> usize {
        4
    }
    fn dist(&self, a: &Self::Point, b: &Self::Point) -> f64 {
        let dx = self.left.dist(&a.0, &b.0);
        let dy = self.right.dist(&a.1, &b.1);
        (dx * dx + dy * dy).sqrt()
    }
    fn combine(&self, x: &Self::Point, y: &Self::Point, t: f64) -> Self::Point {
        (self.left.combine(&x.0, &y.0, t), self.right.combine(&x.1, &y.1, t))
    }
    fn sample(&self, rng: &mut SampleRng) -> Self::Point {
        (self.left.sample(rng), self.right.sample(rng))
    }
}

#[test]
fn d2_product_counterexample_search_comes_back_empty() {
    let space = D2Product {
        left: l2_plane(),
        right: l2_plane(),
    };
    let mut worst = f64::NEG_INFINITY;
    for seed in 0..5u64 {
        let v = check_convex_structure(&space, 20_000, seed, &tol());
        worst = worst.max(v.worst_violation);
        assert!(
            v.passed(),
            "search found a chord-bound violation in the d2 product: {:?}",
            v.witness
        );
    }
    println!("d2 product chord-bound search outcome: no violation, worst normalized excess {worst:.3e}");
}

// ---------------------------------------------------------------------------
// Distance map under the l1 norm: brute force over the segment.
// ---------------------------------------------------------------------------

#[test]
fn l1_distance_map_matches_grid_brute_force() {
    let l1 = Euclidean::<f64>::new(2, Norm::L1).unwrap();
    let seg = segment_set(&l1, vec![0.0, 0.0], vec![2.0, 0.0], &tol()).unwrap();
    let x = vec![1.0, 1.0];

    // oracle: min over the segment at parameter step 1e-4
    let mut oracle = f64::INFINITY;
    let steps = 20_000;
    for k in 0..=steps {
        let y1 = 2.0 * k as f64 / steps as f64;
        oracle = oracle.min((x[0] - y1).abs() + x[1].abs());
    }
    assert!((oracle - 1.0).abs() < 1e-8);

    let dmap = distance_map(&l1, &seg, 64);
    let approx = dmap.eval_finite(&x).unwrap();
    // upper bound on the infimum, up to the eps_eq-wide membership band
    assert!(approx >= oracle - 1e-8);
    assert!((approx - oracle).abs() < 1e-6, "approx {approx} oracle {oracle}");

    // membership query evaluates to zero
    let inside = dmap.eval_finite(&vec![0.7, 0.0]).unwrap();
    assert!(inside < 1e-7, "inside distance {inside}");
}

// ---------------------------------------------------------------------------
// The planted non-unique projection in the sup norm: brute-force extraction
// of the optimal set, then the diagnostic must spread its candidates over
// it.
// ---------------------------------------------------------------------------

#[test]
fn linf_projection_optimal_set_is_the_whole_segment() {
    let linf = Euclidean::<f64>::new(2, Norm::LInf).unwrap();
    let x = vec![1.0, 1.0];

    // oracle: sweep the segment at step 1e-4; every point is optimal
    let steps = 20_000;
    let mut best = f64::INFINITY;
    let mut optimal_span = (f64::INFINITY, f64::NEG_INFINITY);
    for k in 0..=steps {
        let y1 = 2.0 * k as f64 / steps as f64;
        let d = (x[0] - y1).abs().max(1.0);
        if d < best - 1e-12 {
            best = d;
            optimal_span = (y1, y1);
        } else if (d - best).abs() <= 1e-12 {
            optimal_span.0 = optimal_span.0.min(y1);
            optimal_span.1 = optimal_span.1.max(y1);
        }
    }
    assert_eq!(best, 1.0);
    assert!(optimal_span.0 < 1e-9 && optimal_span.1 > 2.0 - 1e-9);

    let seg = segment_set(&linf, vec![0.0, 0.0], vec![2.0, 0.0], &tol()).unwrap();
    let cfg = SolveCfg {
        starts: 256,
        patience: 8,
        max_passes: 64,
        seed: 71,
        ..SolveCfg::default()
    };
    let report = chebyshev_diagnostic(&linf, &seg, &[x], &cfg, 1e-6);
    let entry = &report.entries[0];
    assert!((entry.distance - 1.0).abs() < 1e-8);
    assert!(
        entry.diameter >= 1.9,
        "candidates failed to cover the optimal segment: diameter {}",
        entry.diameter
    );
}

// ---------------------------------------------------------------------------
// Averaged rotation: closed-form iterate-count oracle.
// ---------------------------------------------------------------------------

#[test]
fn rotation_iteration_count_matches_averaged_map_oracle() {
    // with t = 1/2 the update is x -> (x + Rx)/2 whose linear factor has
    // modulus sqrt(2)/2, so residual_n = sqrt(2) * (sqrt(2)/2)^n
    let shrink: f64 = 0.5f64.sqrt();
    let mut oracle_n = 0usize;
    let mut res = 2.0f64.sqrt();
    while res > 1e-6 {
        res *= shrink;
        oracle_n += 1;
    }

    let plane = l2_plane();
    let rot = SelfMap::new("rot", |p: &Vec<f64>| vec![-p[1], p[0]]);
    let r = mann_iterate(&plane, &rot, &vec![1.0, 0.0], &StepSchedule::Constant(0.5), 1e-6, 10_000);
    assert!(r.converged);
    assert!(r.residual <= 1e-6);
    assert_eq!(r.iterations, oracle_n, "oracle {oracle_n}, got {}", r.iterations);
    // trace matches the closed form at every recorded step
    for (n, &observed) in r.trace.iter().enumerate() {
        let predicted = 2.0f64.sqrt() * shrink.powi(n as i32);
        assert!((observed - predicted).abs() <= 1e-9 * (1.0 + predicted));
    }
}

// ---------------------------------------------------------------------------
// Shifted contraction: algebraic fixed point 2 recovered by minimizing the
// residual.
// ---------------------------------------------------------------------------

#[test]
fn shifted_contraction_residual_minimizer_is_algebraic_fixed_point() {
    let line = Euclidean::<f64>::new(1, Norm::L2).unwrap();
    let map = SelfMap::new("half_plus_one", |p: &Vec<f64>| vec![p[0] / 2.0 + 1.0]);
    let f: wconvex::functions::WFn<Vec<f64>, f64> = wconvex::optimize::residual_function(&line, &map);
    // residual is |x/2 - 1|, zero exactly at x = 2
    assert!(f.eval_finite(&vec![2.0]).unwrap() < 1e-15);
    let domain = wconvex::functions::metric_ball_set(&line, vec![2.0], 4.0);
    let min = wconvex::optimize::minimize_on_set(&line, &domain, |p| f.eval_finite(p).unwrap(), &SolveCfg::default());
    assert!((min.best[0] - 2.0).abs() < 1e-6, "minimizer {:?}", min.best);
    assert!(min.value < 1e-6);
}

// ---------------------------------------------------------------------------
// Golden section against closed forms.
// ---------------------------------------------------------------------------

#[test]
fn golden_section_on_chord_distance() {
    let plane = l2_plane();
    let x = vec![1.0, 1.0];
    let (a, b) = (vec![0.0, 0.0], vec![2.0, 0.0]);
    let (t, v) = golden_section_min(|t: f64| plane.dist(&x, &plane.combine(&a, &b, t)), 1e-9);
    assert!((t - 0.5).abs() < 1e-7);
    assert!((v - 1.0).abs() < 1e-12);
}

// ---------------------------------------------------------------------------
// The chord-slope Lipschitz claim is not a true bound for every convex
// function on a segment: the squared distance on [1,3] has endpoint slope
// (9-1)/2 = 4 but true slope 6 near the far end. The checker must find the
// violation, and the witness must replay.
// ---------------------------------------------------------------------------

#[test]
fn segment_lipschitz_detects_squared_distance_endpoint_slope_violation() {
    let plane = l2_plane();
    let f = distance_to_point(&plane, vec![0.0, 0.0], ScalarMap::Square);
    let x = vec![1.0, 0.0];
    let y = vec![3.0, 0.0];

    // oracle: dense pairs on the segment, slope |z+w| exceeds 4 when z+w > 4
    let mut oracle_max_ratio = 0.0f64;
    let k = 2000;
    for i in 0..=k {
        for j in (i + 1)..=k {
            let zi = 1.0 + 2.0 * i as f64 / k as f64;
            let zj = 1.0 + 2.0 * j as f64 / k as f64;
            oracle_max_ratio = oracle_max_ratio.max((zi * zi - zj * zj).abs() / (zj - zi).abs());
        }
    }
    assert!(oracle_max_ratio > 5.9, "true slope approaches 6, got {oracle_max_ratio}");

    let r = segment_lipschitz_check(&plane, &f, &x, &y, 200, None, &tol()).unwrap();
    assert_eq!(r.constant, 4.0);
    assert!(!r.passed, "endpoint-slope bound should not hold for d^2 on [1,3]");
    assert!(r.max_ratio > 5.9 && r.max_ratio <= 6.0 + 1e-9);
    let (z, w) = r.witness.expect("violating pair");
    let fz = f.eval_finite(&z).unwrap();
    let fw = f.eval_finite(&w).unwrap();
    assert!((fz - fw).abs() > r.constant * plane.dist(&z, &w));
}

// ---------------------------------------------------------------------------
// Extension oracle round trips.
// ---------------------------------------------------------------------------

#[test]
fn euclidean_extension_round_trip_battery() {
    let plane = l2_plane();
    let mut rng = SampleRng::seeded(17);
    let t = tol();
    for _ in 0..1000 {
        let y = plane.sample(&mut rng);
        let x = plane.sample(&mut rng);
        let lambda: f64 = rng.uniform(0.01, 0.99);
        let xi = plane.extend(&y, &x, lambda).unwrap();
        let back = plane.combine(&y, &xi, lambda);
        assert!(plane.dist(&back, &x) <= t.eps_eq * (1.0 + plane.dist(&y, &x)));
    }
}
