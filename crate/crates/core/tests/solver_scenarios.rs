//! Solver-level scenarios: the proximality probe against an open-set
//! surrogate, fixed points of continuous maps on compact convex sets, the
//! distance map's convexity budget, and multistart minimization of strictly
//! convex objectives.

use wconvex::functions::{distance_map, distance_to_point, metric_ball_set, ConvexSet, ScalarMap};
use wconvex::optimize::{
    mann_iterate, minimize_on_set, proximality_probe, residual_function, SelfMap, SolveCfg,
    StepSchedule,
};
use wconvex::space::{ConvexSpace, Tolerances};
use wconvex::spaces::{Euclidean, Norm};
use wconvex::verify::verify_wconvex;

fn plane() -> Euclidean<f64> {
    Euclidean::new(2, Norm::L2).unwrap()
}

#[test]
fn open_set_surrogate_stabilizes_at_the_band_edge() {
    // membership excludes a boundary band of width 1e-3: the infimum over
    // the closure is not attained inside, the probe still stabilizes, and
    // the best point sits at the admissible edge
    let sp = plane();
    let band = 1e-3;
    let radius = 1.0;
    let inner = metric_ball_set(&sp, vec![0.0, 0.0], radius - band);
    let open_surrogate = ConvexSet::new(
        "open_disk_surrogate",
        {
            let sp = sp.clone();
            move |p: &Vec<f64>| sp.dist(p, &vec![0.0, 0.0]) <= radius - band
        },
        {
            let inner = inner.clone();
            move |rng| inner.sample(rng)
        },
    );

    let x = vec![2.0, 0.0];
    let r = proximality_probe(&sp, &open_surrogate, &x, 16, 5, 1e-9);
    assert!(r.stabilized, "distances: {:?}", r.distances);
    let edge_radius = sp.dist(&r.best, &vec![0.0, 0.0]);
    assert!(
        (edge_radius - (radius - band)).abs() < 1e-6,
        "best point not at the band edge: radius {edge_radius}"
    );
    assert!((r.distances.last().unwrap() - (1.0 + band)).abs() < 1e-6);
}

#[test]
fn continuous_map_on_compact_convex_set_scenario() {
    // T(x, y) = (x^2, y^2) maps the unit box into itself, is continuous but
    // not nonexpansive (slope 2 near the far corner); the diagnostic pairing
    // of averaging iteration and multistart residual minimization still
    // locates a fixed point
    let sp = plane();
    let unit_box = wconvex::functions::box_set(vec![0.0, 0.0], vec![1.0, 1.0]);
    let map = SelfMap::new("coordinate_square", |p: &Vec<f64>| vec![p[0] * p[0], p[1] * p[1]]);
    let tol = Tolerances::default();

    let nonexp = wconvex::optimize::check_nonexpansive(&sp, &map, 2000, 3, &tol);
    assert!(!nonexp.passed(), "coordinate squaring is expansive near (1,1)");

    let iterate = mann_iterate(&sp, &map, &vec![0.6, 0.4], &StepSchedule::Constant(0.5), 1e-9, 10_000);
    assert!(iterate.converged);
    assert!(sp.dist(&iterate.point, &vec![0.0, 0.0]) < 1e-4);

    let f = residual_function(&sp, &map);
    let min = minimize_on_set(
        &sp,
        &unit_box,
        |p| f.eval_finite(p).unwrap(),
        &SolveCfg {
            starts: 16,
            seed: 9,
            ..SolveCfg::default()
        },
    );
    assert!(min.value < 1e-6, "residual at minimizer {}", min.value);
    let at_origin = sp.dist(&min.best, &vec![0.0, 0.0]) < 1e-3;
    let at_corner = sp.dist(&min.best, &vec![1.0, 1.0]) < 1e-3;
    assert!(at_origin || at_corner, "minimizer {:?} is not a fixed point", min.best);
}

#[test]
fn distance_map_is_wconvex_within_twice_solver_tolerance() {
    let sp = plane();
    let tol = Tolerances::default();
    let seg = wconvex::functions::segment_set(&sp, vec![0.0, 0.0], vec![2.0, 0.0], &tol).unwrap();
    let dmap = distance_map(&sp, &seg, 24);
    let solver_tol = 1e-6;
    let loose = Tolerances {
        eps_eq: 2.0 * solver_tol,
        ..tol
    };
    let v = verify_wconvex(&sp, &dmap, 1000, 21, None, &loose);
    assert!(v.passed(), "{v:?}");
}

#[test]
fn multistart_minimization_of_strict_function_clusters() {
    // planted unique minimizer at c: one hundred restarts all land within a
    // metrically tiny cluster
    let sp = plane();
    let c = vec![0.25, -0.4];
    let f = distance_to_point(&sp, c.clone(), ScalarMap::Square);
    let domain = metric_ball_set(&sp, vec![0.0, 0.0], 2.0);
    let min = minimize_on_set(
        &sp,
        &domain,
        |p| f.eval_finite(p).unwrap(),
        &SolveCfg {
            starts: 100,
            seed: 33,
            // near a quadratic minimum the candidate spread floors at the
            // square root of the improvement threshold
            tol: 1e-15,
            polish_rounds: 6,
            ..SolveCfg::default()
        },
    );
    assert!(sp.dist(&min.best, &c) < 1e-6);
    let mut diameter = 0.0f64;
    for i in 0..min.candidates.len() {
        for j in (i + 1)..min.candidates.len() {
            diameter = diameter.max(sp.dist(&min.candidates[i].0, &min.candidates[j].0));
        }
    }
    assert!(diameter <= 1e-6, "candidate cluster diameter {diameter}");
}
