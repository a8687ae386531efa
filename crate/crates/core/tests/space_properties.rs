//! Property tests for the space invariants that hold by construction:
//! idempotence of `W`, segment identities, extension round trips, and the
//! closed-form interval distance against a coarse set oracle.

use proptest::prelude::*;
use wconvex::optimize::golden_section_min;
use wconvex::space::{ConvexSpace, Tolerances};
use wconvex::spaces::{
    hausdorff_interval_distance, Ball, BallSpace, Euclidean, Interval, IntervalSpace, Norm, Product,
};

fn norm_strategy() -> impl Strategy<Value = Norm> {
    prop_oneof![Just(Norm::L1), Just(Norm::L2), Just(Norm::LInf)]
}

fn coord() -> impl Strategy<Value = f64> {
    -10.0..10.0f64
}

fn unit() -> impl Strategy<Value = f64> {
    0.0..=1.0f64
}

proptest! {
    #[test]
    fn euclidean_combine_is_idempotent(
        norm in norm_strategy(),
        x in prop::collection::vec(coord(), 1..5),
        t in unit(),
    ) {
        let space = Euclidean::<f64>::new(x.len(), norm).unwrap();
        let w = space.combine(&x, &x, t);
        prop_assert!(space.dist(&w, &x) <= 1e-12);
    }

    #[test]
    fn euclidean_segment_identities(
        norm in norm_strategy(),
        x in prop::collection::vec(coord(), 2..4),
        delta in prop::collection::vec(coord(), 2..4),
        t in unit(),
    ) {
        let dim = x.len().min(delta.len());
        let x: Vec<f64> = x[..dim].to_vec();
        let y: Vec<f64> = x.iter().zip(&delta[..dim]).map(|(a, d)| a + d).collect();
        let space = Euclidean::<f64>::new(dim, norm).unwrap();
        let d = space.dist(&x, &y);
        prop_assume!(d > 1e-9);
        let z = space.combine(&x, &y, t);
        let eps = 1e-9 * (1.0 + d);
        prop_assert!((space.dist(&x, &z) - t * d).abs() <= eps);
        prop_assert!((space.dist(&z, &y) - (1.0 - t) * d).abs() <= eps);
        prop_assert!((space.dist(&x, &z) + space.dist(&z, &y) - d).abs() <= eps);
    }

    #[test]
    fn ball_space_combine_idempotent_and_identities(
        cx in coord(), cy in coord(), cz in coord(),
        r in 0.01..5.0f64,
        dx in coord(), dr in -0.5..5.0f64,
        t in unit(),
    ) {
        let space = BallSpace::<f64>::standard();
        let x = Ball::new(vec![cx, cy, cz], r).unwrap();
        let w = space.combine(&x, &x, t);
        prop_assert!(space.dist(&w, &x) <= 1e-12);

        let r2 = (r + dr).max(0.01);
        let y = Ball::new(vec![cx + dx, cy, cz], r2).unwrap();
        let d = space.dist(&x, &y);
        prop_assume!(d > 1e-9);
        let z = space.combine(&x, &y, t);
        prop_assert!((space.dist(&x, &z) - t * d).abs() <= 1e-9 * (1.0 + d));
    }

    #[test]
    fn ball_extension_round_trips_when_available(
        cx in coord(),
        r1 in 0.05..3.0f64,
        r2 in 0.05..3.0f64,
        lambda in 0.05..0.95f64,
    ) {
        let space = BallSpace::<f64>::standard();
        let y = Ball::new(vec![0.0, 0.0, 0.0], r1).unwrap();
        let x = Ball::new(vec![cx, 0.0, 0.0], r2).unwrap();
        if let Some(xi) = space.extend(&y, &x, lambda) {
            let back = space.combine(&y, &xi, lambda);
            prop_assert!(space.dist(&back, &x) <= 1e-9 * (1.0 + space.dist(&y, &x)));
        }
    }

    #[test]
    fn interval_closed_form_matches_coarse_oracle(
        a1 in unit(), b1 in unit(),
        a2 in unit(), b2 in unit(),
    ) {
        let i = Interval::new(a1.min(b1), a1.max(b1)).unwrap();
        let j = Interval::new(a2.min(b2), a2.max(b2)).unwrap();
        let closed = hausdorff_interval_distance(&i, &j);
        // coarse two-sided oracle at step 1e-2
        let step = 1e-2;
        let grid = |iv: &Interval<f64>| -> Vec<f64> {
            let n = ((iv.b - iv.a) / step).ceil() as usize;
            (0..=n).map(|k| (iv.a + k as f64 * step).min(iv.b)).chain([iv.b]).collect()
        };
        let directed = |from: &[f64], to: &[f64]| -> f64 {
            from.iter()
                .map(|x| to.iter().map(|y| (x - y).abs()).fold(f64::INFINITY, f64::min))
                .fold(0.0, f64::max)
        };
        let (gi, gj) = (grid(&i), grid(&j));
        let oracle = directed(&gi, &gj).max(directed(&gj, &gi));
        prop_assert!((closed - oracle).abs() <= 2.0 * step, "closed {closed} oracle {oracle}");
    }

    #[test]
    fn product_metric_and_combine_are_componentwise(
        x0 in coord(), x1 in coord(), y0 in unit(), y1 in unit(),
        t in unit(),
    ) {
        let line = Euclidean::<f64>::new(1, Norm::L2).unwrap();
        let ivs = IntervalSpace::<f64>::new();
        let p = Product::new(line.clone(), ivs);
        let iy0 = Interval::new(y0.min(y1), y0.max(y1)).unwrap();
        let iy1 = Interval::new(0.25, 0.75).unwrap();
        let a = (vec![x0], iy0);
        let b = (vec![x1], iy1);
        let d = p.dist(&a, &b);
        prop_assert!((d - (line.dist(&a.0, &b.0) + hausdorff_interval_distance(&a.1, &b.1))).abs() < 1e-12);
        let w = p.combine(&a, &b, t);
        prop_assert!((w.0[0] - ((1.0 - t) * x0 + t * x1)).abs() < 1e-12);
    }

    #[test]
    fn golden_section_never_worse_than_grid(
        c0 in -2.0..2.0f64, c1 in -2.0..2.0f64, c2 in -2.0..2.0f64, c3 in -2.0..2.0f64,
    ) {
        // arbitrary cubic: possibly non-unimodal on [0,1]
        let phi = |t: f64| c0 + c1 * t + c2 * t * t + c3 * t * t * t;
        let (_, v) = golden_section_min(phi, 1e-9);
        let grid_min = (0..=64).map(|i| phi(i as f64 / 64.0)).fold(f64::INFINITY, f64::min);
        prop_assert!(v <= grid_min + 1e-9);
    }

    #[test]
    fn extension_round_trip_generic_euclidean(
        norm in norm_strategy(),
        y in prop::collection::vec(coord(), 2..4),
        x in prop::collection::vec(coord(), 2..4),
        lambda in 0.01..0.99f64,
    ) {
        let dim = y.len().min(x.len());
        let space = Euclidean::<f64>::new(dim, norm).unwrap();
        let y = y[..dim].to_vec();
        let x = x[..dim].to_vec();
        let xi = space.extend(&y, &x, lambda).unwrap();
        let back = space.combine(&y, &xi, lambda);
        let tol = Tolerances::<f64>::default();
        prop_assert!(space.dist(&back, &x) <= tol.eps_eq * (1.0 + space.dist(&y, &x)) + 1e-12);
    }
}
