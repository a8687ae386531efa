//! Axiom checkers every concrete space must pass: the metric axioms, the
//! convex-structure inequality, and the segment identities.

use crate::sampling::{sample_t, SampleRng};
use crate::scalar::Scalar;
use crate::space::{ConvexSpace, Tolerances};
use crate::verdict::{finish, sweep, CaseEval, Verdict, Witness};

/// Sample `n` triples and check nonnegativity, `d(a, a) = 0`, symmetry and
/// the triangle inequality, all within the relative tolerance.
pub fn check_metric_axioms<T, S>(space: &S, n: usize, seed: u64, tol: &Tolerances<T>) -> Verdict<T, S::Point>
where
    T: Scalar,
    S: ConvexSpace<T> + Sync,
{
    assert!(n >= 1, "sample count must be at least 1");
    let mut rng = SampleRng::seeded(seed);
    let cases: Vec<[S::Point; 3]> = (0..n)
        .map(|_| [space.sample(&mut rng), space.sample(&mut rng), space.sample(&mut rng)])
        .collect();

    let violation = |case: &[S::Point; 3]| {
        let [a, b, c] = case;
        let dab = space.dist(a, b);
        let dba = space.dist(b, a);
        let dac = space.dist(a, c);
        let dbc = space.dist(b, c);
        let daa = space.dist(a, a);
        let mut worst = tol.excess(T::zero() - dab, T::zero()); // d >= 0
        worst = worst.max(tol.mismatch(daa, T::zero())); // d(a,a) = 0
        worst = worst.max(tol.mismatch(dab, dba)); // symmetry
        worst = worst.max(tol.excess(dac, dab + dbc)); // triangle
        worst
    };

    let result = sweep(&cases, |case| CaseEval::Violation(violation(case)));
    finish("metric_axioms", seed, tol.eps_eq, &cases, result, |i, case| {
        let v = violation(case);
        Witness {
            sample_index: i,
            points: case.to_vec(),
            params: vec![],
            lhs: v,
            rhs: T::zero(),
            violation: v,
        }
    })
}

/// Sample `n` tuples `(u, x, y, t)` and check
/// `d(u, W(x, y; t)) ≤ (1 − t)·d(u, x) + t·d(u, y)`.
pub fn check_convex_structure<T, S>(space: &S, n: usize, seed: u64, tol: &Tolerances<T>) -> Verdict<T, S::Point>
where
    T: Scalar,
    S: ConvexSpace<T> + Sync,
{
    assert!(n >= 1, "sample count must be at least 1");
    let mut rng = SampleRng::seeded(seed);
    let cases: Vec<([S::Point; 3], T)> = (0..n)
        .map(|i| {
            let pts = [space.sample(&mut rng), space.sample(&mut rng), space.sample(&mut rng)];
            (pts, sample_t(&mut rng, i))
        })
        .collect();

    let sides = |case: &([S::Point; 3], T)| {
        let ([u, x, y], t) = case;
        let w = space.combine(x, y, *t);
        let lhs = space.dist(u, &w);
        let rhs = (T::one() - *t) * space.dist(u, x) + *t * space.dist(u, y);
        (lhs, rhs)
    };

    let result = sweep(&cases, |case| {
        let (lhs, rhs) = sides(case);
        CaseEval::Violation(tol.excess(lhs, rhs))
    });
    finish("convex_structure", seed, tol.eps_eq, &cases, result, |i, case| {
        let (lhs, rhs) = sides(case);
        Witness {
            sample_index: i,
            points: case.0.to_vec(),
            params: vec![case.1],
            lhs,
            rhs,
            violation: tol.excess(lhs, rhs),
        }
    })
}

/// Sample `(x, y, t)` and check the segment identities
/// `d(x, W(x,y;t)) = t·d(x,y)`, `d(y, W(x,y;t)) = (1−t)·d(x,y)`, plus the
/// additivity `d(x, z) + d(z, y) = d(x, y)` they force. Degenerate pairs
/// are skipped and counted.
pub fn check_segment_identities<T, S>(space: &S, n: usize, seed: u64, tol: &Tolerances<T>) -> Verdict<T, S::Point>
where
    T: Scalar,
    S: ConvexSpace<T> + Sync,
{
    assert!(n >= 1, "sample count must be at least 1");
    let mut rng = SampleRng::seeded(seed);
    let cases: Vec<(S::Point, S::Point, T)> = (0..n)
        .map(|i| {
            (
                space.sample(&mut rng),
                space.sample(&mut rng),
                sample_t(&mut rng, i),
            )
        })
        .collect();

    let violation = |case: &(S::Point, S::Point, T)| {
        let (x, y, t) = case;
        let d = space.dist(x, y);
        if d < tol.degenerate {
            return None;
        }
        let z = space.combine(x, y, *t);
        let dxz = space.dist(x, &z);
        let dzy = space.dist(&z, y);
        let mut worst = tol.mismatch(dxz, *t * d);
        worst = worst.max(tol.mismatch(dzy, (T::one() - *t) * d));
        worst = worst.max(tol.mismatch(dxz + dzy, d));
        Some(worst)
    };

    let result = sweep(&cases, |case| match violation(case) {
        Some(v) => CaseEval::Violation(v),
        None => CaseEval::Skip,
    });
    finish("segment_identities", seed, tol.eps_eq, &cases, result, |i, case| {
        let v = violation(case).unwrap_or_else(T::infinity);
        Witness {
            sample_index: i,
            points: vec![case.0.clone(), case.1.clone()],
            params: vec![case.2],
            lhs: v,
            rhs: T::zero(),
            violation: v,
        }
    })
}
