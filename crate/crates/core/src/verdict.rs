//! Verifier verdicts and the deterministic parallel sample sweep.

use rayon::prelude::*;
use serde::Serialize;

use crate::scalar::Scalar;

/// Outcome of a property check. `Inconclusive` is first-class: it is
/// returned when sampling preconditions cannot be met, so a check never
/// passes vacuously.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    Passed,
    Failed,
    Inconclusive,
}

/// A concrete counterexample: the sampled points and parameters achieving
/// the worst violation, replayable against the stated inequality.
#[derive(Debug, Clone, Serialize)]
pub struct Witness<T, P> {
    pub sample_index: usize,
    pub points: Vec<P>,
    pub params: Vec<T>,
    pub lhs: T,
    pub rhs: T,
    pub violation: T,
}

/// Result of a sampled property check.
#[derive(Debug, Clone, Serialize)]
pub struct Verdict<T, P> {
    pub property: String,
    pub outcome: Outcome,
    pub samples_checked: usize,
    pub skipped: usize,
    /// Worst normalized violation over all checked samples (may be negative
    /// when the inequality holds with margin everywhere).
    pub worst_violation: T,
    /// Pass threshold the worst violation was compared against.
    pub tolerance: T,
    pub seed: u64,
    pub witness: Option<Witness<T, P>>,
}

impl<T: Scalar, P> Verdict<T, P> {
    pub fn passed(&self) -> bool {
        self.outcome == Outcome::Passed
    }

    pub fn inconclusive(property: &str, seed: u64, skipped: usize) -> Self {
        Self {
            property: property.to_string(),
            outcome: Outcome::Inconclusive,
            samples_checked: 0,
            skipped,
            worst_violation: T::nan(),
            tolerance: T::zero(),
            seed,
            witness: None,
        }
    }
}

/// Per-sample evaluation outcome fed to [`sweep`].
pub(crate) enum CaseEval<T> {
    /// Normalized violation for this sample (positive = inequality violated).
    Violation(T),
    /// Sample did not meet the check's preconditions (e.g. degenerate pair).
    Skip,
}

pub(crate) struct SweepResult<T> {
    pub worst: Option<(usize, T)>,
    pub checked: usize,
    pub skipped: usize,
}

/// Evaluate all cases in parallel and reduce to the worst violation.
///
/// The reduction is a max over (violation, index) with ties broken by the
/// lowest sample index, so the result is identical for any worker count.
pub(crate) fn sweep<T, C, F>(cases: &[C], eval: F) -> SweepResult<T>
where
    T: Scalar,
    C: Sync,
    F: Fn(&C) -> CaseEval<T> + Sync,
{
    let acc = cases
        .par_iter()
        .enumerate()
        .map(|(i, case)| match eval(case) {
            CaseEval::Violation(v) => {
                let v = if v.is_nan() { T::infinity() } else { v };
                (Some((i, v)), 1usize, 0usize)
            }
            CaseEval::Skip => (None, 0, 1),
        })
        .reduce(
            || (None, 0, 0),
            |a, b| {
                let worst = match (a.0, b.0) {
                    (None, w) | (w, None) => w,
                    (Some((ia, va)), Some((ib, vb))) => {
                        if va > vb || (va == vb && ia <= ib) {
                            Some((ia, va))
                        } else {
                            Some((ib, vb))
                        }
                    }
                };
                (worst, a.1 + b.1, a.2 + b.2)
            },
        );
    SweepResult {
        worst: acc.0,
        checked: acc.1,
        skipped: acc.2,
    }
}

/// Assemble a verdict from a sweep, rebuilding the witness for the worst
/// sample when it exceeds the tolerance.
pub(crate) fn finish<T, P, C, W>(
    property: &str,
    seed: u64,
    tolerance: T,
    cases: &[C],
    result: SweepResult<T>,
    describe: W,
) -> Verdict<T, P>
where
    T: Scalar,
    W: Fn(usize, &C) -> Witness<T, P>,
{
    match result.worst {
        None => Verdict::inconclusive(property, seed, result.skipped),
        Some((index, worst)) => {
            let failed = worst > tolerance;
            Verdict {
                property: property.to_string(),
                outcome: if failed { Outcome::Failed } else { Outcome::Passed },
                samples_checked: result.checked,
                skipped: result.skipped,
                worst_violation: worst,
                tolerance,
                seed,
                witness: failed.then(|| describe(index, &cases[index])),
            }
        }
    }
}
