//! Execute a scenario's tasks in order and assemble the run report.

use std::path::Path;
use std::time::Instant;

use anyhow::Context;
use serde_json::json;
use wconvex::optimize::{
    chebyshev_diagnostic, check_nonexpansive, mann_iterate, project, SolveCfg, StepSchedule,
};
use wconvex::sampling::derive_seed;
use wconvex::space::Tolerances;
use wconvex::verify;
use wconvex::{Outcome, Verdict};

use crate::assemble::Assembled;
use crate::config::{PropertyTag, Scenario, SolverCfgSpec, TaskSpec, VerifyTask};
use crate::report::{RunReport, TaskResult, TaskStatus};

fn status_of<T: wconvex::Scalar, P>(v: &Verdict<T, P>) -> TaskStatus {
    match v.outcome {
        Outcome::Passed => TaskStatus::Passed,
        Outcome::Failed => TaskStatus::Failed,
        Outcome::Inconclusive => TaskStatus::Inconclusive,
    }
}

fn verdict_result<P: serde::Serialize>(
    name: String,
    verdict: Verdict<f64, P>,
) -> anyhow::Result<TaskResult> {
    Ok(TaskResult {
        name,
        kind: "verify".into(),
        status: status_of(&verdict),
        detail: serde_json::to_value(&verdict)?,
    })
}

fn solve_cfg(spec: &SolverCfgSpec, seed: u64) -> SolveCfg<f64> {
    SolveCfg {
        starts: spec.starts,
        patience: spec.iters,
        max_passes: spec.iters.saturating_mul(64).max(1000),
        tol: spec.tol,
        polish_rounds: spec.polish_rounds,
        seed,
        ..SolveCfg::default()
    }
}

pub fn run_scenario(
    scenario: &Scenario,
    assembled: &Assembled,
    trace_dir: &Path,
) -> anyhow::Result<RunReport> {
    let tol = Tolerances::<f64>::default();
    let mut results = Vec::new();
    let mut timings = Vec::new();

    for (idx, task) in scenario.tasks.iter().enumerate() {
        let started = Instant::now();
        let task_seed = derive_seed(scenario.seed, idx as u64);
        let result = run_task(task, idx, task_seed, assembled, &tol, trace_dir)
            .with_context(|| format!("task #{idx}"))?;
        timings.push(started.elapsed().as_millis());
        results.push(result);
    }

    let warnings = results
        .iter()
        .filter(|r| r.status == TaskStatus::Inconclusive)
        .count();
    Ok(RunReport {
        artifact_version: env!("CARGO_PKG_VERSION").to_string(),
        seed: scenario.seed,
        config: serde_json::to_value(scenario)?,
        results,
        warnings,
        timings_ms: timings,
    })
}

fn run_task(
    task: &TaskSpec,
    idx: usize,
    task_seed: u64,
    a: &Assembled,
    tol: &Tolerances<f64>,
    trace_dir: &Path,
) -> anyhow::Result<TaskResult> {
    match task {
        TaskSpec::Verify(v) => run_verify(v, idx, task_seed, a, tol),
        TaskSpec::Project { name, space, set, x, cfg } => {
            let sp = a.space(space).map_err(anyhow::Error::new)?;
            let s = a.set_for(set, space).map_err(anyhow::Error::new)?;
            let x = a.resolve_point(sp, space, x).map_err(anyhow::Error::new)?;
            let r = project(sp, s, &x, &solve_cfg(cfg, task_seed));
            Ok(TaskResult {
                name: name.clone().unwrap_or_else(|| format!("project[{idx}]")),
                kind: "project".into(),
                status: if r.converged {
                    TaskStatus::Passed
                } else {
                    TaskStatus::Inconclusive
                },
                detail: json!({
                    "query": x,
                    "best": r.best,
                    "distance": r.distance,
                    "iterations": r.iterations,
                    "converged": r.converged,
                    "candidates": r.candidates,
                }),
            })
        }
        TaskSpec::Chebyshev {
            name,
            space,
            set,
            xs,
            cfg,
            optimality_tol,
        } => {
            let sp = a.space(space).map_err(anyhow::Error::new)?;
            let s = a.set_for(set, space).map_err(anyhow::Error::new)?;
            let queries: Vec<_> = xs
                .iter()
                .map(|x| a.resolve_point(sp, space, x))
                .collect::<Result<_, _>>()
                .map_err(anyhow::Error::new)?;
            let rep = chebyshev_diagnostic(sp, s, &queries, &solve_cfg(cfg, task_seed), *optimality_tol);
            let entries: Vec<_> = rep
                .entries
                .iter()
                .map(|e| {
                    json!({
                        "query": e.query,
                        "best": e.best,
                        "distance": e.distance,
                        "cluster_size": e.cluster.len(),
                        "diameter": e.diameter,
                    })
                })
                .collect();
            Ok(TaskResult {
                name: name.clone().unwrap_or_else(|| format!("chebyshev[{idx}]")),
                kind: "chebyshev".into(),
                status: TaskStatus::Passed,
                detail: json!({
                    "max_diameter": rep.max_diameter,
                    "entries": entries,
                }),
            })
        }
        TaskSpec::Fixpoint {
            name,
            space,
            map,
            x0,
            t,
            schedule,
            fp_tol,
            max_iter,
            trace_csv,
        } => {
            let sp = a.space(space).map_err(anyhow::Error::new)?;
            let m = a.map_for(map, space).map_err(anyhow::Error::new)?;
            let x0 = a.resolve_point(sp, space, x0).map_err(anyhow::Error::new)?;
            let sched = match schedule.as_deref() {
                Some("harmonic") => StepSchedule::Harmonic,
                _ => StepSchedule::Constant(*t),
            };
            let r = mann_iterate(sp, m, &x0, &sched, *fp_tol, *max_iter);
            if let Some(path) = trace_csv {
                let full = trace_dir.join(path);
                if let Some(parent) = full.parent() {
                    std::fs::create_dir_all(parent).ok();
                }
                let mut csv = String::from("iteration,residual\n");
                for (i, res) in r.trace.iter().enumerate() {
                    csv.push_str(&format!("{i},{res}\n"));
                }
                std::fs::write(&full, csv)
                    .with_context(|| format!("writing trace to {}", full.display()))?;
            }
            Ok(TaskResult {
                name: name.clone().unwrap_or_else(|| format!("fixpoint[{idx}]")),
                kind: "fixpoint".into(),
                status: if r.converged {
                    TaskStatus::Passed
                } else if r.diverged {
                    TaskStatus::Failed
                } else {
                    TaskStatus::Inconclusive
                },
                detail: json!({
                    "point": r.point,
                    "residual": r.residual,
                    "iterations": r.iterations,
                    "converged": r.converged,
                    "diverged": r.diverged,
                    "trace_len": r.trace.len(),
                }),
            })
        }
    }
}

fn run_verify(
    v: &VerifyTask,
    idx: usize,
    task_seed: u64,
    a: &Assembled,
    tol: &Tolerances<f64>,
) -> anyhow::Result<TaskResult> {
    let sp = a.space(&v.space).map_err(anyhow::Error::new)?;
    let seed = v.seed.unwrap_or(task_seed);
    let name = v
        .name
        .clone()
        .unwrap_or_else(|| format!("{:?}[{idx}]", v.property).to_lowercase());

    match v.property {
        PropertyTag::MetricAxioms => {
            verdict_result(name, wconvex::axioms::check_metric_axioms(sp, v.n, seed, tol))
        }
        PropertyTag::ConvexStructure => {
            verdict_result(name, wconvex::axioms::check_convex_structure(sp, v.n, seed, tol))
        }
        PropertyTag::SegmentIdentities => {
            verdict_result(name, wconvex::axioms::check_segment_identities(sp, v.n, seed, tol))
        }
        PropertyTag::Wconvex => {
            let f = a
                .function_for(v.function.as_deref().unwrap(), &v.space)
                .map_err(anyhow::Error::new)?;
            verdict_result(name, verify::verify_wconvex(sp, f, v.n, seed, None, tol))
        }
        PropertyTag::StrictWconvex => {
            let f = a
                .function_for(v.function.as_deref().unwrap(), &v.space)
                .map_err(anyhow::Error::new)?;
            verdict_result(
                name,
                verify::verify_strict_wconvex(sp, f, v.n, seed, v.separation, None, tol),
            )
        }
        PropertyTag::Midpoint => {
            let f = a
                .function_for(v.function.as_deref().unwrap(), &v.space)
                .map_err(anyhow::Error::new)?;
            verdict_result(name, verify::midpoint_convexity_check(sp, f, v.n, seed, tol))
        }
        PropertyTag::Epigraph => {
            let f = a
                .function_for(v.function.as_deref().unwrap(), &v.space)
                .map_err(anyhow::Error::new)?;
            verdict_result(name, verify::epigraph_convexity_check(sp, f, v.n, seed, tol))
        }
        PropertyTag::Sublevel => {
            let f = a
                .function_for(v.function.as_deref().unwrap(), &v.space)
                .map_err(anyhow::Error::new)?;
            verdict_result(
                name,
                verify::sublevel_convexity_check(sp, f, v.h.unwrap(), v.n, seed, tol),
            )
        }
        PropertyTag::StrictSpace => verdict_result(name, verify::strict_space_check(sp, v.n, seed, tol)),
        PropertyTag::SphereWconvex => {
            let f = a
                .function_for(v.function.as_deref().unwrap(), &v.space)
                .map_err(anyhow::Error::new)?;
            let x0 = a
                .resolve_point(sp, &v.space, v.x0.as_ref().unwrap())
                .map_err(anyhow::Error::new)?;
            verdict_result(
                name,
                verify::sphere_wconvex_check(
                    sp,
                    f,
                    &x0,
                    v.rho.unwrap(),
                    v.sigma.unwrap(),
                    v.n,
                    seed,
                    v.strict,
                    tol,
                ),
            )
        }
        PropertyTag::SwapBound => verdict_result(name, verify::combine_swap_bound_check(sp, v.n, seed, tol)),
        PropertyTag::Nonexpansive => {
            let m = a
                .map_for(v.map.as_deref().unwrap(), &v.space)
                .map_err(anyhow::Error::new)?;
            verdict_result(name, check_nonexpansive(sp, m, v.n, seed, tol))
        }
        PropertyTag::SetConvexity => {
            let s = a
                .set_for(v.set.as_deref().unwrap(), &v.space)
                .map_err(anyhow::Error::new)?;
            verdict_result(name, verify::convex_set_check(sp, s, v.n, seed))
        }
    }
}
