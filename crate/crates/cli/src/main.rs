//! Scenario runner for the convex-metric-space verifiers and solvers.
//!
//! Exit codes: 0 = all tasks passed or inconclusive (inconclusive counts
//! are reported as warnings), 1 = at least one violation, 2 = configuration
//! error.

mod assemble;
mod config;
mod report;
mod runner;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use wconvex::catalog;
use wconvex::optimize::{mann_iterate, project, SolveCfg, StepSchedule};
use wconvex::space::Tolerances;
use wconvex::spaces::DynPoint;
use wconvex::verify;

const BUNDLED_SCENARIOS: &[(&str, &str)] = &[
    ("full_suite", include_str!("../scenarios/full_suite.json")),
    (
        "l1_strictness_counterexample",
        include_str!("../scenarios/l1_strictness_counterexample.json"),
    ),
    ("quick_axioms", include_str!("../scenarios/quick_axioms.json")),
];

#[derive(Parser)]
#[command(name = "wconvex", version, about = "Convex metric space verifier and solver suite")]
struct Cli {
    /// Worker threads for parallel verifier sweeps (also: WCONVEX_WORKERS).
    #[arg(long, global = true)]
    workers: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a scenario file (or a bundled scenario by name).
    Run {
        /// Path to a scenario JSON file, or a bundled scenario name.
        config: String,
        /// Report output path (overrides the scenario's `output`).
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// List registered spaces, function node kinds, map and set kinds,
    /// catalog entries, and bundled scenarios.
    List,
    /// Run a single verifier against built-in catalog entries.
    Verify {
        /// Catalog space name (see `list`).
        #[arg(long)]
        space: String,
        /// Catalog function name, for function-based properties.
        #[arg(long = "fn")]
        function: Option<String>,
        /// Property: wconvex | strict_wconvex | midpoint | epigraph |
        /// metric_axioms | convex_structure | segment_identities |
        /// strict_space | swap_bound
        #[arg(long, default_value = "wconvex")]
        property: String,
        #[arg(long, default_value_t = 10_000)]
        n: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
    },
    /// Project a point onto a built-in catalog set.
    Project {
        #[arg(long)]
        space: String,
        #[arg(long)]
        set: String,
        /// Query point as a JSON payload, e.g. "[1.0, 1.0]".
        #[arg(long)]
        x: String,
        #[arg(long, default_value_t = 8)]
        starts: usize,
        #[arg(long, default_value_t = 64)]
        iters: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
    },
    /// Iterate a built-in catalog map to a fixed point.
    Fixpoint {
        #[arg(long)]
        map: String,
        /// Start point as a JSON payload; defaults to the catalog start.
        #[arg(long)]
        x0: Option<String>,
        #[arg(long, default_value_t = 0.5)]
        t: f64,
        #[arg(long, default_value_t = 1e-6)]
        fp_tol: f64,
        #[arg(long, default_value_t = 100_000)]
        max_iter: usize,
        /// Write the residual trace as CSV (iteration,residual).
        #[arg(long)]
        trace_csv: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();

    let workers = cli
        .workers
        .or_else(|| std::env::var("WCONVEX_WORKERS").ok().and_then(|w| w.parse().ok()));
    if let Some(w) = workers {
        if w == 0 {
            eprintln!("config error: worker count must be positive");
            return ExitCode::from(2);
        }
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(w).build_global() {
            eprintln!("warning: could not configure {w} workers: {e}");
        }
    }

    match cli.command {
        Command::Run { config, output } => cmd_run(&config, output),
        Command::List => {
            cmd_list();
            ExitCode::SUCCESS
        }
        Command::Verify {
            space,
            function,
            property,
            n,
            seed,
        } => cmd_verify(&space, function.as_deref(), &property, n, seed),
        Command::Project {
            space,
            set,
            x,
            starts,
            iters,
            seed,
        } => cmd_project(&space, &set, &x, starts, iters, seed),
        Command::Fixpoint {
            map,
            x0,
            t,
            fp_tol,
            max_iter,
            trace_csv,
        } => cmd_fixpoint(&map, x0.as_deref(), t, fp_tol, max_iter, trace_csv),
    }
}

fn load_scenario(arg: &str) -> Result<(config::Scenario, PathBuf), String> {
    let path = Path::new(arg);
    let (text, base): (String, PathBuf) = if path.exists() {
        let text = std::fs::read_to_string(path).map_err(|e| format!("reading {arg}: {e}"))?;
        let base = path.parent().unwrap_or(Path::new(".")).to_path_buf();
        (text, base)
    } else if let Some((_, text)) = BUNDLED_SCENARIOS.iter().find(|(n, _)| *n == arg) {
        (text.to_string(), PathBuf::from("."))
    } else {
        return Err(format!(
            "no scenario file {arg:?} and no bundled scenario of that name; bundled: {}",
            BUNDLED_SCENARIOS
                .iter()
                .map(|(n, _)| *n)
                .collect::<Vec<_>>()
                .join(", ")
        ));
    };
    let scenario: config::Scenario = serde_json::from_str(&text)
        .map_err(|e| format!("parse error in {arg} at line {}, column {}: {e}", e.line(), e.column()))?;
    Ok((scenario, base))
}

fn cmd_run(config_arg: &str, output: Option<PathBuf>) -> ExitCode {
    let (scenario, base) = match load_scenario(config_arg) {
        Ok(v) => v,
        Err(e) => {
            eprintln!("config error: {e}");
            return ExitCode::from(2);
        }
    };
    let assembled = match assemble::assemble(&scenario) {
        Ok(a) => a,
        Err(e) => {
            eprintln!("config error: {e}");
            return ExitCode::from(2);
        }
    };

    let out_path = output
        .or_else(|| scenario.output.as_ref().map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("report.json"));
    let trace_dir = out_path
        .parent()
        .filter(|p| !p.as_os_str().is_empty())
        .map(Path::to_path_buf)
        .unwrap_or(base);

    let report = match runner::run_scenario(&scenario, &assembled, &trace_dir) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("run error: {e:#}");
            return ExitCode::from(2);
        }
    };

    let json = serde_json::to_string_pretty(&report).expect("report serialization");
    if let Err(e) = std::fs::write(&out_path, &json) {
        eprintln!("cannot write report {}: {e}", out_path.display());
        return ExitCode::from(2);
    }

    for r in &report.results {
        println!("{:<12} {:<40} {:?}", r.kind, r.name, r.status);
    }
    println!(
        "{} tasks, {} warnings, report written to {}",
        report.results.len(),
        report.warnings,
        out_path.display()
    );
    if report.any_failed() {
        ExitCode::from(1)
    } else {
        ExitCode::SUCCESS
    }
}

fn cmd_list() {
    println!("space kinds (scenario `spaces` entries):");
    println!("  euclidean   {{\"kind\":\"euclidean\",\"dim\":N,\"norm\":\"l1|l2|linf\"}}");
    println!("  ball        {{\"kind\":\"ball\",\"dim\":N}}   (closed balls, sum of center/radius gaps)");
    println!("  interval    {{\"kind\":\"interval\"}}          (closed subintervals of [0,1], Hausdorff)");
    println!("  product     {{\"kind\":\"product\",\"left\":…,\"right\":…}}  (sum metric, componentwise W)");
    println!();
    println!("function expression node kinds:");
    println!("  dist, compose, scale, sum, conical, max, sup, restrict");
    println!("  scalar maps: identity | square | abs | exp | {{\"power\": a}} with a > 1");
    println!();
    println!("set kinds: segment, ball, box, whole");
    println!("map kinds: contraction, rotation, reflection, identity");
    println!();
    println!("verifier properties:");
    println!("  metric_axioms, convex_structure, segment_identities, wconvex,");
    println!("  strict_wconvex, midpoint, epigraph, sublevel, strict_space,");
    println!("  sphere_wconvex, swap_bound, nonexpansive, set_convexity");
    println!();
    println!("catalog spaces:");
    for e in catalog::space_catalog::<f64>() {
        println!("  {}", e.name);
    }
    println!("catalog functions (convex/strict/planted):");
    for e in catalog::function_catalog::<f64>() {
        let tag = if !e.convex {
            "planted"
        } else if e.strict {
            "strict"
        } else {
            "convex"
        };
        println!("  {:<22} on {:<18} [{tag}]", e.name, e.space_name);
    }
    println!("catalog sets:");
    for e in catalog::set_catalog::<f64>() {
        println!("  {:<22} on {}", e.name, e.space_name);
    }
    println!("catalog maps:");
    for e in catalog::map_catalog::<f64>() {
        println!(
            "  {:<22} on {:<18} [{}]",
            e.name,
            e.space_name,
            if e.nonexpansive { "nonexpansive" } else { "expansive" }
        );
    }
    println!();
    println!("bundled scenarios:");
    for (n, _) in BUNDLED_SCENARIOS {
        println!("  {n}");
    }
}

fn cmd_verify(space: &str, function: Option<&str>, property: &str, n: usize, seed: u64) -> ExitCode {
    let tol = Tolerances::<f64>::default();
    let Some(sp) = catalog::space_by_name::<f64>(space) else {
        eprintln!("config error: unknown catalog space {space:?} (see `wconvex list`)");
        return ExitCode::from(2);
    };
    let function_entry = match function {
        Some(f) => match catalog::function_by_name::<f64>(f) {
            Some(e) if e.space_name == space => Some(e),
            Some(e) => {
                eprintln!("config error: function {f:?} lives on {}, not {space}", e.space_name);
                return ExitCode::from(2);
            }
            None => {
                eprintln!("config error: unknown catalog function {f:?} (see `wconvex list`)");
                return ExitCode::from(2);
            }
        },
        None => None,
    };

    let verdict = match (property, &function_entry) {
        ("metric_axioms", _) => wconvex::axioms::check_metric_axioms(&sp, n, seed, &tol),
        ("convex_structure", _) => wconvex::axioms::check_convex_structure(&sp, n, seed, &tol),
        ("segment_identities", _) => wconvex::axioms::check_segment_identities(&sp, n, seed, &tol),
        ("strict_space", _) => verify::strict_space_check(&sp, n, seed, &tol),
        ("swap_bound", _) => verify::combine_swap_bound_check(&sp, n, seed, &tol),
        ("wconvex", Some(e)) => verify::verify_wconvex(&sp, &e.f, n, seed, e.domain.as_ref(), &tol),
        ("strict_wconvex", Some(e)) => {
            verify::verify_strict_wconvex(&sp, &e.f, n, seed, 0.1, e.domain.as_ref(), &tol)
        }
        ("midpoint", Some(e)) => verify::midpoint_convexity_check(&sp, &e.f, n, seed, &tol),
        ("epigraph", Some(e)) => {
            let v = verify::epigraph_convexity_check(&sp, &e.f, n, seed, &tol);
            println!("{}", serde_json::to_string_pretty(&v).expect("serialize"));
            return exit_for(v.outcome);
        }
        (p, None) if ["wconvex", "strict_wconvex", "midpoint", "epigraph"].contains(&p) => {
            eprintln!("config error: property {p:?} needs --fn <catalog function>");
            return ExitCode::from(2);
        }
        (p, _) => {
            eprintln!("config error: unknown property {p:?}");
            return ExitCode::from(2);
        }
    };
    println!("{}", serde_json::to_string_pretty(&verdict).expect("serialize"));
    exit_for(verdict.outcome)
}

fn exit_for(outcome: wconvex::Outcome) -> ExitCode {
    match outcome {
        wconvex::Outcome::Failed => ExitCode::from(1),
        _ => ExitCode::SUCCESS,
    }
}

fn cmd_project(space: &str, set: &str, x: &str, starts: usize, iters: usize, seed: u64) -> ExitCode {
    let Some(sp) = catalog::space_by_name::<f64>(space) else {
        eprintln!("config error: unknown catalog space {space:?}");
        return ExitCode::from(2);
    };
    let Some(entry) = catalog::set_by_name::<f64>(set) else {
        eprintln!("config error: unknown catalog set {set:?}");
        return ExitCode::from(2);
    };
    if entry.space_name != space {
        eprintln!("config error: set {set:?} lives on {}", entry.space_name);
        return ExitCode::from(2);
    }
    let query: DynPoint<f64> = match serde_json::from_str(x) {
        Ok(p) => p,
        Err(e) => {
            eprintln!("config error: cannot parse query point {x:?}: {e}");
            return ExitCode::from(2);
        }
    };
    if !sp.admits(&query) {
        eprintln!("config error: point {x} is not a valid payload for {space}");
        return ExitCode::from(2);
    }
    let cfg = SolveCfg {
        starts,
        patience: iters,
        max_passes: iters.saturating_mul(64).max(1000),
        seed,
        ..SolveCfg::default()
    };
    let r = project(&sp, &entry.set, &query, &cfg);
    println!(
        "{}",
        serde_json::to_string_pretty(&serde_json::json!({
            "query": query,
            "best": r.best,
            "distance": r.distance,
            "iterations": r.iterations,
            "converged": r.converged,
        }))
        .expect("serialize")
    );
    ExitCode::SUCCESS
}

fn cmd_fixpoint(
    map: &str,
    x0: Option<&str>,
    t: f64,
    fp_tol: f64,
    max_iter: usize,
    trace_csv: Option<PathBuf>,
) -> ExitCode {
    let Some(entry) = catalog::map_by_name::<f64>(map) else {
        eprintln!("config error: unknown catalog map {map:?} (see `wconvex list`)");
        return ExitCode::from(2);
    };
    if !(t > 0.0 && t < 1.0) {
        eprintln!("config error: step t must lie in (0, 1)");
        return ExitCode::from(2);
    }
    let start: DynPoint<f64> = match x0 {
        None => entry.start.clone(),
        Some(s) => match serde_json::from_str(s) {
            Ok(p) => p,
            Err(e) => {
                eprintln!("config error: cannot parse start point {s:?}: {e}");
                return ExitCode::from(2);
            }
        },
    };
    if !entry.space.admits(&start) {
        eprintln!("config error: start point is not a valid payload for {}", entry.space_name);
        return ExitCode::from(2);
    }
    let r = mann_iterate(&entry.space, &entry.map, &start, &StepSchedule::Constant(t), fp_tol, max_iter);
    if let Some(path) = &trace_csv {
        let mut csv = String::from("iteration,residual\n");
        for (i, res) in r.trace.iter().enumerate() {
            csv.push_str(&format!("{i},{res}\n"));
        }
        if let Err(e) = std::fs::write(path, csv) {
            eprintln!("cannot write trace {}: {e}", path.display());
            return ExitCode::from(2);
        }
    }
    println!(
        "{}",
        serde_json::to_string_pretty(&serde_json::json!({
            "map": map,
            "point": r.point,
            "residual": r.residual,
            "iterations": r.iterations,
            "converged": r.converged,
            "diverged": r.diverged,
        }))
        .expect("serialize")
    );
    if r.diverged {
        ExitCode::from(1)
    } else {
        ExitCode::SUCCESS
    }
}
