//! Resolve a parsed scenario into library objects, validating every
//! reference and payload up front so tasks never hit a dangling name.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use wconvex::functions::{
    compose_increasing_convex, conical, distance_to_point, max_of, metric_ball_set, restrict,
    scale, segment_set, sum, sup_family, ConvexSet, WFn,
};
use wconvex::optimize::SelfMap;
use wconvex::space::{ConvexSpace, Tolerances};
use wconvex::spaces::{DynPoint, SpaceKind};

use crate::config::{
    ExprNode, MapSpec, PointRef, PropertyTag, Scenario, SetSpec, SpaceSpec, TaskSpec, VerifyTask,
    SCHEMA_VERSION,
};

#[derive(Debug)]
pub struct ConfigError(pub String);

impl std::fmt::Display for ConfigError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "invalid scenario: {}", self.0)
    }
}

impl std::error::Error for ConfigError {}

fn err<T>(msg: impl Into<String>) -> Result<T, ConfigError> {
    Err(ConfigError(msg.into()))
}

pub struct Assembled {
    pub spaces: BTreeMap<String, SpaceKind<f64>>,
    pub points: BTreeMap<String, DynPoint<f64>>,
    pub sets: BTreeMap<String, (String, ConvexSet<DynPoint<f64>>)>,
    pub functions: BTreeMap<String, (String, WFn<DynPoint<f64>, f64>)>,
    pub maps: BTreeMap<String, (String, SelfMap<DynPoint<f64>>)>,
}

impl Assembled {
    pub fn space(&self, name: &str) -> Result<&SpaceKind<f64>, ConfigError> {
        self.spaces.get(name).ok_or_else(|| {
            ConfigError(format!(
                "unknown space {name:?}; defined spaces: {}",
                keys(&self.spaces)
            ))
        })
    }

    pub fn set_for(&self, name: &str, space: &str) -> Result<&ConvexSet<DynPoint<f64>>, ConfigError> {
        match self.sets.get(name) {
            None => err(format!("unknown set {name:?}; defined sets: {}", keys(&self.sets))),
            Some((sp, set)) => {
                if sp != space {
                    return err(format!("set {name:?} lives on space {sp:?}, task references {space:?}"));
                }
                Ok(set)
            }
        }
    }

    pub fn function_for(
        &self,
        name: &str,
        space: &str,
    ) -> Result<&WFn<DynPoint<f64>, f64>, ConfigError> {
        match self.functions.get(name) {
            None => err(format!(
                "unknown function {name:?}; defined functions: {}",
                keys(&self.functions)
            )),
            Some((sp, f)) => {
                if sp != space {
                    return err(format!(
                        "function {name:?} lives on space {sp:?}, task references {space:?}"
                    ));
                }
                Ok(f)
            }
        }
    }

    pub fn map_for(&self, name: &str, space: &str) -> Result<&SelfMap<DynPoint<f64>>, ConfigError> {
        match self.maps.get(name) {
            None => err(format!("unknown map {name:?}; defined maps: {}", keys(&self.maps))),
            Some((sp, m)) => {
                if sp != space {
                    return err(format!("map {name:?} lives on space {sp:?}, task references {space:?}"));
                }
                Ok(m)
            }
        }
    }

    pub fn resolve_point(
        &self,
        space: &SpaceKind<f64>,
        space_name: &str,
        r: &PointRef,
    ) -> Result<DynPoint<f64>, ConfigError> {
        let p = match r {
            PointRef::Inline(p) => p.clone(),
            PointRef::Name(n) => self
                .points
                .get(n)
                .cloned()
                .ok_or_else(|| ConfigError(format!("unknown point {n:?}")))?,
        };
        if !space.admits(&p) {
            return err(format!(
                "point {p:?} is not a valid payload for space {space_name:?}"
            ));
        }
        Ok(p)
    }
}

fn keys<V>(m: &BTreeMap<String, V>) -> String {
    let mut s = String::new();
    for (i, k) in m.keys().enumerate() {
        if i > 0 {
            let _ = write!(s, ", ");
        }
        let _ = write!(s, "{k:?}");
    }
    if s.is_empty() {
        s.push_str("(none)");
    }
    s
}

pub fn build_space(spec: &SpaceSpec) -> Result<SpaceKind<f64>, ConfigError> {
    match spec {
        SpaceSpec::Euclidean { dim, norm } => {
            SpaceKind::euclidean(*dim, *norm).map_err(|e| ConfigError(e.to_string()))
        }
        SpaceSpec::Ball { dim } => SpaceKind::ball(*dim).map_err(|e| ConfigError(e.to_string())),
        SpaceSpec::Interval => Ok(SpaceKind::interval()),
        SpaceSpec::Product { left, right } => {
            Ok(SpaceKind::product(build_space(left)?, build_space(right)?))
        }
    }
}

pub fn assemble(scenario: &Scenario) -> Result<Assembled, ConfigError> {
    if scenario.version != SCHEMA_VERSION {
        return err(format!(
            "unsupported schema version {}, expected {SCHEMA_VERSION}",
            scenario.version
        ));
    }
    if scenario.tasks.is_empty() {
        return err("task list must not be empty");
    }

    let mut spaces = BTreeMap::new();
    for (name, spec) in &scenario.spaces {
        spaces.insert(name.clone(), build_space(spec)?);
    }

    let resolve_point = |space: &SpaceKind<f64>,
                         space_name: &str,
                         r: &PointRef|
     -> Result<DynPoint<f64>, ConfigError> {
        let p = match r {
            PointRef::Inline(p) => p.clone(),
            PointRef::Name(n) => scenario
                .points
                .get(n)
                .cloned()
                .ok_or_else(|| ConfigError(format!("unknown point {n:?}")))?,
        };
        if !space.admits(&p) {
            return err(format!("point {p:?} is not a valid payload for space {space_name:?}"));
        }
        Ok(p)
    };

    let tol = Tolerances::<f64>::default();
    let mut sets: BTreeMap<String, (String, ConvexSet<DynPoint<f64>>)> = BTreeMap::new();
    for (name, spec) in &scenario.sets {
        let space_name = spec.space_name().to_string();
        let space = spaces
            .get(&space_name)
            .ok_or_else(|| ConfigError(format!("set {name:?} references unknown space {space_name:?}")))?;
        let set = match spec {
            SetSpec::Segment { x, y, .. } => {
                let x = resolve_point(space, &space_name, x)?;
                let y = resolve_point(space, &space_name, y)?;
                segment_set(space, x, y, &tol).map_err(|e| ConfigError(format!("set {name:?}: {e}")))?
            }
            SetSpec::Ball { center, radius, .. } => {
                if *radius <= 0.0 || radius.is_nan() {
                    return err(format!("set {name:?}: ball radius must be positive"));
                }
                let c = resolve_point(space, &space_name, center)?;
                metric_ball_set(space, c, *radius)
            }
            SetSpec::Box { min, max, .. } => {
                match space {
                    SpaceKind::Euclidean(e) if e.dim() == min.len() && e.dim() == max.len() => {}
                    _ => {
                        return err(format!(
                            "set {name:?}: box sets need a Euclidean space matching the bound dimensions"
                        ))
                    }
                }
                if min.iter().zip(max).any(|(a, b)| a > b) {
                    return err(format!("set {name:?}: box bounds out of order"));
                }
                wconvex::catalog::dyn_box_set(min.clone(), max.clone())
            }
            SetSpec::Whole { .. } => wconvex::functions::whole_space(space),
        };
        sets.insert(name.clone(), (space_name, set));
    }

    let mut functions: BTreeMap<String, (String, WFn<DynPoint<f64>, f64>)> = BTreeMap::new();
    for (name, spec) in &scenario.functions {
        let space = spaces.get(&spec.space).ok_or_else(|| {
            ConfigError(format!("function {name:?} references unknown space {:?}", spec.space))
        })?;
        let f = build_expr(&spec.expr, space, &spec.space, &sets, &resolve_point)
            .map_err(|e| ConfigError(format!("function {name:?}: {}", e.0)))?;
        functions.insert(name.clone(), (spec.space.clone(), f));
    }

    let mut maps: BTreeMap<String, (String, SelfMap<DynPoint<f64>>)> = BTreeMap::new();
    for (name, spec) in &scenario.maps {
        let space_name = spec.space_name().to_string();
        let space = spaces
            .get(&space_name)
            .ok_or_else(|| ConfigError(format!("map {name:?} references unknown space {space_name:?}")))?;
        let map = build_map(spec, space, &space_name, &resolve_point)
            .map_err(|e| ConfigError(format!("map {name:?}: {}", e.0)))?;
        maps.insert(name.clone(), (space_name, map));
    }

    let assembled = Assembled {
        spaces,
        points: scenario.points.clone(),
        sets,
        functions,
        maps,
    };
    for (idx, task) in scenario.tasks.iter().enumerate() {
        validate_task(task, &assembled).map_err(|e| ConfigError(format!("task #{idx}: {}", e.0)))?;
    }
    Ok(assembled)
}

fn build_expr(
    node: &ExprNode,
    space: &SpaceKind<f64>,
    space_name: &str,
    sets: &BTreeMap<String, (String, ConvexSet<DynPoint<f64>>)>,
    resolve_point: &impl Fn(&SpaceKind<f64>, &str, &PointRef) -> Result<DynPoint<f64>, ConfigError>,
) -> Result<WFn<DynPoint<f64>, f64>, ConfigError> {
    let rec = |n: &ExprNode| build_expr(n, space, space_name, sets, resolve_point);
    let rec_all = |ns: &[ExprNode]| -> Result<Vec<WFn<DynPoint<f64>, f64>>, ConfigError> {
        ns.iter().map(rec).collect()
    };
    match node {
        ExprNode::Dist { point, map } => {
            let p = resolve_point(space, space_name, point)?;
            Ok(distance_to_point(space, p, *map))
        }
        ExprNode::Compose { map, arg } => Ok(compose_increasing_convex(&rec(arg)?, *map)),
        ExprNode::Scale { alpha, arg } => {
            scale(&rec(arg)?, *alpha).map_err(|e| ConfigError(e.to_string()))
        }
        ExprNode::Sum { args } => sum(&rec_all(args)?).map_err(|e| ConfigError(e.to_string())),
        ExprNode::Conical { args, weights } => {
            conical(&rec_all(args)?, weights).map_err(|e| ConfigError(e.to_string()))
        }
        ExprNode::Max { args } => max_of(&rec_all(args)?).map_err(|e| ConfigError(e.to_string())),
        ExprNode::Sup { args } => sup_family(&rec_all(args)?).map_err(|e| ConfigError(e.to_string())),
        ExprNode::Restrict { set, arg } => {
            let (set_space, set) = sets
                .get(set)
                .ok_or_else(|| ConfigError(format!("unknown set {set:?}")))?;
            if set_space != space_name {
                return err(format!(
                    "restriction set lives on space {set_space:?}, function on {space_name:?}"
                ));
            }
            Ok(restrict(&rec(arg)?, set))
        }
    }
}

fn build_map(
    spec: &MapSpec,
    space: &SpaceKind<f64>,
    space_name: &str,
    resolve_point: &impl Fn(&SpaceKind<f64>, &str, &PointRef) -> Result<DynPoint<f64>, ConfigError>,
) -> Result<SelfMap<DynPoint<f64>>, ConfigError> {
    match spec {
        MapSpec::Contraction { center, factor, .. } => {
            if !(0.0..=1.0).contains(factor) {
                return err("contraction factor must lie in [0, 1]");
            }
            let c = resolve_point(space, space_name, center)?;
            let sp = space.clone();
            let t = 1.0 - factor;
            Ok(SelfMap::new("contraction", move |p: &DynPoint<f64>| {
                sp.combine(p, &c, t)
            }))
        }
        MapSpec::Rotation { angle_deg, .. } => {
            match space {
                SpaceKind::Euclidean(e) if e.dim() == 2 => {}
                _ => return err("rotation maps need a two-dimensional Euclidean space"),
            }
            let (s, c) = angle_deg.to_radians().sin_cos();
            Ok(SelfMap::new("rotation", move |p: &DynPoint<f64>| match p {
                DynPoint::Vector(v) => {
                    DynPoint::Vector(vec![c * v[0] - s * v[1], s * v[0] + c * v[1]])
                }
                other => other.clone(),
            }))
        }
        MapSpec::Reflection { center, .. } => {
            if !matches!(space, SpaceKind::Euclidean(_)) {
                return err("reflection maps need a Euclidean space (total extension)");
            }
            let c = resolve_point(space, space_name, center)?;
            let sp = space.clone();
            Ok(SelfMap::new("reflection", move |p: &DynPoint<f64>| {
                // the point xi with W(p, xi; 1/2) = c, i.e. 2c - p
                sp.extend(p, &c, 0.5).unwrap_or_else(|| c.clone())
            }))
        }
        MapSpec::Identity { .. } => Ok(SelfMap::new("identity", |p: &DynPoint<f64>| p.clone())),
    }
}

fn validate_task(task: &TaskSpec, a: &Assembled) -> Result<(), ConfigError> {
    match task {
        TaskSpec::Verify(v) => validate_verify(v, a),
        TaskSpec::Project { space, set, x, cfg, .. } => {
            let sp = a.space(space)?;
            a.set_for(set, space)?;
            a.resolve_point(sp, space, x)?;
            if cfg.starts == 0 || cfg.iters == 0 {
                return err("solver budgets must be positive");
            }
            Ok(())
        }
        TaskSpec::Chebyshev { space, set, xs, cfg, .. } => {
            let sp = a.space(space)?;
            a.set_for(set, space)?;
            if xs.is_empty() {
                return err("chebyshev task needs at least one query point");
            }
            for x in xs {
                a.resolve_point(sp, space, x)?;
            }
            if cfg.starts == 0 || cfg.iters == 0 {
                return err("solver budgets must be positive");
            }
            Ok(())
        }
        TaskSpec::Fixpoint {
            space,
            map,
            x0,
            t,
            max_iter,
            schedule,
            ..
        } => {
            let sp = a.space(space)?;
            a.map_for(map, space)?;
            a.resolve_point(sp, space, x0)?;
            if !(*t > 0.0 && *t < 1.0) {
                return err("fixpoint step t must lie in (0, 1)");
            }
            if *max_iter == 0 {
                return err("max_iter must be positive");
            }
            if let Some(s) = schedule {
                if s != "harmonic" && s != "constant" {
                    return err(format!("unknown schedule {s:?}, expected \"constant\" or \"harmonic\""));
                }
            }
            Ok(())
        }
    }
}

fn validate_verify(v: &VerifyTask, a: &Assembled) -> Result<(), ConfigError> {
    let sp = a.space(&v.space)?;
    if v.n == 0 {
        return err("sample budget n must be positive");
    }
    let needs_function = matches!(
        v.property,
        PropertyTag::Wconvex
            | PropertyTag::StrictWconvex
            | PropertyTag::Midpoint
            | PropertyTag::Epigraph
            | PropertyTag::Sublevel
            | PropertyTag::SphereWconvex
    );
    if needs_function {
        let f = v
            .function
            .as_deref()
            .ok_or_else(|| ConfigError(format!("property {:?} needs a function", v.property)))?;
        a.function_for(f, &v.space)?;
    }
    match v.property {
        PropertyTag::Sublevel if v.h.is_none() => err("sublevel check needs a height h"),
        PropertyTag::SphereWconvex => {
            let x0 = v
                .x0
                .as_ref()
                .ok_or_else(|| ConfigError("sphere check needs x0".into()))?;
            a.resolve_point(sp, &v.space, x0)?;
            match (v.rho, v.sigma) {
                (Some(rho), Some(sigma)) if 0.0 < sigma && sigma < rho => Ok(()),
                _ => err("sphere check needs 0 < sigma < rho"),
            }
        }
        PropertyTag::Nonexpansive => {
            let m = v
                .map
                .as_deref()
                .ok_or_else(|| ConfigError("nonexpansive check needs a map".into()))?;
            a.map_for(m, &v.space).map(|_| ())
        }
        PropertyTag::SetConvexity => {
            let s = v
                .set
                .as_deref()
                .ok_or_else(|| ConfigError("set convexity check needs a set".into()))?;
            a.set_for(s, &v.space).map(|_| ())
        }
        _ => Ok(()),
    }
}
