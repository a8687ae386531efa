//! Scenario configuration schema: a versioned JSON tree naming spaces,
//! base points, convex sets, function expression trees, self-maps, and the
//! task list.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use wconvex::functions::ScalarMap;
use wconvex::spaces::DynPoint;
use wconvex::Norm;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Scenario {
    pub version: u32,
    #[serde(default = "default_seed")]
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub workers: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<String>,
    #[serde(default)]
    pub spaces: BTreeMap<String, SpaceSpec>,
    #[serde(default)]
    pub points: BTreeMap<String, DynPoint<f64>>,
    #[serde(default)]
    pub sets: BTreeMap<String, SetSpec>,
    #[serde(default)]
    pub functions: BTreeMap<String, FunctionSpec>,
    #[serde(default)]
    pub maps: BTreeMap<String, MapSpec>,
    pub tasks: Vec<TaskSpec>,
}

fn default_seed() -> u64 {
    42
}

/// A point payload or a reference to a named base point.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PointRef {
    Name(String),
    Inline(DynPoint<f64>),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SpaceSpec {
    Euclidean { dim: usize, norm: Norm },
    Ball {
        #[serde(default = "default_ball_dim")]
        dim: usize,
    },
    Interval,
    Product {
        left: Box<SpaceSpec>,
        right: Box<SpaceSpec>,
    },
}

fn default_ball_dim() -> usize {
    3
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SetSpec {
    Segment { space: String, x: PointRef, y: PointRef },
    Ball { space: String, center: PointRef, radius: f64 },
    Box { space: String, min: Vec<f64>, max: Vec<f64> },
    Whole { space: String },
}

impl SetSpec {
    pub fn space_name(&self) -> &str {
        match self {
            SetSpec::Segment { space, .. }
            | SetSpec::Ball { space, .. }
            | SetSpec::Box { space, .. }
            | SetSpec::Whole { space } => space,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FunctionSpec {
    pub space: String,
    pub expr: ExprNode,
}

/// Function expression tree. Node kinds: `dist`, `compose`, `scale`, `sum`,
/// `conical`, `max`, `sup`, `restrict`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ExprNode {
    Dist {
        point: PointRef,
        #[serde(default = "identity_map")]
        map: ScalarMap<f64>,
    },
    Compose {
        map: ScalarMap<f64>,
        arg: Box<ExprNode>,
    },
    Scale {
        alpha: f64,
        arg: Box<ExprNode>,
    },
    Sum {
        args: Vec<ExprNode>,
    },
    Conical {
        args: Vec<ExprNode>,
        weights: Vec<f64>,
    },
    Max {
        args: Vec<ExprNode>,
    },
    Sup {
        args: Vec<ExprNode>,
    },
    Restrict {
        set: String,
        arg: Box<ExprNode>,
    },
}

fn identity_map() -> ScalarMap<f64> {
    ScalarMap::Identity
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum MapSpec {
    /// `T(x) = W(x, center; 1 − factor)`, a contraction toward the center
    /// expressed through the convex structure; works in every space.
    Contraction { space: String, center: PointRef, factor: f64 },
    /// Planar rotation about the origin (Euclidean dimension 2).
    Rotation {
        space: String,
        #[serde(default = "default_angle")]
        angle_deg: f64,
    },
    /// Point reflection through a center (spaces with total extension).
    Reflection { space: String, center: PointRef },
    Identity { space: String },
}

fn default_angle() -> f64 {
    90.0
}

impl MapSpec {
    pub fn space_name(&self) -> &str {
        match self {
            MapSpec::Contraction { space, .. }
            | MapSpec::Rotation { space, .. }
            | MapSpec::Reflection { space, .. }
            | MapSpec::Identity { space } => space,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PropertyTag {
    MetricAxioms,
    ConvexStructure,
    SegmentIdentities,
    Wconvex,
    StrictWconvex,
    Midpoint,
    Epigraph,
    Sublevel,
    StrictSpace,
    SphereWconvex,
    SwapBound,
    Nonexpansive,
    SetConvexity,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SolverCfgSpec {
    #[serde(default = "default_starts")]
    pub starts: usize,
    /// Consecutive no-improvement chord passes before a restart stops.
    #[serde(default = "default_iters")]
    pub iters: usize,
    #[serde(default = "default_tol")]
    pub tol: f64,
    #[serde(default = "default_polish")]
    pub polish_rounds: usize,
}

impl Default for SolverCfgSpec {
    fn default() -> Self {
        Self {
            starts: default_starts(),
            iters: default_iters(),
            tol: default_tol(),
            polish_rounds: default_polish(),
        }
    }
}

fn default_starts() -> usize {
    8
}
fn default_iters() -> usize {
    64
}
fn default_tol() -> f64 {
    1e-12
}
fn default_polish() -> usize {
    4
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "task", rename_all = "snake_case")]
pub enum TaskSpec {
    Verify(VerifyTask),
    Project {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        name: Option<String>,
        space: String,
        set: String,
        x: PointRef,
        #[serde(default)]
        cfg: SolverCfgSpec,
    },
    Chebyshev {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        name: Option<String>,
        space: String,
        set: String,
        xs: Vec<PointRef>,
        #[serde(default)]
        cfg: SolverCfgSpec,
        #[serde(default = "default_opt_tol")]
        optimality_tol: f64,
    },
    Fixpoint {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        name: Option<String>,
        space: String,
        map: String,
        x0: PointRef,
        #[serde(default = "default_step")]
        t: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        schedule: Option<String>,
        #[serde(default = "default_fp_tol")]
        fp_tol: f64,
        #[serde(default = "default_max_iter")]
        max_iter: usize,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        trace_csv: Option<String>,
    },
}

fn default_opt_tol() -> f64 {
    1e-6
}
fn default_step() -> f64 {
    0.5
}
fn default_fp_tol() -> f64 {
    1e-6
}
fn default_max_iter() -> usize {
    100_000
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VerifyTask {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub property: PropertyTag,
    pub space: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub function: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub set: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub map: Option<String>,
    #[serde(default = "default_n")]
    pub n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default = "default_separation")]
    pub separation: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub h: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub x0: Option<PointRef>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rho: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sigma: Option<f64>,
    #[serde(default)]
    pub strict: bool,
}

fn default_n() -> usize {
    10_000
}
fn default_separation() -> f64 {
    0.1
}
