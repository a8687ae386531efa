//! Built-in catalog of named spaces, functions, convex sets, and self-maps.
//!
//! The function battery mixes every construction the algebra supports:
//! distance-based functions under all scalar post-maps, compositions,
//! conical combinations, maxima, suprema, restrictions, the interval-length
//! functional, and three planted non-convex functions whose verifier
//! failures are part of the expected behavior. Entries carry their
//! expected verdicts so test suites and the CLI can drive them uniformly.

use crate::functions::{
    self, distance_to_point, max_of, metric_ball_set, restrict, scale, sup_family, ConvexSet,
    ScalarMap, WFn,
};
use crate::optimize::SelfMap;
use crate::scalar::{cast, Scalar};
use crate::spaces::{Ball, DynPoint, Interval, Norm, SpaceKind};

/// A named space.
pub struct SpaceEntry<T> {
    pub name: &'static str,
    pub space: SpaceKind<T>,
}

/// The registered space families, one or more representatives each.
pub fn space_catalog<T: Scalar>() -> Vec<SpaceEntry<T>> {
    vec![
        SpaceEntry {
            name: "l2_plane",
            space: SpaceKind::euclidean(2, Norm::L2).unwrap(),
        },
        SpaceEntry {
            name: "l1_plane",
            space: SpaceKind::euclidean(2, Norm::L1).unwrap(),
        },
        SpaceEntry {
            name: "linf_plane",
            space: SpaceKind::euclidean(2, Norm::LInf).unwrap(),
        },
        SpaceEntry {
            name: "r_line",
            space: SpaceKind::euclidean(1, Norm::L2).unwrap(),
        },
        SpaceEntry {
            name: "balls3",
            space: SpaceKind::ball(3).unwrap(),
        },
        SpaceEntry {
            name: "intervals",
            space: SpaceKind::interval(),
        },
        SpaceEntry {
            name: "plane_x_intervals",
            space: SpaceKind::product(
                SpaceKind::euclidean(2, Norm::L2).unwrap(),
                SpaceKind::interval(),
            ),
        },
        SpaceEntry {
            name: "line_x_line",
            space: SpaceKind::product(
                SpaceKind::euclidean(1, Norm::L2).unwrap(),
                SpaceKind::euclidean(1, Norm::L2).unwrap(),
            ),
        },
    ]
}

pub fn space_by_name<T: Scalar>(name: &str) -> Option<SpaceKind<T>> {
    space_catalog().into_iter().find(|e| e.name == name).map(|e| e.space)
}

/// One function of the battery with its expected verifier outcomes.
pub struct FunctionEntry<T: Scalar> {
    pub name: &'static str,
    pub space_name: &'static str,
    pub space: SpaceKind<T>,
    pub f: WFn<DynPoint<T>, T>,
    /// Expected `verify_wconvex` outcome.
    pub convex: bool,
    /// Member of the strict battery (implies `convex`).
    pub strict: bool,
    /// Sampling domain, when the function is a restriction.
    pub domain: Option<ConvexSet<DynPoint<T>>>,
}

fn vec_pt<T: Scalar>(coords: &[f64]) -> DynPoint<T> {
    DynPoint::vector(coords)
}

/// The function battery.
pub fn function_catalog<T: Scalar>() -> Vec<FunctionEntry<T>> {
    let l2: SpaceKind<T> = space_by_name("l2_plane").unwrap();
    let l1: SpaceKind<T> = space_by_name("l1_plane").unwrap();
    let linf: SpaceKind<T> = space_by_name("linf_plane").unwrap();
    let line: SpaceKind<T> = space_by_name("r_line").unwrap();
    let balls: SpaceKind<T> = space_by_name("balls3").unwrap();
    let ivs: SpaceKind<T> = space_by_name("intervals").unwrap();
    let prod: SpaceKind<T> = space_by_name("line_x_line").unwrap();
    let origin2 = vec_pt(&[0.0, 0.0]);
    let origin1 = vec_pt(&[0.0]);

    let mut entries = Vec::new();
    let mut push = |name: &'static str,
                    space_name: &'static str,
                    space: &SpaceKind<T>,
                    f: WFn<DynPoint<T>, T>,
                    convex: bool,
                    strict: bool,
                    domain: Option<ConvexSet<DynPoint<T>>>| {
        entries.push(FunctionEntry {
            name,
            space_name,
            space: space.clone(),
            f,
            convex,
            strict,
            domain,
        });
    };

    // distance-based functions on the plane, including the strict battery
    push(
        "dist_origin",
        "l2_plane",
        &l2,
        distance_to_point(&l2, origin2.clone(), ScalarMap::Identity),
        true,
        false,
        None,
    );
    push(
        "sqdist_origin",
        "l2_plane",
        &l2,
        distance_to_point(&l2, origin2.clone(), ScalarMap::Square),
        true,
        true,
        None,
    );
    push(
        "exp_dist_origin",
        "l2_plane",
        &l2,
        distance_to_point(&l2, origin2.clone(), ScalarMap::Exp),
        true,
        true,
        None,
    );
    push(
        "pow2p5_dist_origin",
        "l2_plane",
        &l2,
        distance_to_point(&l2, origin2.clone(), ScalarMap::power(cast(2.5)).unwrap()),
        true,
        true,
        None,
    );
    push(
        "exp_dist_line",
        "r_line",
        &line,
        distance_to_point(&line, origin1.clone(), ScalarMap::Exp),
        true,
        true,
        None,
    );

    // combinators
    let da = distance_to_point(&l2, vec_pt(&[-0.5, 0.0]), ScalarMap::Identity);
    let db = distance_to_point(&l2, vec_pt(&[0.5, 0.0]), ScalarMap::Identity);
    push("max_two_dists", "l2_plane", &l2, max_of(&[da.clone(), db.clone()]).unwrap(), true, false, None);
    push(
        "conical_pair",
        "l2_plane",
        &l2,
        functions::conical(&[da.clone(), db.clone()], &[T::one(), cast(2.0)]).unwrap(),
        true,
        false,
        None,
    );
    push(
        "sum_pair",
        "l2_plane",
        &l2,
        functions::sum(&[da.clone(), db.clone()]).unwrap(),
        true,
        false,
        None,
    );
    let fan: Vec<WFn<DynPoint<T>, T>> = (0..8)
        .map(|k| {
            let angle = k as f64 * std::f64::consts::PI / 4.0;
            let p = vec_pt(&[0.6 * angle.cos(), 0.6 * angle.sin()]);
            let w: T = cast(0.25 + 0.1 * k as f64);
            scale(&distance_to_point(&l2, p, ScalarMap::Identity), w).unwrap()
        })
        .collect();
    push("sup_dist_fan", "l2_plane", &l2, sup_family(&fan).unwrap(), true, false, None);

    let unit_disk = metric_ball_set(&l2, origin2.clone(), T::one());
    let sq = distance_to_point(&l2, origin2.clone(), ScalarMap::Square);
    push(
        "restricted_sqdist",
        "l2_plane",
        &l2,
        restrict(&sq, &unit_disk),
        true,
        false,
        Some(unit_disk),
    );

    // the other norms
    push(
        "dist_origin_l1",
        "l1_plane",
        &l1,
        distance_to_point(&l1, origin2.clone(), ScalarMap::Identity),
        true,
        false,
        None,
    );
    push(
        "dist_origin_linf",
        "linf_plane",
        &linf,
        distance_to_point(&linf, origin2.clone(), ScalarMap::Identity),
        true,
        false,
        None,
    );

    // ball space: distance to a near-degenerate ball, the center-norm plus
    // radius functional up to the fixed base point
    push(
        "ball_dist_base",
        "balls3",
        &balls,
        distance_to_point(
            &balls,
            DynPoint::Ball(Ball::new(vec![T::zero(); 3], cast(0.5)).unwrap()),
            ScalarMap::Identity,
        ),
        true,
        false,
        None,
    );

    // interval space: the length functional and a distance
    push(
        "lebesgue_length",
        "intervals",
        &ivs,
        WFn::new("length", |p: &DynPoint<T>| match p {
            DynPoint::Interval(i) => functions::Eval::Val(i.length()),
            _ => functions::Eval::OutOfDomain,
        }),
        true,
        false,
        None,
    );
    push(
        "interval_dist_mid",
        "intervals",
        &ivs,
        distance_to_point(
            &ivs,
            DynPoint::Interval(Interval::new(cast(0.3), cast(0.6)).unwrap()),
            ScalarMap::Identity,
        ),
        true,
        false,
        None,
    );

    // product space distance
    push(
        "product_dist",
        "line_x_line",
        &prod,
        distance_to_point(
            &prod,
            DynPoint::Pair(Box::new(vec_pt(&[0.3])), Box::new(vec_pt(&[-0.2]))),
            ScalarMap::Identity,
        ),
        true,
        false,
        None,
    );

    // planted non-convex functions
    let d0 = distance_to_point(&l2, origin2.clone(), ScalarMap::Identity);
    push(
        "planted_neg_dist",
        "l2_plane",
        &l2,
        WFn::new("neg_dist", move |p| match d0.eval(p) {
            functions::Eval::Val(v) => functions::Eval::Val(-v),
            other => other,
        }),
        false,
        false,
        None,
    );
    push(
        "planted_step",
        "r_line",
        &line,
        WFn::new("step", |p: &DynPoint<T>| match p {
            DynPoint::Vector(v) => functions::Eval::Val(if v[0] >= T::zero() { T::one() } else { T::zero() }),
            _ => functions::Eval::OutOfDomain,
        }),
        false,
        false,
        None,
    );
    let dma = distance_to_point(&l2, vec_pt(&[-0.6, 0.0]), ScalarMap::Identity);
    let dmb = distance_to_point(&l2, vec_pt(&[0.6, 0.0]), ScalarMap::Identity);
    push(
        "planted_min_dists",
        "l2_plane",
        &l2,
        WFn::new("min_dists", move |p| {
            match (dma.eval(p), dmb.eval(p)) {
                (functions::Eval::Val(a), functions::Eval::Val(b)) => functions::Eval::Val(a.min(b)),
                _ => functions::Eval::OutOfDomain,
            }
        }),
        false,
        false,
        None,
    );

    entries
}

pub fn function_by_name<T: Scalar>(name: &str) -> Option<FunctionEntry<T>> {
    function_catalog().into_iter().find(|e| e.name == name)
}

/// A named convex set bound to a catalog space.
pub struct SetEntry<T: Scalar> {
    pub name: &'static str,
    pub space_name: &'static str,
    pub set: ConvexSet<DynPoint<T>>,
}

/// Axis-aligned box over vector payloads.
pub fn dyn_box_set<T: Scalar>(lo: Vec<T>, hi: Vec<T>) -> ConvexSet<DynPoint<T>> {
    assert_eq!(lo.len(), hi.len());
    let (l2, h2) = (lo.clone(), hi.clone());
    ConvexSet::new(
        "box",
        move |p: &DynPoint<T>| match p {
            DynPoint::Vector(v) => {
                v.len() == lo.len() && v.iter().zip(lo.iter().zip(&hi)).all(|(x, (a, b))| a <= x && x <= b)
            }
            _ => false,
        },
        move |rng| {
            DynPoint::Vector(
                l2.iter()
                    .zip(&h2)
                    .map(|(a, b)| {
                        let u: T = cast(rng.unit());
                        *a + (*b - *a) * u
                    })
                    .collect(),
            )
        },
    )
}

pub fn set_catalog<T: Scalar>() -> Vec<SetEntry<T>> {
    let l2: SpaceKind<T> = space_by_name("l2_plane").unwrap();
    let tol = crate::space::Tolerances::default();
    vec![
        SetEntry {
            name: "base_segment",
            space_name: "l2_plane",
            set: functions::segment_set(&l2, vec_pt(&[0.0, 0.0]), vec_pt(&[2.0, 0.0]), &tol).unwrap(),
        },
        SetEntry {
            name: "unit_disk",
            space_name: "l2_plane",
            set: metric_ball_set(&l2, vec_pt(&[0.0, 0.0]), T::one()),
        },
        SetEntry {
            name: "unit_box",
            space_name: "l2_plane",
            set: dyn_box_set(vec![T::zero(), T::zero()], vec![T::one(), T::one()]),
        },
    ]
}

pub fn set_by_name<T: Scalar>(name: &str) -> Option<SetEntry<T>> {
    set_catalog().into_iter().find(|e| e.name == name)
}

/// A self-map of a catalog space with its known fixed-point data.
pub struct MapEntry<T: Scalar> {
    pub name: &'static str,
    pub space_name: &'static str,
    pub space: SpaceKind<T>,
    pub map: SelfMap<DynPoint<T>>,
    pub nonexpansive: bool,
    /// Canonical iteration start.
    pub start: DynPoint<T>,
    /// Known fixed point, for oracle cross-checks.
    pub fixed_point: DynPoint<T>,
    /// The squared residual is strictly W-convex, so the strict-certified
    /// fixed-point path applies through the square surrogate.
    pub strict_surrogate: bool,
    /// Bounded convex domain containing the fixed point, for residual
    /// minimization.
    pub domain: ConvexSet<DynPoint<T>>,
}

fn affine_contraction<T: Scalar>(center: Vec<T>, factor: T) -> SelfMap<DynPoint<T>> {
    SelfMap::new("contraction", move |p: &DynPoint<T>| match p {
        DynPoint::Vector(v) => DynPoint::Vector(
            v.iter()
                .zip(&center)
                .map(|(x, c)| *c + factor * (*x - *c))
                .collect(),
        ),
        other => other.clone(),
    })
}

/// The nonexpansive battery: contraction, reflection, rotation, shifted
/// contraction, plus one expansive map whose nonexpansiveness check must
/// fail.
pub fn map_catalog<T: Scalar>() -> Vec<MapEntry<T>> {
    let l2: SpaceKind<T> = space_by_name("l2_plane").unwrap();
    let line: SpaceKind<T> = space_by_name("r_line").unwrap();
    let origin2 = vec_pt(&[0.0, 0.0]);

    vec![
        MapEntry {
            name: "contraction_half",
            space_name: "l2_plane",
            space: l2.clone(),
            map: affine_contraction(vec![T::zero(), T::zero()], cast(0.5)),
            nonexpansive: true,
            start: vec_pt(&[1.0, 1.0]),
            fixed_point: origin2.clone(),
            strict_surrogate: true,
            domain: metric_ball_set(&l2, origin2.clone(), cast(4.0)),
        },
        MapEntry {
            name: "reflection",
            space_name: "l2_plane",
            space: l2.clone(),
            map: SelfMap::new("reflection", |p: &DynPoint<T>| match p {
                DynPoint::Vector(v) => {
                    DynPoint::Vector(v.iter().map(|x| T::zero() - *x).collect())
                }
                other => other.clone(),
            }),
            nonexpansive: true,
            start: vec_pt(&[0.7, -0.4]),
            fixed_point: origin2.clone(),
            strict_surrogate: true,
            domain: metric_ball_set(&l2, origin2.clone(), cast(4.0)),
        },
        MapEntry {
            name: "rotation_quarter",
            space_name: "l2_plane",
            space: l2.clone(),
            map: SelfMap::new("rotation", |p: &DynPoint<T>| match p {
                DynPoint::Vector(v) => DynPoint::Vector(vec![T::zero() - v[1], v[0]]),
                other => other.clone(),
            }),
            nonexpansive: true,
            start: vec_pt(&[1.0, 0.0]),
            fixed_point: origin2.clone(),
            strict_surrogate: true,
            domain: metric_ball_set(&l2, origin2.clone(), cast(4.0)),
        },
        MapEntry {
            name: "shifted_contraction",
            space_name: "r_line",
            space: line.clone(),
            map: SelfMap::new("shifted_contraction", |p: &DynPoint<T>| match p {
                DynPoint::Vector(v) => DynPoint::Vector(vec![v[0] / cast(2.0) + T::one()]),
                other => other.clone(),
            }),
            nonexpansive: true,
            start: vec_pt(&[0.0]),
            fixed_point: vec_pt(&[2.0]),
            strict_surrogate: true,
            domain: metric_ball_set(&line, vec_pt(&[2.0]), cast(4.0)),
        },
        MapEntry {
            name: "planted_expansion",
            space_name: "r_line",
            space: line.clone(),
            map: SelfMap::new("double", |p: &DynPoint<T>| match p {
                DynPoint::Vector(v) => DynPoint::Vector(vec![v[0] * cast(2.0)]),
                other => other.clone(),
            }),
            nonexpansive: false,
            start: vec_pt(&[1.0]),
            fixed_point: vec_pt(&[0.0]),
            strict_surrogate: false,
            domain: metric_ball_set(&line, vec_pt(&[0.0]), cast(4.0)),
        },
    ]
}

pub fn map_by_name<T: Scalar>(name: &str) -> Option<MapEntry<T>> {
    map_catalog().into_iter().find(|e| e.name == name)
}
