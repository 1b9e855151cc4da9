//! Named corpus of worked examples and counterexamples with expected
//! verdicts. Every expected-Falsified assertion replays its witness.

use std::collections::BTreeMap;
use std::f64::consts::{PI, SQRT_2};

use serde::{Deserialize, Serialize};

use crate::base::{ExtendedReal, SampleStream, Status, ToleranceProfile, Vector, Verdict, Witness};
use crate::certify::{
    compose, composition_check, cone_equivalence_harness, continuity_verdict,
    main_equivalence_harness, midpoint_criterion, power_transform, probe_strictly_convex_set,
    rotundity_equivalence_check, strictly_sub_convex_at_levels, test_convex, test_quasi_convex,
    test_strictly_convex, test_strictly_quasi_convex, test_strictly_sub_convex, test_sub_convex,
    zero_set_probe, HomogeneousFunctionSpec, ScalarMap,
};
use crate::error::{Error, Result};
use crate::gauge::GaugeEvaluator;
use crate::norms::{asymmetry_constant, norm_from_gauge, validate_axioms, MinkowskiNormSpec};
use crate::sets::{Halfspace, SetFlags, SetOracle};

/// Default sample budget per certifier call.
pub const FIXTURE_SAMPLES: usize = 20_000;
/// Powers used by the equivalence harnesses.
pub const HARNESS_ALPHAS: [f64; 3] = [1.5, 2.0, 3.0];
/// Dimensions checked by `truncated_phi_norm` when none is given.
pub const PHI_DIMENSIONS: [usize; 3] = [4, 16, 64];

/// What a fixture is about.
#[derive(Clone, Debug)]
pub enum Subject {
    Set(SetOracle),
    Norm(MinkowskiNormSpec),
    Function(HomogeneousFunctionSpec),
    Composition {
        inner: HomogeneousFunctionSpec,
        outer: ScalarMap,
    },
}

impl Subject {
    pub fn kind(&self) -> &'static str {
        match self {
            Subject::Set(_) => "set",
            Subject::Norm(_) => "norm",
            Subject::Function(_) => "function",
            Subject::Composition { .. } => "composition",
        }
    }

    /// Degree-1 non-negative function on the whole space, when the subject
    /// is one. Non-negativity is probed, not assumed.
    pub fn as_whole_space_function(&self) -> Option<HomogeneousFunctionSpec> {
        match self {
            Subject::Norm(n) => Some(HomogeneousFunctionSpec::from_norm(n)),
            Subject::Function(f)
                if f.domain().is_whole()
                    && f.degree() == Some(1.0)
                    && power_transform(f, 1.0).is_ok() =>
            {
                Some(f.clone())
            }
            _ => None,
        }
    }
}

#[derive(Clone, Debug)]
pub struct Fixture {
    pub name: String,
    pub subject: Subject,
    /// Assertion name to expected outcome.
    pub expected: Vec<(String, String)>,
    pub provenance: String,
}

/// Summary row for listings and reports.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FixtureInfo {
    pub name: String,
    pub kind: String,
    pub provenance: String,
    pub assertions: Vec<String>,
}

impl From<&Fixture> for FixtureInfo {
    fn from(f: &Fixture) -> Self {
        FixtureInfo {
            name: f.name.clone(),
            kind: f.subject.kind().into(),
            provenance: f.provenance.clone(),
            assertions: f.expected.iter().map(|(a, _)| a.clone()).collect(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FixtureOptions {
    pub samples: usize,
    /// Dimension for `truncated_phi_norm`; all of [`PHI_DIMENSIONS`] when absent.
    pub d: Option<usize>,
}

impl Default for FixtureOptions {
    fn default() -> Self {
        FixtureOptions {
            samples: FIXTURE_SAMPLES,
            d: None,
        }
    }
}

/// Verdict of a fixture run together with the measured values it checked.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FixtureOutcome {
    pub name: String,
    pub verdict: Verdict,
    pub values: BTreeMap<String, f64>,
    pub assertions: Vec<String>,
}

fn v(c: &[f64]) -> Vector {
    Vector::from_slice(c).expect("finite fixture coordinates")
}

// ---------------------------------------------------------------- subjects

pub fn disk_union_ray_set() -> SetOracle {
    let disk = SetOracle::ball(2, 1.0, false);
    let ray = SetOracle::ray(v(&[1.0, 0.0])).expect("nonzero direction");
    disk.union(&ray)
        .expect("same dimension")
        .renamed("disk_union_ray")
}

const SURROGATE_ANGLES: usize = 720;

fn on_surrogate_angle(x: &Vector) -> bool {
    let step = 2.0 * PI / SURROGATE_ANGLES as f64;
    let theta = x[1].atan2(x[0]);
    let k = (theta / step).round();
    (theta - k * step).abs() <= 1e-12
}

/// Open unit disk plus the segments of length 2 at 720 equally spaced angles.
pub fn rational_rays_surrogate_set() -> SetOracle {
    SetOracle::new("rational_rays_surrogate", 2, |x| {
        let r = x.norm();
        r < 1.0 || (r <= 2.0 && on_surrogate_angle(x))
    })
    .with_flags(SetFlags {
        star_shaped: true,
        cone: false,
        convex: false,
        contains_origin: true,
        bounded: true,
    })
    .with_outer_radius(2.0)
}

pub fn sqrt2_max_function() -> HomogeneousFunctionSpec {
    HomogeneousFunctionSpec::new("sqrt2_max", 2, |x| {
        ((2.0 * (x[0] * x[0] + x[1] * x[1])).sqrt() - 2.0 * x[1]).max(0.0)
    })
    .with_degree(1.0)
    .with_continuity(true)
}

pub fn sqrt2_min_function() -> HomogeneousFunctionSpec {
    HomogeneousFunctionSpec::new("sqrt2_min", 2, |x| {
        ((2.0 * (x[0] * x[0] + x[1] * x[1])).sqrt() - 2.0 * x[1]).min(0.0)
    })
    .with_degree(1.0)
    .with_continuity(true)
}

/// `{x > 0} u {0}` in the plane.
pub fn pointed_half_plane() -> SetOracle {
    SetOracle::new("pointed_half_plane", 2, |x| {
        x[0] > 0.0 || (x[0] == 0.0 && x[1] == 0.0)
    })
    .with_flags(SetFlags {
        star_shaped: true,
        cone: true,
        convex: true,
        contains_origin: true,
        bounded: false,
    })
}

pub fn cone_ratio_function() -> HomogeneousFunctionSpec {
    HomogeneousFunctionSpec::new("cone_ratio", 2, |x| {
        if x[0] == 0.0 && x[1] == 0.0 {
            0.0
        } else {
            (x[0] * x[0] + x[1] * x[1]) / (2.0 * x[0])
        }
    })
    .with_degree(1.0)
    .with_domain(pointed_half_plane())
    .expect("matching dimension")
}

pub fn square_in_disk_function() -> HomogeneousFunctionSpec {
    let disk = SetOracle::ball(2, SQRT_2, true).renamed("disk(sqrt2)");
    HomogeneousFunctionSpec::new("square_in_disk", 2, |x| {
        let n2 = x[0] * x[0] + x[1] * x[1];
        if x.norm_inf() <= 1.0 {
            n2
        } else {
            n2 + 2.0
        }
    })
    .with_domain(disk)
    .expect("matching dimension")
}

/// `{y > |x|}`.
pub fn open_cone() -> SetOracle {
    SetOracle::halfspaces(
        2,
        vec![
            Halfspace {
                normal: v(&[-1.0, 1.0]),
                offset: 0.0,
                strict: true,
            },
            Halfspace {
                normal: v(&[1.0, 1.0]),
                offset: 0.0,
                strict: true,
            },
        ],
    )
    .expect("planar normals")
    .renamed("open_cone")
}

pub fn open_cone_euclidean_function() -> HomogeneousFunctionSpec {
    HomogeneousFunctionSpec::from_norm(&MinkowskiNormSpec::lp(2, 2.0).expect("valid exponent"))
        .renamed("euclidean_on_open_cone")
        .with_domain(open_cone())
        .expect("matching dimension")
}

pub fn product_barrier_function() -> HomogeneousFunctionSpec {
    HomogeneousFunctionSpec::new("product_barrier", 2, |x| {
        1.0 / ((1.0 - x[0] * x[0]) * (1.0 - x[1] * x[1]))
    })
    .with_domain(SetOracle::cube(2, 1.0, false))
    .expect("matching dimension")
}

pub fn saturating_map() -> ScalarMap {
    ScalarMap::new("t/(t+1)", true, true, |t| t / (t + 1.0))
}

/// `-1` on `(-inf, 0)`, `0` elsewhere: non-decreasing, not lower semicontinuous.
pub fn negative_indicator_map() -> ScalarMap {
    ScalarMap::new("-1_{(-inf,0)}", true, false, |t| {
        if t < 0.0 {
            -1.0
        } else {
            0.0
        }
    })
}

pub fn step_function() -> HomogeneousFunctionSpec {
    HomogeneousFunctionSpec::new("step", 1, |x| if x[0] <= 0.0 { 0.0 } else { 1.0 })
}

pub fn funk_disk_norm() -> MinkowskiNormSpec {
    MinkowskiNormSpec::funk(
        MinkowskiNormSpec::lp(2, 2.0).expect("valid exponent"),
        v(&[0.5, 0.0]),
    )
    .expect("drift inside the dual ball")
    .renamed("funk_disk")
}

pub fn hexagon_norm() -> MinkowskiNormSpec {
    let vertices = (0..6)
        .map(|k| {
            let a = PI * k as f64 / 3.0;
            v(&[a.cos(), a.sin()])
        })
        .collect();
    MinkowskiNormSpec::polyhedral(vertices)
        .expect("hexagon spans the plane")
        .renamed("hexagon")
}

/// `(-1, 1)^2` plus the corners `(1, 1)` and `(1, -1)`.
pub fn notched_square_set() -> SetOracle {
    SetOracle::new("open_square_plus_two_corners", 2, |x| {
        x.norm_inf() < 1.0 || (x[0] == 1.0 && x[1].abs() == 1.0)
    })
    .with_flags(SetFlags {
        star_shaped: true,
        cone: false,
        convex: false,
        contains_origin: true,
        bounded: true,
    })
    .with_outer_radius(SQRT_2)
}

pub fn square_gauge_norm(tol: &ToleranceProfile) -> Result<MinkowskiNormSpec> {
    Ok(norm_from_gauge(&SetOracle::cube(2, 1.0, true), tol)?.renamed("square_gauge"))
}

fn lp_name(p: f64) -> String {
    if p.is_infinite() {
        "lp(inf)".into()
    } else {
        format!("lp({p})")
    }
}

const LP_EXPONENTS: [f64; 5] = [1.0, 1.5, 2.0, 3.0, f64::INFINITY];

// ---------------------------------------------------------------- catalogue

struct Entry {
    name: String,
    provenance: &'static str,
    assertions: &'static [(&'static str, &'static str)],
}

const NORM_ASSERTIONS_ROTUND: &[(&str, &str)] = &[
    ("axioms", "Proven"),
    ("midpoint_criterion", "Proven"),
    ("rotundity_equivalence", "Supported, rotund"),
    ("convex", "Supported"),
    ("strictly_convex", "Falsified"),
    ("quasi_convex", "Supported"),
    ("strictly_quasi_convex", "Supported"),
    ("sub_convex", "Supported"),
    ("strictly_sub_convex", "Supported"),
    ("zero_set", "Supported"),
    ("main_harness", "all conditions hold, agree"),
];

const NORM_ASSERTIONS_FLAT: &[(&str, &str)] = &[
    ("axioms", "Proven"),
    ("midpoint_criterion", "Falsified, |N(mid) - 1| <= 1e-12"),
    ("rotundity_equivalence", "Supported, not rotund"),
    ("convex", "Supported"),
    ("strictly_convex", "Falsified"),
    ("quasi_convex", "Supported"),
    ("strictly_quasi_convex", "Falsified"),
    ("sub_convex", "Supported"),
    ("strictly_sub_convex", "Falsified"),
    ("zero_set", "Supported"),
    ("main_harness", "no condition holds, agree"),
];

fn catalogue() -> Vec<Entry> {
    let mut out = vec![
        Entry {
            name: "disk_union_ray".into(),
            provenance: "gauge topology remark, point 4: S = D u ([0, +inf) x {0})",
            assertions: &[
                ("gauge(2,0)", "0 exactly"),
                ("usc_at(2,0)", "fails, limsup >= 2 - 1e-6"),
                ("lsc_at(2,0)", "holds"),
                ("strict_sublevel_vs_interior", "(2,0) in p^-1([0,1)) but not interior"),
                ("gauge(0.5,0.5)", "sqrt(1/2)"),
            ],
        },
        Entry {
            name: "rational_rays_surrogate".into(),
            provenance: "gauge topology remark, point 1: D plus segments at rational angles (720-angle surrogate)",
            assertions: &[
                ("interior_strictly_inside_open_sublevel", "(1.5,0): p < 1, not interior"),
                ("open_sublevel_strictly_inside_set", "(2,0): in S, p = 1"),
                ("set_strictly_inside_closed_sublevel", "unit point at an off-grid angle: p = 1, not in S"),
                ("closed_sublevel_vs_closure", "off-grid point of radius 1.5: p = 1.5, not in S"),
            ],
        },
        Entry {
            name: "sqrt2_max_cone_function".into(),
            provenance: "strict sub-convexity remark, point 4: max{0, sqrt(2(x^2+y^2)) - 2y}",
            assertions: &[
                ("convex", "Supported"),
                ("sub_convex", "Supported"),
                ("strictly_sub_convex", "Falsified at level 0, midpoint on y = |x|"),
                ("zero_set", "Falsified"),
                ("main_harness", "no condition holds, agree"),
            ],
        },
        Entry {
            name: "sqrt2_min_cone_function".into(),
            provenance: "strict sub-convexity remark, point 4: min{0, sqrt(2(x^2+y^2)) - 2y}",
            assertions: &[
                ("strictly_sub_convex", "Supported"),
                ("strict_sublevel_0_not_strictly_convex", "Falsified"),
            ],
        },
        Entry {
            name: "cone_ratio_function".into(),
            provenance: "quasi-convexity and continuity remark, point 1: (x^2+y^2)/(2x) on x > 0, 0 at the apex",
            assertions: &[
                ("convex", "Supported"),
                ("strictly_sub_convex", "Supported"),
                ("sublevel_1_is_disk", "S_1 = closed disk about (1,0) of radius 1"),
                ("apex_discontinuity", "f(1/n, 1/sqrt n) -> 1/2 != f(0,0)"),
            ],
        },
        Entry {
            name: "square_in_disk_discontinuous".into(),
            provenance: "strict quasi-convexity vs strict sub-convexity remark, point 2: |u|^2 on the square, |u|^2 + 2 outside, on the disk of radius sqrt 2",
            assertions: &[
                ("sublevel_2_is_square", "S_2 = [-1,1]^2 at sampled points"),
                ("strictly_sub_convex_at_2", "Falsified"),
                ("continuity", "Falsified"),
                ("strictly_quasi_convex", "Falsified (chord (0.99,0.99), (1.1,0))"),
            ],
        },
        Entry {
            name: "open_cone_euclidean".into(),
            provenance: "end of the characterisation section: Euclidean norm on {y > |x|}",
            assertions: &[
                ("cone_strictly_convex", "Falsified"),
                ("cone_harness", "cond2 holds, cond3 fails, agreement not asserted"),
            ],
        },
        Entry {
            name: "product_barrier_composition".into(),
            provenance: "remark after the strict composition proposition: 1/((1-x^2)(1-y^2)) on (-1,1)^2, phi(t) = t/(t+1)",
            assertions: &[
                ("inner_strictly_sub_convex", "Supported"),
                ("sublevel_1_is_domain", "g < 1 on C"),
                ("composition", "Falsified"),
                ("strictly_sub_convex_at_1", "Falsified, chord on the square boundary"),
                ("indicator_composition", "Falsified, S_-1(g) = {y > |x|}"),
            ],
        },
        Entry {
            name: "truncated_phi_norm".into(),
            provenance: "introduction: phi(x) = sum (n+1)/(n+2) x_n truncated to d coordinates",
            assertions: &[
                ("axioms", "Proven"),
                ("asymmetry", "2d + 1 within 1e-6, attained at -e_(d-1)"),
                ("midpoint_criterion", "Falsified"),
            ],
        },
        Entry {
            name: "step_function".into(),
            provenance: "introduction: strictly sub-convex but not strictly convex",
            assertions: &[
                ("strictly_sub_convex", "Supported"),
                ("strictly_convex", "Falsified"),
                ("sub_convex", "Supported"),
            ],
        },
    ];
    for p in LP_EXPONENTS {
        let rotund = p > 1.0 && p.is_finite();
        out.push(Entry {
            name: lp_name(p),
            provenance: "lp norms on the plane",
            assertions: if rotund {
                NORM_ASSERTIONS_ROTUND
            } else {
                NORM_ASSERTIONS_FLAT
            },
        });
    }
    out.push(Entry {
        name: "funk_disk_norm".into(),
        provenance: "Funk-type norm |x| + <(0.5, 0), x> on the plane",
        assertions: &[
            ("axioms", "Proven"),
            ("closed_form", "N(2/3,0) = N(-2,0) = 1, N(-2/3,0) = 1/3"),
            ("asymmetry", "3"),
            ("midpoint_criterion", "Proven"),
            ("rotundity_equivalence", "Supported, rotund"),
            ("strictly_sub_convex", "Supported"),
            ("main_harness", "all conditions hold, agree"),
        ],
    });
    out.push(Entry {
        name: "hexagon_polyhedral_norm".into(),
        provenance: "regular hexagon unit ball",
        assertions: &[
            ("axioms", "Supported"),
            ("asymmetry", "1"),
            ("midpoint_criterion", "Falsified, |N(mid) - 1| <= 1e-12"),
            ("rotundity_equivalence", "Supported, not rotund"),
            ("strictly_sub_convex", "Falsified"),
            ("main_harness", "no condition holds, agree"),
        ],
    });
    out.push(Entry {
        name: "square_gauge_identity".into(),
        provenance: "remark after the gauge convexity corollary: p_S = p_T with T = [-1,1]^2",
        assertions: &[
            ("notched_square_not_convex", "(1,1), (1,-1) in S, (1,0) not"),
            ("gauges_agree", "p_S = p_T = max norm at sampled points"),
            ("convex", "Supported"),
            ("midpoint_criterion", "Falsified"),
        ],
    });
    out
}

fn subject_for(name: &str, tol: &ToleranceProfile) -> Result<Subject> {
    Ok(match name {
        "disk_union_ray" => Subject::Set(disk_union_ray_set()),
        "rational_rays_surrogate" => Subject::Set(rational_rays_surrogate_set()),
        "sqrt2_max_cone_function" => Subject::Function(sqrt2_max_function()),
        "sqrt2_min_cone_function" => Subject::Function(sqrt2_min_function()),
        "cone_ratio_function" => Subject::Function(cone_ratio_function()),
        "square_in_disk_discontinuous" => Subject::Function(square_in_disk_function()),
        "open_cone_euclidean" => Subject::Function(open_cone_euclidean_function()),
        "product_barrier_composition" => Subject::Composition {
            inner: product_barrier_function(),
            outer: saturating_map(),
        },
        "truncated_phi_norm" => Subject::Norm(MinkowskiNormSpec::truncated_phi(PHI_DIMENSIONS[0])?),
        "step_function" => Subject::Function(step_function()),
        "funk_disk_norm" => Subject::Norm(funk_disk_norm()),
        "hexagon_polyhedral_norm" => Subject::Norm(hexagon_norm()),
        "square_gauge_identity" => Subject::Norm(square_gauge_norm(tol)?),
        other => match LP_EXPONENTS.iter().find(|p| lp_name(**p) == other) {
            Some(p) => Subject::Norm(MinkowskiNormSpec::lp(2, *p)?),
            None => return Err(Error::Input(format!("unknown fixture `{other}`"))),
        },
    })
}

/// The corpus, in a stable order.
pub fn list_fixtures() -> Vec<Fixture> {
    let tol = ToleranceProfile::default();
    catalogue()
        .into_iter()
        .map(|e| Fixture {
            subject: subject_for(&e.name, &tol).expect("catalogue subjects build"),
            expected: e
                .assertions
                .iter()
                .map(|(a, x)| (a.to_string(), x.to_string()))
                .collect(),
            provenance: e.provenance.to_string(),
            name: e.name,
        })
        .collect()
}

pub fn fixture_names() -> Vec<String> {
    catalogue().into_iter().map(|e| e.name).collect()
}

// ---------------------------------------------------------------- running

struct Ctx {
    fixture: String,
    stream: SampleStream,
    tol: ToleranceProfile,
    n: usize,
    effort: u64,
    failure: Option<Witness>,
    values: BTreeMap<String, f64>,
    executed: Vec<String>,
}

impl Ctx {
    fn sub(&self, label: &str) -> SampleStream {
        self.stream.substream(label)
    }

    fn expect(&mut self, assertion: &str, ok: bool, detail: Witness) {
        self.effort += 1;
        if !self.executed.iter().any(|a| a == assertion) {
            self.executed.push(assertion.to_string());
        }
        if !ok && self.failure.is_none() {
            let mut w = detail;
            w.property = format!("{}/{}", self.fixture, assertion);
            self.failure = Some(w);
        }
    }

    fn expect_status(&mut self, assertion: &str, v: &Verdict, holds: bool) {
        let ok = v.holds() == Some(holds);
        let detail = v.witness.clone().unwrap_or_else(|| Witness::new(assertion));
        self.expect(
            assertion,
            ok,
            detail.scalar("verdict_holds", bool_value(v.holds())),
        );
    }

    fn value(&mut self, name: &str, x: f64) {
        self.values.insert(name.to_string(), x);
    }
}

fn bool_value(b: Option<bool>) -> f64 {
    match b {
        Some(true) => 1.0,
        Some(false) => 0.0,
        None => -1.0,
    }
}

/// Re-evaluates a certifier witness; `true` when it still violates its
/// property.
pub fn replay_witness(
    f: &HomogeneousFunctionSpec,
    w: &Witness,
    tol: &ToleranceProfile,
) -> Result<bool> {
    let prop = w.property.rsplit('/').next().unwrap_or(&w.property);
    match prop {
        "convex" | "strictly_convex" | "quasi_convex" | "strictly_quasi_convex" | "sub_convex" => {
            if prop == "sub_convex" && w.get("level").is_some() {
                let z = w.points[0].lerp(&w.points[1], w.get("t").unwrap_or(0.5));
                return Ok(f.eval(&z)? > w.get("level").unwrap_or(f64::NAN));
            }
            let t = w
                .get("t")
                .ok_or_else(|| Error::Input("chord witness without t".into()))?;
            let (x, y) = (&w.points[0], &w.points[1]);
            let (fx, fy, fz) = (f.eval(x)?, f.eval(y)?, f.eval(&x.lerp(y, t))?);
            let scale = fx.abs().max(fy.abs());
            Ok(match prop {
                "convex" => fz - ((1.0 - t) * fx + t * fy) > tol.eps_strict * scale.max(1.0),
                "strictly_convex" => (1.0 - t) * fx + t * fy - fz <= tol.eps_strict * scale,
                "strictly_quasi_convex" => fx.max(fy) - fz <= tol.eps_strict * scale,
                _ => fz - fx.max(fy) > tol.eps_strict * scale.max(1.0),
            })
        }
        "strictly_sub_convex" => {
            let r = w
                .get("level")
                .ok_or_else(|| Error::Input("sublevel witness without level".into()))?;
            let mid = &w.points[2];
            if !f.in_domain(mid) {
                return Ok(true);
            }
            let h = tol.eps_eq * mid.norm().max(1.0);
            let probes_inside = (0..mid.dim())
                .flat_map(|i| [mid.with_coord(i, h), mid.with_coord(i, -h)])
                .all(|p| f.in_domain(&p) && f.eval(&p).map(|v| v < r).unwrap_or(false));
            Ok(!(f.eval(mid)? < r - tol.eps_strict * r.abs()) || !probes_inside)
        }
        "zero_set" => {
            let u = &w.points[0];
            let v = f.eval(u)?;
            Ok(if u.is_zero() {
                v.abs() > tol.eps_eq
            } else {
                v.abs() < tol.eps_strict
            })
        }
        "continuity" => {
            let x = &w.points[0];
            match w.points.get(1) {
                Some(y) => {
                    Ok((f.eval(y)? - f.eval(x)?).abs() > tol.eps_eq * (1.0 + f.eval(x)?.abs()))
                }
                None => Ok(false),
            }
        }
        other => Err(Error::Input(format!(
            "no replay for witness property `{other}`"
        ))),
    }
}

/// `N(mid) >= 1 - eps_eq` for a midpoint-criterion witness.
pub fn replay_midpoint(n: &MinkowskiNormSpec, w: &Witness, tol: &ToleranceProfile) -> Result<bool> {
    let (x, y) = (&w.points[0], &w.points[1]);
    let unit = |u: &Vector| -> Result<bool> { Ok((n.evaluate(u)? - 1.0).abs() <= tol.eps_eq) };
    Ok(unit(x)? && unit(y)? && n.evaluate(&x.midpoint(y))? >= 1.0 - tol.eps_eq)
}

fn expect_falsified_with_replay(
    ctx: &mut Ctx,
    assertion: &str,
    f: &HomogeneousFunctionSpec,
    v: &Verdict,
) -> Result<()> {
    ctx.expect_status(assertion, v, false);
    if let Some(w) = &v.witness {
        let replayed = replay_witness(f, w, &ctx.tol)?;
        ctx.expect(assertion, replayed, w.clone().scalar("replayed", 0.0));
    }
    Ok(())
}

fn flat_midpoint(ctx: &mut Ctx, n: &MinkowskiNormSpec, v: &Verdict) -> Result<()> {
    ctx.expect_status("midpoint_criterion", v, false);
    if let Some(w) = &v.witness {
        let mid = n.evaluate(&w.points[0].midpoint(&w.points[1]))?;
        ctx.value("midpoint_gap", (mid - 1.0).abs());
        let ok = replay_midpoint(n, w, &ctx.tol)? && (mid - 1.0).abs() <= 1e-12;
        ctx.expect("midpoint_criterion", ok, w.clone());
    }
    Ok(())
}

fn run_norm_suite(ctx: &mut Ctx, n: &MinkowskiNormSpec, rotund: bool) -> Result<()> {
    let f = HomogeneousFunctionSpec::from_norm(n);
    let axioms = validate_axioms(n, ctx.n, &ctx.sub("axioms"), &ctx.tol)?;
    ctx.expect(
        "axioms",
        axioms.overall.status == Status::Proven,
        Witness::new("axioms"),
    );

    let mid = midpoint_criterion(n, ctx.n, &ctx.sub("midpoint"), &ctx.tol)?;
    if rotund {
        ctx.expect(
            "midpoint_criterion",
            mid.status == Status::Proven,
            Witness::new("midpoint"),
        );
    } else {
        flat_midpoint(ctx, n, &mid)?;
    }
    let rot = rotundity_equivalence_check(n, ctx.n, &ctx.sub("rotundity"), &ctx.tol)?;
    ctx.expect(
        "rotundity_equivalence",
        rot.verdict.status == Status::Supported && rot.rotund == Some(rotund),
        rot.verdict
            .witness
            .clone()
            .unwrap_or_else(|| Witness::new("rotundity")),
    );

    let s = ctx.sub("taxonomy");
    ctx.expect_status("convex", &test_convex(&f, ctx.n, &s, &ctx.tol)?, true);
    let sc = test_strictly_convex(&f, ctx.n, &s, &ctx.tol)?;
    expect_falsified_with_replay(ctx, "strictly_convex", &f, &sc)?;
    ctx.expect_status(
        "quasi_convex",
        &test_quasi_convex(&f, ctx.n, &s, &ctx.tol)?,
        true,
    );
    let sq = test_strictly_quasi_convex(&f, ctx.n, &s, &ctx.tol)?;
    if rotund {
        ctx.expect_status("strictly_quasi_convex", &sq, true);
    } else {
        expect_falsified_with_replay(ctx, "strictly_quasi_convex", &f, &sq)?;
    }
    ctx.expect_status(
        "sub_convex",
        &test_sub_convex(&f, ctx.n, &s, &ctx.tol)?,
        true,
    );
    let ss = test_strictly_sub_convex(&f, ctx.n, &s, &ctx.tol)?;
    if rotund {
        ctx.expect_status("strictly_sub_convex", &ss, true);
    } else {
        expect_falsified_with_replay(ctx, "strictly_sub_convex", &f, &ss)?;
    }
    ctx.expect_status("zero_set", &zero_set_probe(&f, ctx.n, &s, &ctx.tol)?, true);
    harness_check(ctx, &f, rotund)
}

fn harness_check(ctx: &mut Ctx, f: &HomogeneousFunctionSpec, expected: bool) -> Result<()> {
    let rec = main_equivalence_harness(f, &HARNESS_ALPHAS, ctx.n, &ctx.sub("harness"), &ctx.tol)?;
    let ok = rec.agree && rec.cond1.holds() == Some(expected);
    let detail = Witness::new("main_harness")
        .scalar("cond1", bool_value(rec.cond1.holds()))
        .scalar("cond2", bool_value(rec.cond2.holds()))
        .scalar("cond3", bool_value(rec.cond3.holds()));
    ctx.expect("main_harness", ok, detail);
    Ok(())
}

fn interior_by_probes(s: &SetOracle, x: &Vector, h: f64) -> bool {
    s.contains(x)
        && (0..x.dim()).all(|i| s.contains(&x.with_coord(i, h)) && s.contains(&x.with_coord(i, -h)))
}

fn run_disk_union_ray(ctx: &mut Ctx) -> Result<()> {
    let s = disk_union_ray_set();
    let g = GaugeEvaluator::new(s.clone(), ctx.tol)?;
    let x = v(&[2.0, 0.0]);
    let p = g.gauge_value(&x)?;
    ctx.value("gauge(2,0)", p.to_f64());
    ctx.expect(
        "gauge(2,0)",
        p == ExtendedReal::ZERO,
        Witness::new("gauge")
            .point(x.clone())
            .scalar("p", p.to_f64()),
    );
    let probe = g.continuity_probe(&x, 12, &ctx.sub("usc"))?;
    ctx.value("limsup", probe.limsup);
    let w = Witness::new("continuity")
        .point(x.clone())
        .scalar("limsup", probe.limsup)
        .scalar("value", probe.value);
    ctx.expect(
        "usc_at(2,0)",
        !probe.usc_ok && probe.limsup >= 2.0 - 1e-6,
        w.clone(),
    );
    ctx.expect("lsc_at(2,0)", probe.lsc_ok, w);
    ctx.expect(
        "strict_sublevel_vs_interior",
        p.to_f64() < 1.0 && !interior_by_probes(&s, &x, 1e-6),
        Witness::new("interior").point(x),
    );
    let y = v(&[0.5, 0.5]);
    let py = g.gauge_value(&y)?.to_f64();
    ctx.expect(
        "gauge(0.5,0.5)",
        (py - 0.5f64.sqrt()).abs() <= 1e-9,
        Witness::new("gauge").point(y).scalar("p", py),
    );
    Ok(())
}

fn run_rational_rays(ctx: &mut Ctx) -> Result<()> {
    let s = rational_rays_surrogate_set();
    let g = GaugeEvaluator::new(s.clone(), ctx.tol)?;
    let off = PI / 1000.0;
    let a = v(&[1.5, 0.0]);
    let pa = g.gauge_value(&a)?.to_f64();
    ctx.expect(
        "interior_strictly_inside_open_sublevel",
        (pa - 0.75).abs() <= 1e-9 && !interior_by_probes(&s, &a, 1e-6),
        Witness::new("gauge").point(a).scalar("p", pa),
    );
    let b = v(&[2.0, 0.0]);
    let pb = g.gauge_value(&b)?.to_f64();
    ctx.expect(
        "open_sublevel_strictly_inside_set",
        s.contains(&b) && (pb - 1.0).abs() <= 1e-9,
        Witness::new("gauge").point(b).scalar("p", pb),
    );
    let c = v(&[off.cos(), off.sin()]);
    let pc = g.gauge_value(&c)?.to_f64();
    ctx.expect(
        "set_strictly_inside_closed_sublevel",
        !s.contains(&c) && (pc - 1.0).abs() <= 1e-9,
        Witness::new("gauge").point(c).scalar("p", pc),
    );
    let d = v(&[1.5 * off.cos(), 1.5 * off.sin()]);
    let pd = g.gauge_value(&d)?.to_f64();
    ctx.expect(
        "closed_sublevel_vs_closure",
        !s.contains(&d) && (pd - 1.5).abs() <= 1e-9,
        Witness::new("gauge").point(d).scalar("p", pd),
    );
    Ok(())
}

fn run_sqrt2_max(ctx: &mut Ctx) -> Result<()> {
    let f = sqrt2_max_function();
    let s = ctx.sub("taxonomy");
    ctx.expect_status("convex", &test_convex(&f, ctx.n, &s, &ctx.tol)?, true);
    ctx.expect_status(
        "sub_convex",
        &test_sub_convex(&f, ctx.n, &s, &ctx.tol)?,
        true,
    );
    let ss = test_strictly_sub_convex(&f, ctx.n, &s, &ctx.tol)?;
    expect_falsified_with_replay(ctx, "strictly_sub_convex", &f, &ss)?;
    if let Some(w) = &ss.witness {
        let m = &w.points[2];
        let off_ray = (m[1] - m[0].abs()).abs();
        ctx.value("midpoint_distance_to_cone_boundary", off_ray);
        ctx.expect(
            "strictly_sub_convex",
            w.get("level") == Some(0.0) && off_ray <= 1e-9,
            w.clone(),
        );
    }
    let z = zero_set_probe(&f, ctx.n, &s, &ctx.tol)?;
    expect_falsified_with_replay(ctx, "zero_set", &f, &z)?;
    harness_check(ctx, &f, false)
}

fn run_sqrt2_min(ctx: &mut Ctx) -> Result<()> {
    let f = sqrt2_min_function();
    let s = ctx.sub("taxonomy");
    ctx.expect_status(
        "strictly_sub_convex",
        &test_strictly_sub_convex(&f, ctx.n, &s, &ctx.tol)?,
        true,
    );
    let neg = f.sublevel(0.0, true);
    let v = probe_strictly_convex_set(&neg, ctx.n, &s, &ctx.tol)?;
    ctx.expect_status("strict_sublevel_0_not_strictly_convex", &v, false);
    Ok(())
}

fn run_cone_ratio(ctx: &mut Ctx) -> Result<()> {
    let f = cone_ratio_function();
    let s = ctx.sub("taxonomy");
    ctx.expect_status("convex", &test_convex(&f, ctx.n, &s, &ctx.tol)?, true);
    ctx.expect_status(
        "strictly_sub_convex",
        &test_strictly_sub_convex(&f, ctx.n, &s, &ctx.tol)?,
        true,
    );
    let one = f.sublevel(1.0, false);
    let disk = |x: &Vector| (x[0] - 1.0).powi(2) + x[1] * x[1] <= 1.0;
    let sub = ctx.sub("sublevel");
    let mut mismatch = None;
    for k in 0..ctx.n.min(10_000) as u64 {
        let x = crate::base::in_ball(&mut sub.rng_at(k), 2, 2.5);
        let near_circle = (((x[0] - 1.0).powi(2) + x[1] * x[1]).sqrt() - 1.0).abs() < 1e-12;
        if !near_circle && one.contains(&x) != disk(&x) {
            mismatch = Some(x);
            break;
        }
    }
    ctx.expect(
        "sublevel_1_is_disk",
        mismatch.is_none(),
        Witness::new("sublevel").point(mismatch.unwrap_or_else(|| Vector::zeros(2))),
    );
    let mut worst: f64 = 0.0;
    for k in 1..=8 {
        let n = 10f64.powi(k);
        let u = v(&[1.0 / n, 1.0 / n.sqrt()]);
        worst = worst.max((f.eval(&u)? - 0.5 - 0.5 / n).abs());
    }
    let far = f.eval(&v(&[1e-8, 1e-4]))?;
    ctx.value("f(1e-8, 1e-4)", far);
    ctx.expect(
        "apex_discontinuity",
        worst <= 1e-12 && (far - 0.5).abs() < 1e-6 && f.eval(&Vector::zeros(2))? == 0.0,
        Witness::new("apex").scalar("worst", worst),
    );
    Ok(())
}

fn run_square_in_disk(ctx: &mut Ctx) -> Result<()> {
    let f = square_in_disk_function();
    let s2 = f.sublevel(2.0, false);
    let square = SetOracle::cube(2, 1.0, true);
    let sub = ctx.sub("sublevel");
    let mismatch = (0..ctx.n.min(10_000) as u64)
        .map(|k| crate::base::in_ball(&mut sub.rng_at(k), 2, SQRT_2))
        .find(|x| s2.contains(x) != square.contains(x));
    ctx.expect(
        "sublevel_2_is_square",
        mismatch.is_none(),
        Witness::new("sublevel").point(mismatch.unwrap_or_else(|| Vector::zeros(2))),
    );
    let at2 = strictly_sub_convex_at_levels(&f, &[2.0], ctx.n, &ctx.sub("level2"), &ctx.tol)?;
    expect_falsified_with_replay(ctx, "strictly_sub_convex_at_2", &f, &at2)?;
    let cont = continuity_verdict(&f, ctx.n, &ctx.sub("continuity"), &ctx.tol)?;
    expect_falsified_with_replay(ctx, "continuity", &f, &cont)?;
    let sq = test_strictly_quasi_convex(&f, ctx.n, &ctx.sub("taxonomy"), &ctx.tol)?;
    expect_falsified_with_replay(ctx, "strictly_quasi_convex", &f, &sq)?;
    let (a, b) = (v(&[0.99, 0.99]), v(&[1.1, 0.0]));
    let explicit = f.eval(&a.midpoint(&b))? > f.eval(&a)?.max(f.eval(&b)?);
    ctx.expect(
        "strictly_quasi_convex",
        explicit,
        Witness::new("chord").point(a).point(b),
    );
    Ok(())
}

fn run_open_cone(ctx: &mut Ctx) -> Result<()> {
    let f = open_cone_euclidean_function();
    let cone = open_cone();
    let c = probe_strictly_convex_set(&cone, ctx.n, &ctx.sub("cone"), &ctx.tol)?;
    ctx.expect_status("cone_strictly_convex", &c, false);
    let rec = cone_equivalence_harness(&f, &HARNESS_ALPHAS, ctx.n, &ctx.sub("harness"), &ctx.tol)?;
    let ok = rec.cond2.holds() == Some(true)
        && rec.cond3.holds() == Some(false)
        && !rec.agreement_asserted;
    let detail = Witness::new("cone_harness")
        .scalar("cond1", bool_value(rec.cond1.holds()))
        .scalar("cond2", bool_value(rec.cond2.holds()))
        .scalar("cond3", bool_value(rec.cond3.holds()));
    ctx.expect("cone_harness", ok, detail);
    Ok(())
}

fn run_product_barrier(ctx: &mut Ctx) -> Result<()> {
    let f = product_barrier_function();
    let phi = saturating_map();
    let inner = test_strictly_sub_convex(&f, ctx.n, &ctx.sub("inner"), &ctx.tol)?;
    ctx.expect_status("inner_strictly_sub_convex", &inner, true);
    let g = compose(&f, &phi);
    let sub = ctx.sub("sublevel");
    let bad = (0..ctx.n.min(10_000) as u64)
        .map(|k| crate::base::in_ball(&mut sub.rng_at(k), 2, SQRT_2))
        .filter(|x| f.in_domain(x))
        .find(|x| g.eval(x).map(|v| v >= 1.0).unwrap_or(true));
    ctx.expect(
        "sublevel_1_is_domain",
        bad.is_none(),
        Witness::new("sublevel").point(bad.unwrap_or_else(|| Vector::zeros(2))),
    );
    let comp = composition_check(&f, &phi, true, ctx.n, &ctx.sub("composition"), &ctx.tol)?;
    expect_falsified_with_replay(ctx, "composition", &g, &comp)?;
    let at1 = strictly_sub_convex_at_levels(&g, &[1.0], ctx.n, &ctx.sub("level1"), &ctx.tol)?;
    expect_falsified_with_replay(ctx, "strictly_sub_convex_at_1", &g, &at1)?;
    if let Some(w) = &at1.witness {
        let on_edge = |p: &Vector| (p.norm_inf() - 1.0).abs() <= 1e-9;
        let (x, y) = (&w.points[0], &w.points[1]);
        let same_edge =
            (0..2).any(|i| (x[i] - y[i]).abs() <= 1e-9 && (x[i].abs() - 1.0).abs() <= 1e-9);
        ctx.value(
            "chord_distance_to_boundary",
            (x.norm_inf() - 1.0).abs().max((y.norm_inf() - 1.0).abs()),
        );
        ctx.expect(
            "strictly_sub_convex_at_1",
            on_edge(x) && on_edge(y) && same_edge,
            w.clone(),
        );
    }
    let h = compose(&sqrt2_min_function(), &negative_indicator_map());
    let ind = composition_check(
        &sqrt2_min_function(),
        &negative_indicator_map(),
        true,
        ctx.n,
        &ctx.sub("indicator"),
        &ctx.tol,
    )?;
    expect_falsified_with_replay(ctx, "indicator_composition", &h, &ind)?;
    if let Some(w) = &ind.witness {
        let m = &w.points[2];
        ctx.expect(
            "indicator_composition",
            w.get("level") == Some(-1.0) && (m[1] - m[0].abs()).abs() <= 1e-9,
            w.clone(),
        );
    }
    Ok(())
}

fn run_truncated_phi(ctx: &mut Ctx, dims: &[usize]) -> Result<()> {
    for &d in dims {
        let n = MinkowskiNormSpec::truncated_phi(d)?;
        let axioms = validate_axioms(&n, ctx.n, &ctx.sub("axioms"), &ctx.tol)?;
        ctx.expect(
            "axioms",
            axioms.overall.status == Status::Proven,
            Witness::new("axioms").scalar("d", d as f64),
        );
        let a = asymmetry_constant(&n, ctx.n.min(4096), &ctx.sub("asymmetry"), &ctx.tol)?;
        ctx.value(&format!("asymmetry(d={d})"), a.estimate);
        let target = 2.0 * d as f64 + 1.0;
        let argmax_ok = a.argmax == -&Vector::basis(d, d - 1);
        ctx.expect(
            "asymmetry",
            (a.estimate - target).abs() <= 1e-6 && argmax_ok,
            Witness::new("asymmetry")
                .point(a.argmax.clone())
                .scalar("estimate", a.estimate)
                .scalar("d", d as f64),
        );
        let mid = midpoint_criterion(&n, ctx.n.min(4096), &ctx.sub("midpoint"), &ctx.tol)?;
        ctx.expect_status("midpoint_criterion", &mid, false);
        if let Some(w) = &mid.witness {
            ctx.expect(
                "midpoint_criterion",
                replay_midpoint(&n, w, &ctx.tol)?,
                w.clone(),
            );
        }
    }
    Ok(())
}

fn run_step(ctx: &mut Ctx) -> Result<()> {
    let f = step_function();
    let s = ctx.sub("taxonomy");
    ctx.expect_status(
        "strictly_sub_convex",
        &test_strictly_sub_convex(&f, ctx.n, &s, &ctx.tol)?,
        true,
    );
    let sc = test_strictly_convex(&f, ctx.n, &s, &ctx.tol)?;
    expect_falsified_with_replay(ctx, "strictly_convex", &f, &sc)?;
    ctx.expect_status(
        "sub_convex",
        &test_sub_convex(&f, ctx.n, &s, &ctx.tol)?,
        true,
    );
    Ok(())
}

fn run_funk(ctx: &mut Ctx) -> Result<()> {
    let n = funk_disk_norm();
    let axioms = validate_axioms(&n, ctx.n, &ctx.sub("axioms"), &ctx.tol)?;
    ctx.expect(
        "axioms",
        axioms.overall.status == Status::Proven,
        Witness::new("axioms"),
    );
    let (x, y) = (v(&[2.0 / 3.0, 0.0]), v(&[-2.0, 0.0]));
    let (nx, ny, nm) = (
        n.evaluate(&x)?,
        n.evaluate(&y)?,
        n.evaluate(&x.midpoint(&y))?,
    );
    ctx.expect(
        "closed_form",
        (nx - 1.0).abs() <= 1e-12 && (ny - 1.0).abs() <= 1e-12 && (nm - 1.0 / 3.0).abs() <= 1e-12,
        Witness::new("closed_form")
            .scalar("N(x)", nx)
            .scalar("N(y)", ny)
            .scalar("N(mid)", nm),
    );
    let a = asymmetry_constant(&n, ctx.n.min(4096), &ctx.sub("asymmetry"), &ctx.tol)?;
    ctx.value("asymmetry", a.estimate);
    ctx.expect(
        "asymmetry",
        (a.estimate - 3.0).abs() <= 1e-9,
        Witness::new("asymmetry").scalar("estimate", a.estimate),
    );
    let mid = midpoint_criterion(&n, ctx.n, &ctx.sub("midpoint"), &ctx.tol)?;
    ctx.expect(
        "midpoint_criterion",
        mid.status == Status::Proven,
        Witness::new("midpoint"),
    );
    let rot = rotundity_equivalence_check(&n, ctx.n, &ctx.sub("rotundity"), &ctx.tol)?;
    ctx.expect(
        "rotundity_equivalence",
        rot.verdict.status == Status::Supported && rot.rotund == Some(true),
        Witness::new("rotundity"),
    );
    let f = HomogeneousFunctionSpec::from_norm(&n);
    ctx.expect_status(
        "strictly_sub_convex",
        &test_strictly_sub_convex(&f, ctx.n, &ctx.sub("taxonomy"), &ctx.tol)?,
        true,
    );
    harness_check(ctx, &f, true)
}

fn run_hexagon(ctx: &mut Ctx) -> Result<()> {
    let n = hexagon_norm();
    let axioms = validate_axioms(&n, ctx.n, &ctx.sub("axioms"), &ctx.tol)?;
    ctx.expect(
        "axioms",
        axioms.overall.holds() == Some(true),
        Witness::new("axioms"),
    );
    let a = asymmetry_constant(&n, ctx.n.min(4096), &ctx.sub("asymmetry"), &ctx.tol)?;
    ctx.value("asymmetry", a.estimate);
    ctx.expect(
        "asymmetry",
        (a.estimate - 1.0).abs() <= 1e-9,
        Witness::new("asymmetry").scalar("estimate", a.estimate),
    );
    let mid = midpoint_criterion(&n, ctx.n, &ctx.sub("midpoint"), &ctx.tol)?;
    flat_midpoint(ctx, &n, &mid)?;
    let rot = rotundity_equivalence_check(&n, ctx.n, &ctx.sub("rotundity"), &ctx.tol)?;
    ctx.expect(
        "rotundity_equivalence",
        rot.verdict.status == Status::Supported && rot.rotund == Some(false),
        Witness::new("rotundity"),
    );
    let f = HomogeneousFunctionSpec::from_norm(&n);
    let ss = test_strictly_sub_convex(&f, ctx.n, &ctx.sub("taxonomy"), &ctx.tol)?;
    expect_falsified_with_replay(ctx, "strictly_sub_convex", &f, &ss)?;
    harness_check(ctx, &f, false)
}

fn run_square_gauge(ctx: &mut Ctx) -> Result<()> {
    let s = notched_square_set();
    let (a, b, m) = (v(&[1.0, 1.0]), v(&[1.0, -1.0]), v(&[1.0, 0.0]));
    ctx.expect(
        "notched_square_not_convex",
        s.contains(&a) && s.contains(&b) && !s.contains(&m),
        Witness::new("convexity").point(a).point(b),
    );
    let ps = GaugeEvaluator::new(s, ctx.tol)?;
    let t = square_gauge_norm(&ctx.tol)?;
    let sub = ctx.sub("gauges");
    let mut worst: f64 = 0.0;
    let mut at = Vector::zeros(2);
    for k in 0..ctx.n.min(2000) as u64 {
        let x = crate::base::in_ball(&mut sub.rng_at(k), 2, 4.0);
        let (gs, gt, linf) = (ps.gauge_value(&x)?.to_f64(), t.evaluate(&x)?, x.norm_inf());
        let err = (gs - linf).abs().max((gt - linf).abs()) / linf.max(1.0);
        if err > worst {
            worst = err;
            at = x;
        }
    }
    ctx.value("max_relative_gauge_error", worst);
    ctx.expect(
        "gauges_agree",
        worst <= 1e-9,
        Witness::new("gauge").point(at).scalar("error", worst),
    );
    let f = HomogeneousFunctionSpec::from_norm(&t);
    ctx.expect_status(
        "convex",
        &test_convex(&f, ctx.n, &ctx.sub("taxonomy"), &ctx.tol)?,
        true,
    );
    let mid = midpoint_criterion(&t, ctx.n, &ctx.sub("midpoint"), &ctx.tol)?;
    ctx.expect_status("midpoint_criterion", &mid, false);
    if let Some(w) = &mid.witness {
        ctx.expect(
            "midpoint_criterion",
            replay_midpoint(&t, w, &ctx.tol)?,
            w.clone(),
        );
    }
    Ok(())
}

/// Runs a fixture with explicit options and returns its verdict and the
/// values it measured.
pub fn evaluate_fixture(
    name: &str,
    options: &FixtureOptions,
    stream: &SampleStream,
    tol: &ToleranceProfile,
) -> Result<FixtureOutcome> {
    tol.validate()?;
    let entry = catalogue()
        .into_iter()
        .find(|e| e.name == name)
        .ok_or_else(|| Error::Input(format!("unknown fixture `{name}`")))?;
    if options.samples == 0 {
        return Err(Error::Input("samples must be at least 1".into()));
    }
    if options.d.is_some() && name != "truncated_phi_norm" {
        return Err(Error::Input(format!(
            "fixture `{name}` takes no dimension parameter"
        )));
    }
    let mut ctx = Ctx {
        fixture: name.to_string(),
        stream: stream.substream(name),
        tol: *tol,
        n: options.samples,
        effort: 0,
        failure: None,
        values: BTreeMap::new(),
        executed: Vec::new(),
    };
    match name {
        "disk_union_ray" => run_disk_union_ray(&mut ctx)?,
        "rational_rays_surrogate" => run_rational_rays(&mut ctx)?,
        "sqrt2_max_cone_function" => run_sqrt2_max(&mut ctx)?,
        "sqrt2_min_cone_function" => run_sqrt2_min(&mut ctx)?,
        "cone_ratio_function" => run_cone_ratio(&mut ctx)?,
        "square_in_disk_discontinuous" => run_square_in_disk(&mut ctx)?,
        "open_cone_euclidean" => run_open_cone(&mut ctx)?,
        "product_barrier_composition" => run_product_barrier(&mut ctx)?,
        "truncated_phi_norm" => {
            let dims: Vec<usize> = match options.d {
                Some(0) => return Err(Error::Input("d must be positive".into())),
                Some(d) => vec![d],
                None => PHI_DIMENSIONS.to_vec(),
            };
            run_truncated_phi(&mut ctx, &dims)?
        }
        "step_function" => run_step(&mut ctx)?,
        "funk_disk_norm" => run_funk(&mut ctx)?,
        "hexagon_polyhedral_norm" => run_hexagon(&mut ctx)?,
        "square_gauge_identity" => run_square_gauge(&mut ctx)?,
        other => {
            let p = LP_EXPONENTS
                .iter()
                .copied()
                .find(|p| lp_name(*p) == other)
                .expect("catalogue names are handled");
            let n = MinkowskiNormSpec::lp(2, p)?;
            run_norm_suite(&mut ctx, &n, p > 1.0 && p.is_finite())?
        }
    }
    debug_assert_eq!(
        ctx.executed,
        entry
            .assertions
            .iter()
            .map(|(a, _)| a.to_string())
            .collect::<Vec<_>>(),
        "assertions of `{name}` out of sync with the catalogue"
    );
    let verdict = match ctx.failure {
        Some(w) => Verdict::falsified(w, ctx.effort),
        None => Verdict::supported(ctx.effort),
    };
    Ok(FixtureOutcome {
        name: name.to_string(),
        verdict,
        values: ctx.values,
        assertions: ctx.executed,
    })
}

/// Supported iff every expected assertion of the fixture matched.
pub fn run_fixture(name: &str, stream: &SampleStream, tol: &ToleranceProfile) -> Result<Verdict> {
    Ok(evaluate_fixture(name, &FixtureOptions::default(), stream, tol)?.verdict)
}
