//! Power transforms, continuity and zero-set probes, the equivalence
//! harnesses and composition with monotone scalar maps.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::sample::Sampler;
use super::{
    probe_strictly_convex_set, test_strictly_convex, test_strictly_quasi_convex,
    test_strictly_sub_convex, test_sub_convex, Domain, HomogeneousFunctionSpec,
};
use crate::base::{
    combine_verdicts, signed_basis, unit_direction, SampleStream, Status, Tally, ToleranceProfile,
    Vector, Verdict, Witness,
};
use crate::error::{Error, Result};

const POWER_CHECKS: u64 = 256;
const CONTINUITY_POINTS: usize = 2000;
const ZERO_SET_DIRECTIONS: usize = 2000;

/// `x -> f(x)^alpha`, with degree `alpha * deg f`.
pub fn power_transform(f: &HomogeneousFunctionSpec, alpha: f64) -> Result<HomogeneousFunctionSpec> {
    if !(alpha > 0.0 && alpha.is_finite()) {
        return Err(Error::Input(format!(
            "power must be a positive real, got {alpha}"
        )));
    }
    let tol = ToleranceProfile::default();
    let sampler = Sampler::new(f, &tol);
    let stream = SampleStream::new(0).substream("power_transform");
    let mut checks: Vec<Vector> = signed_basis(f.dim())
        .into_iter()
        .filter(|x| f.in_domain(x))
        .collect();
    checks.extend((0..POWER_CHECKS).filter_map(|k| sampler.point(&mut stream.rng_at(k))));
    for x in &checks {
        if let Ok(v) = f.eval(x) {
            if v < 0.0 {
                return Err(Error::Domain {
                    term: f.name().to_string(),
                    message: format!("negative value {v} at {x}; cannot take the power {alpha}"),
                });
            }
        }
    }
    let g = f.eval_fn();
    let name = f.name().to_string();
    let mut out =
        HomogeneousFunctionSpec::fallible(format!("({})^{alpha}", f.name()), f.dim(), move |x| {
            let v = g(x)?;
            if v < 0.0 {
                return Err(Error::Domain {
                    term: name.clone(),
                    message: format!("negative value {v} at {x}"),
                });
            }
            Ok(v.powf(alpha))
        });
    out.domain = f.domain.clone();
    out.degree = f.degree.map(|d| alpha * d);
    out.continuous = f.continuous;
    Ok(out)
}

/// Proven for specs of known continuity; otherwise compares the local
/// oscillation at two radii around sampled points, the origin and the
/// signed basis.
pub fn continuity_verdict(
    f: &HomogeneousFunctionSpec,
    n_samples: usize,
    stream: &SampleStream,
    tol: &ToleranceProfile,
) -> Result<Verdict> {
    if f.continuous == Some(true) {
        return Ok(Verdict::proven(1).with_note("continuous in closed form"));
    }
    let dim = f.dim();
    let sampler = Sampler::new(f, tol);
    let sub = stream.substream("continuity");
    let mut centres = vec![Vector::zeros(dim)];
    centres.extend(signed_basis(dim));
    centres.extend(
        (0..n_samples.min(CONTINUITY_POINTS) as u64)
            .filter_map(|k| sampler.point(&mut sub.rng_at(k))),
    );

    let mut tally = Tally::new();
    for (k, x) in centres.iter().enumerate() {
        if !f.in_domain(x) {
            continue;
        }
        let Ok(fx) = f.eval(x) else {
            tally.skip();
            continue;
        };
        let mut rng = sub.substream("directions").rng_at(k as u64);
        let mut dirs = signed_basis(dim);
        dirs.extend((0..4).map(|_| unit_direction(&mut rng, dim)));
        let s = x.norm().max(1.0);
        let oscillation = |delta: f64| -> (f64, Option<Vector>) {
            let mut worst = (0.0, None);
            for u in &dirs {
                let y = x + &u.scale(delta);
                if !f.in_domain(&y) {
                    continue;
                }
                if let Ok(fy) = f.eval(&y) {
                    let d = (fy - fx).abs();
                    if d > worst.0 {
                        worst = (d, Some(y));
                    }
                }
            }
            worst
        };
        let (osc1, _) = oscillation(1e-4 * s);
        let (osc2, near) = oscillation(1e-7 * s);
        let bound = (0.5 * osc1).max(tol.eps_eq * (1.0 + fx.abs()));
        let slack = bound - osc2;
        if slack < 0.0 {
            let mut w = Witness::new("continuity")
                .point(x.clone())
                .scalar("f(x)", fx)
                .scalar("oscillation(1e-4)", osc1)
                .scalar("oscillation(1e-7)", osc2);
            if let Some(y) = near {
                w = w.point(y);
            }
            tally.fail(w, slack);
            break;
        }
        tally.observe(slack);
    }
    Ok(tally.finish(Status::Supported))
}

/// `f^{-1}(0)` contained in `{0}`: `f(0) = 0` when the origin is in the
/// domain of a homogeneous spec, and `|f| >= eps_strict` on the signed
/// basis and sampled unit directions.
pub fn zero_set_probe(
    f: &HomogeneousFunctionSpec,
    n_samples: usize,
    stream: &SampleStream,
    tol: &ToleranceProfile,
) -> Result<Verdict> {
    let dim = f.dim();
    let mut tally = Tally::new();
    let origin = Vector::zeros(dim);
    if f.degree.is_some() && f.in_domain(&origin) {
        let v = f.eval(&origin)?;
        if v.abs() > tol.eps_eq {
            tally.fail(
                Witness::new("zero_set").point(origin).scalar("f(0)", v),
                -v.abs(),
            );
            return Ok(tally.finish(Status::Supported));
        }
        tally.observe(tol.eps_eq - v.abs());
    }
    let sub = stream.substream("zero_set");
    let sampler = Sampler::new(f, tol);
    let mut candidates = signed_basis(dim);
    for k in 0..n_samples.min(ZERO_SET_DIRECTIONS) as u64 {
        let mut rng = sub.rng_at(k);
        candidates.push(unit_direction(&mut rng, dim));
        if f.degree.is_none() {
            if let Some(x) = sampler.point(&mut rng) {
                candidates.push(x);
            }
        }
    }
    for u in candidates {
        if !f.in_domain(&u) || u.is_zero() {
            continue;
        }
        let Ok(v) = f.eval(&u) else {
            tally.skip();
            continue;
        };
        let slack = v.abs() - tol.eps_strict;
        if slack < 0.0 {
            tally.fail(Witness::new("zero_set").point(u).scalar("f(u)", v), slack);
            break;
        }
        tally.observe(slack);
    }
    Ok(tally.finish(Status::Supported))
}

/// The three conditions of the characterisation and whether they agree.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HarnessRecord {
    pub subject: String,
    pub alphas: Vec<f64>,
    /// Continuous, and `f^alpha` strictly convex for every alpha.
    pub cond1: Verdict,
    /// Continuous and strictly quasi-convex.
    pub cond2: Verdict,
    /// Strictly sub-convex with trivial zero set.
    pub cond3: Verdict,
    /// All three conditions decided and equal.
    pub agree: bool,
    /// Whether agreement is expected (false for cones that are not
    /// strictly convex).
    pub agreement_asserted: bool,
}

impl HarnessRecord {
    /// Agreement is required but did not happen.
    pub fn violated(&self) -> bool {
        self.agreement_asserted && !self.agree
    }
}

fn conditions(
    f: &HomogeneousFunctionSpec,
    alphas: &[f64],
    n_samples: usize,
    stream: &SampleStream,
    tol: &ToleranceProfile,
) -> Result<(Verdict, Verdict, Verdict)> {
    if alphas.is_empty() {
        return Err(Error::Input("at least one power alpha is required".into()));
    }
    if let Some(a) = alphas.iter().find(|a| !(**a > 1.0 && a.is_finite())) {
        return Err(Error::Input(format!(
            "powers must be finite reals > 1, got {a}"
        )));
    }
    let continuity = continuity_verdict(f, n_samples, stream, tol)?;
    let mut first = vec![continuity.clone()];
    for &a in alphas {
        let g = power_transform(f, a)?;
        first.push(test_strictly_convex(
            &g,
            n_samples,
            &stream.substream(&format!("alpha={a}")),
            tol,
        )?);
    }
    let cond1 = combine_verdicts(&first)?;
    let cond2 = combine_verdicts(&[
        continuity,
        test_strictly_quasi_convex(f, n_samples, stream, tol)?,
    ])?;
    let cond3 = combine_verdicts(&[
        test_strictly_sub_convex(f, n_samples, stream, tol)?,
        zero_set_probe(f, n_samples, stream, tol)?,
    ])?;
    Ok((cond1, cond2, cond3))
}

fn agree(a: &Verdict, b: &Verdict, c: &Verdict) -> bool {
    matches!((a.holds(), b.holds(), c.holds()), (Some(x), Some(y), Some(z)) if x == y && y == z)
}

/// Cross-checks the characterisation for a non-negative degree-1 function
/// on the whole space.
pub fn main_equivalence_harness(
    f: &HomogeneousFunctionSpec,
    alphas: &[f64],
    n_samples: usize,
    stream: &SampleStream,
    tol: &ToleranceProfile,
) -> Result<HarnessRecord> {
    if !f.domain.is_whole() {
        return Err(Error::Input(format!(
            "`{}` is not defined on the whole space",
            f.name()
        )));
    }
    match f.degree {
        Some(d) if (d - 1.0).abs() <= tol.eps_eq => {}
        _ => {
            return Err(Error::Input(format!(
                "`{}` must be declared homogeneous of degree 1",
                f.name()
            )))
        }
    }
    let (cond1, cond2, cond3) = conditions(f, alphas, n_samples, stream, tol)?;
    Ok(HarnessRecord {
        subject: f.name().to_string(),
        alphas: alphas.to_vec(),
        agree: agree(&cond1, &cond2, &cond3),
        cond1,
        cond2,
        cond3,
        agreement_asserted: true,
    })
}

/// As [`main_equivalence_harness`] on a cone domain; agreement is only
/// asserted when the cone itself is strictly convex.
pub fn cone_equivalence_harness(
    f: &HomogeneousFunctionSpec,
    alphas: &[f64],
    n_samples: usize,
    stream: &SampleStream,
    tol: &ToleranceProfile,
) -> Result<HarnessRecord> {
    let asserted = match &f.domain {
        Domain::Whole => true,
        Domain::Region(c) => {
            if !c.flags().cone {
                return Err(Error::Input(format!(
                    "domain `{}` is not flagged as a cone",
                    c.name()
                )));
            }
            probe_strictly_convex_set(c, n_samples, &stream.substream("cone"), tol)?.holds()
                == Some(true)
        }
    };
    let (cond1, cond2, cond3) = conditions(f, alphas, n_samples, stream, tol)?;
    Ok(HarnessRecord {
        subject: f.name().to_string(),
        alphas: alphas.to_vec(),
        agree: agree(&cond1, &cond2, &cond3),
        cond1,
        cond2,
        cond3,
        agreement_asserted: asserted,
    })
}

/// A scalar map `phi` with declared order and semicontinuity properties.
#[derive(Clone)]
pub struct ScalarMap {
    pub name: String,
    pub eval: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
    pub nondecreasing: bool,
    pub lower_semicontinuous: bool,
}

impl fmt::Debug for ScalarMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ScalarMap")
            .field("name", &self.name)
            .field("nondecreasing", &self.nondecreasing)
            .field("lower_semicontinuous", &self.lower_semicontinuous)
            .finish()
    }
}

impl ScalarMap {
    pub fn new<F>(
        name: impl Into<String>,
        nondecreasing: bool,
        lower_semicontinuous: bool,
        phi: F,
    ) -> Self
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        ScalarMap {
            name: name.into(),
            eval: Arc::new(phi),
            nondecreasing,
            lower_semicontinuous,
        }
    }

    pub fn apply(&self, t: f64) -> f64 {
        (self.eval)(t)
    }
}

/// `phi o f` followed by the strict (or plain) sub-convexity test.
pub fn composition_check(
    f: &HomogeneousFunctionSpec,
    phi: &ScalarMap,
    strict: bool,
    n_samples: usize,
    stream: &SampleStream,
    tol: &ToleranceProfile,
) -> Result<Verdict> {
    if !phi.nondecreasing {
        return Err(Error::Input(format!(
            "`{}` is not declared non-decreasing",
            phi.name
        )));
    }
    let sampler = Sampler::new(f, tol);
    let sub = stream.substream("composition/monotone");
    let mut values: Vec<f64> = (0..n_samples.clamp(64, 4096) as u64)
        .filter_map(|k| sampler.point(&mut sub.rng_at(k)))
        .filter_map(|x| f.eval(&x).ok())
        .collect();
    values.retain(|v| v.is_finite());
    values.sort_by(f64::total_cmp);
    for w in values.windows(2) {
        let (a, b) = (phi.apply(w[0]), phi.apply(w[1]));
        if b < a - tol.eps_eq * (1.0 + a.abs()) {
            return Err(Error::Input(format!(
                "`{}` decreases between {} and {} ({a} > {b})",
                phi.name, w[0], w[1]
            )));
        }
    }
    let g = compose(f, phi);
    let v = if strict {
        test_strictly_sub_convex(&g, n_samples, stream, tol)?
    } else {
        test_sub_convex(&g, n_samples, stream, tol)?
    };
    Ok(if phi.lower_semicontinuous {
        v
    } else {
        v.with_note(format!("`{}` is not lower semicontinuous", phi.name))
    })
}

/// `phi o f` as a function spec on the domain of `f` (no degree).
pub fn compose(f: &HomogeneousFunctionSpec, phi: &ScalarMap) -> HomogeneousFunctionSpec {
    let inner = f.eval_fn();
    let outer = phi.eval.clone();
    let mut g = HomogeneousFunctionSpec::fallible(
        format!("{} o {}", phi.name, f.name()),
        f.dim(),
        move |x| Ok(outer(inner(x)?)),
    );
    g.domain = f.domain.clone();
    g
}
