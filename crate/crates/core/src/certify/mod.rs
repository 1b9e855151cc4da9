//! Sampling certifiers for the convexity taxonomy and the equivalence
//! harnesses relating continuity, strict quasi-convexity and strict
//! sub-convexity of non-negative homogeneous functions.

mod chords;
mod harness;
mod rotund;
mod sample;
mod strict_sub;

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::base::{SampleStream, Status, Tally, ToleranceProfile, Vector, Verdict, Witness};
use crate::error::{Error, Result};
use crate::norms::MinkowskiNormSpec;
use crate::sets::SetOracle;

pub use chords::{
    test_convex, test_quasi_convex, test_strictly_convex, test_strictly_quasi_convex,
    test_sub_convex,
};
pub use harness::{
    compose, composition_check, cone_equivalence_harness, continuity_verdict,
    main_equivalence_harness, power_transform, zero_set_probe, HarnessRecord, ScalarMap,
};
pub use rotund::{midpoint_criterion, rotundity_equivalence_check, PropertyTally, RotundityCheck};
pub use strict_sub::{
    probe_strictly_convex_set, strictly_sub_convex_at_levels, test_strictly_sub_convex,
};

pub type EvalFn = Arc<dyn Fn(&Vector) -> Result<f64> + Send + Sync>;

/// Where a function is defined.
#[derive(Clone, Debug)]
pub enum Domain {
    Whole,
    Region(SetOracle),
}

impl Domain {
    pub fn contains(&self, x: &Vector) -> bool {
        match self {
            Domain::Whole => true,
            Domain::Region(s) => s.contains(x),
        }
    }

    pub fn set(&self) -> Option<&SetOracle> {
        match self {
            Domain::Whole => None,
            Domain::Region(s) => Some(s),
        }
    }

    pub fn is_whole(&self) -> bool {
        matches!(self, Domain::Whole)
    }
}

/// An evaluable `f: C -> R` with optional homogeneity degree.
#[derive(Clone)]
pub struct HomogeneousFunctionSpec {
    name: String,
    dim: usize,
    domain: Domain,
    eval: EvalFn,
    degree: Option<f64>,
    continuous: Option<bool>,
}

impl fmt::Debug for HomogeneousFunctionSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("HomogeneousFunctionSpec")
            .field("name", &self.name)
            .field("dim", &self.dim)
            .field("domain", &self.domain)
            .field("degree", &self.degree)
            .field("continuous", &self.continuous)
            .finish()
    }
}

impl HomogeneousFunctionSpec {
    pub fn new<F>(name: impl Into<String>, dim: usize, f: F) -> Self
    where
        F: Fn(&Vector) -> f64 + Send + Sync + 'static,
    {
        Self::fallible(name, dim, move |x| Ok(f(x)))
    }

    pub fn fallible<F>(name: impl Into<String>, dim: usize, f: F) -> Self
    where
        F: Fn(&Vector) -> Result<f64> + Send + Sync + 'static,
    {
        assert!(dim >= 1, "function dimension must be positive");
        HomogeneousFunctionSpec {
            name: name.into(),
            dim,
            domain: Domain::Whole,
            eval: Arc::new(f),
            degree: None,
            continuous: None,
        }
    }

    /// Degree-1 function of a norm; built-in families are known continuous.
    pub fn from_norm(n: &MinkowskiNormSpec) -> Self {
        let m = n.clone();
        let mut f =
            Self::fallible(n.name().to_string(), n.dim(), move |x| m.evaluate(x)).with_degree(1.0);
        if n.analytic_class().is_some() {
            f.continuous = Some(true);
        }
        f
    }

    pub fn from_expression(source: &str, dim: usize) -> Result<Self> {
        let ast = crate::norms::parse_expression(source, dim)?;
        let name = format!("expr[{}]", source.trim());
        Ok(Self::fallible(name, dim, move |x| ast.eval(x)))
    }

    pub fn with_domain(mut self, domain: SetOracle) -> Result<Self> {
        if domain.dim() != self.dim {
            return Err(Error::Input(format!(
                "domain dimension {} does not match function dimension {}",
                domain.dim(),
                self.dim
            )));
        }
        self.domain = Domain::Region(domain);
        Ok(self)
    }

    pub fn with_degree(mut self, alpha: f64) -> Self {
        self.degree = Some(alpha);
        self
    }

    /// Declares continuity known in closed form.
    pub fn with_continuity(mut self, continuous: bool) -> Self {
        self.continuous = Some(continuous);
        self
    }

    pub fn renamed(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn domain(&self) -> &Domain {
        &self.domain
    }

    pub fn degree(&self) -> Option<f64> {
        self.degree
    }

    pub fn known_continuity(&self) -> Option<bool> {
        self.continuous
    }

    pub fn eval(&self, x: &Vector) -> Result<f64> {
        x.check_dim(self.dim)?;
        (self.eval)(x)
    }

    pub fn in_domain(&self, x: &Vector) -> bool {
        x.dim() == self.dim && self.domain.contains(x)
    }

    /// Oracle of `{f <= r}` (or `{f < r}`) within the domain.
    pub fn sublevel(&self, level: f64, strict: bool) -> SetOracle {
        let f = self.clone();
        let op = if strict { "<" } else { "<=" };
        SetOracle::new(
            format!("{{{} {op} {level}}}", self.name),
            self.dim,
            move |x| {
                f.in_domain(x)
                    && f.eval(x)
                        .map(|v| if strict { v < level } else { v <= level })
                        .unwrap_or(false)
            },
        )
    }

    pub(crate) fn eval_fn(&self) -> EvalFn {
        self.eval.clone()
    }
}

/// Sampled check of `f(t x) = t^alpha f(x)`.
pub fn check_degree(
    f: &HomogeneousFunctionSpec,
    n_samples: usize,
    stream: &SampleStream,
    tol: &ToleranceProfile,
) -> Result<Verdict> {
    let alpha = f
        .degree
        .ok_or_else(|| Error::Input(format!("`{}` declares no homogeneity degree", f.name)))?;
    let sampler = sample::Sampler::new(f, tol);
    let sub = stream.substream("degree");
    let mut tally = Tally::new();
    for k in 0..n_samples as u64 {
        let mut rng = sub.rng_at(k);
        let Some(x) = sampler.point(&mut rng) else {
            tally.skip();
            continue;
        };
        let t = crate::base::log_uniform(&mut rng, 0.1, 10.0);
        let tx = x.scale(t);
        if !f.in_domain(&tx) {
            tally.skip();
            continue;
        }
        let (Ok(a), Ok(b)) = (f.eval(&tx), f.eval(&x)) else {
            tally.skip();
            continue;
        };
        let expect = t.powf(alpha) * b;
        let slack = tol.eps_eq * (1.0 + expect.abs()) - (a - expect).abs();
        if slack < 0.0 {
            tally.fail(
                Witness::new("homogeneity")
                    .point(x)
                    .scalar("t", t)
                    .scalar("f(tx)", a)
                    .scalar("t^a f(x)", expect),
                slack,
            );
            break;
        }
        tally.observe(slack);
    }
    Ok(tally.finish(Status::Supported))
}

/// All taxonomy verdicts for one function.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TaxonomyReport {
    pub convex: Verdict,
    pub strictly_convex: Verdict,
    pub quasi_convex: Verdict,
    pub strictly_quasi_convex: Verdict,
    pub sub_convex: Verdict,
    pub strictly_sub_convex: Verdict,
    pub zero_set_trivial: Verdict,
}

impl TaxonomyReport {
    /// Pairs (stronger, weaker) where the stronger property holds but the
    /// weaker one is falsified.
    pub fn implication_violations(&self) -> Vec<String> {
        let chain = [
            (
                "strictly_convex",
                &self.strictly_convex,
                "convex",
                &self.convex,
            ),
            ("convex", &self.convex, "quasi_convex", &self.quasi_convex),
            (
                "strictly_quasi_convex",
                &self.strictly_quasi_convex,
                "quasi_convex",
                &self.quasi_convex,
            ),
            (
                "strictly_convex",
                &self.strictly_convex,
                "strictly_quasi_convex",
                &self.strictly_quasi_convex,
            ),
            (
                "strictly_sub_convex",
                &self.strictly_sub_convex,
                "sub_convex",
                &self.sub_convex,
            ),
        ];
        chain
            .iter()
            .filter(|(_, strong, _, weak)| strong.holds() == Some(true) && weak.is_falsified())
            .map(|(s, _, w, _)| format!("{s} holds but {w} is falsified"))
            .collect()
    }
}

pub fn taxonomy(
    f: &HomogeneousFunctionSpec,
    n_samples: usize,
    stream: &SampleStream,
    tol: &ToleranceProfile,
) -> Result<TaxonomyReport> {
    let report = TaxonomyReport {
        convex: test_convex(f, n_samples, stream, tol)?,
        strictly_convex: test_strictly_convex(f, n_samples, stream, tol)?,
        quasi_convex: test_quasi_convex(f, n_samples, stream, tol)?,
        strictly_quasi_convex: test_strictly_quasi_convex(f, n_samples, stream, tol)?,
        sub_convex: test_sub_convex(f, n_samples, stream, tol)?,
        strictly_sub_convex: test_strictly_sub_convex(f, n_samples, stream, tol)?,
        zero_set_trivial: zero_set_probe(f, n_samples, stream, tol)?,
    };
    let bad = report.implication_violations();
    if !bad.is_empty() {
        return Err(Error::Contract(format!(
            "inconsistent taxonomy for `{}`: {}",
            f.name,
            bad.join("; ")
        )));
    }
    Ok(report)
}
