//! Minkowski norms: non-negative, positively homogeneous, sub-additive and
//! point-separating functions, not necessarily symmetric.

pub mod expr;
mod polyhedral;

use std::fmt;
use std::sync::Arc;

use nalgebra::DMatrix;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::base::{
    combine_verdicts, log_uniform, signed_basis, unit_direction, SampleStream, Status, Tally,
    ToleranceProfile, Vector, Verdict, Witness,
};
use crate::error::{Error, Result};
use crate::gauge::GaugeEvaluator;
use crate::sets::{absorbs, SetFlags, SetOracle};

pub use expr::{parse_expression, BinOp, Expr, ExpressionAst, Func};

/// Closed-form facts about a built-in family.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnalyticClass {
    pub symmetric: bool,
    /// The unit sphere contains no segment.
    pub rotund: bool,
}

#[derive(Clone, Debug)]
pub enum NormFamily {
    /// `p = f64::INFINITY` is the max norm.
    Lp {
        p: f64,
    },
    WeightedLp {
        p: f64,
        weights: Vec<f64>,
    },
    /// `sqrt(x' A x)` for symmetric positive-definite `A`.
    Ellipsoid {
        matrix: DMatrix<f64>,
    },
    /// `base(x) + <drift, x>`.
    Funk {
        base: Box<MinkowskiNormSpec>,
        drift: Vector,
    },
    /// Gauge of the convex hull of the vertices.
    Polyhedral {
        vertices: Vec<Vector>,
    },
    Expression {
        ast: ExpressionAst,
    },
    Gauge {
        evaluator: GaugeEvaluator,
    },
}

#[derive(Clone, Debug)]
pub struct MinkowskiNormSpec {
    name: String,
    dim: usize,
    family: NormFamily,
    analytic: Option<AnalyticClass>,
    vertex_cache: Option<Arc<Vec<Vec<f64>>>>,
}

impl fmt::Display for MinkowskiNormSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)
    }
}

fn fmt_p(p: f64) -> String {
    if p.is_infinite() {
        "inf".into()
    } else {
        format!("{p}")
    }
}

fn check_p(p: f64) -> Result<()> {
    if p >= 1.0 && !p.is_nan() {
        Ok(())
    } else {
        Err(Error::Input(format!("exponent p must be >= 1, got {p}")))
    }
}

impl MinkowskiNormSpec {
    fn build(
        name: String,
        dim: usize,
        family: NormFamily,
        analytic: Option<AnalyticClass>,
    ) -> Self {
        MinkowskiNormSpec {
            name,
            dim,
            family,
            analytic,
            vertex_cache: None,
        }
    }

    pub fn lp(dim: usize, p: f64) -> Result<Self> {
        check_p(p)?;
        check_dim(dim)?;
        let rotund = dim == 1 || (p > 1.0 && p.is_finite());
        Ok(Self::build(
            format!("lp({})", fmt_p(p)),
            dim,
            NormFamily::Lp { p },
            Some(AnalyticClass {
                symmetric: true,
                rotund,
            }),
        ))
    }

    pub fn weighted_lp(p: f64, weights: Vec<f64>) -> Result<Self> {
        check_p(p)?;
        check_dim(weights.len())?;
        if weights.iter().any(|w| !(w.is_finite() && *w > 0.0)) {
            return Err(Error::Input("weights must be positive and finite".into()));
        }
        let dim = weights.len();
        let rotund = dim == 1 || (p > 1.0 && p.is_finite());
        Ok(Self::build(
            format!("weighted_lp({})", fmt_p(p)),
            dim,
            NormFamily::WeightedLp { p, weights },
            Some(AnalyticClass {
                symmetric: true,
                rotund,
            }),
        ))
    }

    pub fn ellipsoid(matrix: DMatrix<f64>) -> Result<Self> {
        let dim = matrix.nrows();
        check_dim(dim)?;
        if matrix.ncols() != dim {
            return Err(Error::Input("ellipsoid matrix must be square".into()));
        }
        let asym = (&matrix - matrix.transpose()).abs().max();
        if !(asym <= 1e-12 * matrix.abs().max().max(1.0)) || matrix.iter().any(|v| !v.is_finite()) {
            return Err(Error::Input(
                "ellipsoid matrix must be symmetric and finite".into(),
            ));
        }
        if matrix.clone().cholesky().is_none() {
            return Err(Error::Input(
                "ellipsoid matrix must be positive definite".into(),
            ));
        }
        Ok(Self::build(
            "ellipsoid".into(),
            dim,
            NormFamily::Ellipsoid { matrix },
            Some(AnalyticClass {
                symmetric: true,
                rotund: true,
            }),
        ))
    }

    /// Norm whose unit ball is the axis-aligned ellipsoid with these semi-axes.
    pub fn ellipsoid_axes(semi_axes: &[f64]) -> Result<Self> {
        if semi_axes.iter().any(|a| !(a.is_finite() && *a > 0.0)) {
            return Err(Error::Input("semi-axes must be positive".into()));
        }
        let d: Vec<f64> = semi_axes.iter().map(|a| 1.0 / (a * a)).collect();
        Self::ellipsoid(DMatrix::from_diagonal(&nalgebra::DVector::from_vec(d)))
    }

    /// `base + <drift, .>`, rejected unless the drift's dual norm is below 1.
    pub fn funk(base: MinkowskiNormSpec, drift: Vector) -> Result<Self> {
        let dual = base.dual_norm(&drift)?;
        if dual >= 1.0 {
            return Err(Error::Construction(format!(
                "drift {drift} has dual norm {dual} >= 1 with respect to {}; the result would not separate points",
                base.name
            )));
        }
        let mut n = Self::funk_unchecked(base, drift)?;
        if let NormFamily::Funk { base, .. } = &n.family {
            n.analytic = base.analytic.map(|c| AnalyticClass {
                symmetric: false,
                rotund: c.rotund,
            });
        }
        Ok(n)
    }

    /// `base + <drift, .>` without the positivity check; no analytic class.
    pub fn funk_unchecked(base: MinkowskiNormSpec, drift: Vector) -> Result<Self> {
        drift.check_dim(base.dim)?;
        if !matches!(
            base.family,
            NormFamily::Lp { .. } | NormFamily::WeightedLp { .. } | NormFamily::Ellipsoid { .. }
        ) {
            return Err(Error::Input(format!(
                "funk base must be an lp, weighted lp or ellipsoid norm, got {}",
                base.name
            )));
        }
        let name = format!("funk({}, {})", base.name, drift);
        let dim = base.dim;
        Ok(Self::build(
            name,
            dim,
            NormFamily::Funk {
                base: Box::new(base),
                drift,
            },
            None,
        ))
    }

    /// `|x|_1 + sum_{k<d} (k+1)/(k+2) x_k` on R^d.
    pub fn truncated_phi(d: usize) -> Result<Self> {
        check_dim(d)?;
        let drift = Vector::new(
            (0..d)
                .map(|k| (k as f64 + 1.0) / (k as f64 + 2.0))
                .collect(),
        )?;
        let mut n = Self::funk(Self::lp(d, 1.0)?, drift)?;
        n.name = format!("truncated_phi({d})");
        Ok(n)
    }

    pub fn polyhedral(vertices: Vec<Vector>) -> Result<Self> {
        let dim = vertices
            .first()
            .ok_or_else(|| Error::Input("polyhedral norm needs vertices".into()))?
            .dim();
        if let Some(v) = vertices.iter().find(|v| v.dim() != dim) {
            return Err(Error::Input(format!(
                "vertex {v} does not have dimension {dim}"
            )));
        }
        let raw: Vec<Vec<f64>> = vertices.iter().map(|v| v.as_slice().to_vec()).collect();
        for e in signed_basis(dim) {
            match polyhedral::hull_gauge(&raw, e.as_slice()) {
                Some(g) if g.is_finite() => {}
                _ => {
                    return Err(Error::Construction(format!(
                    "origin is not interior to the vertex hull: direction {e} leaves every dilate"
                )))
                }
            }
        }
        let symmetric = vertices.iter().all(|v| {
            vertices
                .iter()
                .any(|w| (w + v).norm() <= 1e-12 * (1.0 + v.norm()))
        });
        let mut n = Self::build(
            format!("polyhedral({} vertices)", vertices.len()),
            dim,
            NormFamily::Polyhedral { vertices },
            Some(AnalyticClass {
                symmetric,
                rotund: dim == 1,
            }),
        );
        n.vertex_cache = Some(Arc::new(raw));
        Ok(n)
    }

    pub fn expression(source: &str, dim: usize) -> Result<Self> {
        let ast = parse_expression(source, dim)?;
        Ok(Self::from_ast(ast))
    }

    pub fn from_ast(ast: ExpressionAst) -> Self {
        Self::build(
            format!("expr[{}]", ast.source.trim()),
            ast.dim,
            NormFamily::Expression { ast },
            None,
        )
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

    pub fn family(&self) -> &NormFamily {
        &self.family
    }

    pub fn analytic_class(&self) -> Option<AnalyticClass> {
        self.analytic
    }

    pub fn evaluate(&self, x: &Vector) -> Result<f64> {
        x.check_dim(self.dim)?;
        let c = x.as_slice();
        Ok(match &self.family {
            NormFamily::Lp { p } => lp_value(c, *p, None),
            NormFamily::WeightedLp { p, weights } => lp_value(c, *p, Some(weights)),
            NormFamily::Ellipsoid { matrix } => {
                let mut q = 0.0;
                for i in 0..self.dim {
                    for j in 0..self.dim {
                        q += c[i] * matrix[(i, j)] * c[j];
                    }
                }
                q.max(0.0).sqrt()
            }
            NormFamily::Funk { base, drift } => base.evaluate(x)? + drift.dot(x),
            NormFamily::Polyhedral { .. } => {
                let raw = self
                    .vertex_cache
                    .as_ref()
                    .expect("vertex cache is built with the spec");
                polyhedral::hull_gauge(raw, c).unwrap_or(f64::INFINITY)
            }
            NormFamily::Expression { ast } => ast.eval(x)?,
            NormFamily::Gauge { evaluator } => evaluator.gauge_value(x)?.to_f64(),
        })
    }

    /// `sup{<d, u> : N(u) <= 1}` for the symmetric families usable as funk bases.
    fn dual_norm(&self, d: &Vector) -> Result<f64> {
        d.check_dim(self.dim)?;
        let c = d.as_slice();
        let conj = |p: f64| {
            if p == 1.0 {
                f64::INFINITY
            } else if p.is_infinite() {
                1.0
            } else {
                p / (p - 1.0)
            }
        };
        match &self.family {
            NormFamily::Lp { p } => Ok(lp_value(c, conj(*p), None)),
            NormFamily::WeightedLp { p, weights } => {
                let scaled: Vec<f64> = if p.is_infinite() {
                    c.iter().zip(weights).map(|(x, w)| x / w).collect()
                } else {
                    c.iter()
                        .zip(weights)
                        .map(|(x, w)| x / w.powf(1.0 / p))
                        .collect()
                };
                Ok(lp_value(&scaled, conj(*p), None))
            }
            NormFamily::Ellipsoid { matrix } => {
                let inv = matrix
                    .clone()
                    .try_inverse()
                    .ok_or_else(|| Error::Input("singular ellipsoid matrix".into()))?;
                let v = nalgebra::DVector::from_column_slice(c);
                Ok((v.transpose() * inv * &v)[(0, 0)].max(0.0).sqrt())
            }
            _ => Err(Error::Input(format!(
                "no dual norm available for {}",
                self.name
            ))),
        }
    }

    /// Oracle of the closed unit ball `{N <= 1}`.
    pub fn unit_ball(&self) -> SetOracle {
        let n = self.clone();
        let m = self.clone();
        let dim = self.dim;
        SetOracle::new(format!("ball[{}]", self.name), dim, move |x| {
            n.evaluate(x).map(|v| v <= 1.0).unwrap_or(false)
        })
        .with_flags(SetFlags {
            star_shaped: true,
            cone: false,
            convex: true,
            contains_origin: true,
            bounded: false,
        })
        .with_member_sampler(move |rng| {
            let u = unit_direction(rng, dim);
            let r = m.evaluate(&u).unwrap_or(f64::INFINITY);
            let t: f64 = rng.random();
            if r > 0.0 && r.is_finite() {
                u.scale(t / r)
            } else {
                u.scale(t)
            }
        })
    }
}

fn check_dim(dim: usize) -> Result<()> {
    if dim == 0 {
        Err(Error::Input("dimension must be positive".into()))
    } else {
        Ok(())
    }
}

fn lp_value(c: &[f64], p: f64, weights: Option<&Vec<f64>>) -> f64 {
    let w = |i: usize| weights.map_or(1.0, |w| w[i]);
    if p.is_infinite() {
        return c
            .iter()
            .enumerate()
            .map(|(i, x)| w(i) * x.abs())
            .fold(0.0, f64::max);
    }
    if p == 1.0 {
        return c.iter().enumerate().map(|(i, x)| w(i) * x.abs()).sum();
    }
    let m = c.iter().fold(0.0f64, |a, x| a.max(x.abs()));
    if m == 0.0 {
        return 0.0;
    }
    if p == 2.0 {
        let s: f64 = c
            .iter()
            .enumerate()
            .map(|(i, x)| w(i) * (x / m) * (x / m))
            .sum();
        return m * s.sqrt();
    }
    let s: f64 = c
        .iter()
        .enumerate()
        .map(|(i, x)| w(i) * (x.abs() / m).powf(p))
        .sum();
    m * s.powf(1.0 / p)
}

/// Verdicts for the four Minkowski-norm axioms.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AxiomReport {
    pub nonneg: Verdict,
    pub pos_homog: Verdict,
    pub subadd: Verdict,
    pub point_sep: Verdict,
    pub overall: Verdict,
}

/// Sampled point with log-uniform radius in `[1/4, 4]`.
fn sample_point(rng: &mut impl Rng, dim: usize) -> Vector {
    unit_direction(rng, dim).scale(log_uniform(rng, 0.25, 4.0))
}

/// Checks the axioms on sampled points (analytic families are Proven).
/// Scaling factors are drawn log-uniformly from `[1e-3, 1e3]`.
pub fn validate_axioms(
    n: &MinkowskiNormSpec,
    n_samples: usize,
    stream: &SampleStream,
    tol: &ToleranceProfile,
) -> Result<AxiomReport> {
    if n_samples == 0 {
        return Err(Error::Input("n_samples must be at least 1".into()));
    }
    if n.analytic.is_some() {
        let p = Verdict::proven(0);
        return Ok(AxiomReport {
            nonneg: p.clone(),
            pos_homog: p.clone(),
            subadd: p.clone(),
            point_sep: p.clone(),
            overall: p,
        });
    }
    let dim = n.dim;
    let sub = stream.substream("axioms");
    let mut nonneg = Tally::new();
    let mut homog = Tally::new();
    let mut subadd = Tally::new();
    let mut sep = Tally::new();

    for u in signed_basis(dim) {
        check_sep(n, &u, tol, &mut sep);
        check_nonneg(n, &u, tol, &mut nonneg);
    }
    for k in 0..n_samples as u64 {
        let mut rng = sub.rng_at(k);
        let x = sample_point(&mut rng, dim);
        let y = sample_point(&mut rng, dim);
        let l = log_uniform(&mut rng, 1e-3, 1e3);
        if !nonneg.failed() {
            check_nonneg(n, &x, tol, &mut nonneg);
        }
        if !sep.failed() {
            let u = x.normalized().expect("sampled points are nonzero");
            check_sep(n, &u, tol, &mut sep);
        }
        let (Ok(nx), Ok(ny), Ok(nlx), Ok(nxy)) = (
            n.evaluate(&x),
            n.evaluate(&y),
            n.evaluate(&x.scale(l)),
            n.evaluate(&(&x + &y)),
        ) else {
            homog.skip();
            subadd.skip();
            continue;
        };
        if !homog.failed() {
            let slack = tol.eps_eq * (1.0 + (l * nx).abs()) - (nlx - l * nx).abs();
            if slack < 0.0 {
                homog.fail(
                    Witness::new("pos_homog")
                        .point(x.clone())
                        .scalar("lambda", l)
                        .scalar("N(lambda x)", nlx)
                        .scalar("lambda N(x)", l * nx),
                    slack,
                );
            } else {
                homog.observe(slack);
            }
        }
        if !subadd.failed() {
            let slack = nx + ny + tol.eps_eq * (1.0 + nx.abs() + ny.abs()) - nxy;
            if slack < 0.0 {
                subadd.fail(
                    Witness::new("subadd")
                        .point(x)
                        .point(y)
                        .scalar("N(x+y)", nxy)
                        .scalar("N(x)+N(y)", nx + ny),
                    slack,
                );
            } else {
                subadd.observe(slack);
            }
        }
    }
    let nonneg = nonneg.finish(Status::Supported);
    let pos_homog = homog.finish(Status::Supported);
    let subadd = subadd.finish(Status::Supported);
    let point_sep = sep.finish(Status::Supported);
    let overall = combine_verdicts(&[
        nonneg.clone(),
        pos_homog.clone(),
        subadd.clone(),
        point_sep.clone(),
    ])?;
    Ok(AxiomReport {
        nonneg,
        pos_homog,
        subadd,
        point_sep,
        overall,
    })
}

fn check_nonneg(n: &MinkowskiNormSpec, x: &Vector, tol: &ToleranceProfile, t: &mut Tally) {
    match n.evaluate(x) {
        Ok(v) => {
            let slack = v + tol.eps_eq * (1.0 + x.norm());
            if slack < 0.0 {
                t.fail(
                    Witness::new("nonneg").point(x.clone()).scalar("N", v),
                    slack,
                );
            } else {
                t.observe(slack);
            }
        }
        Err(_) => t.fail(
            Witness::new("nonneg")
                .point(x.clone())
                .scalar("undefined", 1.0),
            0.0,
        ),
    }
}

fn check_sep(n: &MinkowskiNormSpec, u: &Vector, tol: &ToleranceProfile, t: &mut Tally) {
    if t.failed() {
        return;
    }
    if let Ok(v) = n.evaluate(u) {
        let slack = v - tol.eps_strict;
        if slack < 0.0 {
            t.fail(
                Witness::new("point_sep").point(u.clone()).scalar("N", v),
                slack,
            );
        } else {
            t.observe(slack);
        }
    } else {
        t.skip();
    }
}

/// `(N(x) + N(-x)) / 2`.
pub fn symmetric_part(n: &MinkowskiNormSpec, x: &Vector) -> Result<f64> {
    Ok(0.5 * (n.evaluate(x)? + n.evaluate(&-x)?))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AsymmetryEstimate {
    /// Lower bound of the smallest `C` with `N(-x) <= C N(x)`.
    pub estimate: f64,
    pub argmax: Vector,
    pub effort: u64,
}

/// Maximises `N(-u) / N(u)` over all `±e_i` and sampled unit directions.
pub fn asymmetry_constant(
    n: &MinkowskiNormSpec,
    n_samples: usize,
    stream: &SampleStream,
    tol: &ToleranceProfile,
) -> Result<AsymmetryEstimate> {
    let sub = stream.substream("asymmetry");
    let dim = n.dim;
    let candidates = signed_basis(dim)
        .into_iter()
        .chain((0..n_samples as u64).map(|k| unit_direction(&mut sub.rng_at(k), dim)));
    let mut best: Option<(f64, Vector)> = None;
    let mut effort = 0;
    for u in candidates {
        effort += 1;
        let (a, b) = (n.evaluate(&u)?, n.evaluate(&-&u)?);
        for (v, d) in [(a, &u), (b, &-&u)] {
            if v < tol.eps_strict {
                return Err(Error::PointSeparation {
                    direction: d.clone(),
                });
            }
        }
        let ratio = b / a;
        if best.as_ref().is_none_or(|(r, _)| ratio > *r) {
            best = Some((ratio, u));
        }
    }
    let (estimate, argmax) = best.ok_or_else(|| Error::Input("no directions probed".into()))?;
    Ok(AsymmetryEstimate {
        estimate,
        argmax,
        effort,
    })
}

/// Norm given by the gauge of a convex, star-shaped, absorbing set.
pub fn norm_from_gauge(s: &SetOracle, tol: &ToleranceProfile) -> Result<MinkowskiNormSpec> {
    let flags = s.flags();
    if !(flags.star_shaped && flags.convex && flags.contains_origin) {
        return Err(Error::Construction(format!(
            "set `{}` must be flagged star-shaped, convex and containing the origin",
            s.name()
        )));
    }
    let dim = s.dim();
    for e in signed_basis(dim) {
        if !absorbs(s, &e, tol)?.contained {
            return Err(Error::Construction(format!(
                "set `{}` does not absorb direction {e}",
                s.name()
            )));
        }
    }
    let g = GaugeEvaluator::new(s.clone(), *tol)?;
    let probe = SampleStream::new(0).substream("norm_from_gauge");
    let dirs = signed_basis(dim)
        .into_iter()
        .chain((0..64).map(|k| unit_direction(&mut probe.rng_at(k), dim)));
    for u in dirs {
        let v = g.gauge_value(&u)?;
        match v.finite() {
            Some(p) if p >= tol.eps_strict => {}
            _ => {
                return Err(Error::Construction(format!(
                    "gauge of `{}` is {v} along {u}; not a norm",
                    s.name()
                )))
            }
        }
    }
    Ok(MinkowskiNormSpec::build(
        format!("gauge[{}]", s.name()),
        dim,
        NormFamily::Gauge { evaluator: g },
        None,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(c: &[f64]) -> Vector {
        Vector::from_slice(c).unwrap()
    }

    fn tol() -> ToleranceProfile {
        ToleranceProfile::default()
    }

    fn funk_disk() -> MinkowskiNormSpec {
        MinkowskiNormSpec::funk(MinkowskiNormSpec::lp(2, 2.0).unwrap(), v(&[0.5, 0.0])).unwrap()
    }

    #[test]
    fn evaluate_examples() {
        let l2 = MinkowskiNormSpec::lp(2, 2.0).unwrap();
        assert_eq!(l2.evaluate(&v(&[3.0, 4.0])).unwrap(), 5.0);
        let f = funk_disk();
        assert_eq!(f.evaluate(&v(&[1.0, 0.0])).unwrap(), 1.5);
        assert_eq!(f.evaluate(&v(&[-1.0, 0.0])).unwrap(), 0.5);
        let sq = MinkowskiNormSpec::polyhedral(vec![
            v(&[1.0, 1.0]),
            v(&[-1.0, 1.0]),
            v(&[-1.0, -1.0]),
            v(&[1.0, -1.0]),
        ])
        .unwrap();
        assert_eq!(sq.evaluate(&v(&[0.5, -1.0])).unwrap(), 1.0);
        assert!(sq.analytic_class().unwrap().symmetric);
        let l3 = MinkowskiNormSpec::lp(2, 3.0).unwrap();
        assert!((l3.evaluate(&v(&[1.0, 1.0])).unwrap() - 2f64.powf(1.0 / 3.0)).abs() < 1e-15);
    }

    #[test]
    fn polyhedral_requires_interior_origin() {
        let r = MinkowskiNormSpec::polyhedral(vec![v(&[1.0, 0.0]), v(&[0.0, 1.0]), v(&[1.0, 1.0])]);
        assert!(matches!(r, Err(Error::Construction(_))));
    }

    #[test]
    fn funk_rejects_large_drift() {
        let base = MinkowskiNormSpec::lp(2, 2.0).unwrap();
        assert!(MinkowskiNormSpec::funk(base.clone(), v(&[1.0, 0.0])).is_err());
        let n = MinkowskiNormSpec::funk_unchecked(base, v(&[1.0, 0.0])).unwrap();
        let r = validate_axioms(&n, 100, &SampleStream::new(1), &tol()).unwrap();
        assert_eq!(r.point_sep.status, Status::Falsified);
        assert_eq!(r.point_sep.witness.unwrap().points[0], v(&[-1.0, 0.0]));
    }

    #[test]
    fn axiom_examples() {
        let st = SampleStream::new(1);
        let r = validate_axioms(&MinkowskiNormSpec::lp(2, 2.0).unwrap(), 10, &st, &tol()).unwrap();
        assert_eq!(r.overall.status, Status::Proven);

        let x1 = MinkowskiNormSpec::expression("x1", 2).unwrap();
        let r = validate_axioms(&x1, 100, &st, &tol()).unwrap();
        assert_eq!(r.nonneg.status, Status::Falsified);
        assert_eq!(r.nonneg.witness.unwrap().points[0], v(&[-1.0, 0.0]));

        let src = "abs(x1)+abs(x2)+abs(x3)+abs(x4)+abs(x5)+abs(x6)+abs(x7)+abs(x8) + 1/2*x1 + 2/3*x2 + 3/4*x3 + 4/5*x4 + 5/6*x5 + 6/7*x6 + 7/8*x7 + 8/9*x8";
        let phi = MinkowskiNormSpec::expression(src, 8).unwrap();
        let r = validate_axioms(&phi, 2000, &st, &tol()).unwrap();
        for verdict in [&r.nonneg, &r.pos_homog, &r.subadd, &r.point_sep] {
            assert_eq!(verdict.status, Status::Supported);
        }
    }

    #[test]
    fn symmetric_part_examples() {
        assert_eq!(symmetric_part(&funk_disk(), &v(&[1.0, 0.0])).unwrap(), 1.0);
        let l1 = MinkowskiNormSpec::lp(3, 1.0).unwrap();
        let x = v(&[1.0, -2.0, 0.5]);
        assert_eq!(symmetric_part(&l1, &x).unwrap(), l1.evaluate(&x).unwrap());
        assert_eq!(symmetric_part(&l1, &Vector::zeros(3)).unwrap(), 0.0);
    }

    #[test]
    fn asymmetry_examples() {
        let st = SampleStream::new(1);
        let a =
            asymmetry_constant(&MinkowskiNormSpec::lp(2, 2.0).unwrap(), 100, &st, &tol()).unwrap();
        assert_eq!(a.estimate, 1.0);
        let a = asymmetry_constant(&funk_disk(), 1000, &st, &tol()).unwrap();
        assert!((a.estimate - 3.0).abs() < 1e-12);
        assert_eq!(a.argmax, v(&[-1.0, 0.0]));
        let a = asymmetry_constant(
            &MinkowskiNormSpec::truncated_phi(4).unwrap(),
            100,
            &st,
            &tol(),
        )
        .unwrap();
        assert!((a.estimate - 9.0).abs() < 1e-9);
        assert_eq!(a.argmax, -&Vector::basis(4, 3));
    }

    #[test]
    fn gauge_norms() {
        let t = tol();
        let n = norm_from_gauge(&SetOracle::ball(2, 1.0, true), &t).unwrap();
        let m = norm_from_gauge(&SetOracle::cube(2, 1.0, true), &t).unwrap();
        for x in [v(&[0.3, -2.0]), v(&[1.0, 1.0]), v(&[-5.0, 0.1])] {
            assert!((n.evaluate(&x).unwrap() - x.norm()).abs() < 1e-9 * (1.0 + x.norm()));
            assert!((m.evaluate(&x).unwrap() - x.norm_inf()).abs() < 1e-9 * (1.0 + x.norm()));
        }
        let cone = SetOracle::new("y>|x|", 2, |p| p[1] > p[0].abs()).with_flags(SetFlags {
            star_shaped: true,
            cone: true,
            convex: true,
            contains_origin: true,
            bounded: false,
        });
        match norm_from_gauge(&cone, &t) {
            Err(Error::Construction(msg)) => assert!(msg.contains("(1, 0)")),
            other => panic!("{other:?}"),
        }
        let r = validate_axioms(&n, 500, &SampleStream::new(2), &t).unwrap();
        assert_ne!(r.overall.status, Status::Falsified);
    }
}
