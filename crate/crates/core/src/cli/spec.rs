//! TOML spec documents: schema and construction of norms, functions and sets.

use std::collections::BTreeMap;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::base::{ToleranceProfile, Vector};
use crate::certify::HomogeneousFunctionSpec;
use crate::error::{Error, Result};
use crate::fixtures::{self, Subject};
use crate::norms::{parse_expression, MinkowskiNormSpec};
use crate::sets::{Halfspace, SetFlags, SetOracle};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SpecKind {
    Norm,
    Function,
    Set,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpecDocument {
    pub kind: SpecKind,
    pub dim: Option<usize>,
    pub family: Option<String>,
    pub expression: Option<String>,
    /// Name of a corpus fixture providing the subject.
    pub fixture: Option<String>,
    #[serde(default)]
    pub params: toml::Table,
    pub domain: Option<DomainSpec>,
    pub tolerances: Option<ToleranceOverrides>,
    #[serde(default)]
    pub metadata: BTreeMap<String, toml::Value>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DomainSpec {
    #[serde(default)]
    pub halfspaces: Vec<HalfspaceSpec>,
    /// Points where the expression is positive (non-negative when `closed`).
    pub predicate: Option<String>,
    #[serde(default)]
    pub closed: bool,
    /// Declares the domain a cone; implied for homogeneous half-spaces.
    #[serde(default)]
    pub cone: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HalfspaceSpec {
    pub normal: Vec<f64>,
    #[serde(default)]
    pub offset: f64,
    #[serde(default)]
    pub strict: bool,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ToleranceOverrides {
    pub eps_eq: Option<f64>,
    pub eps_strict: Option<f64>,
    pub eps_bisect: Option<f64>,
    pub max_bracket: Option<f64>,
    pub max_iter: Option<u32>,
}

impl ToleranceOverrides {
    pub fn apply(&self, base: ToleranceProfile) -> ToleranceProfile {
        ToleranceProfile {
            eps_eq: self.eps_eq.unwrap_or(base.eps_eq),
            eps_strict: self.eps_strict.unwrap_or(base.eps_strict),
            eps_bisect: self.eps_bisect.unwrap_or(base.eps_bisect),
            max_bracket: self.max_bracket.unwrap_or(base.max_bracket),
            max_iter: self.max_iter.unwrap_or(base.max_iter),
        }
    }
}

/// Constructed subject of a spec document.
#[derive(Clone, Debug)]
pub enum Built {
    Norm(MinkowskiNormSpec),
    Function(HomogeneousFunctionSpec),
    Set(SetOracle),
}

impl Built {
    pub fn name(&self) -> String {
        match self {
            Built::Norm(n) => n.name().to_string(),
            Built::Function(f) => f.name().to_string(),
            Built::Set(s) => s.name().to_string(),
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            Built::Norm(n) => n.dim(),
            Built::Function(f) => f.dim(),
            Built::Set(s) => s.dim(),
        }
    }
}

fn line_col(src: &str, offset: usize) -> (usize, usize) {
    let before = &src[..offset.min(src.len())];
    let line = before.matches('\n').count() + 1;
    let column = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
    (line, column)
}

impl SpecDocument {
    /// Parses and schema-checks a document; errors carry line and column.
    pub fn parse(src: &str) -> Result<Self> {
        let doc: SpecDocument = toml::from_str(src).map_err(|e| {
            let (line, column) = e.span().map_or((1, 1), |s| line_col(src, s.start));
            Error::Parse {
                line,
                column,
                message: e.message().to_string(),
            }
        })?;
        doc.check_shape()?;
        Ok(doc)
    }

    fn check_shape(&self) -> Result<()> {
        let sources = [
            self.family.is_some(),
            self.expression.is_some(),
            self.fixture.is_some(),
        ];
        match sources.iter().filter(|b| **b).count() {
            1 => {}
            0 => {
                return Err(Error::Schema(
                    "one of `family`, `expression` or `fixture` is required".into(),
                ))
            }
            _ => {
                return Err(Error::Schema(
                    "`family`, `expression` and `fixture` are mutually exclusive".into(),
                ))
            }
        }
        if self.fixture.is_none() && self.dim.is_none() && !self.family_implies_dim() {
            return Err(Error::Schema("`dim` is required".into()));
        }
        if self.dim == Some(0) {
            return Err(Error::Schema("`dim` must be positive".into()));
        }
        if self.domain.is_some() && self.kind != SpecKind::Function {
            return Err(Error::Schema(
                "`domain` applies to kind = \"function\" only".into(),
            ));
        }
        Ok(())
    }

    fn family_implies_dim(&self) -> bool {
        matches!(
            self.family.as_deref(),
            Some("truncated_phi" | "ellipsoid" | "polyhedral" | "funk" | "weighted_lp" | "ray")
        )
    }

    pub fn tolerances(&self, base: ToleranceProfile) -> ToleranceProfile {
        self.tolerances.unwrap_or_default().apply(base)
    }

    fn params<T: DeserializeOwned>(&self) -> Result<T> {
        let family = self.family.as_deref().unwrap_or("");
        toml::Value::Table(self.params.clone())
            .try_into()
            .map_err(|e: toml::de::Error| {
                Error::Schema(format!("params for `{family}`: {}", e.message()))
            })
    }

    fn dim_or(&self, d: usize) -> Result<usize> {
        match self.dim {
            Some(given) if given != d => Err(Error::Schema(format!(
                "`dim` = {given} but the parameters define dimension {d}"
            ))),
            _ => Ok(d),
        }
    }

    fn no_params(&self) -> Result<()> {
        if self.params.is_empty() {
            Ok(())
        } else {
            Err(Error::Schema(
                "`params` is not used with `expression` or `fixture`".into(),
            ))
        }
    }

    pub fn build(&self) -> Result<Built> {
        if let Some(name) = &self.fixture {
            self.no_params()?;
            return self.fixture_subject(name);
        }
        match self.kind {
            SpecKind::Norm => self.build_norm().map(Built::Norm),
            SpecKind::Function => self.build_function().map(Built::Function),
            SpecKind::Set => self.build_set().map(Built::Set),
        }
    }

    fn fixture_subject(&self, name: &str) -> Result<Built> {
        let fx = fixtures::list_fixtures()
            .into_iter()
            .find(|f| f.name == name)
            .ok_or_else(|| Error::Input(format!("unknown fixture `{name}`")))?;
        let built = match (self.kind, fx.subject) {
            (SpecKind::Set, Subject::Set(s)) => Built::Set(s),
            (SpecKind::Norm, Subject::Norm(n)) => Built::Norm(n),
            (SpecKind::Set, Subject::Norm(n)) => Built::Set(n.unit_ball()),
            (SpecKind::Function, Subject::Function(f)) => Built::Function(f),
            (SpecKind::Function, Subject::Norm(n)) => {
                Built::Function(HomogeneousFunctionSpec::from_norm(&n))
            }
            (SpecKind::Function, Subject::Composition { inner, outer }) => {
                Built::Function(crate::certify::compose(&inner, &outer))
            }
            (kind, s) => {
                return Err(Error::Schema(format!(
                    "fixture `{name}` is a {} and cannot be read as kind {kind:?}",
                    s.kind()
                )))
            }
        };
        if let Some(d) = self.dim {
            self.dim_or(built.dim()).map_err(|_| {
                Error::Schema(format!(
                    "`dim` = {d} but fixture `{name}` has dimension {}",
                    built.dim()
                ))
            })?;
        }
        Ok(built)
    }

    fn build_norm(&self) -> Result<MinkowskiNormSpec> {
        if let Some(src) = &self.expression {
            self.no_params()?;
            return MinkowskiNormSpec::expression(src, self.dim.expect("checked"));
        }
        norm_family(self, self.family.as_deref().expect("checked"))
    }

    fn build_function(&self) -> Result<HomogeneousFunctionSpec> {
        let mut f = match (&self.expression, &self.family) {
            (Some(src), _) => {
                let FunctionParams { degree, continuous } = self.params()?;
                let mut f =
                    HomogeneousFunctionSpec::from_expression(src, self.dim.expect("checked"))?;
                if let Some(a) = degree {
                    f = f.with_degree(a);
                }
                if let Some(c) = continuous {
                    f = f.with_continuity(c);
                }
                f
            }
            (None, Some(family)) => HomogeneousFunctionSpec::from_norm(&norm_family(self, family)?),
            _ => unreachable!("checked"),
        };
        if let Some(d) = &self.domain {
            let dom = d.build(f.dim())?;
            f = f.with_domain(dom)?;
        }
        Ok(f)
    }

    fn build_set(&self) -> Result<SetOracle> {
        if let Some(src) = &self.expression {
            let SetParams {
                closed,
                star_shaped,
            } = self.params()?;
            let dim = self.dim.expect("checked");
            let ast = parse_expression(src, dim)?;
            let s = SetOracle::new(format!("{{{} <= 1}}", src.trim()), dim, move |x| {
                ast.eval(x)
                    .map(|v| if closed { v <= 1.0 } else { v < 1.0 })
                    .unwrap_or(false)
            });
            return Ok(s.with_flags(SetFlags {
                star_shaped,
                contains_origin: star_shaped,
                ..SetFlags::NONE
            }));
        }
        let family = self.family.as_deref().expect("checked");
        match family {
            "ball" => {
                let p: BallParams = self.params()?;
                positive("radius", p.radius)?;
                Ok(SetOracle::ball(
                    self.dim.expect("checked"),
                    p.radius,
                    p.closed,
                ))
            }
            "cube" => {
                let p: CubeParams = self.params()?;
                positive("half_width", p.half_width)?;
                Ok(SetOracle::cube(
                    self.dim.expect("checked"),
                    p.half_width,
                    p.closed,
                ))
            }
            "ellipsoid" => {
                let p: AxesParams = self.params()?;
                self.dim_or(p.semi_axes.len())?;
                SetOracle::ellipsoid(&p.semi_axes)
            }
            "ray" => {
                let p: RayParams = self.params()?;
                let d = Vector::new(p.direction)?;
                self.dim_or(d.dim())?;
                SetOracle::ray(d)
            }
            other => Err(Error::Schema(format!(
                "unknown set family `{other}`; expected ball, cube, ellipsoid or ray"
            ))),
        }
    }
}

fn positive(name: &str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::Schema(format!(
            "`{name}` must be positive and finite, got {v}"
        )))
    }
}

fn norm_family(doc: &SpecDocument, family: &str) -> Result<MinkowskiNormSpec> {
    match family {
        "lp" => {
            let p: LpParams = doc.params()?;
            MinkowskiNormSpec::lp(doc.dim.expect("checked"), p.p.value())
        }
        "weighted_lp" => {
            let p: WeightedParams = doc.params()?;
            doc.dim_or(p.weights.len())?;
            MinkowskiNormSpec::weighted_lp(p.p.value(), p.weights)
        }
        "ellipsoid" => {
            let p: AxesParams = doc.params()?;
            doc.dim_or(p.semi_axes.len())?;
            MinkowskiNormSpec::ellipsoid_axes(&p.semi_axes)
        }
        "funk" => {
            let p: FunkParams = doc.params()?;
            let drift = Vector::new(p.drift)?;
            let dim = doc.dim_or(drift.dim())?;
            let base = MinkowskiNormSpec::lp(dim, p.p.value())?;
            // a drift outside the dual ball still builds; the axiom check reports it
            match MinkowskiNormSpec::funk(base.clone(), drift.clone()) {
                Err(Error::Construction(_)) => MinkowskiNormSpec::funk_unchecked(base, drift),
                other => other,
            }
        }
        "truncated_phi" => {
            let p: PhiParams = doc.params()?;
            doc.dim_or(p.d)?;
            MinkowskiNormSpec::truncated_phi(p.d)
        }
        "polyhedral" => {
            let p: PolyParams = doc.params()?;
            let vertices = p.vertices.into_iter().map(Vector::new).collect::<Result<Vec<_>>>()?;
            if let Some(v) = vertices.first() {
                doc.dim_or(v.dim())?;
            }
            MinkowskiNormSpec::polyhedral(vertices)
        }
        other => Err(Error::Schema(format!(
            "unknown norm family `{other}`; expected lp, weighted_lp, ellipsoid, funk, truncated_phi or polyhedral"
        ))),
    }
}

impl DomainSpec {
    pub fn build(&self, dim: usize) -> Result<SetOracle> {
        match (&self.predicate, self.halfspaces.is_empty()) {
            (Some(_), false) => Err(Error::Schema(
                "domain takes either `halfspaces` or `predicate`, not both".into(),
            )),
            (None, true) => Err(Error::Schema(
                "domain needs `halfspaces` or `predicate`".into(),
            )),
            (None, false) => {
                let hs = self
                    .halfspaces
                    .iter()
                    .map(|h| {
                        Ok(Halfspace {
                            normal: Vector::new(h.normal.clone())?,
                            offset: h.offset,
                            strict: h.strict,
                        })
                    })
                    .collect::<Result<Vec<_>>>()?;
                let s = SetOracle::halfspaces(dim, hs)?;
                Ok(if self.cone {
                    let flags = s.flags();
                    s.with_flags(SetFlags {
                        cone: true,
                        ..flags
                    })
                } else {
                    s
                })
            }
            (Some(src), true) => {
                let ast = parse_expression(src, dim)?;
                let closed = self.closed;
                let s = SetOracle::new(
                    format!("{{{} {} 0}}", src.trim(), if closed { ">=" } else { ">" }),
                    dim,
                    move |x| {
                        ast.eval(x)
                            .map(|v| if closed { v >= 0.0 } else { v > 0.0 })
                            .unwrap_or(false)
                    },
                );
                Ok(s.with_flags(SetFlags {
                    cone: self.cone,
                    star_shaped: self.cone && closed,
                    ..SetFlags::NONE
                }))
            }
        }
    }
}

/// `p` as a number or the string `"inf"`.
#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
enum Exponent {
    Number(f64),
    Text(String),
}

impl Exponent {
    fn value(&self) -> f64 {
        match self {
            Exponent::Number(p) => *p,
            Exponent::Text(s) if matches!(s.as_str(), "inf" | "infinity" | "Inf") => f64::INFINITY,
            Exponent::Text(_) => f64::NAN,
        }
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct LpParams {
    p: Exponent,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct WeightedParams {
    p: Exponent,
    weights: Vec<f64>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct AxesParams {
    semi_axes: Vec<f64>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct FunkParams {
    #[serde(default = "two")]
    p: Exponent,
    drift: Vec<f64>,
}

fn two() -> Exponent {
    Exponent::Number(2.0)
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct PhiParams {
    d: usize,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct PolyParams {
    vertices: Vec<Vec<f64>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct FunctionParams {
    degree: Option<f64>,
    continuous: Option<bool>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SetParams {
    #[serde(default)]
    closed: bool,
    #[serde(default = "yes")]
    star_shaped: bool,
}

fn yes() -> bool {
    true
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct BallParams {
    #[serde(default = "one")]
    radius: f64,
    #[serde(default = "yes")]
    closed: bool,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct CubeParams {
    #[serde(default = "one")]
    half_width: f64,
    #[serde(default = "yes")]
    closed: bool,
}

fn one() -> f64 {
    1.0
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RayParams {
    direction: Vec<f64>,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn build(src: &str) -> Result<Built> {
        SpecDocument::parse(src)?.build()
    }

    #[test]
    fn lp_document() {
        let b = build("kind = \"norm\"\ndim = 2\nfamily = \"lp\"\nparams = { p = 1.5 }\n").unwrap();
        let Built::Norm(n) = b else { panic!() };
        let x = Vector::from_slice(&[1.0, 1.0]).unwrap();
        assert!((n.evaluate(&x).unwrap() - 2f64.powf(1.0 / 1.5)).abs() < 1e-12);
        let Built::Norm(inf) =
            build("kind = \"norm\"\ndim = 2\nfamily = \"lp\"\n[params]\np = \"inf\"\n").unwrap()
        else {
            panic!()
        };
        assert_eq!(inf.evaluate(&x).unwrap(), 1.0);
    }

    #[test]
    fn unknown_keys_are_rejected_with_location() {
        let e = SpecDocument::parse("kind = \"norm\"\ndim = 2\nfamliy = \"lp\"\n").unwrap_err();
        match e {
            Error::Parse { line, .. } => assert_eq!(line, 3),
            other => panic!("{other:?}"),
        }
        let e = build("kind = \"norm\"\ndim = 2\nfamily = \"lp\"\nparams = { p = 2, q = 1 }\n")
            .unwrap_err();
        assert!(matches!(e, Error::Schema(_)), "{e:?}");
        assert!(matches!(
            SpecDocument::parse("kind = \"norm\"\ndim = 2\n"),
            Err(Error::Schema(_))
        ));
        assert!(matches!(
            SpecDocument::parse("kind = \"norm\" dim"),
            Err(Error::Parse { line: 1, .. })
        ));
    }

    #[test]
    fn funk_outside_the_dual_ball_still_builds() {
        let Built::Norm(n) =
            build("kind = \"norm\"\nfamily = \"funk\"\nparams = { drift = [1.0, 0.0] }\n").unwrap()
        else {
            panic!()
        };
        assert_eq!(
            n.evaluate(&Vector::from_slice(&[-1.0, 0.0]).unwrap())
                .unwrap(),
            0.0
        );
    }

    #[test]
    fn function_with_cone_domain() {
        let src = r#"
kind = "function"
dim = 2
expression = "sqrt(x1^2 + x2^2)"
params = { degree = 1.0 }
[domain]
halfspaces = [ { normal = [-1.0, 1.0], strict = true }, { normal = [1.0, 1.0], strict = true } ]
"#;
        let Built::Function(f) = build(src).unwrap() else {
            panic!()
        };
        assert!(f.in_domain(&Vector::from_slice(&[0.0, 1.0]).unwrap()));
        assert!(!f.in_domain(&Vector::from_slice(&[1.0, 0.5]).unwrap()));
        assert_eq!(f.degree(), Some(1.0));
    }

    #[test]
    fn fixture_references() {
        let Built::Set(s) = build("kind = \"set\"\nfixture = \"disk_union_ray\"\n").unwrap() else {
            panic!()
        };
        assert!(s.contains(&Vector::from_slice(&[5.0, 0.0]).unwrap()));
        assert!(matches!(
            build("kind = \"set\"\nfixture = \"step_function\"\n"),
            Err(Error::Schema(_))
        ));
        assert!(matches!(
            build("kind = \"set\"\nfixture = \"nope\"\n"),
            Err(Error::Input(_))
        ));
    }

    #[test]
    fn set_families() {
        let Built::Set(b) = build("kind = \"set\"\ndim = 2\nfamily = \"ball\"\n").unwrap() else {
            panic!()
        };
        assert!(b.contains(&Vector::from_slice(&[1.0, 0.0]).unwrap()));
        let Built::Set(e) =
            build("kind = \"set\"\nfamily = \"ellipsoid\"\nparams = { semi_axes = [1.0, 2.0] }\n")
                .unwrap()
        else {
            panic!()
        };
        assert!(e.contains(&Vector::from_slice(&[0.0, 1.9]).unwrap()));
        assert!(matches!(
            build("kind = \"set\"\ndim = 3\nfamily = \"ellipsoid\"\nparams = { semi_axes = [1.0, 2.0] }\n"),
            Err(Error::Schema(_))
        ));
    }
}
