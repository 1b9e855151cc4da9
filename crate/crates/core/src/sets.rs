//! Membership-oracle sets of R^n and their hulls.
//!
//! A [`SetOracle`] is a pure predicate plus structural claims (star-shaped,
//! cone, convex, ...). Hull membership is decided by radial search along the
//! ray through the query point: multiplicative bracketing by powers of two
//! (refined in eighths of an octave) up to `max_bracket`, plus any radial
//! hints the oracle supplies. A positive answer is exact and carries the
//! multiplier found; a negative answer only means the search was exhausted.

use std::fmt;
use std::sync::Arc;

use nalgebra::DMatrix;
use rand::{Rng, RngCore};
use serde::{Deserialize, Serialize};

use crate::base::{
    in_ball, log_uniform, unit_direction, SampleStream, Status, Tally, ToleranceProfile, Vector,
    Verdict, Witness,
};
use crate::error::{Error, Result};

pub type Predicate = Arc<dyn Fn(&Vector) -> bool + Send + Sync>;
/// Candidate multipliers `mu` for which `mu * x` may lie in the set; lets
/// radial searches hit thin sets (points, rays) exactly.
pub type RadialHint = Arc<dyn Fn(&Vector) -> Vec<f64> + Send + Sync>;
pub type MemberSampler = Arc<dyn Fn(&mut dyn RngCore) -> Vector + Send + Sync>;

/// Steps per octave in radial scans.
const OCTAVE_STEPS: i32 = 8;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SetFlags {
    pub star_shaped: bool,
    pub cone: bool,
    pub convex: bool,
    pub contains_origin: bool,
    pub bounded: bool,
}

impl SetFlags {
    pub const NONE: SetFlags = SetFlags {
        star_shaped: false,
        cone: false,
        convex: false,
        contains_origin: false,
        bounded: false,
    };

    /// Closed convex body around the origin.
    pub const CONVEX_BODY: SetFlags = SetFlags {
        star_shaped: true,
        cone: false,
        convex: true,
        contains_origin: true,
        bounded: true,
    };
}

#[derive(Clone)]
pub struct SetOracle {
    name: String,
    dim: usize,
    contains: Predicate,
    flags: SetFlags,
    outer_radius: Option<f64>,
    inner_radius: Option<f64>,
    radial_hint: Option<RadialHint>,
    member_sampler: Option<MemberSampler>,
}

impl fmt::Debug for SetOracle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SetOracle")
            .field("name", &self.name)
            .field("dim", &self.dim)
            .field("flags", &self.flags)
            .field("outer_radius", &self.outer_radius)
            .field("inner_radius", &self.inner_radius)
            .finish()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum HullKind {
    /// `[0,1] S`
    StarHull,
    /// `{l x : l > 0, x in S u {0}}`
    PointedCone,
    /// Pointed cone minus the origin.
    BluntCone,
}

/// Answer of a hull or absorption query.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Membership {
    pub contained: bool,
    /// Multiplier certifying a positive answer: `mu` with `mu x in S` for the
    /// star hull, `l` with `x / l in S` for cones and absorption.
    pub scalar: Option<f64>,
    /// Number of oracle queries spent.
    pub effort: u64,
}

/// Half-space `<normal, x> >= offset` (or `>` when strict).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Halfspace {
    pub normal: Vector,
    pub offset: f64,
    #[serde(default)]
    pub strict: bool,
}

impl Halfspace {
    pub fn contains(&self, x: &Vector) -> bool {
        let v = self.normal.dot(x);
        if self.strict {
            v > self.offset
        } else {
            v >= self.offset
        }
    }
}

impl SetOracle {
    pub fn new<F>(name: impl Into<String>, dim: usize, contains: F) -> Self
    where
        F: Fn(&Vector) -> bool + Send + Sync + 'static,
    {
        assert!(dim >= 1, "set dimension must be positive");
        SetOracle {
            name: name.into(),
            dim,
            contains: Arc::new(contains),
            flags: SetFlags::NONE,
            outer_radius: None,
            inner_radius: None,
            radial_hint: None,
            member_sampler: None,
        }
    }

    pub fn with_flags(mut self, flags: SetFlags) -> Self {
        self.flags = flags;
        self
    }

    pub fn with_outer_radius(mut self, r: f64) -> Self {
        self.outer_radius = Some(r);
        self.flags.bounded = true;
        self
    }

    pub fn with_inner_radius(mut self, r: f64) -> Self {
        self.inner_radius = Some(r);
        self
    }

    pub fn with_radial_hint<F>(mut self, hint: F) -> Self
    where
        F: Fn(&Vector) -> Vec<f64> + Send + Sync + 'static,
    {
        self.radial_hint = Some(Arc::new(hint));
        self
    }

    pub fn with_member_sampler<F>(mut self, sampler: F) -> Self
    where
        F: Fn(&mut dyn RngCore) -> Vector + Send + Sync + 'static,
    {
        self.member_sampler = Some(Arc::new(sampler));
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

    pub fn flags(&self) -> SetFlags {
        self.flags
    }

    pub fn outer_radius(&self) -> Option<f64> {
        self.outer_radius
    }

    pub fn inner_radius(&self) -> Option<f64> {
        self.inner_radius
    }

    pub fn contains(&self, x: &Vector) -> bool {
        x.dim() == self.dim && (self.contains)(x)
    }

    pub(crate) fn hints(&self, x: &Vector) -> Vec<f64> {
        self.radial_hint.as_ref().map(|h| h(x)).unwrap_or_default()
    }

    /// Checks the structural claims that can be checked cheaply.
    pub fn validate(&self) -> Result<()> {
        if self.flags.contains_origin && !self.contains(&Vector::zeros(self.dim)) {
            return Err(Error::Construction(format!(
                "set `{}` is flagged contains_origin but rejects 0",
                self.name
            )));
        }
        if self.flags.bounded && self.outer_radius.is_none() {
            return Err(Error::Construction(format!(
                "set `{}` is flagged bounded without an outer radius",
                self.name
            )));
        }
        if let Some(r) = self.inner_radius {
            let dirs = crate::base::signed_basis(self.dim);
            if let Some(d) = dirs.iter().find(|d| !self.contains(&d.scale(0.5 * r))) {
                return Err(Error::Construction(format!(
                    "set `{}` claims inner radius {r} but rejects {}",
                    self.name,
                    d.scale(0.5 * r)
                )));
            }
        }
        Ok(())
    }

    pub fn empty(dim: usize) -> Self {
        SetOracle::new("empty", dim, |_| false)
            .with_flags(SetFlags {
                star_shaped: true,
                cone: true,
                convex: true,
                contains_origin: false,
                bounded: true,
            })
            .with_outer_radius(f64::MIN_POSITIVE)
    }

    /// Euclidean ball about the origin.
    pub fn ball(dim: usize, radius: f64, closed: bool) -> Self {
        let name = if closed { "closed_ball" } else { "open_ball" };
        SetOracle::new(name, dim, move |x| {
            let n = x.norm();
            if closed {
                n <= radius
            } else {
                n < radius
            }
        })
        .with_flags(SetFlags::CONVEX_BODY)
        .with_outer_radius(radius)
        .with_inner_radius(radius)
    }

    /// Closed ellipsoid `sum (x_i / a_i)^2 <= 1`.
    pub fn ellipsoid(semi_axes: &[f64]) -> Result<Self> {
        if semi_axes.is_empty() || semi_axes.iter().any(|a| !(a.is_finite() && *a > 0.0)) {
            return Err(Error::Input("ellipsoid semi-axes must be positive".into()));
        }
        let axes = semi_axes.to_vec();
        let rmax = axes.iter().cloned().fold(0.0, f64::max);
        let rmin = axes.iter().cloned().fold(f64::INFINITY, f64::min);
        Ok(SetOracle::new("ellipsoid", axes.len(), {
            let axes = axes.clone();
            move |x| {
                x.as_slice()
                    .iter()
                    .zip(&axes)
                    .map(|(c, a)| (c / a) * (c / a))
                    .sum::<f64>()
                    <= 1.0
            }
        })
        .with_flags(SetFlags::CONVEX_BODY)
        .with_outer_radius(rmax)
        .with_inner_radius(rmin))
    }

    /// Axis-aligned cube `[-h, h]^n` (or the open cube).
    pub fn cube(dim: usize, half_width: f64, closed: bool) -> Self {
        let name = if closed { "closed_cube" } else { "open_cube" };
        SetOracle::new(name, dim, move |x| {
            let m = x.norm_inf();
            if closed {
                m <= half_width
            } else {
                m < half_width
            }
        })
        .with_flags(SetFlags::CONVEX_BODY)
        .with_outer_radius(half_width * (dim as f64).sqrt())
        .with_inner_radius(half_width)
    }

    /// Closed annulus `inner <= |x| <= outer`.
    pub fn annulus(dim: usize, inner: f64, outer: f64) -> Self {
        SetOracle::new("annulus", dim, move |x| {
            let n = x.norm();
            inner <= n && n <= outer
        })
        .with_outer_radius(outer)
    }

    pub fn singleton(point: Vector) -> Self {
        let dim = point.dim();
        let p = point.clone();
        let p2 = point.clone();
        let p3 = point;
        let pn = p.norm();
        SetOracle::new("singleton", dim, move |x| {
            x.distance(&p) <= 1e-12 * (1.0 + pn)
        })
        .with_flags(SetFlags {
            convex: true,
            bounded: true,
            contains_origin: pn == 0.0,
            star_shaped: pn == 0.0,
            cone: pn == 0.0,
        })
        .with_outer_radius(pn.max(f64::MIN_POSITIVE))
        .with_radial_hint(move |x| ray_multiplier(x, &p2).into_iter().collect())
        .with_member_sampler(move |_| p3.clone())
    }

    /// Closed ray `{t d : t >= 0}`.
    pub fn ray(direction: Vector) -> Result<Self> {
        let d = direction
            .normalized()
            .ok_or_else(|| Error::Input("ray direction must be nonzero".into()))?;
        let dim = d.dim();
        let d2 = d.clone();
        Ok(SetOracle::new("ray", dim, move |x| on_ray(x, &d))
            .with_flags(SetFlags {
                star_shaped: true,
                cone: true,
                convex: true,
                contains_origin: true,
                bounded: false,
            })
            .with_member_sampler(move |rng| d2.scale(log_uniform(rng, 1e-3, 1e3))))
    }

    /// Intersection of half-spaces.
    pub fn halfspaces(dim: usize, hs: Vec<Halfspace>) -> Result<Self> {
        if let Some(h) = hs.iter().find(|h| h.normal.dim() != dim) {
            return Err(Error::Input(format!(
                "half-space normal {} does not have dimension {dim}",
                h.normal
            )));
        }
        let homogeneous = hs.iter().all(|h| h.offset == 0.0);
        let origin_in = hs.iter().all(|h| h.contains(&Vector::zeros(dim)));
        Ok(
            SetOracle::new("halfspaces", dim, move |x| hs.iter().all(|h| h.contains(x)))
                .with_flags(SetFlags {
                    star_shaped: origin_in,
                    cone: homogeneous,
                    convex: true,
                    contains_origin: origin_in,
                    bounded: false,
                }),
        )
    }

    /// Union; flags are dropped except those both sides share and that unions preserve.
    pub fn union(&self, other: &SetOracle) -> Result<Self> {
        self.same_dim(other)?;
        let (a, b) = (self.clone(), other.clone());
        let (ha, hb) = (self.radial_hint.clone(), other.radial_hint.clone());
        let mut s = SetOracle::new(
            format!("({}) u ({})", self.name, other.name),
            self.dim,
            move |x| a.contains(x) || b.contains(x),
        )
        .with_flags(SetFlags {
            star_shaped: self.flags.star_shaped && other.flags.star_shaped,
            cone: self.flags.cone && other.flags.cone,
            convex: false,
            contains_origin: self.flags.contains_origin || other.flags.contains_origin,
            bounded: false,
        });
        if let (Some(ra), Some(rb)) = (self.outer_radius, other.outer_radius) {
            s = s.with_outer_radius(ra.max(rb));
        }
        if ha.is_some() || hb.is_some() {
            s = s.with_radial_hint(move |x| {
                let mut v = ha.as_ref().map(|h| h(x)).unwrap_or_default();
                v.extend(hb.as_ref().map(|h| h(x)).unwrap_or_default());
                v
            });
        }
        let (ma, mb) = (self.member_sampler.clone(), other.member_sampler.clone());
        if ma.is_some() || mb.is_some() {
            let (ga, gb) = (self.clone(), other.clone());
            s = s.with_member_sampler(move |rng| {
                let first = rng.random::<bool>();
                let pick = |m: &Option<MemberSampler>, g: &SetOracle, rng: &mut dyn RngCore| {
                    m.as_ref().map(|m| m(rng)).or_else(|| {
                        (0..64)
                            .map(|_| generic_candidate(g, rng))
                            .find(|c| g.contains(c))
                    })
                };
                let (p, q) = if first { (&ma, &mb) } else { (&mb, &ma) };
                let (gp, gq) = if first { (&ga, &gb) } else { (&gb, &ga) };
                pick(p, gp, rng)
                    .or_else(|| pick(q, gq, rng))
                    .unwrap_or_else(|| Vector::zeros(gp.dim))
            });
        }
        Ok(s)
    }

    /// Intersection (predicate conjunction).
    pub fn intersection(&self, other: &SetOracle) -> Result<Self> {
        self.same_dim(other)?;
        let (a, b) = (self.clone(), other.clone());
        let mut s = SetOracle::new(
            format!("({}) n ({})", self.name, other.name),
            self.dim,
            move |x| a.contains(x) && b.contains(x),
        )
        .with_flags(SetFlags {
            star_shaped: self.flags.star_shaped && other.flags.star_shaped,
            cone: self.flags.cone && other.flags.cone,
            convex: self.flags.convex && other.flags.convex,
            contains_origin: self.flags.contains_origin && other.flags.contains_origin,
            bounded: false,
        });
        let r = match (self.outer_radius, other.outer_radius) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        };
        if let Some(r) = r {
            s = s.with_outer_radius(r);
        }
        Ok(s)
    }

    /// `factor * S`.
    pub fn dilate(&self, factor: f64) -> Result<Self> {
        if !(factor.is_finite() && factor > 0.0) {
            return Err(Error::Input(format!(
                "dilation factor must be positive, got {factor}"
            )));
        }
        let a = self.clone();
        let mut s = SetOracle::new(
            format!("{} * ({})", factor, self.name),
            self.dim,
            move |x| a.contains(&x.scale(1.0 / factor)),
        )
        .with_flags(self.flags);
        s.outer_radius = self.outer_radius.map(|r| r * factor);
        s.inner_radius = self.inner_radius.map(|r| r * factor);
        if let Some(h) = self.radial_hint.clone() {
            s = s.with_radial_hint(move |x| h(&x.scale(1.0 / factor)));
        }
        if let Some(m) = self.member_sampler.clone() {
            s = s.with_member_sampler(move |rng| m(rng).scale(factor));
        }
        Ok(s)
    }

    fn same_dim(&self, other: &SetOracle) -> Result<()> {
        if self.dim != other.dim {
            return Err(Error::Input(format!(
                "dimension mismatch between sets ({} vs {})",
                self.dim, other.dim
            )));
        }
        Ok(())
    }
}

fn on_ray(x: &Vector, d: &Vector) -> bool {
    let along = x.dot(d);
    if along < 0.0 {
        return false;
    }
    let perp = (x - &d.scale(along)).norm();
    perp <= 1e-12 * along.max(f64::MIN_POSITIVE) || x.is_zero()
}

/// `mu > 0` with `mu x = p`, if `x` and `p` are positively parallel.
fn ray_multiplier(x: &Vector, p: &Vector) -> Option<f64> {
    let xx = x.dot(x);
    if xx == 0.0 {
        return None;
    }
    let mu = x.dot(p) / xx;
    (mu > 0.0 && (&x.scale(mu) - p).norm() <= 1e-12 * (1.0 + p.norm())).then_some(mu)
}

pub(crate) fn generic_candidate(s: &SetOracle, rng: &mut dyn RngCore) -> Vector {
    match s.outer_radius {
        Some(r) if s.flags.bounded => in_ball(rng, s.dim, r),
        _ => unit_direction(rng, s.dim).scale(log_uniform(rng, 1e-3, 1e3)),
    }
}

/// Draws a member of `s`, preferring the oracle's own sampler half of the time.
pub(crate) fn sample_member(
    s: &SetOracle,
    rng: &mut dyn RngCore,
    attempts: usize,
) -> Option<Vector> {
    for _ in 0..attempts {
        let c = match &s.member_sampler {
            Some(m) if rng.random::<bool>() => m(rng),
            _ => generic_candidate(s, rng),
        };
        if s.contains(&c) {
            return Some(c);
        }
    }
    None
}

/// Whether `s` has any member, by deterministic probing.
pub fn probe_nonempty(s: &SetOracle) -> bool {
    if s.contains(&Vector::zeros(s.dim)) {
        return true;
    }
    let stream = SampleStream::new(0).substream("nonempty");
    (0..256u64).any(|k| {
        let mut rng = stream.rng_at(k);
        sample_member(s, &mut rng, 4).is_some()
    })
}

/// Geometric candidates `2^(k/8)` inside `[lo, hi]`, walking outward from 1.
fn radial_candidates(lo: f64, hi: f64) -> impl Iterator<Item = f64> {
    let up = (0..)
        .map(|k| 2f64.powf(k as f64 / OCTAVE_STEPS as f64))
        .take_while(move |m| *m <= hi);
    let down = (1..)
        .map(|k| 2f64.powf(-(k as f64) / OCTAVE_STEPS as f64))
        .take_while(move |m| *m >= lo);
    let mut up = up.peekable();
    let mut down = down.peekable();
    let mut flip = false;
    std::iter::from_fn(move || {
        flip = !flip;
        if flip {
            up.next().or_else(|| down.next())
        } else {
            down.next().or_else(|| up.next())
        }
    })
    .filter(move |m| *m >= lo)
}

/// Searches `mu` in `[lo, hi]` with `mu x in S`, re-probing at perturbed radii.
fn radial_search(
    s: &SetOracle,
    x: &Vector,
    lo: f64,
    hi: f64,
    tol: &ToleranceProfile,
) -> (Option<f64>, u64) {
    let mut effort = 0u64;
    let mut probe = |mu: f64| -> bool {
        effort += 1;
        if s.contains(&x.scale(mu)) {
            return true;
        }
        [1.0 + tol.eps_eq, 1.0 - tol.eps_eq]
            .iter()
            .map(|f| mu * f)
            .filter(|m| *m >= lo && *m <= hi)
            .any(|m| {
                effort += 1;
                s.contains(&x.scale(m))
            })
    };
    for mu in s.hints(x).into_iter().filter(|m| *m >= lo && *m <= hi) {
        if probe(mu) {
            return (Some(mu), effort);
        }
    }
    for mu in radial_candidates(lo, hi) {
        if probe(mu) {
            return (Some(mu), effort);
        }
    }
    (None, effort)
}

/// Largest member multiplier on the ray through `x`, starting from a member
/// `mu`, for sets whose radial membership is an interval anchored at 0.
fn radial_sup(s: &SetOracle, x: &Vector, mu: f64, tol: &ToleranceProfile) -> (f64, u64) {
    let mut effort = 0u64;
    let (mut lo, mut hi) = (mu, 2.0 * mu);
    loop {
        effort += 1;
        if !s.contains(&x.scale(hi)) {
            break;
        }
        lo = hi;
        hi *= 2.0;
        if hi > tol.max_bracket {
            return (lo, effort);
        }
    }
    let mut iter = 0;
    while hi - lo > tol.eps_bisect * hi && iter < tol.max_iter {
        let mid = 0.5 * (lo + hi);
        effort += 1;
        if s.contains(&x.scale(mid)) {
            lo = mid;
        } else {
            hi = mid;
        }
        iter += 1;
    }
    (lo, effort)
}

/// Membership of `x` in the star-shaped hull or a conic hull of `s`.
pub fn hull_contains(
    s: &SetOracle,
    kind: HullKind,
    x: &Vector,
    tol: &ToleranceProfile,
) -> Result<Membership> {
    x.check_dim(s.dim)?;
    if x.is_zero() {
        let contained = match kind {
            HullKind::StarHull => probe_nonempty(s),
            HullKind::PointedCone => true,
            HullKind::BluntCone => false,
        };
        return Ok(Membership {
            contained,
            scalar: None,
            effort: 1,
        });
    }
    let (lo, hi) = match kind {
        HullKind::StarHull => {
            let mut hi = tol.max_bracket;
            if let (true, Some(r)) = (s.flags.bounded, s.outer_radius) {
                hi = hi.min(r / x.norm() * (1.0 + tol.eps_eq));
            }
            (1.0, hi)
        }
        HullKind::PointedCone | HullKind::BluntCone => (1.0 / tol.max_bracket, tol.max_bracket),
    };
    if hi < lo {
        return Ok(Membership {
            contained: false,
            scalar: None,
            effort: 0,
        });
    }
    let (mut found, mut effort) = radial_search(s, x, lo, hi, tol);
    if let (Some(mu), HullKind::PointedCone | HullKind::BluntCone, true) =
        (found, kind, s.flags.star_shaped)
    {
        let (sup, extra) = radial_sup(s, x, mu, tol);
        found = Some(sup);
        effort += extra;
    }
    Ok(Membership {
        contained: found.is_some(),
        scalar: found.map(|mu| match kind {
            HullKind::StarHull => mu,
            _ => 1.0 / mu,
        }),
        effort,
    })
}

/// Whether `x in l S` for some `l > 0`.
pub fn absorbs(s: &SetOracle, x: &Vector, tol: &ToleranceProfile) -> Result<Membership> {
    x.check_dim(s.dim)?;
    if x.is_zero() {
        return Ok(Membership {
            contained: s.contains(x),
            scalar: None,
            effort: 1,
        });
    }
    hull_contains(s, HullKind::BluntCone, x, tol)
}

/// Oracle of the star-shaped hull `[0,1] S`.
pub fn star_hull(s: &SetOracle, tol: ToleranceProfile) -> SetOracle {
    let inner = s.clone();
    let mut flags = SetFlags {
        star_shaped: true,
        cone: s.flags.cone,
        convex: false,
        contains_origin: false,
        bounded: s.flags.bounded,
    };
    let nonempty = probe_nonempty(s);
    flags.contains_origin = nonempty;
    let mut hull = SetOracle::new(format!("starhull({})", s.name), s.dim, move |x| {
        if x.is_zero() {
            return nonempty;
        }
        hull_contains(&inner, HullKind::StarHull, x, &tol)
            .map(|m| m.contained)
            .unwrap_or(false)
    })
    .with_flags(flags);
    hull.outer_radius = s.outer_radius;
    hull
}

/// Samples `x in S` and `t in [0,1]`; falsified when `t x` leaves `S`.
pub fn probe_star_shaped(
    s: &SetOracle,
    n_samples: usize,
    stream: &SampleStream,
    _tol: &ToleranceProfile,
) -> Result<Verdict> {
    if n_samples == 0 {
        return Err(Error::Input("n_samples must be at least 1".into()));
    }
    let sub = stream.substream("probe_star_shaped");
    let mut tally = Tally::new();
    for k in 0..n_samples as u64 {
        let mut rng = sub.rng_at(k);
        let Some(x) = sample_member(s, &mut rng, 64) else {
            tally.skip();
            continue;
        };
        let t: f64 = rng.random();
        if s.contains(&x.scale(t)) {
            tally.observe(1.0);
        } else {
            tally.fail(Witness::new("star_shaped").point(x).scalar("t", t), 0.0);
            break;
        }
    }
    if tally.effort() == 0 {
        return Ok(Verdict::inconclusive("could not sample S", 0));
    }
    Ok(tally.finish(Status::Supported))
}

/// Samples `x in S` and `l` log-uniform in `[1/max_bracket, max_bracket]`;
/// falsified when `l x` leaves `S`.
pub fn probe_cone(
    s: &SetOracle,
    n_samples: usize,
    stream: &SampleStream,
    tol: &ToleranceProfile,
) -> Result<Verdict> {
    if n_samples == 0 {
        return Err(Error::Input("n_samples must be at least 1".into()));
    }
    let sub = stream.substream("probe_cone");
    let mut tally = Tally::new();
    for k in 0..n_samples as u64 {
        let mut rng = sub.rng_at(k);
        let Some(x) = sample_member(s, &mut rng, 64) else {
            tally.skip();
            continue;
        };
        let l = log_uniform(&mut rng, 1.0 / tol.max_bracket, tol.max_bracket);
        if s.contains(&x.scale(l)) {
            tally.observe(1.0);
        } else {
            tally.fail(Witness::new("cone").point(x).scalar("lambda", l), 0.0);
            break;
        }
    }
    if tally.effort() == 0 {
        return Ok(Verdict::inconclusive("could not sample S", 0));
    }
    Ok(tally.finish(Status::Supported))
}

/// Affine dimension of a sample cloud, and whether the origin lies on its
/// affine hull.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AffineFit {
    pub dimension: usize,
    pub origin_on_fit: bool,
}

pub fn affine_dimension(samples: &[Vector], tol: &ToleranceProfile) -> Result<usize> {
    affine_fit(samples, tol).map(|f| f.dimension)
}

/// Numerical rank of `x_i - x_0` (singular values below `eps_eq * sigma_max`
/// count as zero), plus the distance test of 0 to the fitted affine hull.
pub fn affine_fit(samples: &[Vector], tol: &ToleranceProfile) -> Result<AffineFit> {
    let first = samples
        .first()
        .ok_or_else(|| Error::Input("affine dimension of an empty sample set".into()))?;
    let dim = first.dim();
    if let Some(v) = samples.iter().find(|v| v.dim() != dim) {
        return Err(Error::Input(format!(
            "sample {v} does not have dimension {dim}"
        )));
    }
    let scale = samples
        .iter()
        .map(|v| v.norm())
        .fold(0.0, f64::max)
        .max(1.0);
    if samples.len() == 1 {
        return Ok(AffineFit {
            dimension: 0,
            origin_on_fit: first.norm() <= tol.eps_eq * scale,
        });
    }
    let rows = samples.len() - 1;
    let m = DMatrix::from_fn(rows, dim, |i, j| samples[i + 1][j] - first[j]);
    let svd = m.svd(false, true);
    let smax = svd.singular_values.iter().cloned().fold(0.0, f64::max);
    let v_t = svd.v_t.expect("requested right singular vectors");
    let rank_rows: Vec<usize> = svd
        .singular_values
        .iter()
        .enumerate()
        .filter(|(_, s)| smax > 0.0 && **s > tol.eps_eq * smax)
        .map(|(i, _)| i)
        .collect();
    // distance from 0 to first + span(rows of v_t)
    let mut residual = first.as_slice().to_vec();
    for &i in &rank_rows {
        let row = v_t.row(i);
        let c: f64 = (0..dim).map(|j| row[j] * first[j]).sum();
        for j in 0..dim {
            residual[j] -= c * row[j];
        }
    }
    let dist = residual.iter().map(|c| c * c).sum::<f64>().sqrt();
    Ok(AffineFit {
        dimension: rank_rows.len(),
        origin_on_fit: dist <= tol.eps_eq * scale,
    })
}
