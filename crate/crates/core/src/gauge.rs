//! Gauge (Minkowski functional) of a star-shaped oracle set:
//! `p_S(x) = 1 / sup{mu > 0 : mu x in S}`.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::base::{
    in_ball, log_uniform, signed_basis, unit_direction, ExtendedReal, SampleStream, Status, Tally,
    ToleranceProfile, Vector, Verdict, Witness,
};
use crate::error::{Error, Result};
use crate::sets::{probe_nonempty, sample_member, star_hull, SetFlags, SetOracle};

/// How a gauge value was obtained when it is not a plain bisection result.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum GaugeNote {
    /// The whole bracket up to `max_bracket` lies in S; the true value is
    /// below `1 / max_bracket` and is reported as 0.
    BelowResolution,
    /// No member found down to `1 / max_bracket`; reported as +inf.
    BeyondBracket,
    /// Membership along the ray is not an interval starting at 0.
    StarShapedViolation,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GaugeEvaluation {
    pub value: ExtendedReal,
    pub note: Option<GaugeNote>,
    /// Oracle queries spent.
    pub probes: u64,
}

#[derive(Clone, Debug)]
pub struct GaugeEvaluator {
    set: SetOracle,
    tol: ToleranceProfile,
    nonempty: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ContinuityProbe {
    pub value: f64,
    pub liminf: f64,
    pub limsup: f64,
    pub lsc_ok: bool,
    pub usc_ok: bool,
}

impl GaugeEvaluator {
    pub fn new(set: SetOracle, tol: ToleranceProfile) -> Result<Self> {
        if !set.flags().star_shaped {
            return Err(Error::Contract(format!(
                "gauge of `{}` requested but the set is not flagged star-shaped; pass its star hull",
                set.name()
            )));
        }
        tol.validate()?;
        let nonempty = probe_nonempty(&set);
        Ok(GaugeEvaluator { set, tol, nonempty })
    }

    pub fn set(&self) -> &SetOracle {
        &self.set
    }

    pub fn tolerances(&self) -> &ToleranceProfile {
        &self.tol
    }

    pub fn gauge_value(&self, x: &Vector) -> Result<ExtendedReal> {
        self.evaluate(x).map(|e| e.value)
    }

    pub fn evaluate(&self, x: &Vector) -> Result<GaugeEvaluation> {
        x.check_dim(self.set.dim())?;
        let tol = &self.tol;
        let mut probes = 0u64;
        let mut inside = |mu: f64| {
            probes += 1;
            self.set.contains(&x.scale(mu))
        };
        if x.is_zero() {
            let value = if self.nonempty {
                ExtendedReal::ZERO
            } else {
                ExtendedReal::PosInf
            };
            return Ok(GaugeEvaluation {
                value,
                note: None,
                probes: 0,
            });
        }

        // bracket lo in S, hi not in S
        let hinted = self
            .set
            .hints(x)
            .into_iter()
            .filter(|m| m.is_finite() && *m > 0.0)
            .fold(None, |acc: Option<f64>, m| {
                Some(acc.map_or(m, |a| a.max(m)))
            });
        let (mut lo, mut hi);
        if inside(1.0) {
            lo = 1.0;
            if let Some(m) = hinted.filter(|m| *m > 1.0) {
                if inside(m) {
                    lo = m;
                }
            }
            hi = lo * 2.0;
            while inside(hi) {
                lo = hi;
                hi *= 2.0;
                if lo > tol.max_bracket {
                    return Ok(GaugeEvaluation {
                        value: ExtendedReal::ZERO,
                        note: Some(GaugeNote::BelowResolution),
                        probes,
                    });
                }
            }
        } else {
            hi = 1.0;
            lo = 0.5;
            if let Some(m) = hinted.filter(|m| *m < 1.0) {
                if inside(m) {
                    lo = m;
                    hi = (2.0 * m).min(1.0);
                    while inside(hi) && hi < 1.0 {
                        lo = hi;
                        hi = (2.0 * hi).min(1.0);
                    }
                }
            }
            while !inside(lo) {
                hi = lo;
                lo *= 0.5;
                if lo < 1.0 / tol.max_bracket {
                    return Ok(GaugeEvaluation {
                        value: ExtendedReal::PosInf,
                        note: Some(GaugeNote::BeyondBracket),
                        probes,
                    });
                }
            }
        }

        let mut iter = 0;
        while hi - lo > tol.eps_bisect * hi && iter < tol.max_iter {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if inside(mid) {
                lo = mid;
            } else {
                hi = mid;
            }
            iter += 1;
        }

        // membership below lo must be an interval anchored at 0
        let exit = (1..8).map(|k| lo * k as f64 / 8.0).find(|&mu| !inside(mu));
        if let Some(mu) = exit {
            return Ok(GaugeEvaluation {
                value: ExtendedReal::Finite(1.0 / mu),
                note: Some(GaugeNote::StarShapedViolation),
                probes,
            });
        }
        Ok(GaugeEvaluation {
            value: ExtendedReal::Finite(1.0 / lo),
            note: None,
            probes,
        })
    }

    /// Oracle of `{p < bound}` or `{p <= bound}`.
    pub fn sublevel(&self, bound: f64, strict: bool) -> Result<SetOracle> {
        if !(bound >= 0.0) || !bound.is_finite() {
            return Err(Error::Input(format!(
                "sublevel bound must be a finite non-negative number, got {bound}"
            )));
        }
        let g = self.clone();
        let name = format!(
            "p[{}] {} {}",
            self.set.name(),
            if strict { "<" } else { "<=" },
            bound
        );
        let mut s = SetOracle::new(name, self.set.dim(), move |x| {
            let v = g
                .gauge_value(x)
                .map(|v| v.to_f64())
                .unwrap_or(f64::INFINITY);
            if strict {
                v < bound
            } else {
                v <= bound
            }
        })
        .with_flags(SetFlags {
            star_shaped: true,
            cone: false,
            convex: self.set.flags().convex,
            contains_origin: self.nonempty && (bound > 0.0 || !strict),
            bounded: false,
        });
        if let (true, Some(r)) = (
            self.set.flags().bounded && bound > 0.0,
            self.set.outer_radius(),
        ) {
            s = s.with_outer_radius(r * bound * (1.0 + 1e-9));
        }
        Ok(s)
    }

    /// Checks `{p < 1} ⊆ S ⊆ {p <= 1}` on sampled points, and that the gauge
    /// of the star hull of S coincides with the gauge of S.
    pub fn sandwich_check(&self, n_samples: usize, stream: &SampleStream) -> Result<Verdict> {
        if n_samples == 0 {
            return Err(Error::Input("n_samples must be at least 1".into()));
        }
        let sub = stream.substream("sandwich");
        let tol = &self.tol;
        let mut tally = Tally::new();
        let mut points = Vec::new();
        for k in 0..n_samples as u64 {
            let mut rng = sub.rng_at(k);
            let x = if rng.random::<bool>() {
                match sample_member(&self.set, &mut rng, 16) {
                    Some(x) => x,
                    None => ambient(&self.set, &mut rng),
                }
            } else {
                ambient(&self.set, &mut rng)
            };
            let p = self.gauge_value(&x)?.to_f64();
            let member = self.set.contains(&x);
            if p < 1.0 - tol.eps_strict && !member {
                tally.fail(
                    Witness::new("sandwich_inner").point(x).scalar("gauge", p),
                    p - (1.0 - tol.eps_strict),
                );
                break;
            }
            if member && p > 1.0 + tol.eps_strict {
                tally.fail(
                    Witness::new("sandwich_outer").point(x).scalar("gauge", p),
                    1.0 + tol.eps_strict - p,
                );
                break;
            }
            tally.observe((p - 1.0).abs());
            points.push(x);
        }
        if tally.failed() || tally.effort() == 0 {
            return Ok(tally.finish(Status::Supported));
        }

        // hull invariance on a bounded subset: each wrapped query is a radial search
        let hull = GaugeEvaluator::new(star_hull(&self.set, *tol), *tol)?;
        for x in points.iter().take(HULL_CHECKS) {
            let a = self.gauge_value(x)?;
            let b = hull.gauge_value(x)?;
            let differ = match (a, b) {
                (ExtendedReal::Finite(a), ExtendedReal::Finite(b)) => {
                    (a - b).abs() > tol.eps_eq.max(tol.eps_bisect * 4.0) * (1.0 + a.abs())
                }
                (a, b) => a != b,
            };
            if differ {
                tally.fail(
                    Witness::new("star_hull_invariance")
                        .point(x.clone())
                        .scalar("gauge", a.to_f64())
                        .scalar("hull_gauge", b.to_f64()),
                    0.0,
                );
                break;
            }
        }
        Ok(tally.finish(Status::Supported))
    }

    /// Empirical semicontinuity of `p` at `x` along points converging to `x`.
    pub fn continuity_probe(
        &self,
        x: &Vector,
        n_approach: usize,
        stream: &SampleStream,
    ) -> Result<ContinuityProbe> {
        if n_approach < 8 {
            return Err(Error::Input(format!(
                "n_approach must be at least 8, got {n_approach}"
            )));
        }
        x.check_dim(self.set.dim())?;
        let dim = self.set.dim();
        let value = self.gauge_value(x)?.to_f64();
        let s = x.norm().max(1.0);
        let axes = signed_basis(dim);
        let sub = stream.substream("continuity");
        let mut tail = Vec::new();
        let keep_from = n_approach - (n_approach / 4).max(2);
        for k in 0..n_approach {
            let r = s * 2f64.powi(-(24 + k as i32));
            let u = if k % 2 == 1 {
                axes[(k / 2) % axes.len()].clone()
            } else {
                unit_direction(&mut sub.rng_at(k as u64), dim)
            };
            let p = self.gauge_value(&(x + &u.scale(r)))?.to_f64();
            if k >= keep_from {
                tail.push(p);
            }
        }
        // also every axis direction at the finest tail radius
        let r = s * 2f64.powi(-(24 + n_approach as i32));
        for u in &axes {
            tail.push(self.gauge_value(&(x + &u.scale(r)))?.to_f64());
        }
        let liminf = tail.iter().cloned().fold(f64::INFINITY, f64::min);
        let limsup = tail.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let eps = self.tol.eps_strict;
        Ok(ContinuityProbe {
            value,
            liminf,
            limsup,
            lsc_ok: value <= liminf + eps,
            usc_ok: value >= limsup - eps,
        })
    }
}

const HULL_CHECKS: usize = 32;

fn ambient(s: &SetOracle, rng: &mut impl Rng) -> Vector {
    match s.outer_radius() {
        Some(r) if s.flags().bounded => in_ball(rng, s.dim(), 1.5 * r),
        _ => unit_direction(rng, s.dim()).scale(log_uniform(rng, 1e-2, 1e2)),
    }
}

pub fn gauge_value(g: &GaugeEvaluator, x: &Vector) -> Result<ExtendedReal> {
    g.gauge_value(x)
}

pub fn gauge_sublevel(g: &GaugeEvaluator, bound: f64, strict: bool) -> Result<SetOracle> {
    g.sublevel(bound, strict)
}

pub fn sandwich_check(
    g: &GaugeEvaluator,
    n_samples: usize,
    stream: &SampleStream,
) -> Result<Verdict> {
    g.sandwich_check(n_samples, stream)
}

pub fn continuity_probe(
    g: &GaugeEvaluator,
    x: &Vector,
    n_approach: usize,
    stream: &SampleStream,
) -> Result<ContinuityProbe> {
    g.continuity_probe(x, n_approach, stream)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(c: &[f64]) -> Vector {
        Vector::from_slice(c).unwrap()
    }

    fn eval(s: SetOracle) -> GaugeEvaluator {
        GaugeEvaluator::new(s, ToleranceProfile::default()).unwrap()
    }

    fn disk_union_ray() -> SetOracle {
        let d = SetOracle::ball(2, 1.0, false);
        let r = SetOracle::ray(v(&[1.0, 0.0])).unwrap();
        d.union(&r).unwrap()
    }

    #[test]
    fn euclidean_ball_gauge() {
        let g = eval(SetOracle::ball(2, 1.0, true));
        let p = g.gauge_value(&v(&[3.0, 4.0])).unwrap().to_f64();
        assert!((p - 5.0).abs() < 1e-10);
        assert_eq!(
            g.gauge_value(&v(&[1.0, 0.0])).unwrap(),
            ExtendedReal::Finite(1.0)
        );
        assert_eq!(g.gauge_value(&v(&[0.0, 0.0])).unwrap(), ExtendedReal::ZERO);
    }

    #[test]
    fn disk_union_ray_is_zero_on_the_ray() {
        let g = eval(disk_union_ray());
        let e = g.evaluate(&v(&[2.0, 0.0])).unwrap();
        assert_eq!(e.value, ExtendedReal::ZERO);
        assert_eq!(e.note, Some(GaugeNote::BelowResolution));
    }

    #[test]
    fn empty_set_gauge_is_infinite() {
        let g = eval(SetOracle::empty(2));
        assert_eq!(
            g.gauge_value(&v(&[1.0, 2.0])).unwrap(),
            ExtendedReal::PosInf
        );
        assert_eq!(
            g.gauge_value(&v(&[0.0, 0.0])).unwrap(),
            ExtendedReal::PosInf
        );
    }

    #[test]
    fn non_star_shaped_is_a_contract_error() {
        let r = GaugeEvaluator::new(SetOracle::annulus(2, 1.0, 2.0), ToleranceProfile::default());
        assert!(matches!(r, Err(Error::Contract(_))));
    }

    #[test]
    fn star_shape_violation_is_flagged() {
        let lie = SetOracle::annulus(2, 1.0, 2.0).with_flags(SetFlags {
            star_shaped: true,
            ..SetFlags::NONE
        });
        let e = eval(lie).evaluate(&v(&[1.5, 0.0])).unwrap();
        assert_eq!(e.note, Some(GaugeNote::StarShapedViolation));
    }

    #[test]
    fn sublevels() {
        let g = eval(SetOracle::ball(2, 1.0, true));
        let s = g.sublevel(1.0, false).unwrap();
        assert!(s.contains(&v(&[1.0, 0.0])));
        assert!(!s.contains(&v(&[1.0, 0.1])));
        assert!(g.sublevel(-1.0, false).is_err());
        let z = g.sublevel(0.0, false).unwrap();
        assert!(z.contains(&v(&[0.0, 0.0])));
        assert!(!z.contains(&v(&[1e-6, 0.0])));

        let h = eval(disk_union_ray());
        let s = h.sublevel(1.0, true).unwrap();
        assert!(s.contains(&v(&[2.0, 0.0])));
    }

    #[test]
    fn sandwich_holds_for_balls_and_squares() {
        let st = SampleStream::new(4);
        for s in [
            SetOracle::ball(2, 1.0, true),
            SetOracle::cube(2, 1.0, true),
            SetOracle::cube(2, 1.0, false),
        ] {
            let g = eval(s);
            assert_eq!(
                g.sandwich_check(400, &st).unwrap().status,
                Status::Supported
            );
        }
    }

    #[test]
    fn square_gauge_is_max_norm() {
        let g = eval(SetOracle::cube(2, 1.0, true));
        let mut st = SampleStream::new(9);
        for _ in 0..200 {
            let mut rng = st.next_rng();
            let x = unit_direction(&mut rng, 2).scale(log_uniform(&mut rng, 0.1, 10.0));
            let p = g.gauge_value(&x).unwrap().to_f64();
            assert!((p - x.norm_inf()).abs() <= 1e-9 * (1.0 + p));
        }
    }

    #[test]
    fn continuity_examples() {
        let st = SampleStream::new(1);
        let g = eval(SetOracle::ball(2, 1.0, true));
        let c = g.continuity_probe(&v(&[1.0, 0.0]), 16, &st).unwrap();
        assert!(c.lsc_ok && c.usc_ok);

        let h = eval(disk_union_ray());
        let c = h.continuity_probe(&v(&[2.0, 0.0]), 16, &st).unwrap();
        assert_eq!(c.value, 0.0);
        assert!(!c.usc_ok);
        assert!(c.limsup >= 2.0 - 1e-6);

        let e = eval(SetOracle::empty(2));
        let c = e.continuity_probe(&v(&[1.0, 1.0]), 8, &st).unwrap();
        assert!(c.lsc_ok && c.usc_ok);
        assert!(g.continuity_probe(&v(&[1.0, 0.0]), 4, &st).is_err());
    }
}
