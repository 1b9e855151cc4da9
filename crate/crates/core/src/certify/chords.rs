//! Chord tests: convexity and quasi-convexity (plain and strict), and
//! sub-convexity via sublevel chords.

use super::sample::Sampler;
use super::HomogeneousFunctionSpec;
use crate::base::{SampleStream, Status, Tally, ToleranceProfile, Vector, Verdict, Witness};
use crate::error::{Error, Result};

#[derive(Clone, Copy, PartialEq, Eq)]
enum Bound {
    /// `(1-t) f(x) + t f(y)`
    Affine,
    /// `max(f(x), f(y))`
    Max,
}

fn chord_test(
    f: &HomogeneousFunctionSpec,
    n_samples: usize,
    stream: &SampleStream,
    tol: &ToleranceProfile,
    label: &str,
    bound: Bound,
    strict: bool,
) -> Result<Verdict> {
    if n_samples == 0 {
        return Err(Error::Input("n_samples must be at least 1".into()));
    }
    let sampler = Sampler::new(f, tol);
    let sub = stream.substream(label);
    let mut tally = Tally::new();
    for k in 0..n_samples as u64 {
        let mut rng = sub.rng_at(k);
        let Some((x, y)) = sampler.pair(&mut rng, k) else {
            tally.skip();
            continue;
        };
        if strict && !sampler.separated(&x, &y) {
            tally.skip();
            continue;
        }
        let t = sampler.chord_t(&mut rng, strict);
        let z = x.lerp(&y, t);
        if !f.in_domain(&z) {
            tally.skip();
            continue;
        }
        let (Ok(fx), Ok(fy), Ok(fz)) = (f.eval(&x), f.eval(&y), f.eval(&z)) else {
            tally.skip();
            continue;
        };
        let rhs = match bound {
            Bound::Affine => (1.0 - t) * fx + t * fy,
            Bound::Max => fx.max(fy),
        };
        let gap = rhs - fz;
        let scale = fx.abs().max(fy.abs());
        let violated = if strict {
            gap <= tol.eps_strict * scale
        } else {
            -gap > tol.eps_strict * scale.max(1.0)
        };
        if violated {
            tally.fail(chord_witness(label, x, y, t, fx, fy, fz), gap);
            break;
        }
        tally.observe(gap);
    }
    Ok(tally.finish(Status::Supported))
}

pub(crate) fn chord_witness(
    label: &str,
    x: Vector,
    y: Vector,
    t: f64,
    fx: f64,
    fy: f64,
    fz: f64,
) -> Witness {
    Witness::new(label)
        .point(x)
        .point(y)
        .scalar("t", t)
        .scalar("f(x)", fx)
        .scalar("f(y)", fy)
        .scalar("f(z)", fz)
}

/// `f((1-t)x + t y) <= (1-t) f(x) + t f(y)` on sampled chords.
pub fn test_convex(
    f: &HomogeneousFunctionSpec,
    n_samples: usize,
    stream: &SampleStream,
    tol: &ToleranceProfile,
) -> Result<Verdict> {
    chord_test(f, n_samples, stream, tol, "convex", Bound::Affine, false)
}

/// Strict convexity on separated pairs; equality within `eps_strict`
/// (relative to the endpoint values) falsifies.
pub fn test_strictly_convex(
    f: &HomogeneousFunctionSpec,
    n_samples: usize,
    stream: &SampleStream,
    tol: &ToleranceProfile,
) -> Result<Verdict> {
    chord_test(
        f,
        n_samples,
        stream,
        tol,
        "strictly_convex",
        Bound::Affine,
        true,
    )
}

pub fn test_quasi_convex(
    f: &HomogeneousFunctionSpec,
    n_samples: usize,
    stream: &SampleStream,
    tol: &ToleranceProfile,
) -> Result<Verdict> {
    chord_test(f, n_samples, stream, tol, "quasi_convex", Bound::Max, false)
}

pub fn test_strictly_quasi_convex(
    f: &HomogeneousFunctionSpec,
    n_samples: usize,
    stream: &SampleStream,
    tol: &ToleranceProfile,
) -> Result<Verdict> {
    chord_test(
        f,
        n_samples,
        stream,
        tol,
        "strictly_quasi_convex",
        Bound::Max,
        true,
    )
}

/// Convexity of the sublevel sets `S_r(f)` for levels `r` taken from
/// observed values, cross-checked against [`test_quasi_convex`].
pub fn test_sub_convex(
    f: &HomogeneousFunctionSpec,
    n_samples: usize,
    stream: &SampleStream,
    tol: &ToleranceProfile,
) -> Result<Verdict> {
    if n_samples == 0 {
        return Err(Error::Input("n_samples must be at least 1".into()));
    }
    let sampler = Sampler::new(f, tol);
    let sub = stream.substream("sub_convex");
    let pool_stream = sub.substream("pool");
    let pool_size = n_samples.clamp(16, 512);
    let mut pool: Vec<(f64, Vector)> = (0..pool_size as u64)
        .filter_map(|k| {
            let x = sampler.point(&mut pool_stream.rng_at(k))?;
            f.eval(&x).ok().map(|v| (v, x))
        })
        .collect();
    pool.sort_by(|a, b| a.0.total_cmp(&b.0));

    let mut tally = Tally::new();
    if pool.len() >= 2 {
        for k in 0..n_samples as u64 {
            let mut rng = sub.rng_at(k);
            use rand::Rng;
            // level = value of a pool point; members = prefix up to it
            let top = rng.random_range(1..pool.len());
            let r = pool[top].0;
            let i = rng.random_range(0..=top);
            let j = rng.random_range(0..=top);
            if i == j {
                tally.skip();
                continue;
            }
            let (x, y) = (&pool[i].1, &pool[j].1);
            let t = sampler.chord_t(&mut rng, false);
            let z = x.lerp(y, t);
            if !f.in_domain(&z) {
                tally.skip();
                continue;
            }
            let Ok(fz) = f.eval(&z) else {
                tally.skip();
                continue;
            };
            let gap = r - fz;
            if -gap > tol.eps_strict * r.abs().max(1.0) {
                tally.fail(
                    chord_witness(
                        "sub_convex",
                        x.clone(),
                        y.clone(),
                        t,
                        pool[i].0,
                        pool[j].0,
                        fz,
                    )
                    .scalar("level", r),
                    gap,
                );
                break;
            }
            tally.observe(gap);
        }
    }
    let sub_verdict = tally.finish(Status::Supported);
    let quasi = test_quasi_convex(f, n_samples, stream, tol)?;
    let mut out = match (sub_verdict.holds(), quasi.holds()) {
        (Some(true), Some(false)) => {
            let mut w = quasi.witness.clone().expect("falsified verdict carries a witness");
            w.property = "sub_convex".into();
            Verdict::falsified(w, sub_verdict.effort + quasi.effort)
                .with_note("sub-convex and quasi-convex verdicts disagree; the chord witness comes from the quasi-convexity test")
        }
        (Some(false), Some(true)) => Verdict::falsified(sub_verdict.witness.clone().unwrap(), sub_verdict.effort + quasi.effort)
            .with_note("sub-convex and quasi-convex verdicts disagree; the sublevel chord witness is not seen by the quasi-convexity test"),
        _ => crate::base::combine_verdicts(&[sub_verdict.clone(), quasi])?,
    };
    if out.is_falsified() && sub_verdict.is_falsified() {
        out.witness = sub_verdict.witness;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::certify::{power_transform, HomogeneousFunctionSpec as F};
    use crate::norms::MinkowskiNormSpec;
    use crate::sets::SetOracle;

    fn tol() -> ToleranceProfile {
        ToleranceProfile::default()
    }

    fn st() -> SampleStream {
        SampleStream::new(1)
    }

    fn norm(p: f64) -> F {
        F::from_norm(&MinkowskiNormSpec::lp(2, p).unwrap())
    }

    #[test]
    fn convexity_examples() {
        assert_eq!(
            test_convex(&norm(2.0), 2000, &st(), &tol()).unwrap().status,
            Status::Supported
        );
        let root = F::from_expression("sqrt(abs(x1))", 1).unwrap();
        let v = test_convex(&root, 2000, &st(), &tol()).unwrap();
        assert_eq!(v.status, Status::Falsified);
        let w = v.witness.unwrap();
        let (x, y, t) = (&w.points[0], &w.points[1], w.get("t").unwrap());
        let fz = root.eval(&x.lerp(y, t)).unwrap();
        assert!(fz > (1.0 - t) * root.eval(x).unwrap() + t * root.eval(y).unwrap() + 1e-7);

        let half = SetOracle::new("x1>0", 2, |p| p[0] > 0.0);
        let ratio = F::from_expression("(x1^2+x2^2)/(2*x1)", 2)
            .unwrap()
            .with_domain(half)
            .unwrap();
        assert_eq!(
            test_convex(&ratio, 2000, &st(), &tol()).unwrap().status,
            Status::Supported
        );
    }

    #[test]
    fn strict_convexity_examples() {
        let sq = power_transform(&norm(2.0), 2.0).unwrap();
        assert_eq!(
            test_strictly_convex(&sq, 2000, &st(), &tol())
                .unwrap()
                .status,
            Status::Supported
        );
        assert_eq!(
            test_strictly_convex(&norm(1.0), 2000, &st(), &tol())
                .unwrap()
                .status,
            Status::Falsified
        );
        assert_eq!(
            test_strictly_convex(&norm(2.0), 2000, &st(), &tol())
                .unwrap()
                .status,
            Status::Falsified
        );
    }

    #[test]
    fn quasi_convexity_examples() {
        let root = F::from_expression("sqrt(abs(x1))", 1).unwrap();
        assert_eq!(
            test_quasi_convex(&root, 2000, &st(), &tol())
                .unwrap()
                .status,
            Status::Supported
        );
        let abs = F::from_expression("abs(x1)", 1).unwrap();
        assert_eq!(
            test_strictly_quasi_convex(&abs, 2000, &st(), &tol())
                .unwrap()
                .status,
            Status::Supported
        );
        assert_eq!(
            test_strictly_convex(&abs, 2000, &st(), &tol())
                .unwrap()
                .status,
            Status::Falsified
        );
        let zero = F::new("zero", 1, |_| 0.0);
        assert_eq!(
            test_strictly_quasi_convex(&zero, 200, &st(), &tol())
                .unwrap()
                .status,
            Status::Falsified
        );
    }

    #[test]
    fn sub_convexity_examples() {
        let step = F::new("step", 1, |x| if x[0] <= 0.0 { 0.0 } else { 1.0 });
        assert_eq!(
            test_sub_convex(&step, 2000, &st(), &tol()).unwrap().status,
            Status::Supported
        );
        let sq = F::from_expression("max(0, sqrt(2*(x1^2+x2^2)) - 2*x2)", 2).unwrap();
        assert_eq!(
            test_sub_convex(&sq, 2000, &st(), &tol()).unwrap().status,
            Status::Supported
        );
        let neg = F::new("-t on t>=0", 1, |x| if x[0] < 0.0 { 0.0 } else { -x[0] });
        assert_eq!(
            test_sub_convex(&neg, 2000, &st(), &tol()).unwrap().status,
            Status::Supported
        );
        assert_eq!(
            test_convex(&neg, 2000, &st(), &tol()).unwrap().status,
            Status::Falsified
        );
        let bump = F::new("bump", 1, |x| (-x[0] * x[0]).exp());
        assert_eq!(
            test_sub_convex(&bump, 2000, &st(), &tol()).unwrap().status,
            Status::Falsified
        );
    }
}
