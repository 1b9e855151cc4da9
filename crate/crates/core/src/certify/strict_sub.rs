//! Strict sub-convexity: sublevel boundaries are located by radial
//! closed forms (homogeneous specs) and by bisection along chords between
//! inside and outside samples; midpoints of distinct boundary points must
//! then be interior.

use super::sample::{distinct, Sampler};
use super::HomogeneousFunctionSpec;
use crate::base::{
    signed_basis, sparse_lattice, unit_direction, SampleStream, Status, Tally, ToleranceProfile,
    Vector, Verdict, Witness,
};
use crate::error::{Error, Result};
use crate::sets::{generic_candidate, sample_member, SetOracle};

const MAX_BOUNDARY: usize = 2048;
const SAMPLE_LEVELS: usize = 8;
/// Radial boundary points are only taken along directions where `|f(u)|`
/// is at least this fraction of its largest sampled value.
const RADIAL_CONDITIONING: f64 = 1e-2;

/// Last point of `[a, b]` (from the `a` side) still inside, to precision
/// `eps_bisect * max(1, |p|)` at the returned point `p`.
fn bisect_boundary(
    inside: &dyn Fn(&Vector) -> bool,
    a: &Vector,
    b: &Vector,
    tol: &ToleranceProfile,
) -> Vector {
    let len = a.distance(b);
    let (mut lo, mut hi) = (0.0, 1.0);
    for _ in 0..tol.max_iter.max(64) {
        if (hi - lo) * len <= tol.eps_bisect * a.lerp(b, lo).norm().max(1.0) {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if inside(&a.lerp(b, mid)) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    a.lerp(b, lo)
}

fn axis_probes<'a>(mid: &'a Vector, tol: &ToleranceProfile) -> impl Iterator<Item = Vector> + 'a {
    let h = tol.eps_eq * mid.norm().max(1.0);
    (0..mid.dim()).flat_map(move |i| [mid.with_coord(i, h), mid.with_coord(i, -h)])
}

/// `(interior, slack)` for a midpoint.
type InteriorTest<'a> = dyn Fn(&Vector) -> (bool, f64) + 'a;
type WitnessFor<'a> = dyn Fn(&Vector, &Vector, &Vector) -> Witness + 'a;

/// Tests midpoints of distinct pairs, in prefix order, up to `budget` pairs.
/// Returns whether a violation was recorded.
fn scan_pairs(
    points: &[Vector],
    budget: usize,
    tol: &ToleranceProfile,
    tally: &mut Tally,
    interior: &InteriorTest<'_>,
    witness: &WitnessFor<'_>,
) -> bool {
    let mut tested = 0;
    for j in 1..points.len() {
        for i in 0..j {
            if tested >= budget {
                return false;
            }
            let (x, y) = (&points[i], &points[j]);
            if !distinct(x, y, tol) {
                continue;
            }
            tested += 1;
            let mid = x.midpoint(y);
            let (ok, slack) = interior(&mid);
            if !ok {
                tally.fail(witness(x, y, &mid), slack);
                return true;
            }
            tally.observe(slack);
        }
    }
    if tested == 0 {
        // empty, singleton, or no distinct boundary pair: strictly convex by definition
        tally.credit();
    }
    false
}

fn boundary_count(budget: usize) -> usize {
    (((2 * budget) as f64).sqrt().ceil() as usize + 2).min(MAX_BOUNDARY)
}

struct Pool {
    members: Vec<(Vector, f64)>,
    outside: Vec<Vector>,
    directions: Vec<(Vector, f64)>,
}

fn build_pool(
    f: &HomogeneousFunctionSpec,
    k: usize,
    stream: &SampleStream,
    tol: &ToleranceProfile,
) -> Pool {
    let sampler = Sampler::new(f, tol);
    let sub = stream.substream("strictly_sub_convex/pool");
    let size = (4 * k).clamp(64, 4096);
    let mut members = Vec::new();
    let mut outside = Vec::new();
    let origin = Vector::zeros(f.dim());
    let push_member = |x: Vector, members: &mut Vec<(Vector, f64)>| {
        if let Ok(v) = f.eval(&x) {
            if v.is_finite() {
                members.push((x, v));
            }
        }
    };
    if f.in_domain(&origin) {
        push_member(origin, &mut members);
    }
    for k in 0..size as u64 {
        let mut rng = sub.rng_at(k);
        if let Some(x) = sampler.point(&mut rng) {
            push_member(x, &mut members);
        }
        let a = sampler.ambient(&mut rng);
        if !f.in_domain(&a) {
            outside.push(a);
        }
    }

    let dir_stream = stream.substream("strictly_sub_convex/directions");
    let mut candidates = signed_basis(f.dim());
    for k in 0..size as u64 {
        let mut rng = dir_stream.rng_at(k);
        let d = if k % 4 == 0 {
            sparse_lattice(&mut rng, f.dim())
                .normalized()
                .expect("lattice vectors are nonzero")
        } else {
            unit_direction(&mut rng, f.dim())
        };
        candidates.push(d);
    }
    let directions = candidates
        .into_iter()
        .filter(|u| f.in_domain(u))
        .filter_map(|u| f.eval(&u).ok().filter(|v| v.is_finite()).map(|v| (u, v)))
        .collect();
    Pool {
        members,
        outside,
        directions,
    }
}

fn boundary_points(
    f: &HomogeneousFunctionSpec,
    r: f64,
    pool: &Pool,
    k: usize,
    tol: &ToleranceProfile,
) -> Vec<Vector> {
    let inside = |x: &Vector| f.in_domain(x) && f.eval(x).map(|v| v <= r).unwrap_or(false);
    let mut points = Vec::with_capacity(k);

    let radial_quota = match f.degree() {
        Some(a) if a > 0.0 && r != 0.0 => k / 2,
        _ => 0,
    };
    if radial_quota > 0 {
        let alpha = f.degree().unwrap();
        let peak = pool
            .directions
            .iter()
            .filter(|(_, v)| v.signum() == r.signum())
            .fold(0.0f64, |m, (_, v)| m.max(v.abs()));
        for (u, fu) in &pool.directions {
            if points.len() >= radial_quota {
                break;
            }
            if fu.signum() != r.signum() || *fu == 0.0 || fu.abs() < RADIAL_CONDITIONING * peak {
                continue;
            }
            let y = u.scale((r / fu).powf(1.0 / alpha));
            if f.in_domain(&y) {
                points.push(y);
            }
        }
    }

    let ins: Vec<&Vector> = pool
        .members
        .iter()
        .filter(|(_, v)| *v <= r)
        .map(|(x, _)| x)
        .collect();
    let outs: Vec<&Vector> = pool
        .members
        .iter()
        .filter(|(_, v)| *v > r)
        .map(|(x, _)| x)
        .chain(pool.outside.iter())
        .collect();
    if !ins.is_empty() && !outs.is_empty() {
        let need = k.saturating_sub(points.len());
        for m in 0..need {
            let a = ins[m % ins.len()];
            let b = outs[(m * 31 + m / ins.len()) % outs.len()];
            points.push(bisect_boundary(&inside, a, b, tol));
        }
    }
    points
}

fn run_levels(
    f: &HomogeneousFunctionSpec,
    levels: &[f64],
    pool: &Pool,
    n_samples: usize,
    tol: &ToleranceProfile,
) -> Verdict {
    let mut tally = Tally::new();
    if pool.members.is_empty() {
        return Verdict::inconclusive("no domain points could be sampled", 0);
    }
    let budget = (n_samples / levels.len().max(1)).max(1);
    let k = boundary_count(budget);
    for &r in levels {
        let points = boundary_points(f, r, pool, k, tol);
        let thr = r - tol.eps_strict * r.abs();
        let interior = |mid: &Vector| -> (bool, f64) {
            if !f.in_domain(mid) {
                return (false, f64::NEG_INFINITY);
            }
            let Ok(fm) = f.eval(mid) else {
                return (false, f64::NEG_INFINITY);
            };
            let slack = thr - fm;
            let ok = fm < thr
                && axis_probes(mid, tol)
                    .all(|p| f.in_domain(&p) && f.eval(&p).map(|v| v < r).unwrap_or(false));
            (ok, slack)
        };
        let witness = |x: &Vector, y: &Vector, mid: &Vector| {
            let mut w = Witness::new("strictly_sub_convex")
                .point(x.clone())
                .point(y.clone())
                .point(mid.clone())
                .scalar("level", r);
            if let Ok(v) = f.eval(mid) {
                w = w.scalar("f(mid)", v);
            }
            w
        };
        if scan_pairs(&points, budget, tol, &mut tally, &interior, &witness) {
            break;
        }
    }
    tally.finish(Status::Supported)
}

fn default_levels(pool: &Pool) -> Vec<f64> {
    let mut values: Vec<f64> = pool.members.iter().map(|(_, v)| *v).collect();
    values.sort_by(f64::total_cmp);
    let (lo, hi) = (values[0], values[values.len() - 1]);
    let peak = lo.abs().max(hi.abs());
    let mut levels = vec![0.0, lo.min(0.0) - 1.0];
    for i in 0..SAMPLE_LEVELS {
        let r = values[((2 * i + 1) * values.len()) / (2 * SAMPLE_LEVELS)];
        if r.abs() >= RADIAL_CONDITIONING * peak && !levels.contains(&r) {
            levels.push(r);
        }
    }
    levels.push(hi + 1.0);
    levels
}

/// Every sublevel `S_r(f)` is strictly convex, probed at `r = 0`, one
/// negative level, levels drawn from observed values, and one level above
/// all of them.
pub fn test_strictly_sub_convex(
    f: &HomogeneousFunctionSpec,
    n_samples: usize,
    stream: &SampleStream,
    tol: &ToleranceProfile,
) -> Result<Verdict> {
    if n_samples == 0 {
        return Err(Error::Input("n_samples must be at least 1".into()));
    }
    let k = boundary_count(n_samples / (SAMPLE_LEVELS + 3));
    let pool = build_pool(f, k, stream, tol);
    if pool.members.is_empty() {
        return Ok(Verdict::inconclusive(
            "no domain points could be sampled",
            0,
        ));
    }
    let levels = default_levels(&pool);
    Ok(run_levels(f, &levels, &pool, n_samples, tol))
}

/// Strict convexity of `S_r(f)` at the given levels only.
pub fn strictly_sub_convex_at_levels(
    f: &HomogeneousFunctionSpec,
    levels: &[f64],
    n_samples: usize,
    stream: &SampleStream,
    tol: &ToleranceProfile,
) -> Result<Verdict> {
    if n_samples == 0 || levels.is_empty() {
        return Err(Error::Input(
            "need at least one level and one sample".into(),
        ));
    }
    if let Some(r) = levels.iter().find(|r| !r.is_finite()) {
        return Err(Error::Input(format!("level {r} is not finite")));
    }
    let k = boundary_count(n_samples / levels.len());
    let pool = build_pool(f, k, stream, tol);
    Ok(run_levels(f, levels, &pool, n_samples, tol))
}

/// Strict convexity of a set: midpoints of distinct boundary points
/// (located by chord bisection) must be interior.
pub fn probe_strictly_convex_set(
    s: &SetOracle,
    n_samples: usize,
    stream: &SampleStream,
    tol: &ToleranceProfile,
) -> Result<Verdict> {
    if n_samples == 0 {
        return Err(Error::Input("n_samples must be at least 1".into()));
    }
    let k = boundary_count(n_samples);
    let sub = stream.substream("strictly_convex_set");
    let size = (4 * k).clamp(64, 4096);
    let mut members = Vec::new();
    let mut outside = Vec::new();
    for j in 0..size as u64 {
        let mut rng = sub.rng_at(j);
        if let Some(x) = sample_member(s, &mut rng, 16) {
            members.push(x);
        }
        let a = generic_candidate(s, &mut rng).scale(1.5);
        if !s.contains(&a) {
            outside.push(a);
        }
    }
    let mut tally = Tally::new();
    if members.is_empty() {
        tally.credit();
        return Ok(tally
            .finish(Status::Supported)
            .with_note("no members found; treated as empty"));
    }
    let inside = |x: &Vector| s.contains(x);
    let points: Vec<Vector> = if outside.is_empty() {
        Vec::new()
    } else {
        (0..k)
            .map(|m| {
                let a = &members[m % members.len()];
                let b = &outside[(m * 31 + m / members.len()) % outside.len()];
                bisect_boundary(&inside, a, b, tol)
            })
            .collect()
    };
    let interior = |mid: &Vector| -> (bool, f64) {
        let ok = s.contains(mid) && axis_probes(mid, tol).all(|p| s.contains(&p));
        (ok, if ok { 0.0 } else { -1.0 })
    };
    let witness = |x: &Vector, y: &Vector, mid: &Vector| {
        Witness::new("strictly_convex_set")
            .point(x.clone())
            .point(y.clone())
            .point(mid.clone())
    };
    scan_pairs(&points, n_samples, tol, &mut tally, &interior, &witness);
    Ok(tally.finish(Status::Supported))
}
