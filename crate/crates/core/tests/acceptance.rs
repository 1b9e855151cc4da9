//! Acceptance criteria, one PASS/FAIL line each. Runs without the libtest
//! harness so the lines appear in the test log.

mod common;

use std::time::{Duration, Instant};

use common::*;
use gaugekit::certify::{
    compose, composition_check, cone_equivalence_harness, main_equivalence_harness,
    midpoint_criterion, rotundity_equivalence_check, strictly_sub_convex_at_levels,
    test_strictly_sub_convex,
};
use gaugekit::cli::Report;
use gaugekit::fixtures::{self, HARNESS_ALPHAS};
use gaugekit::gauge::GaugeEvaluator;
use gaugekit::norms::{asymmetry_constant, MinkowskiNormSpec as N};
use gaugekit::sets::SetOracle;
use gaugekit::{ExtendedReal, SampleStream, Status, ToleranceProfile, Vector};

const SEEDS: [u64; 3] = [1, 2, 3];

struct Outcome {
    ok: bool,
    detail: String,
}

fn run(id: &str, title: &str, limit: Duration, f: impl FnOnce() -> Outcome) -> bool {
    let start = Instant::now();
    let out = f();
    let took = start.elapsed();
    let ok = out.ok && took <= limit;
    println!(
        "[{}] criterion {id}: {title} | {} | {:.2}s (limit {}s)",
        if ok { "PASS" } else { "FAIL" },
        out.detail,
        took.as_secs_f64(),
        limit.as_secs()
    );
    ok
}

// 1 -------------------------------------------------------------------------

fn ellipsoid_gauge() -> Outcome {
    const POINTS: u64 = 10_000;
    const TOL: f64 = 1e-9;
    let t = ToleranceProfile {
        eps_bisect: 1e-12,
        ..ToleranceProfile::default()
    };
    let g = GaugeEvaluator::new(SetOracle::ellipsoid(&[1.0, 2.0]).unwrap(), t).unwrap();
    let st = SampleStream::new(1).substream("criterion1");
    let mut worst: f64 = 0.0;
    for k in 0..POINTS {
        let x = point(&mut st.rng_at(k), 2, 1e-3, 1e3);
        let exact = (x[0] * x[0] + x[1] * x[1] / 4.0).sqrt();
        let p = g.gauge_value(&x).unwrap().to_f64();
        worst = worst.max((p - exact).abs() / exact.max(1.0));
    }
    Outcome {
        ok: worst <= TOL,
        detail: format!("max scaled error {worst:.3e} over {POINTS} points (tol {TOL:e})"),
    }
}

// 2 and 7 --------------------------------------------------------------------

const C2_SAMPLES: usize = 100_000;

/// Harness records and midpoint/strict-sub pairs for every degree-1
/// whole-space corpus subject at one seed.
fn criterion2_report(seed: u64) -> (Report, Vec<String>) {
    let t = ToleranceProfile::default();
    let st = SampleStream::new(seed);
    let mut r = Report::new("acceptance-2", seed, C2_SAMPLES, t, HARNESS_ALPHAS.to_vec());
    r.timestamp = 0;
    let mut disagreements = Vec::new();
    for (name, f, norm) in whole_space_subjects() {
        let rec =
            main_equivalence_harness(&f, &HARNESS_ALPHAS, C2_SAMPLES, &st.substream(&name), &t)
                .unwrap();
        if !rec.agree {
            disagreements.push(format!(
                "{name}: cond1 {:?} cond2 {:?} cond3 {:?}",
                rec.cond1.status, rec.cond2.status, rec.cond3.status
            ));
        }
        r.harness.push(rec);
        if let Some(n) = norm {
            let mid = midpoint_criterion(&n, C2_SAMPLES, &st.substream(&name), &t).unwrap();
            let sub = test_strictly_sub_convex(&f, C2_SAMPLES, &st.substream(&name), &t).unwrap();
            if mid.holds() != sub.holds() || mid.holds().is_none() {
                disagreements.push(format!(
                    "{name}: midpoint {:?} vs strictly sub {:?}",
                    mid.status, sub.status
                ));
            }
            r.headline(format!("{name}/midpoint_criterion"), mid);
            r.headline(format!("{name}/strictly_sub_convex"), sub);
        }
    }
    (r, disagreements)
}

fn harness_agreement(reports: &mut Vec<String>) -> Outcome {
    let mut bad = Vec::new();
    let mut subjects = 0;
    for seed in SEEDS {
        let (r, d) = criterion2_report(seed);
        subjects = r.harness.len();
        bad.extend(d.into_iter().map(|m| format!("seed {seed}: {m}")));
        reports.push(r.to_json().unwrap());
    }
    Outcome {
        ok: bad.is_empty() && subjects >= 10,
        detail: if bad.is_empty() {
            format!(
                "{subjects} subjects x {} seeds, 0 disagreements at {C2_SAMPLES} samples",
                SEEDS.len()
            )
        } else {
            format!("{} disagreements: {}", bad.len(), bad.join("; "))
        },
    }
}

fn determinism(first: &[String]) -> Outcome {
    let mut diffs = Vec::new();
    for (seed, earlier) in SEEDS.iter().zip(first) {
        let (r, _) = criterion2_report(*seed);
        if &r.to_json().unwrap() != earlier {
            diffs.push(*seed);
        }
    }
    Outcome {
        ok: diffs.is_empty() && first.len() == SEEDS.len(),
        detail: if diffs.is_empty() {
            format!(
                "{} reports byte-identical on rerun ({} bytes)",
                first.len(),
                first.iter().map(String::len).sum::<usize>()
            )
        } else {
            format!("reports differ for seeds {diffs:?}")
        },
    }
}

// 3 -------------------------------------------------------------------------

fn lp_value(x: &Vector, p: f64) -> f64 {
    if p.is_infinite() {
        x.as_slice().iter().fold(0.0, |m, c| m.max(c.abs()))
    } else {
        x.as_slice()
            .iter()
            .map(|c| c.abs().powf(p))
            .sum::<f64>()
            .powf(1.0 / p)
    }
}

fn hexagon_value(x: &Vector) -> f64 {
    // facet normals of the regular hexagon with vertices at k pi/3
    (0..6)
        .map(|k| {
            let a = std::f64::consts::PI * (k as f64 + 0.5) / 3.0;
            (x[0] * a.cos() + x[1] * a.sin()) / (std::f64::consts::PI / 6.0).cos()
        })
        .fold(f64::NEG_INFINITY, f64::max)
}

fn rotundity_classification() -> Outcome {
    const CHORDS: usize = 100_000;
    let t = ToleranceProfile::default();
    let mut lines = Vec::new();
    let mut ok = true;
    for p in [1.5, 2.0, 3.0] {
        let n = N::lp(2, p).unwrap();
        let mid = midpoint_criterion(&n, CHORDS, &SampleStream::new(1), &t).unwrap();
        let rot = rotundity_equivalence_check(&n, CHORDS, &SampleStream::new(1), &t).unwrap();
        let sub = test_strictly_sub_convex(
            &gaugekit::certify::HomogeneousFunctionSpec::from_norm(&n),
            CHORDS,
            &SampleStream::new(1),
            &t,
        )
        .unwrap();
        // brute-force scan with an independent lp formula
        let st = SampleStream::new(1).substream("chords");
        let mut worst: f64 = 0.0;
        let mut scanned = 0;
        for k in 0..CHORDS as u64 {
            let mut rng = st.rng_at(k);
            let x = point(&mut rng, 2, 1.0, 1.0);
            let y = point(&mut rng, 2, 1.0, 1.0);
            let (x, y) = (
                x.scale(1.0 / lp_value(&x, p)),
                y.scale(1.0 / lp_value(&y, p)),
            );
            if x.distance(&y) < 1e-3 {
                continue;
            }
            scanned += 1;
            worst = worst.max(lp_value(&x.midpoint(&y), p));
        }
        let good = mid.holds() == Some(true)
            && rot.rotund == Some(true)
            && sub.holds() == Some(true)
            && worst < 1.0
            && scanned >= CHORDS * 9 / 10;
        ok &= good;
        lines.push(format!(
            "lp({p}) {:?}/{:?}, max N(mid) {worst:.6} over {scanned} chords",
            mid.status, sub.status
        ));
    }
    let flat: Vec<(String, N, fn(&Vector) -> f64)> = vec![
        ("lp(1)".into(), N::lp(2, 1.0).unwrap(), |x| lp_value(x, 1.0)),
        ("lp(inf)".into(), N::lp(2, f64::INFINITY).unwrap(), |x| {
            lp_value(x, f64::INFINITY)
        }),
        ("hexagon".into(), fixtures::hexagon_norm(), hexagon_value),
    ];
    for (name, n, oracle) in flat {
        let mid = midpoint_criterion(&n, CHORDS, &SampleStream::new(1), &t).unwrap();
        let Some(w) = mid.witness.clone() else {
            ok = false;
            lines.push(format!("{name}: {:?} without witness", mid.status));
            continue;
        };
        let (x, y) = (&w.points[0], &w.points[1]);
        let gap = (oracle(&x.midpoint(y)) - 1.0).abs();
        let on_sphere = (oracle(x) - 1.0).abs() <= 1e-12 && (oracle(y) - 1.0).abs() <= 1e-12;
        let good =
            mid.status == Status::Falsified && gap <= 1e-12 && on_sphere && x.distance(y) > 1e-3;
        ok &= good;
        lines.push(format!(
            "{name} Falsified at {x}, {y} with |N(mid)-1| = {gap:.1e}"
        ));
    }
    Outcome {
        ok,
        detail: lines.join("; "),
    }
}

// 4 -------------------------------------------------------------------------

fn asymmetry_growth() -> Outcome {
    let mut ok = true;
    let mut parts = Vec::new();
    for d in [4usize, 16, 64] {
        let n = N::truncated_phi(d).unwrap();
        let a = asymmetry_constant(
            &n,
            10_000,
            &SampleStream::new(1),
            &ToleranceProfile::default(),
        )
        .unwrap();
        let target = 2.0 * d as f64 + 1.0;
        // independent ratio at the last basis vector: (1 + c) / (1 - c), c = d / (d + 1)
        let c = d as f64 / (d as f64 + 1.0);
        let oracle = (1.0 + c) / (1.0 - c);
        let good = (a.estimate - target).abs() <= 1e-6 && (oracle - target).abs() <= 1e-9;
        ok &= good;
        parts.push(format!("d={d}: {:.9} (target {target})", a.estimate));
    }
    Outcome {
        ok,
        detail: parts.join(", "),
    }
}

// 5 -------------------------------------------------------------------------

fn counterexample_witnesses() -> Outcome {
    let t = ToleranceProfile::default();
    let mut parts = Vec::new();
    let mut ok = true;

    // (a)
    let g = GaugeEvaluator::new(fixtures::disk_union_ray_set(), t).unwrap();
    let at = v(&[2.0, 0.0]);
    let p = g.gauge_value(&at).unwrap();
    let probe = g.continuity_probe(&at, 12, &SampleStream::new(1)).unwrap();
    let along = [1e-3, 1e-5, 1e-7, 1e-9]
        .iter()
        .map(|d| g.gauge_value(&v(&[2.0, *d])).unwrap().to_f64())
        .fold(f64::INFINITY, f64::min);
    let a = p == ExtendedReal::Finite(0.0)
        && probe.limsup >= 2.0 - 1e-6
        && !probe.usc_ok
        && along >= 2.0 - 1e-6;
    ok &= a;
    parts.push(format!(
        "(a) p(2,0) = {p}, limsup {:.9}, min p(2,d) {along:.9}",
        probe.limsup
    ));

    // (b)
    let f = fixtures::sqrt2_max_function();
    let sub = test_strictly_sub_convex(&f, 100_000, &SampleStream::new(1), &t).unwrap();
    let b = match &sub.witness {
        Some(w) if sub.status == Status::Falsified => {
            let m = &w.points[2];
            let off = (m[1] - m[0].abs()).abs();
            parts.push(format!(
                "(b) level {:?}, midpoint {m} off the ray by {off:.1e}",
                w.get("level")
            ));
            w.get("level") == Some(0.0) && off <= 1e-9
        }
        _ => {
            parts.push(format!("(b) {:?}", sub.status));
            false
        }
    };
    ok &= b;

    // (c)
    let rec = cone_equivalence_harness(
        &fixtures::open_cone_euclidean_function(),
        &HARNESS_ALPHAS,
        100_000,
        &SampleStream::new(1),
        &t,
    )
    .unwrap();
    let c = rec.cond2.holds() == Some(true) && rec.cond3.holds() == Some(false);
    ok &= c;
    parts.push(format!(
        "(c) cond2 {:?}, cond3 {:?}",
        rec.cond2.status, rec.cond3.status
    ));

    // (d)
    let inner = fixtures::product_barrier_function();
    let phi = fixtures::saturating_map();
    let gfn = compose(&inner, &phi);
    let comp = composition_check(&inner, &phi, true, 100_000, &SampleStream::new(1), &t).unwrap();
    let at1 =
        strictly_sub_convex_at_levels(&gfn, &[1.0], 100_000, &SampleStream::new(1), &t).unwrap();
    let d = match &at1.witness {
        Some(w) if at1.status == Status::Falsified && comp.status == Status::Falsified => {
            let (x, y) = (&w.points[0], &w.points[1]);
            let edge = |q: &Vector| (q.norm_inf() - 1.0).abs() <= 1e-9;
            let same_side =
                (0..2).any(|i| (x[i] - y[i]).abs() <= 1e-9 && (x[i].abs() - 1.0).abs() <= 1e-9);
            parts.push(format!("(d) chord {x} to {y}"));
            edge(x) && edge(y) && same_side
        }
        _ => {
            parts.push(format!("(d) {:?} / {:?}", at1.status, comp.status));
            false
        }
    };
    ok &= d;
    Outcome {
        ok,
        detail: parts.join("; "),
    }
}

// 6 -------------------------------------------------------------------------

fn invariant_suites() -> Outcome {
    const N_SAMPLES: usize = 10_000;
    let mut failures = Vec::new();
    let mut checks = 0;
    let mut per: Vec<String> = Vec::new();
    for (name, suite) in all_suites() {
        let start = Instant::now();
        for seed in SEEDS {
            let s = suite(seed, N_SAMPLES);
            checks += s.checks;
            if !s.passed() {
                failures.push(format!("{name} seed {seed}: {:?}", s.violations));
            }
        }
        per.push(format!("{name} {:.1}s", start.elapsed().as_secs_f64()));
    }
    Outcome {
        ok: failures.is_empty(),
        detail: if failures.is_empty() {
            format!(
                "{} suites x {} seeds, {checks} checks, 0 violations [{}]",
                all_suites().len(),
                SEEDS.len(),
                per.join(", ")
            )
        } else {
            failures.join("; ")
        },
    }
}

fn main() {
    let mut all = true;
    all &= run(
        "1",
        "ellipsoid gauge accuracy",
        Duration::from_secs(5),
        ellipsoid_gauge,
    );
    let mut reports = Vec::new();
    all &= run(
        "2",
        "characterisation agreement",
        Duration::from_secs(120),
        || harness_agreement(&mut reports),
    );
    all &= run(
        "3",
        "rotundity classification",
        Duration::from_secs(60),
        rotundity_classification,
    );
    all &= run(
        "4",
        "asymmetry growth",
        Duration::from_secs(60),
        asymmetry_growth,
    );
    all &= run(
        "5",
        "counterexample witnesses",
        Duration::from_secs(30),
        counterexample_witnesses,
    );
    all &= run(
        "6",
        "invariant suites",
        Duration::from_secs(180),
        invariant_suites,
    );
    all &= run("7", "report determinism", Duration::from_secs(120), || {
        determinism(&reports)
    });
    if !all {
        std::process::exit(1);
    }
}
