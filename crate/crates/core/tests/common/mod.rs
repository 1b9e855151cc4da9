//! Seeded invariant suites shared by the acceptance target and the
//! integration tests. Every expected value is computed here, independently
//! of the library code under test.

#![allow(dead_code)]

use gaugekit::certify::{
    midpoint_criterion, power_transform, taxonomy, test_convex, test_quasi_convex,
    test_strictly_quasi_convex, test_strictly_sub_convex, test_sub_convex,
    HomogeneousFunctionSpec as F,
};
use gaugekit::fixtures;
use gaugekit::gauge::GaugeEvaluator;
use gaugekit::norms::{asymmetry_constant, MinkowskiNormSpec as N};
use gaugekit::sets::{star_hull, SetOracle};
use gaugekit::{SampleStream, Status, ToleranceProfile, Vector};
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

pub fn v(c: &[f64]) -> Vector {
    Vector::from_slice(c).unwrap()
}

pub fn tol() -> ToleranceProfile {
    ToleranceProfile::default()
}

/// Gaussian direction with log-uniform radius in `[lo, hi]`.
pub fn point(rng: &mut impl Rng, dim: usize, lo: f64, hi: f64) -> Vector {
    let g: Vec<f64> = (0..dim).map(|_| StandardNormal.sample(rng)).collect();
    let n = g.iter().map(|x| x * x).sum::<f64>().sqrt().max(1e-300);
    let r = (lo.ln() + rng.random::<f64>() * (hi.ln() - lo.ln())).exp();
    Vector::new(g.into_iter().map(|x| x / n * r).collect()).unwrap()
}

#[derive(Debug)]
pub struct Suite {
    pub name: &'static str,
    pub checks: usize,
    pub violations: Vec<String>,
}

impl Suite {
    fn new(name: &'static str) -> Self {
        Suite {
            name,
            checks: 0,
            violations: Vec::new(),
        }
    }

    fn check(&mut self, ok: bool, detail: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok && self.violations.len() < 8 {
            self.violations.push(detail());
        }
    }

    pub fn passed(&self) -> bool {
        self.violations.is_empty() && self.checks > 0
    }
}

pub fn hexagon() -> N {
    fixtures::hexagon_norm()
}

pub fn gauge_sets() -> Vec<SetOracle> {
    vec![
        SetOracle::ball(2, 1.0, true),
        SetOracle::ellipsoid(&[1.0, 2.0]).unwrap(),
        SetOracle::cube(3, 0.5, false),
        fixtures::disk_union_ray_set(),
        hexagon().unit_ball(),
        fixtures::notched_square_set(),
        N::truncated_phi(4).unwrap().unit_ball(),
    ]
}

pub fn sample_norms() -> Vec<N> {
    vec![
        N::lp(2, 1.0).unwrap(),
        N::lp(3, 1.5).unwrap(),
        N::lp(2, 2.0).unwrap(),
        N::lp(2, 3.0).unwrap(),
        N::lp(3, f64::INFINITY).unwrap(),
        N::ellipsoid_axes(&[1.0, 2.0]).unwrap(),
        fixtures::funk_disk_norm(),
        N::truncated_phi(4).unwrap(),
        N::truncated_phi(16).unwrap(),
        hexagon(),
    ]
}

/// Non-negative functions with declared degree on the whole space.
pub fn homogeneous_functions() -> Vec<F> {
    let mut out: Vec<F> = sample_norms().iter().map(F::from_norm).collect();
    out.push(fixtures::sqrt2_max_function());
    out.push(
        F::from_expression("x1^2 + 2*x2^2", 2)
            .unwrap()
            .with_degree(2.0)
            .with_continuity(true),
    );
    out.push(
        F::from_expression("sqrt(abs(x1*x2))", 2)
            .unwrap()
            .with_degree(1.0)
            .with_continuity(true),
    );
    out
}

/// Functions for the taxonomy consistency suites, including non-homogeneous
/// and discontinuous ones.
pub fn taxonomy_functions() -> Vec<F> {
    let mut out = homogeneous_functions();
    out.push(fixtures::step_function());
    out.push(fixtures::sqrt2_min_function());
    out.push(fixtures::cone_ratio_function());
    out.push(fixtures::square_in_disk_function());
    out.push(F::new("bump", 1, |x| (-x[0] * x[0]).exp()));
    out.push(F::from_expression("sqrt(abs(x1))", 1).unwrap());
    out
}

/// `|p(t x) - t p(x)| <= eps_eq (1 + t p(x))` for `t` in {0.5, 2, 10}.
pub fn gauge_homogeneity(seed: u64, n: usize) -> Suite {
    let mut s = Suite::new("gauge positive homogeneity");
    let t = tol();
    for set in gauge_sets() {
        let g = GaugeEvaluator::new(set.clone(), t).unwrap();
        let st = SampleStream::new(seed).substream(set.name());
        for k in 0..n as u64 {
            let x = point(&mut st.rng_at(k), set.dim(), 1e-2, 1e2);
            let px = g.gauge_value(&x).unwrap().to_f64();
            for m in [0.5, 2.0, 10.0] {
                let pm = g.gauge_value(&x.scale(m)).unwrap().to_f64();
                s.check((pm - m * px).abs() <= t.eps_eq * (1.0 + m * px), || {
                    format!(
                        "{}: p({m} x) = {pm}, {m} p(x) = {} at {x}",
                        set.name(),
                        m * px
                    )
                });
            }
        }
    }
    s
}

/// `p_B <= p_A + eps_eq` when `A = B n C`.
pub fn gauge_antitonicity(seed: u64, n: usize) -> Suite {
    let mut s = Suite::new("gauge antitonicity");
    let t = tol();
    let pairs = [
        (SetOracle::ball(2, 1.0, true), SetOracle::cube(2, 0.8, true)),
        (
            SetOracle::ellipsoid(&[1.0, 2.0]).unwrap(),
            SetOracle::ball(2, 1.5, true),
        ),
        (
            fixtures::disk_union_ray_set(),
            SetOracle::ball(2, 0.5, false),
        ),
        (
            hexagon().unit_ball(),
            SetOracle::ellipsoid(&[2.0, 0.7]).unwrap(),
        ),
        (SetOracle::cube(3, 1.0, true), SetOracle::ball(3, 1.2, true)),
    ];
    for (b, c) in pairs {
        let a = b.intersection(&c).unwrap();
        let (ga, gb) = (
            GaugeEvaluator::new(a.clone(), t).unwrap(),
            GaugeEvaluator::new(b.clone(), t).unwrap(),
        );
        let st = SampleStream::new(seed).substream(a.name());
        for k in 0..n as u64 {
            let x = point(&mut st.rng_at(k), b.dim(), 1e-2, 1e2);
            let (pa, pb) = (
                ga.gauge_value(&x).unwrap().to_f64(),
                gb.gauge_value(&x).unwrap().to_f64(),
            );
            s.check(pb <= pa + t.eps_eq * (1.0 + pa), || {
                format!("{}: p_B = {pb} > p_A = {pa} at {x}", a.name())
            });
        }
    }
    s
}

/// Gauge of `S` equals the gauge of its star-hull wrapper; for the annulus
/// `1 <= |x| <= 2` both equal `|x| / 2`.
/// `n` points in total, shared evenly between the four sets.
pub fn gauge_hull_invariance(seed: u64, n: usize) -> Suite {
    let mut s = Suite::new("gauge hull invariance");
    let t = tol();
    let annulus = SetOracle::annulus(2, 1.0, 2.0);
    let gh = GaugeEvaluator::new(star_hull(&annulus, t), t).unwrap();
    let share = (n as u64).div_ceil(4);
    let st = SampleStream::new(seed).substream("annulus");
    for k in 0..share {
        let x = point(&mut st.rng_at(k), 2, 1e-2, 1e2);
        let p = gh.gauge_value(&x).unwrap().to_f64();
        let exact = x.norm() / 2.0;
        s.check((p - exact).abs() <= t.eps_eq * (1.0 + exact), || {
            format!("annulus hull: {p} vs {exact} at {x}")
        });
    }
    for set in [
        SetOracle::ellipsoid(&[1.0, 2.0]).unwrap(),
        hexagon().unit_ball(),
        fixtures::disk_union_ray_set(),
    ] {
        let g = GaugeEvaluator::new(set.clone(), t).unwrap();
        let gh = GaugeEvaluator::new(star_hull(&set, t), t).unwrap();
        let st = SampleStream::new(seed).substream(set.name());
        for k in 0..share {
            let x = point(&mut st.rng_at(k), 2, 1e-2, 1e2);
            let (p, ph) = (
                g.gauge_value(&x).unwrap().to_f64(),
                gh.gauge_value(&x).unwrap().to_f64(),
            );
            s.check((p - ph).abs() <= t.eps_eq * (1.0 + p), || {
                format!("{}: p_S = {p}, p_hull = {ph} at {x}", set.name())
            });
        }
    }
    s
}

fn degree_functions() -> Vec<(F, f64)> {
    vec![
        (F::from_norm(&N::lp(2, 2.0).unwrap()), 1.0),
        (F::from_norm(&hexagon()), 1.0),
        (F::from_norm(&fixtures::funk_disk_norm()), 1.0),
        (F::from_norm(&N::truncated_phi(4).unwrap()), 1.0),
        (fixtures::sqrt2_max_function(), 1.0),
        (fixtures::cone_ratio_function(), 1.0),
        (
            F::from_expression("x1^2 + 2*x2^2", 2)
                .unwrap()
                .with_degree(2.0),
            2.0,
        ),
        (
            F::from_expression("abs(x1)^3 + abs(x2)^3", 2)
                .unwrap()
                .with_degree(3.0),
            3.0,
        ),
    ]
}

/// `S_r(f)` and `r^(1/alpha) S_1(f)` agree at sampled points away from the
/// level set `f = r`.
pub fn sublevel_scaling(seed: u64, n: usize) -> Suite {
    let mut s = Suite::new("sublevel scaling");
    for (f, alpha) in degree_functions() {
        let st = SampleStream::new(seed).substream(f.name());
        let one = f.sublevel(1.0, false);
        for (j, r) in [0.25, 2.0, 7.0].into_iter().enumerate() {
            let sr = f.sublevel(r, false);
            let scaled = one.dilate(r.powf(1.0 / alpha)).unwrap();
            for k in 0..n as u64 / 3 + 1 {
                let mut rng = st.rng_at(k * 3 + j as u64);
                let x = point(&mut rng, f.dim(), 1e-2, 1e1);
                if let Ok(fx) = f.eval(&x) {
                    if (fx - r).abs() <= 1e-9 * r {
                        continue;
                    }
                }
                let (a, b) = (sr.contains(&x), scaled.contains(&x));
                s.check(a == b, || {
                    format!("{}: S_{r} says {a}, dilation says {b} at {x}", f.name())
                });
            }
        }
    }
    s
}

/// `N(0) = 0`, `N(x) <= 2 |x|_sym`, and the two Lipschitz-type bounds on
/// `|N(x) - N(y)|`, with `|x|_sym = (N(x) + N(-x)) / 2`.
pub fn norm_inequalities(seed: u64, n: usize) -> Suite {
    let mut s = Suite::new("Minkowski-norm inequalities");
    let eps = tol().eps_eq;
    for nm in sample_norms() {
        let ev = |x: &Vector| nm.evaluate(x).unwrap();
        let sym = |x: &Vector| (ev(x) + ev(&x.scale(-1.0))) / 2.0;
        s.check(ev(&Vector::zeros(nm.dim())) == 0.0, || {
            format!("{}: N(0) != 0", nm.name())
        });
        let st = SampleStream::new(seed).substream(nm.name());
        for k in 0..n as u64 {
            let mut rng = st.rng_at(k);
            let x = point(&mut rng, nm.dim(), 1e-2, 1e2);
            let y = point(&mut rng, nm.dim(), 1e-2, 1e2);
            let (nx, ny) = (ev(&x), ev(&y));
            let scale = 1.0 + nx.abs() + ny.abs();
            s.check(nx <= 2.0 * sym(&x) + eps * scale, || {
                format!("{}: N(x) > 2|x| at {x}", nm.name())
            });
            let d = &x - &y;
            let lhs = (nx - ny).abs();
            let bound = ev(&d).max(ev(&d.scale(-1.0)));
            s.check(lhs <= bound + eps * scale, || {
                format!("{}: |N(x)-N(y)| = {lhs} > {bound}", nm.name())
            });
            s.check(lhs <= 2.0 * sym(&d) + eps * scale, || {
                format!("{}: Lipschitz bound fails at {x}, {y}", nm.name())
            });
        }
    }
    for nm in [
        N::lp(2, 2.0).unwrap(),
        N::lp(3, 1.0).unwrap(),
        N::ellipsoid_axes(&[1.0, 3.0]).unwrap(),
        hexagon(),
    ] {
        let a = asymmetry_constant(&nm, n, &SampleStream::new(seed), &tol()).unwrap();
        s.check(
            a.estimate == 1.0 || (nm.name() == "hexagon" && (a.estimate - 1.0).abs() <= 1e-12),
            || {
                format!(
                    "{}: asymmetry {} for a symmetric norm",
                    nm.name(),
                    a.estimate
                )
            },
        );
    }
    for d in [4usize, 16] {
        let phi = N::truncated_phi(d).unwrap();
        let bound = d as f64 / (d as f64 + 1.0);
        let st = SampleStream::new(seed).substream("phi");
        let coef = |k: usize| (k as f64 + 1.0) / (k as f64 + 2.0);
        let mut best: f64 = 0.0;
        for k in 0..n as u64 {
            let x = point(&mut st.rng_at(k), d, 1e-1, 1e1);
            let l1: f64 = x.as_slice().iter().map(|c| c.abs()).sum();
            let lin: f64 = x
                .as_slice()
                .iter()
                .enumerate()
                .map(|(i, c)| coef(i) * c)
                .sum();
            s.check(lin / l1 <= bound + 1e-12, || {
                format!("phi_{d}(x)/|x|_1 = {} > {bound}", lin / l1)
            });
            s.check(
                (phi.evaluate(&x).unwrap() - (l1 + lin)).abs() <= 1e-12 * l1,
                || format!("truncated_phi({d}) formula at {x}"),
            );
            best = best.max(lin / l1);
        }
        let e = Vector::basis(d, d - 1);
        let at_last = coef(d - 1);
        s.check(
            (at_last - bound).abs() <= 1e-15 && best <= at_last + 1e-12,
            || format!("phi_{d} sup {best}"),
        );
        s.check(
            (phi.evaluate(&e).unwrap() - (1.0 + at_last)).abs() <= 1e-15,
            || format!("phi_{d} at e_(d-1)"),
        );
    }
    s
}

/// Sub-convex and quasi-convex verdicts never contradict; on degree-1
/// non-negative functions the convex verdict matches as well.
pub fn sub_quasi_consistency(seed: u64, n: usize) -> Suite {
    let mut s = Suite::new("sub <=> quasi consistency");
    let st = SampleStream::new(seed);
    let t = tol();
    for f in taxonomy_functions() {
        let sub = test_sub_convex(&f, n, &st, &t).unwrap().holds();
        let quasi = test_quasi_convex(&f, n, &st, &t).unwrap().holds();
        s.check(
            !matches!(
                (sub, quasi),
                (Some(true), Some(false)) | (Some(false), Some(true))
            ),
            || format!("{}: sub {sub:?} vs quasi {quasi:?}", f.name()),
        );
        if f.domain().is_whole() && f.degree() == Some(1.0) && power_transform(&f, 1.0).is_ok() {
            let cvx = test_convex(&f, n, &st, &t).unwrap().holds();
            s.check(cvx == sub, || {
                format!("{}: convex {cvx:?} vs sub {sub:?}", f.name())
            });
        }
    }
    s
}

/// Strict quasi- and strict sub-convexity verdicts are unchanged by `f^a`.
pub fn power_invariance(seed: u64, n: usize) -> Suite {
    let mut s = Suite::new("power invariance");
    let st = SampleStream::new(seed);
    let t = tol();
    for f in homogeneous_functions() {
        let q = test_strictly_quasi_convex(&f, n, &st, &t).unwrap().status;
        let sub = test_strictly_sub_convex(&f, n, &st, &t).unwrap().status;
        for a in [0.5, 2.0, 3.0] {
            let g = power_transform(&f, a).unwrap();
            let qa = test_strictly_quasi_convex(&g, n, &st, &t).unwrap().status;
            let suba = test_strictly_sub_convex(&g, n, &st, &t).unwrap().status;
            s.check(q == qa, || {
                format!("{}: strictly quasi {q:?} vs {qa:?} for power {a}", f.name())
            });
            s.check(sub == suba, || {
                format!(
                    "{}: strictly sub {sub:?} vs {suba:?} for power {a}",
                    f.name()
                )
            });
        }
    }
    s
}

/// No stronger property Supported with a weaker one Falsified.
pub fn implication_chain(seed: u64, n: usize) -> Suite {
    let mut s = Suite::new("implication chain");
    let st = SampleStream::new(seed);
    for f in taxonomy_functions() {
        let r = taxonomy(&f, n, &st, &tol()).unwrap();
        let bad = r.implication_violations();
        s.check(bad.is_empty(), || format!("{}: {bad:?}", f.name()));
    }
    s
}

/// Supported strict quasi-convexity implies `f >= eps_strict` on sampled
/// unit directions.
pub fn zero_set_property(seed: u64, n: usize) -> Suite {
    let mut s = Suite::new("zero-set property");
    let st = SampleStream::new(seed);
    let t = tol();
    for f in homogeneous_functions() {
        let v = test_strictly_quasi_convex(&f, n, &st, &t).unwrap();
        if v.holds() != Some(true) {
            continue;
        }
        let sub = st.substream("zero").substream(f.name());
        for k in 0..n as u64 {
            let u = point(&mut sub.rng_at(k), f.dim(), 1.0, 1.0);
            let val = f.eval(&u).unwrap();
            s.check(val >= t.eps_strict, || {
                format!("{}: f = {val} at unit {u}", f.name())
            });
        }
    }
    s
}

/// Supported midpoint criterion implies `N < 1 - eps_strict` at interior
/// chord points between sampled unit vectors.
pub fn midpoint_all_t(seed: u64, n: usize) -> Suite {
    let mut s = Suite::new("midpoint => every chord point");
    let t = tol();
    for nm in sample_norms() {
        let m = midpoint_criterion(&nm, n.min(2000), &SampleStream::new(seed), &t).unwrap();
        if m.holds() != Some(true) {
            continue;
        }
        let st = SampleStream::new(seed)
            .substream("chords")
            .substream(nm.name());
        for k in 0..n as u64 {
            let mut rng = st.rng_at(k);
            let x = point(&mut rng, nm.dim(), 1.0, 1.0);
            let y = point(&mut rng, nm.dim(), 1.0, 1.0);
            let (x, y) = (
                x.scale(1.0 / nm.evaluate(&x).unwrap()),
                y.scale(1.0 / nm.evaluate(&y).unwrap()),
            );
            if x.distance(&y) < 0.05 {
                continue;
            }
            let tt = 0.1 + 0.8 * rng.random::<f64>();
            let val = nm.evaluate(&x.lerp(&y, tt)).unwrap();
            s.check(val < 1.0 - t.eps_strict, || {
                format!("{}: N = {val} at t = {tt} on {x}, {y}", nm.name())
            });
        }
    }
    s
}

pub fn all_suites() -> Vec<(&'static str, fn(u64, usize) -> Suite)> {
    vec![
        ("gauge_homogeneity", gauge_homogeneity),
        ("gauge_antitonicity", gauge_antitonicity),
        ("gauge_hull_invariance", gauge_hull_invariance),
        ("sublevel_scaling", sublevel_scaling),
        ("norm_inequalities", norm_inequalities),
        ("sub_quasi_consistency", sub_quasi_consistency),
        ("power_invariance", power_invariance),
        ("implication_chain", implication_chain),
        ("zero_set_property", zero_set_property),
        ("midpoint_all_t", midpoint_all_t),
    ]
}

/// Degree-1 non-negative whole-space subjects of the corpus.
pub fn whole_space_subjects() -> Vec<(String, F, Option<N>)> {
    fixtures::list_fixtures()
        .into_iter()
        .filter_map(|fx| {
            let f = fx.subject.as_whole_space_function()?;
            let norm = match &fx.subject {
                fixtures::Subject::Norm(n) => Some(n.clone()),
                _ => None,
            };
            Some((fx.name, f, norm))
        })
        .collect()
}

pub fn status_name(s: Status) -> &'static str {
    match s {
        Status::Proven => "Proven",
        Status::Supported => "Supported",
        Status::Falsified => "Falsified",
        Status::Inconclusive => "Inconclusive",
    }
}
