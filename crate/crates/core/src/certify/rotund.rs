//! Rotundity of a Minkowski norm: the midpoint criterion and the four
//! equivalent chord properties on shared unit-sphere pairs.

use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::sample::distinct;
use crate::base::{
    log_uniform, signed_basis, sparse_lattice, unit_direction, SampleStream, Status, Tally,
    ToleranceProfile, Vector, Verdict, Witness,
};
use crate::error::{Error, Result};
use crate::norms::{MinkowskiNormSpec, NormFamily};

/// Vectors with entries in {-1, 0, 1} and at most two nonzeros among the
/// first four coordinates, plus polyhedral vertices.
fn scan_vectors(n: &MinkowskiNormSpec) -> Vec<Vector> {
    let dim = n.dim();
    let m = dim.min(4);
    let mut out = signed_basis(dim);
    for i in 0..m {
        for j in i + 1..m {
            for (a, b) in [(1.0, 1.0), (1.0, -1.0), (-1.0, 1.0), (-1.0, -1.0)] {
                let mut c = vec![0.0; dim];
                c[i] = a;
                c[j] = b;
                out.push(Vector::new(c).expect("finite lattice vector"));
            }
        }
    }
    if let NormFamily::Polyhedral { vertices } = n.family() {
        out.extend(vertices.iter().cloned());
    }
    out
}

fn unit(n: &MinkowskiNormSpec, x: &Vector, tol: &ToleranceProfile) -> Result<Vector> {
    let v = n.evaluate(x)?;
    if !(v >= tol.eps_strict) {
        return Err(Error::PointSeparation {
            direction: x.clone(),
        });
    }
    Ok(x.scale(1.0 / v))
}

/// Unit-sphere pairs: every pair of scan vectors first, then alternating
/// random and lattice pairs.
struct PairSource<'a> {
    n: &'a MinkowskiNormSpec,
    scan: Vec<Vector>,
    stream: SampleStream,
}

impl<'a> PairSource<'a> {
    fn new(n: &'a MinkowskiNormSpec, stream: SampleStream) -> Self {
        PairSource {
            n,
            scan: scan_vectors(n),
            stream,
        }
    }

    fn scan_len(&self) -> usize {
        self.scan.len() * (self.scan.len() - 1) / 2
    }

    fn raw(&self, k: usize, rng: &mut ChaCha8Rng) -> (Vector, Vector) {
        if k < self.scan_len() {
            // k-th pair (i, j), i < j, in row order
            let mut k = k;
            let len = self.scan.len();
            for i in 0..len {
                let row = len - 1 - i;
                if k < row {
                    return (self.scan[i].clone(), self.scan[i + 1 + k].clone());
                }
                k -= row;
            }
            unreachable!("pair index within scan range");
        }
        let dim = self.n.dim();
        if k.is_multiple_of(2) {
            (unit_direction(rng, dim), unit_direction(rng, dim))
        } else {
            (sparse_lattice(rng, dim), sparse_lattice(rng, dim))
        }
    }

    fn pair(&self, k: usize, tol: &ToleranceProfile) -> Result<(Vector, Vector, ChaCha8Rng)> {
        let mut rng = self.stream.rng_at(k as u64);
        let (x, y) = self.raw(k, &mut rng);
        Ok((unit(self.n, &x, tol)?, unit(self.n, &y, tol)?, rng))
    }
}

/// `N((x+y)/2) < 1` for distinct unit vectors `x, y`.
pub fn midpoint_criterion(
    n: &MinkowskiNormSpec,
    n_pairs: usize,
    stream: &SampleStream,
    tol: &ToleranceProfile,
) -> Result<Verdict> {
    if n_pairs == 0 {
        return Err(Error::Input("n_pairs must be at least 1".into()));
    }
    let src = PairSource::new(n, stream.substream("midpoint"));
    let total = src.scan_len() + n_pairs;
    let mut tally = Tally::new();
    for k in 0..total {
        let (x, y, _) = src.pair(k, tol)?;
        if !distinct(&x, &y, tol) {
            tally.skip();
            continue;
        }
        let m = n.evaluate(&x.midpoint(&y))?;
        let slack = 1.0 - m;
        if m >= 1.0 - tol.eps_eq {
            let w = Witness::new("midpoint_criterion")
                .point(x)
                .point(y)
                .scalar("N(mid)", m)
                .scalar("gap", (m - 1.0).abs());
            tally.fail(w, slack);
            break;
        }
        if slack > tol.eps_strict {
            tally.observe(slack);
        } else {
            tally.skip();
        }
    }
    let analytic = n.analytic_class().map(|c| c.rotund);
    let failed = tally.failed();
    let v = tally.finish(Status::Supported);
    Ok(match (analytic, failed) {
        (Some(true), false) => Verdict::proven(v.effort).with_margin(v.margin),
        (Some(false), false) => Verdict::inconclusive(
            "family is not rotund but no flat chord was sampled",
            v.effort,
        ),
        _ => v,
    })
}

/// Per-pair evidence for one property.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Evidence {
    Strict,
    Equal,
    Ambiguous,
}

fn classify(slack: f64, scale: f64, tol: &ToleranceProfile) -> Evidence {
    if slack > tol.eps_strict * scale {
        Evidence::Strict
    } else if slack <= tol.eps_eq * scale {
        Evidence::Equal
    } else {
        Evidence::Ambiguous
    }
}

/// Counts of pairs on which a property held strictly or failed.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct PropertyTally {
    pub strict: u64,
    pub equal: u64,
    pub ambiguous: u64,
}

impl PropertyTally {
    fn add(&mut self, e: Evidence) {
        match e {
            Evidence::Strict => self.strict += 1,
            Evidence::Equal => self.equal += 1,
            Evidence::Ambiguous => self.ambiguous += 1,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RotundityCheck {
    /// Supported when the four properties agree on every pair, Falsified
    /// with the disagreeing pair otherwise.
    pub verdict: Verdict,
    /// Common classification; `None` on disagreement or without evidence.
    pub rotund: Option<bool>,
    /// Tallies for: strict subadditivity off rays, midpoint, some chord
    /// point, every chord point.
    pub properties: [PropertyTally; 4],
    /// First pair on which all four properties failed.
    pub flat_chord: Option<Witness>,
}

const SOME_S: [f64; 3] = [0.25, 0.5, 0.75];

fn collinear(x: &Vector, y: &Vector) -> bool {
    x.dot(y).abs() >= (1.0 - 1e-12) * x.norm() * y.norm()
}

/// Evaluates the four rotundity properties on shared unit pairs and checks
/// that they classify every pair the same way.
pub fn rotundity_equivalence_check(
    n: &MinkowskiNormSpec,
    n_samples: usize,
    stream: &SampleStream,
    tol: &ToleranceProfile,
) -> Result<RotundityCheck> {
    if n_samples == 0 {
        return Err(Error::Input("n_samples must be at least 1".into()));
    }
    let src = PairSource::new(n, stream.substream("rotundity"));
    let total = src.scan_len() + n_samples;
    let mut props: [PropertyTally; 4] = Default::default();
    let mut effort = 0u64;
    let mut flat_chord = None;
    let all_t: Vec<f64> = (1..10).map(|i| i as f64 / 10.0).collect();

    for k in 0..total {
        let (x, y, mut rng) = src.pair(k, tol)?;
        if !distinct(&x, &y, tol) {
            continue;
        }
        let chord = |t: f64| n.evaluate(&x.lerp(&y, t)).map(|v| 1.0 - v);

        let p1 = if collinear(&x, &y) {
            None
        } else {
            let a = log_uniform(&mut rng, 0.5, 2.0);
            let b = log_uniform(&mut rng, 0.5, 2.0);
            let lhs = n.evaluate(&(&x.scale(a) + &y.scale(b)))?;
            Some(classify(a + b - lhs, a + b, tol))
        };
        let p2 = classify(chord(0.5)?, 1.0, tol);
        let some: Vec<Evidence> = SOME_S
            .iter()
            .map(|s| chord(*s).map(|v| classify(v, 1.0, tol)))
            .collect::<Result<_>>()?;
        let p3 = if some.contains(&Evidence::Strict) {
            Evidence::Strict
        } else if some.iter().all(|e| *e == Evidence::Equal) {
            Evidence::Equal
        } else {
            Evidence::Ambiguous
        };
        let every: Vec<Evidence> = all_t
            .iter()
            .map(|t| chord(*t).map(|v| classify(v, 1.0, tol)))
            .collect::<Result<_>>()?;
        let p4 = if every.iter().all(|e| *e == Evidence::Strict) {
            Evidence::Strict
        } else if every.contains(&Evidence::Equal) {
            Evidence::Equal
        } else {
            Evidence::Ambiguous
        };

        let evidence = [p1, Some(p2), Some(p3), Some(p4)];
        for (tally, e) in props.iter_mut().zip(&evidence) {
            if let Some(e) = e {
                tally.add(*e);
            }
        }
        effort += 1;
        let seen: Vec<Evidence> = evidence.iter().flatten().copied().collect();
        let strict = seen.contains(&Evidence::Strict);
        let equal = seen.contains(&Evidence::Equal);
        let pair_witness = |label: &str| {
            Witness::new(label)
                .point(x.clone())
                .point(y.clone())
                .scalar("N(mid)", 1.0 - chord(0.5).unwrap_or(f64::NAN))
        };
        if strict && equal {
            let w = pair_witness("rotundity_equivalence");
            return Ok(RotundityCheck {
                verdict: Verdict::falsified(w, effort).with_note(
                    "rotundity properties disagree on one pair (likely a tolerance artifact)",
                ),
                rotund: None,
                properties: props,
                flat_chord,
            });
        }
        if equal && !strict && flat_chord.is_none() {
            flat_chord = Some(pair_witness("flat_chord"));
        }
    }

    let any_equal = props.iter().any(|p| p.equal > 0);
    let any_strict = props.iter().any(|p| p.strict > 0);
    let rotund = match (any_equal, any_strict) {
        (true, _) => Some(false),
        (false, true) => Some(true),
        (false, false) => None,
    };
    let verdict = if rotund.is_some() {
        Verdict::supported(effort).with_note(if rotund == Some(true) {
            "rotund: all four properties hold on every pair"
        } else {
            "not rotund: all four properties fail on a shared pair"
        })
    } else {
        Verdict::inconclusive("no unambiguous pair", effort)
    };
    Ok(RotundityCheck {
        verdict,
        rotund,
        properties: props,
        flat_chord,
    })
}
