use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::{Domain, HomogeneousFunctionSpec};
use crate::base::{in_ball, log_uniform, sparse_lattice, unit_direction, ToleranceProfile, Vector};

/// Relative separation below which a pair counts as coincident for strictness tests.
pub(crate) const PAIR_SEPARATION: f64 = 0.05;

/// Whether `x` and `y` are far enough apart to witness a strict inequality.
pub(crate) fn distinct(x: &Vector, y: &Vector, tol: &ToleranceProfile) -> bool {
    let (a, b) = (x.norm(), y.norm());
    let d = x.distance(y);
    d >= PAIR_SEPARATION * a.max(b) && d >= tol.eps_eq * (1.0 + a + b)
}

const REJECTION_TRIES: usize = 64;

/// Draws domain points and chord endpoints for a function.
pub(crate) struct Sampler<'a> {
    f: &'a HomogeneousFunctionSpec,
    tol: &'a ToleranceProfile,
}

impl<'a> Sampler<'a> {
    pub fn new(f: &'a HomogeneousFunctionSpec, tol: &'a ToleranceProfile) -> Self {
        Sampler { f, tol }
    }

    fn bounded_radius(&self) -> Option<f64> {
        match &self.f.domain {
            Domain::Region(s) if s.flags().bounded => s.outer_radius(),
            _ => None,
        }
    }

    fn raw_point(&self, rng: &mut ChaCha8Rng) -> Vector {
        match self.bounded_radius() {
            Some(r) => in_ball(rng, self.f.dim, r),
            None => unit_direction(rng, self.f.dim).scale(log_uniform(rng, 0.25, 4.0)),
        }
    }

    /// A point of the domain, or `None` when rejection sampling gives up.
    pub fn point(&self, rng: &mut ChaCha8Rng) -> Option<Vector> {
        (0..REJECTION_TRIES)
            .map(|_| self.raw_point(rng))
            .find(|x| self.f.in_domain(x))
    }

    /// A point of the ambient space around the domain.
    pub fn ambient(&self, rng: &mut ChaCha8Rng) -> Vector {
        match self.bounded_radius() {
            Some(r) => in_ball(rng, self.f.dim, 1.5 * r),
            None => unit_direction(rng, self.f.dim).scale(log_uniform(rng, 0.25, 4.0)),
        }
    }

    /// Whether `x` and `y` are far enough apart to witness a strict inequality.
    pub fn separated(&self, x: &Vector, y: &Vector) -> bool {
        distinct(x, y, self.tol)
    }

    fn level_match(&self, x: &Vector, w: Vector) -> Option<Vector> {
        let alpha = self.f.degree?;
        let (fx, fw) = (self.f.eval(x).ok()?, self.f.eval(&w).ok()?);
        if fx == 0.0 || fw == 0.0 || fx.signum() != fw.signum() {
            return None;
        }
        let y = w.scale((fx / fw).powf(1.0 / alpha));
        self.f.in_domain(&y).then_some(y)
    }

    /// Chord endpoints; the kind cycles with `k` through independent points,
    /// points on a common ray, sparse lattice points, and (for homogeneous
    /// functions) pairs normalised to a common level.
    pub fn pair(&self, rng: &mut ChaCha8Rng, k: u64) -> Option<(Vector, Vector)> {
        let kinds = if self.f.degree.is_some() { 5 } else { 3 };
        let dim = self.f.dim;
        let pair = match k % kinds {
            1 => {
                let x = self.point(rng)?;
                let mut s = log_uniform(rng, 0.25, 4.0);
                if (1.0 - s).abs() < PAIR_SEPARATION {
                    s = 1.0 + PAIR_SEPARATION * 2.0;
                }
                let y = x.scale(s);
                self.f.in_domain(&y).then_some((x, y))
            }
            2 => {
                let c = log_uniform(rng, 0.25, 4.0);
                let (x, y) = (
                    sparse_lattice(rng, dim).scale(c),
                    sparse_lattice(rng, dim).scale(c),
                );
                (self.f.in_domain(&x) && self.f.in_domain(&y)).then_some((x, y))
            }
            3 => {
                let x = self.point(rng)?;
                let w = self.point(rng)?;
                self.level_match(&x, w).map(|y| (x, y))
            }
            4 => {
                let c = log_uniform(rng, 0.25, 4.0);
                let x = sparse_lattice(rng, dim).scale(c);
                if !self.f.in_domain(&x) {
                    return None;
                }
                let w = sparse_lattice(rng, dim);
                self.level_match(&x, w).map(|y| (x, y))
            }
            _ => None,
        };
        match pair {
            Some(p) => Some(p),
            None => Some((self.point(rng)?, self.point(rng)?)),
        }
    }

    pub fn chord_t(&self, rng: &mut ChaCha8Rng, strict: bool) -> f64 {
        if strict {
            0.05 + 0.9 * rng.random::<f64>()
        } else {
            0.01 + 0.98 * rng.random::<f64>()
        }
    }
}
