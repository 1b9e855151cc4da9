use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use super::Vector;
use crate::error::{Error, Result};

/// Each draw owns a disjoint window of this many 32-bit ChaCha words.
const WORDS_PER_DRAW: u128 = 1 << 24;

/// Counter-based deterministic random source.
///
/// The `k`-th draw is a pure function of `(seed, stream, k)`: it is a ChaCha8
/// generator keyed by the seed, on the stream id of the (labelled) substream,
/// positioned at a window reserved for `k`. Work can therefore be split
/// across workers by index without changing any result.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SampleStream {
    pub seed: u64,
    pub stream: u64,
    pub counter: u64,
}

impl SampleStream {
    pub fn new(seed: u64) -> Self {
        SampleStream {
            seed,
            stream: 0,
            counter: 0,
        }
    }

    /// A child stream identified by `label`; independent of the parent's counter.
    pub fn substream(&self, label: &str) -> SampleStream {
        SampleStream {
            seed: self.seed,
            stream: fnv1a(self.stream, label.as_bytes()),
            counter: 0,
        }
    }

    pub fn rng_at(&self, k: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(self.stream);
        rng.set_word_pos(k as u128 * WORDS_PER_DRAW);
        rng
    }

    /// Generator for the current draw; advances the counter.
    pub fn next_rng(&mut self) -> ChaCha8Rng {
        let rng = self.rng_at(self.counter);
        self.counter += 1;
        rng
    }

    pub fn direction(&mut self, dim: usize) -> Result<Vector> {
        if dim == 0 {
            return Err(Error::Input("direction requested in dimension 0".into()));
        }
        let mut rng = self.next_rng();
        Ok(unit_direction(&mut rng, dim))
    }
}

/// Uniformly distributed unit vector of R^`dim` (normalised Gaussian).
pub fn sample_direction(stream: &mut SampleStream, dim: usize) -> Result<Vector> {
    stream.direction(dim)
}

pub(crate) fn unit_direction<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> Vector {
    loop {
        let coords: Vec<f64> = (0..dim).map(|_| StandardNormal.sample(rng)).collect();
        let n = Vector::raw(coords.clone()).norm();
        if n > 1e-12 {
            return Vector::raw(coords.into_iter().map(|c| c / n).collect());
        }
    }
}

pub(crate) fn log_uniform<R: Rng + ?Sized>(rng: &mut R, lo: f64, hi: f64) -> f64 {
    (lo.ln() + (hi.ln() - lo.ln()) * rng.random::<f64>()).exp()
}

/// Uniform point of the Euclidean ball of the given radius.
pub(crate) fn in_ball<R: Rng + ?Sized>(rng: &mut R, dim: usize, radius: f64) -> Vector {
    let u = unit_direction(rng, dim);
    let r = radius * rng.random::<f64>().powf(1.0 / dim as f64);
    u.scale(r)
}

/// A sparse vector with entries in {-1, 0, 1} and 1 to 3 nonzero coordinates.
pub(crate) fn sparse_lattice<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> Vector {
    let support = rng.random_range(1..=dim.min(3));
    let mut coords = vec![0.0; dim];
    let mut placed = 0;
    while placed < support {
        let i = rng.random_range(0..dim);
        if coords[i] == 0.0 {
            coords[i] = if rng.random::<bool>() { 1.0 } else { -1.0 };
            placed += 1;
        }
    }
    Vector::raw(coords)
}

/// `+e_0, -e_0, +e_1, -e_1, ...`
pub(crate) fn signed_basis(dim: usize) -> Vec<Vector> {
    (0..dim)
        .flat_map(|i| {
            let e = Vector::basis(dim, i);
            let m = -&e;
            [e, m]
        })
        .collect()
}

fn fnv1a(parent: u64, bytes: &[u8]) -> u64 {
    let mut h = 0xcbf2_9ce4_8422_2325u64 ^ parent.wrapping_mul(0x9e37_79b9_7f4a_7c15);
    for b in bytes {
        h ^= *b as u64;
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    h
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn direction_is_unit_and_deterministic() {
        let mut a = SampleStream::new(7);
        let mut b = SampleStream::new(7);
        let u = sample_direction(&mut a, 2).unwrap();
        let v = sample_direction(&mut b, 2).unwrap();
        assert!((u.norm() - 1.0).abs() < 1e-9);
        assert_eq!(u, v);
    }

    #[test]
    fn one_dimensional_directions_are_signs() {
        let mut s = SampleStream::new(3);
        for _ in 0..20 {
            let u = s.direction(1).unwrap();
            assert!(u[0] == 1.0 || u[0] == -1.0);
        }
    }

    #[test]
    fn zero_dimension_is_rejected() {
        assert!(sample_direction(&mut SampleStream::new(1), 0).is_err());
    }

    #[test]
    fn draws_depend_only_on_index() {
        let s = SampleStream::new(11).substream("x");
        let mut t = s.clone();
        t.counter = 5;
        let a: f64 = s.rng_at(5).random();
        let b: f64 = t.next_rng().random();
        assert_eq!(a, b);
        let c: f64 = s.substream("y").rng_at(5).random();
        assert_ne!(a, c);
    }
}
