//! Minkowski norms, gauges of oracle sets, and sampling certifiers for the
//! convexity taxonomy (convex, quasi-, sub-convex and their strict forms).

pub mod base;
pub mod certify;
pub mod cli;
pub mod error;
pub mod fixtures;
pub mod gauge;
pub mod norms;
pub mod sets;

pub use base::{ExtendedReal, SampleStream, Status, ToleranceProfile, Vector, Verdict, Witness};
pub use error::{Error, Result};
