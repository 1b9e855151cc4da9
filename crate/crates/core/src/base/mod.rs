//! Shared numeric substrate: vectors, extended reals, tolerances, seeded
//! sampling and the verdict lattice.

mod extended;
mod sampling;
mod tolerance;
mod vector;
mod verdict;

pub use extended::ExtendedReal;
pub use sampling::{sample_direction, SampleStream};
pub use tolerance::ToleranceProfile;
pub use vector::Vector;
pub use verdict::{combine_verdicts, MarginHistogram, Status, Verdict, Witness};

pub(crate) use sampling::{in_ball, log_uniform, signed_basis, sparse_lattice, unit_direction};

/// Accumulates slacks over a sampling loop and turns them into a verdict.
pub(crate) struct Tally {
    effort: u64,
    margin: Option<f64>,
    histogram: MarginHistogram,
    failure: Option<Witness>,
    skipped: u64,
}

impl Tally {
    pub fn new() -> Self {
        Tally {
            effort: 0,
            margin: None,
            histogram: MarginHistogram::new(),
            failure: None,
            skipped: 0,
        }
    }

    pub fn observe(&mut self, slack: f64) {
        self.effort += 1;
        self.histogram.record(slack);
        self.margin = Some(self.margin.map_or(slack, |m| m.min(slack)));
    }

    /// Records a violation; only the first one is kept.
    pub fn fail(&mut self, witness: Witness, slack: f64) {
        self.observe(slack);
        if self.failure.is_none() {
            self.failure = Some(witness);
        }
    }

    /// Counts a check that passed without a meaningful slack.
    pub fn credit(&mut self) {
        self.effort += 1;
    }

    pub fn skip(&mut self) {
        self.skipped += 1;
    }

    pub fn failed(&self) -> bool {
        self.failure.is_some()
    }

    pub fn effort(&self) -> u64 {
        self.effort
    }

    /// `Falsified` if a violation was recorded, `Inconclusive` if nothing was
    /// examined, `success` otherwise.
    pub fn finish(self, success: Status) -> Verdict {
        let v = match self.failure {
            Some(w) => Verdict::falsified(w, self.effort),
            None if self.effort == 0 => {
                return Verdict::inconclusive(
                    format!("no admissible samples ({} skipped)", self.skipped),
                    0,
                )
            }
            None => match success {
                Status::Proven => Verdict::proven(self.effort),
                _ => Verdict::supported(self.effort),
            },
        };
        let v = v.with_margin(self.margin).with_histogram(self.histogram);
        if self.skipped > 0 {
            v.with_note(format!(
                "{} samples skipped (outside domain or undefined)",
                self.skipped
            ))
        } else {
            v
        }
    }
}
