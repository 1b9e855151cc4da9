use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::Vector;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Status {
    /// Holds by an analytic classification of a built-in family.
    Proven,
    /// Held on every sample examined.
    Supported,
    /// A witness violates the property.
    Falsified,
    Inconclusive,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Status::Proven => "Proven",
            Status::Supported => "Supported",
            Status::Falsified => "Falsified",
            Status::Inconclusive => "Inconclusive",
        };
        f.write_str(s)
    }
}

/// Points and scalars at which a property fails.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub property: String,
    pub points: Vec<Vector>,
    pub scalars: BTreeMap<String, f64>,
}

impl Witness {
    pub fn new(property: impl Into<String>) -> Self {
        Witness {
            property: property.into(),
            points: Vec::new(),
            scalars: BTreeMap::new(),
        }
    }

    pub fn point(mut self, p: Vector) -> Self {
        self.points.push(p);
        self
    }

    pub fn scalar(mut self, name: &str, v: f64) -> Self {
        self.scalars.insert(name.to_string(), v);
        self
    }

    pub fn get(&self, name: &str) -> Option<f64> {
        self.scalars.get(name).copied()
    }
}

/// Counts of observed slacks, bucketed by decade.
///
/// Bucket 0 holds non-positive slacks; bucket `i >= 1` holds slacks in
/// `[10^(i-17), 10^(i-16))`, the last bucket being open-ended.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MarginHistogram {
    pub counts: Vec<u64>,
}

impl MarginHistogram {
    pub const BUCKETS: usize = 22;

    pub fn new() -> Self {
        MarginHistogram {
            counts: vec![0; Self::BUCKETS],
        }
    }

    pub fn record(&mut self, slack: f64) {
        let i = if slack.is_nan() || slack <= 0.0 {
            0
        } else {
            let d = slack.log10().floor() as i64 + 17;
            d.clamp(1, Self::BUCKETS as i64 - 1) as usize
        };
        self.counts[i] += 1;
    }

    /// Lower edge of bucket `i` (bucket 0 is `(-inf, 0]`).
    pub fn lower_edge(i: usize) -> f64 {
        if i == 0 {
            f64::NEG_INFINITY
        } else {
            10f64.powi(i as i32 - 17)
        }
    }

    fn merge(&mut self, other: &MarginHistogram) {
        for (a, b) in self.counts.iter_mut().zip(&other.counts) {
            *a += b;
        }
    }
}

impl Default for MarginHistogram {
    fn default() -> Self {
        Self::new()
    }
}

/// Outcome of a certification.
///
/// Construct through [`Verdict::proven`], [`Verdict::supported`],
/// [`Verdict::falsified`] and [`Verdict::inconclusive`]; a witness is present
/// exactly when the status is `Falsified`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub status: Status,
    pub witness: Option<Witness>,
    /// Smallest slack observed.
    pub margin: Option<f64>,
    /// Number of samples examined.
    pub effort: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub histogram: Option<MarginHistogram>,
}

impl Verdict {
    pub fn proven(effort: u64) -> Self {
        Self::bare(Status::Proven, effort)
    }

    pub fn supported(effort: u64) -> Self {
        Self::bare(Status::Supported, effort)
    }

    pub fn falsified(witness: Witness, effort: u64) -> Self {
        Verdict {
            witness: Some(witness),
            ..Self::bare(Status::Falsified, effort)
        }
    }

    pub fn inconclusive(note: impl Into<String>, effort: u64) -> Self {
        Verdict {
            note: Some(note.into()),
            ..Self::bare(Status::Inconclusive, effort)
        }
    }

    fn bare(status: Status, effort: u64) -> Self {
        Verdict {
            status,
            witness: None,
            margin: None,
            effort,
            note: None,
            histogram: None,
        }
    }

    pub fn with_margin(mut self, margin: Option<f64>) -> Self {
        self.margin = margin;
        self
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }

    pub fn with_histogram(mut self, h: MarginHistogram) -> Self {
        self.histogram = Some(h);
        self
    }

    /// `Some(true)` for Proven/Supported, `Some(false)` for Falsified,
    /// `None` when inconclusive.
    pub fn holds(&self) -> Option<bool> {
        match self.status {
            Status::Proven | Status::Supported => Some(true),
            Status::Falsified => Some(false),
            Status::Inconclusive => None,
        }
    }

    pub fn is_falsified(&self) -> bool {
        self.status == Status::Falsified
    }
}

/// Weakest-link combination: Falsified dominates, then Inconclusive, then
/// Supported; Proven only if every member is Proven. The witness is the
/// first Falsified member's, margins take the minimum, efforts add up.
pub fn combine_verdicts(verdicts: &[Verdict]) -> Result<Verdict> {
    if verdicts.is_empty() {
        return Err(Error::Input("cannot combine an empty verdict list".into()));
    }
    let effort = verdicts.iter().map(|v| v.effort).sum();
    let margin = verdicts
        .iter()
        .filter_map(|v| v.margin)
        .fold(None, |acc: Option<f64>, m| {
            Some(acc.map_or(m, |a| a.min(m)))
        });
    let mut histogram: Option<MarginHistogram> = None;
    for h in verdicts.iter().filter_map(|v| v.histogram.as_ref()) {
        histogram.get_or_insert_with(MarginHistogram::new).merge(h);
    }

    let pick = |s: Status| verdicts.iter().find(|v| v.status == s);
    let mut out = if let Some(f) = pick(Status::Falsified) {
        Verdict::falsified(
            f.witness
                .clone()
                .expect("falsified verdict carries a witness"),
            effort,
        )
        .with_note_opt(f.note.clone())
    } else if let Some(i) = pick(Status::Inconclusive) {
        Verdict::inconclusive(i.note.clone().unwrap_or_default(), effort)
    } else if verdicts.iter().any(|v| v.status == Status::Supported) {
        Verdict::supported(effort)
    } else {
        Verdict::proven(effort)
    };
    out.margin = margin;
    out.histogram = histogram;
    Ok(out)
}

impl Verdict {
    fn with_note_opt(mut self, note: Option<String>) -> Self {
        self.note = note;
        self
    }
}
