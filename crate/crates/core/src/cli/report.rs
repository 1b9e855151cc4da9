//! Run reports and their JSON, CSV and text renderings.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::base::{ExtendedReal, Status, ToleranceProfile, Vector, Verdict};
use crate::certify::{HarnessRecord, RotundityCheck, TaxonomyReport};
use crate::error::{Error, Result};
use crate::fixtures::FixtureOutcome;
use crate::gauge::{ContinuityProbe, GaugeNote};
use crate::norms::{AsymmetryEstimate, AxiomReport};

pub const TOOL: &str = "gaugekit";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SubjectSummary {
    pub kind: String,
    pub name: String,
    pub dim: usize,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub source: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GaugeSection {
    pub point: Vector,
    pub value: ExtendedReal,
    pub note: Option<GaugeNote>,
    pub probes: u64,
    pub continuity: ContinuityProbe,
}

/// A verdict that decides the exit code.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Headline {
    pub property: String,
    pub verdict: Verdict,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub tool: String,
    pub version: String,
    pub command: String,
    /// Seconds since the Unix epoch; the only field that varies between
    /// identical runs.
    pub timestamp: u64,
    pub seed: u64,
    pub samples: usize,
    pub tolerances: ToleranceProfile,
    pub alphas: Vec<f64>,
    pub subject: Option<SubjectSummary>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub gauge: Option<GaugeSection>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub axioms: Option<AxiomReport>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub asymmetry: Option<AsymmetryEstimate>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub midpoint: Option<Verdict>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub rotundity: Option<RotundityCheck>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub taxonomy: Option<TaxonomyReport>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub continuity: Option<Verdict>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub harness: Vec<HarnessRecord>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub fixtures: Vec<FixtureOutcome>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub notes: Vec<String>,
    pub headlines: Vec<Headline>,
    pub exit_code: i32,
}

impl Report {
    pub fn new(
        command: &str,
        seed: u64,
        samples: usize,
        tolerances: ToleranceProfile,
        alphas: Vec<f64>,
    ) -> Self {
        Report {
            tool: TOOL.into(),
            version: env!("CARGO_PKG_VERSION").into(),
            command: command.into(),
            timestamp: std::time::SystemTime::now()
                .duration_since(std::time::UNIX_EPOCH)
                .map_or(0, |d| d.as_secs()),
            seed,
            samples,
            tolerances,
            alphas,
            subject: None,
            gauge: None,
            axioms: None,
            asymmetry: None,
            midpoint: None,
            rotundity: None,
            taxonomy: None,
            continuity: None,
            harness: Vec::new(),
            fixtures: Vec::new(),
            notes: Vec::new(),
            headlines: Vec::new(),
            exit_code: 0,
        }
    }

    pub fn headline(&mut self, property: impl Into<String>, verdict: Verdict) {
        self.headlines.push(Headline {
            property: property.into(),
            verdict,
        });
    }

    /// 1 if any headline is Falsified, else 2 if any is Inconclusive, else 0.
    pub fn settle(&mut self) -> i32 {
        let st = |s| self.headlines.iter().any(|h| h.verdict.status == s);
        self.exit_code = if st(Status::Falsified) {
            1
        } else if st(Status::Inconclusive) {
            2
        } else {
            0
        };
        self.exit_code
    }

    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self)
            .map_err(|e| Error::Input(format!("report serialisation: {e}")))
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Parse {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })
    }

    /// Every verdict in the report with a dotted path naming it.
    pub fn verdicts(&self) -> Vec<(String, &Verdict)> {
        let mut out: Vec<(String, &Verdict)> = Vec::new();
        if let Some(a) = &self.axioms {
            for (k, v) in [
                ("nonneg", &a.nonneg),
                ("pos_homog", &a.pos_homog),
                ("subadd", &a.subadd),
                ("point_sep", &a.point_sep),
                ("overall", &a.overall),
            ] {
                out.push((format!("axioms.{k}"), v));
            }
        }
        if let Some(m) = &self.midpoint {
            out.push(("midpoint_criterion".into(), m));
        }
        if let Some(r) = &self.rotundity {
            out.push(("rotundity_equivalence".into(), &r.verdict));
        }
        if let Some(t) = &self.taxonomy {
            for (k, v) in [
                ("convex", &t.convex),
                ("strictly_convex", &t.strictly_convex),
                ("quasi_convex", &t.quasi_convex),
                ("strictly_quasi_convex", &t.strictly_quasi_convex),
                ("sub_convex", &t.sub_convex),
                ("strictly_sub_convex", &t.strictly_sub_convex),
                ("zero_set_trivial", &t.zero_set_trivial),
            ] {
                out.push((format!("taxonomy.{k}"), v));
            }
        }
        if let Some(c) = &self.continuity {
            out.push(("continuity".into(), c));
        }
        for h in &self.harness {
            out.push((format!("harness[{}].cond1", h.subject), &h.cond1));
            out.push((format!("harness[{}].cond2", h.subject), &h.cond2));
            out.push((format!("harness[{}].cond3", h.subject), &h.cond3));
        }
        for f in &self.fixtures {
            out.push((format!("fixture.{}", f.name), &f.verdict));
        }
        for h in &self.headlines {
            out.push((format!("headline.{}", h.property), &h.verdict));
        }
        out
    }

    /// One row per verdict, then one row per non-empty histogram bin.
    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let io = |e: csv::Error| Error::Input(format!("csv: {e}"));
        w.write_record([
            "record",
            "property",
            "status",
            "effort",
            "margin",
            "bin_lower",
            "count",
            "note",
            "witness",
        ])
        .map_err(io)?;
        let verdicts = self.verdicts();
        for (path, v) in &verdicts {
            let witness = match &v.witness {
                Some(wt) => serde_json::to_string(wt).map_err(|e| Error::Input(e.to_string()))?,
                None => String::new(),
            };
            w.write_record([
                "verdict",
                path,
                &format!("{:?}", v.status),
                &v.effort.to_string(),
                &v.margin.map(|m| m.to_string()).unwrap_or_default(),
                "",
                "",
                v.note.as_deref().unwrap_or(""),
                &witness,
            ])
            .map_err(io)?;
        }
        for (path, v) in &verdicts {
            let Some(h) = &v.histogram else { continue };
            for (i, c) in h.counts.iter().enumerate().filter(|(_, c)| **c > 0) {
                w.write_record([
                    "histogram",
                    path,
                    "",
                    "",
                    "",
                    &crate::base::MarginHistogram::lower_edge(i).to_string(),
                    &c.to_string(),
                    "",
                    "",
                ])
                .map_err(io)?;
            }
        }
        if let Some(g) = &self.gauge {
            w.write_record([
                "gauge",
                &g.point.to_string(),
                "",
                &g.probes.to_string(),
                &g.value.to_string(),
                "",
                "",
                "",
                "",
            ])
            .map_err(io)?;
        }
        String::from_utf8(w.into_inner().map_err(|e| Error::Input(e.to_string()))?)
            .map_err(|e| Error::Input(e.to_string()))
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(
            s,
            "{} {} {}  seed={} samples={}",
            self.tool, self.version, self.command, self.seed, self.samples
        );
        let t = &self.tolerances;
        let _ = writeln!(
            s,
            "tolerances: eq={} strict={} bisect={}",
            t.eps_eq, t.eps_strict, t.eps_bisect
        );
        if let Some(sub) = &self.subject {
            let _ = writeln!(s, "subject: {} {} (dim {})", sub.kind, sub.name, sub.dim);
        }
        if let Some(g) = &self.gauge {
            let _ = writeln!(s, "gauge at {}: {}", g.point, g.value);
            let c = &g.continuity;
            let _ = writeln!(
                s,
                "  continuity: liminf={} limsup={} lsc={} usc={}",
                c.liminf, c.limsup, c.lsc_ok, c.usc_ok
            );
        }
        if let Some(a) = &self.asymmetry {
            let _ = writeln!(s, "asymmetry: {} at {}", a.estimate, a.argmax);
        }
        for (path, v) in self.verdicts() {
            if path.starts_with("headline.") {
                continue;
            }
            let _ = write!(s, "{path:40} {:?}", v.status);
            if let Some(w) = &v.witness {
                let pts: Vec<String> = w.points.iter().map(|p| p.to_string()).collect();
                let _ = write!(s, "  witness {}", pts.join(" "));
                for (k, x) in &w.scalars {
                    let _ = write!(s, " {k}={x}");
                }
            }
            s.push('\n');
        }
        for f in &self.fixtures {
            for (k, x) in &f.values {
                let _ = writeln!(s, "  {}: {k} = {x}", f.name);
            }
        }
        for n in &self.notes {
            let _ = writeln!(s, "note: {n}");
        }
        let _ = writeln!(s, "exit code {}", self.exit_code);
        s
    }
}
