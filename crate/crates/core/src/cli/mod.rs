//! `gaugekit` command line: gauge, certify, fixtures and validate.

pub mod report;
pub mod spec;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::base::{SampleStream, Status, ToleranceProfile, Vector, Verdict, Witness};
use crate::certify::{
    cone_equivalence_harness, continuity_verdict, main_equivalence_harness, midpoint_criterion,
    rotundity_equivalence_check, taxonomy, HarnessRecord, HomogeneousFunctionSpec,
};
use crate::error::{Error, Result};
use crate::fixtures::{evaluate_fixture, fixture_names, FixtureOptions};
use crate::gauge::GaugeEvaluator;
use crate::norms::{asymmetry_constant, validate_axioms, MinkowskiNormSpec};

pub use report::{Report, SubjectSummary};
pub use spec::{Built, SpecDocument, SpecKind};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FALSIFIED: i32 = 1;
pub const EXIT_INCONCLUSIVE: i32 = 2;
pub const EXIT_INPUT: i32 = 3;

#[derive(Parser, Debug)]
#[command(
    name = "gaugekit",
    version,
    about = "Gauges, Minkowski norms and convexity certification"
)]
pub struct Cli {
    #[command(flatten)]
    pub common: Common,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    #[arg(long, global = true, env = "GAUGEKIT_SEED", default_value_t = 1)]
    pub seed: u64,
    #[arg(
        long,
        global = true,
        env = "GAUGEKIT_SAMPLES",
        default_value_t = 100_000
    )]
    pub samples: usize,
    #[arg(long, global = true)]
    pub tol_eq: Option<f64>,
    #[arg(long, global = true)]
    pub tol_strict: Option<f64>,
    #[arg(long, global = true)]
    pub tol_bisect: Option<f64>,
    /// Powers for the equivalence harness, comma separated.
    #[arg(long, global = true, value_delimiter = ',', default_value = "1.5,2,3")]
    pub alpha: Vec<f64>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Gauge value and continuity probe of a set (or a norm's unit ball) at a point.
    Gauge {
        spec: PathBuf,
        #[arg(required = true, allow_negative_numbers = true)]
        point: Vec<f64>,
    },
    /// Axioms, rotundity, taxonomy and equivalence harness for a norm or function.
    Certify { spec: PathBuf },
    /// Run one corpus fixture, or all of them.
    Fixtures {
        #[arg(default_value = "all")]
        name: String,
        /// Dimension for truncated_phi_norm.
        #[arg(long)]
        d: Option<usize>,
        /// Print the fixture names and exit.
        #[arg(long)]
        list: bool,
    },
    /// Parse and construct a spec document without running checks.
    Validate { spec: PathBuf },
}

impl Common {
    fn tolerances(&self, doc: Option<&SpecDocument>) -> Result<ToleranceProfile> {
        let base = doc.map_or_else(ToleranceProfile::default, |d| {
            d.tolerances(ToleranceProfile::default())
        });
        let t = ToleranceProfile {
            eps_eq: self.tol_eq.unwrap_or(base.eps_eq),
            eps_strict: self.tol_strict.unwrap_or(base.eps_strict),
            eps_bisect: self.tol_bisect.unwrap_or(base.eps_bisect),
            ..base
        };
        t.validate()?;
        Ok(t)
    }

    fn check(&self) -> Result<()> {
        if self.samples == 0 {
            return Err(Error::Input("--samples must be at least 1".into()));
        }
        if self.alpha.is_empty() || self.alpha.iter().any(|a| !(a.is_finite() && *a > 1.0)) {
            return Err(Error::Input(format!(
                "--alpha values must be finite and > 1, got {:?}",
                self.alpha
            )));
        }
        Ok(())
    }
}

fn load(path: &PathBuf) -> Result<SpecDocument> {
    let src = std::fs::read_to_string(path)
        .map_err(|e| Error::Input(format!("cannot read {}: {e}", path.display())))?;
    SpecDocument::parse(&src).map_err(|e| match e {
        Error::Parse {
            line,
            column,
            message,
        } => Error::Parse {
            line,
            column,
            message: format!("{}: {message}", path.display()),
        },
        other => other,
    })
}

fn summary(kind: &str, built: &Built, source: &std::path::Path) -> SubjectSummary {
    SubjectSummary {
        kind: kind.into(),
        name: built.name(),
        dim: built.dim(),
        source: Some(source.display().to_string()),
    }
}

/// Runs the command and returns its report; input problems are errors.
pub fn execute(cli: &Cli) -> Result<Report> {
    let c = &cli.common;
    c.check()?;
    match &cli.command {
        Command::Gauge { spec, point } => {
            let doc = load(spec)?;
            let tol = c.tolerances(Some(&doc))?;
            let built = doc.build()?;
            let set = match &built {
                Built::Set(s) => s.clone(),
                Built::Norm(n) => n.unit_ball(),
                Built::Function(_) => {
                    return Err(Error::Input("gauge takes a set or norm spec".into()))
                }
            };
            let x = Vector::from_slice(point)?;
            x.check_dim(set.dim())?;
            let mut r = Report::new("gauge", c.seed, c.samples, tol, c.alpha.clone());
            r.subject = Some(summary("set", &built, spec));
            let g = GaugeEvaluator::new(set, tol)?;
            let e = g.evaluate(&x)?;
            let continuity =
                g.continuity_probe(&x, 12, &SampleStream::new(c.seed).substream("gauge"))?;
            r.gauge = Some(report::GaugeSection {
                point: x,
                value: e.value,
                note: e.note,
                probes: e.probes,
                continuity,
            });
            r.settle();
            Ok(r)
        }
        Command::Certify { spec } => {
            let doc = load(spec)?;
            let tol = c.tolerances(Some(&doc))?;
            let built = doc.build()?;
            let mut r = Report::new("certify", c.seed, c.samples, tol, c.alpha.clone());
            let stream = SampleStream::new(c.seed);
            match &built {
                Built::Norm(n) => {
                    r.subject = Some(summary("norm", &built, spec));
                    certify_norm(&mut r, n, &stream, &tol, c)?;
                }
                Built::Function(f) => {
                    r.subject = Some(summary("function", &built, spec));
                    certify_function(&mut r, f, &stream, &tol, c)?;
                }
                Built::Set(_) => {
                    return Err(Error::Input("certify takes a norm or function spec".into()))
                }
            }
            r.settle();
            Ok(r)
        }
        Command::Fixtures { name, d, list } => {
            let tol = c.tolerances(None)?;
            let mut r = Report::new("fixtures", c.seed, c.samples, tol, c.alpha.clone());
            let names = fixture_names();
            if *list {
                r.notes = names;
                return Ok(r);
            }
            let selected: Vec<String> = if name == "all" {
                names
            } else if names.contains(name) {
                vec![name.clone()]
            } else {
                return Err(Error::Input(format!("unknown fixture `{name}`")));
            };
            if d.is_some() && !selected.iter().any(|n| n == "truncated_phi_norm") {
                return Err(Error::Input(
                    "--d applies to truncated_phi_norm only".into(),
                ));
            }
            let stream = SampleStream::new(c.seed);
            for n in selected {
                let opts = FixtureOptions {
                    samples: c.samples,
                    d: if n == "truncated_phi_norm" { *d } else { None },
                };
                let out = evaluate_fixture(&n, &opts, &stream, &tol)?;
                r.headline(n, out.verdict.clone());
                r.fixtures.push(out);
            }
            r.settle();
            Ok(r)
        }
        Command::Validate { spec } => {
            let doc = load(spec)?;
            let tol = c.tolerances(Some(&doc))?;
            let built = doc.build()?;
            if let Built::Set(s) = &built {
                s.validate()?;
            }
            let kind = format!("{:?}", doc.kind).to_lowercase();
            let mut r = Report::new("validate", c.seed, c.samples, tol, c.alpha.clone());
            r.subject = Some(summary(&kind, &built, spec));
            r.settle();
            Ok(r)
        }
    }
}

fn inconclusive_from(e: &Error) -> Verdict {
    Verdict::inconclusive(e.to_string(), 0)
}

fn certify_norm(
    r: &mut Report,
    n: &MinkowskiNormSpec,
    stream: &SampleStream,
    tol: &ToleranceProfile,
    c: &Common,
) -> Result<()> {
    let axioms = validate_axioms(n, c.samples, &stream.substream("axioms"), tol)?;
    r.headline("axioms", axioms.overall.clone());
    let broken = axioms.overall.is_falsified();
    r.axioms = Some(axioms);
    if broken {
        r.notes
            .push("not a Minkowski norm; later checks skipped".into());
        return Ok(());
    }
    r.asymmetry = Some(asymmetry_constant(
        n,
        c.samples,
        &stream.substream("asymmetry"),
        tol,
    )?);
    let mid = midpoint_criterion(n, c.samples, &stream.substream("midpoint"), tol)
        .unwrap_or_else(|e| inconclusive_from(&e));
    r.headline("midpoint_criterion", mid.clone());
    r.midpoint = Some(mid);
    match rotundity_equivalence_check(n, c.samples, &stream.substream("rotundity"), tol) {
        Ok(rot) => {
            r.headline("rotundity_equivalence", rot.verdict.clone());
            r.rotundity = Some(rot);
        }
        Err(e) => r.headline("rotundity_equivalence", inconclusive_from(&e)),
    }
    let f = HomogeneousFunctionSpec::from_norm(n);
    certify_function(r, &f, stream, tol, c)
}

fn certify_function(
    r: &mut Report,
    f: &HomogeneousFunctionSpec,
    stream: &SampleStream,
    tol: &ToleranceProfile,
    c: &Common,
) -> Result<()> {
    let tax = taxonomy(f, c.samples, &stream.substream("taxonomy"), tol)?;
    r.headline("strictly_sub_convex", tax.strictly_sub_convex.clone());
    if f.degree().is_some() {
        r.headline("zero_set_trivial", tax.zero_set_trivial.clone());
    }
    for v in tax.implication_violations() {
        r.notes.push(format!("implication chain broken: {v}"));
    }
    r.taxonomy = Some(tax);
    r.continuity = Some(continuity_verdict(
        f,
        c.samples,
        &stream.substream("continuity"),
        tol,
    )?);

    let hs = stream.substream("harness");
    let record = if f.domain().is_whole() {
        main_equivalence_harness(f, &c.alpha, c.samples, &hs, tol)
    } else {
        cone_equivalence_harness(f, &c.alpha, c.samples, &hs, tol)
    };
    match record {
        Ok(rec) => {
            if rec.agreement_asserted {
                r.headline("harness_agreement", agreement_verdict(&rec));
            } else {
                r.notes.push(
                    "domain is not a strictly convex cone; harness agreement is not asserted"
                        .into(),
                );
            }
            r.harness.push(rec);
        }
        Err(e @ (Error::Input(_) | Error::Contract(_) | Error::Domain { .. })) => {
            r.notes.push(format!("equivalence harness not run: {e}"));
        }
        Err(e) => return Err(e),
    }
    Ok(())
}

fn agreement_verdict(rec: &HarnessRecord) -> Verdict {
    let effort = rec.cond1.effort + rec.cond2.effort + rec.cond3.effort;
    let holds = [rec.cond1.holds(), rec.cond2.holds(), rec.cond3.holds()];
    if rec.agree {
        return Verdict::supported(effort);
    }
    if holds.iter().any(Option::is_none) {
        return Verdict::inconclusive("a harness condition is undecided", effort);
    }
    let code = |b: Option<bool>| if b == Some(true) { 1.0 } else { 0.0 };
    Verdict::falsified(
        Witness::new("harness_agreement")
            .scalar("cond1", code(holds[0]))
            .scalar("cond2", code(holds[1]))
            .scalar("cond3", code(holds[2])),
        effort,
    )
}

pub fn render(r: &Report, format: Format) -> Result<String> {
    match format {
        Format::Json => r.to_json().map(|mut s| {
            s.push('\n');
            s
        }),
        Format::Csv => r.to_csv(),
        Format::Text => Ok(r.to_text()),
    }
}

/// Parses `args`, runs, writes the report and returns the exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => {
                    EXIT_OK
                }
                _ => EXIT_INPUT,
            };
            let text = e.render().to_string();
            let _ = if code == EXIT_OK {
                write!(stdout, "{text}")
            } else {
                write!(stderr, "{text}")
            };
            return code;
        }
    };
    let outcome = execute(&cli).and_then(|r| Ok((render(&r, cli.common.format)?, r.exit_code)));
    match outcome {
        Ok((text, code)) => {
            let written = match &cli.common.out {
                Some(path) => std::fs::write(path, &text)
                    .map_err(|e| format!("cannot write {}: {e}", path.display())),
                None => stdout.write_all(text.as_bytes()).map_err(|e| e.to_string()),
            };
            match written {
                Ok(()) => code,
                Err(msg) => {
                    let _ = writeln!(stderr, "error: {msg}");
                    EXIT_INPUT
                }
            }
        }
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            EXIT_INPUT
        }
    }
}

/// Exit code for a verdict status taken on its own.
pub fn exit_code_for(status: Status) -> i32 {
    match status {
        Status::Proven | Status::Supported => EXIT_OK,
        Status::Falsified => EXIT_FALSIFIED,
        Status::Inconclusive => EXIT_INCONCLUSIVE,
    }
}
