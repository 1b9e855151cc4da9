use std::io::Write;
use std::process::{Command, Output};

use gaugekit::cli::report::Report;
use gaugekit::Status;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_gaugekit"));
    c.env_remove("GAUGEKIT_SEED").env_remove("GAUGEKIT_SAMPLES");
    c
}

fn spec(src: &str) -> tempfile::NamedTempFile {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    f.write_all(src.as_bytes()).unwrap();
    f
}

fn run(cmd: &mut Command) -> (i32, String, String) {
    let Output {
        status,
        stdout,
        stderr,
    } = cmd.output().unwrap();
    (
        status.code().unwrap(),
        String::from_utf8(stdout).unwrap(),
        String::from_utf8(stderr).unwrap(),
    )
}

fn report(out: &str) -> Report {
    Report::from_json(out).unwrap_or_else(|e| panic!("{e}: {out}"))
}

fn without_timestamp(mut r: Report) -> String {
    r.timestamp = 0;
    r.to_json().unwrap()
}

const LP15: &str = "kind = \"norm\"\ndim = 2\nfamily = \"lp\"\nparams = { p = 1.5 }\n";
const LP1: &str = "kind = \"norm\"\ndim = 2\nfamily = \"lp\"\nparams = { p = 1 }\n";
const EMPTY_DOMAIN: &str = r#"kind = "function"
dim = 2
expression = "sqrt(x1^2 + x2^2)"
params = { degree = 1 }

[domain]
halfspaces = [ { normal = [1.0, 0.0], strict = true }, { normal = [-1.0, 0.0], strict = true } ]
"#;

#[test]
fn exit_codes_follow_verdicts() {
    let ok = spec(LP15);
    let (code, out, err) = run(bin().args(["certify", "--samples", "4000"]).arg(ok.path()));
    assert_eq!(code, 0, "{err}");
    let r = report(&out);
    assert!(r.headlines.iter().all(|h| h.verdict.holds() == Some(true)));
    assert_eq!(r.exit_code, 0);

    let flat = spec(LP1);
    let (code, out, _) = run(bin()
        .args(["certify", "--samples", "4000"])
        .arg(flat.path()));
    assert_eq!(code, 1);
    let r = report(&out);
    let w = r.midpoint.unwrap().witness.unwrap();
    let n = gaugekit::norms::MinkowskiNormSpec::lp(2, 1.0).unwrap();
    let (x, y) = (&w.points[0], &w.points[1]);
    assert!(
        (n.evaluate(x).unwrap() - 1.0).abs() <= 1e-12
            && (n.evaluate(y).unwrap() - 1.0).abs() <= 1e-12
    );
    assert!((n.evaluate(&x.midpoint(y)).unwrap() - 1.0).abs() <= 1e-12);

    let empty = spec(EMPTY_DOMAIN);
    let (code, out, _) = run(bin()
        .args(["certify", "--samples", "500"])
        .arg(empty.path()));
    assert_eq!(code, 2);
    assert!(report(&out)
        .headlines
        .iter()
        .any(|h| h.verdict.status == Status::Inconclusive));
}

#[test]
fn malformed_input_exits_3_with_location() {
    let bad = spec("kind = \"norm\"\ndim = 2\nfamily = \"lp\"\nparams = { p = 2 \n");
    let (code, _, err) = run(bin().arg("certify").arg(bad.path()));
    assert_eq!(code, 3);
    assert!(err.contains("line 4"), "{err}");

    let unknown_key = spec("kind = \"norm\"\ndim = 2\nfamily = \"lp\"\ncolour = 1\n");
    assert_eq!(run(bin().arg("validate").arg(unknown_key.path())).0, 3);
    assert_eq!(run(bin().args(["fixtures", "no_such_fixture"])).0, 3);
    assert_eq!(
        run(bin().args(["gauge", "/definitely/missing.toml", "1", "0"])).0,
        3
    );
    assert_eq!(
        run(bin().args(["certify", "--format", "yaml", "x.toml"])).0,
        3
    );
    assert_eq!(run(bin().arg("frobnicate")).0, 3);
}

#[test]
fn validate_accepts_good_specs() {
    let good = spec(LP15);
    let (code, out, _) = run(bin().arg("validate").arg(good.path()));
    assert_eq!(code, 0);
    assert_eq!(report(&out).subject.unwrap().dim, 2);
}

#[test]
fn gauge_of_ellipsoid() {
    let s = spec("kind = \"set\"\nfamily = \"ellipsoid\"\nparams = { semi_axes = [1.0, 2.0] }\n");
    let (code, out, err) = run(bin().arg("gauge").arg(s.path()).args(["-3", "4"]));
    assert_eq!(code, 0, "{err}");
    let g = report(&out).gauge.unwrap();
    assert!((g.value.to_f64() - 13f64.sqrt()).abs() <= 1e-9);
}

#[test]
fn flags_override_environment() {
    let s = spec(LP15);
    let (_, out, _) = run(bin()
        .args(["validate"])
        .arg(s.path())
        .env("GAUGEKIT_SEED", "42")
        .env("GAUGEKIT_SAMPLES", "77"));
    let r = report(&out);
    assert_eq!((r.seed, r.samples), (42, 77));
    let (_, out, _) = run(bin()
        .args(["validate", "--seed", "5", "--samples", "9"])
        .arg(s.path())
        .env("GAUGEKIT_SEED", "42")
        .env("GAUGEKIT_SAMPLES", "77"));
    let r = report(&out);
    assert_eq!((r.seed, r.samples), (5, 9));
    let (_, out, _) = run(bin().arg("validate").arg(s.path()));
    let r = report(&out);
    assert_eq!((r.seed, r.samples), (1, 100_000));
}

#[test]
fn out_flag_writes_the_report() {
    let s = spec(LP1);
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let (code, out, _) = run(bin()
        .args(["certify", "--samples", "2000", "--out"])
        .arg(&path)
        .arg(s.path()));
    assert_eq!(code, 1);
    assert!(out.trim().is_empty(), "{out}");
    let written = std::fs::read_to_string(&path).unwrap();
    let r = report(&written);
    assert_eq!(r.exit_code, 1);
    assert_eq!(Report::from_json(&r.to_json().unwrap()).unwrap(), r);
}

#[test]
fn reports_are_deterministic() {
    let s = spec(LP1);
    let go = || {
        let (code, out, _) = run(bin()
            .args(["certify", "--samples", "3000", "--seed", "3"])
            .arg(s.path()));
        (code, without_timestamp(report(&out)))
    };
    let (a, b) = (go(), go());
    assert_eq!(a, b);
    let csv = || {
        run(bin()
            .args(["certify", "--samples", "3000", "--format", "csv"])
            .arg(s.path()))
        .1
    };
    assert_eq!(csv(), csv());
}

#[test]
fn csv_flattens_histograms() {
    let s = spec(LP15);
    let (code, out, _) = run(bin()
        .args(["certify", "--samples", "3000", "--format", "csv"])
        .arg(s.path()));
    assert_eq!(code, 0);
    let mut rows = csv::Reader::from_reader(out.as_bytes());
    let records: Vec<csv::StringRecord> = rows.records().map(|r| r.unwrap()).collect();
    assert!(records
        .iter()
        .any(|r| &r[0] == "verdict" && &r[1] == "midpoint_criterion"));
    let bins: u64 = records
        .iter()
        .filter(|r| &r[0] == "histogram")
        .map(|r| r[6].parse::<u64>().unwrap())
        .sum();
    assert!(bins > 0);
}

#[test]
fn fixtures_command() {
    let (code, out, err) = run(bin().args([
        "fixtures",
        "truncated_phi_norm",
        "--d",
        "16",
        "--samples",
        "4000",
    ]));
    assert_eq!(code, 0, "{err}");
    let r = report(&out);
    assert!((r.fixtures[0].values["asymmetry(d=16)"] - 33.0).abs() <= 1e-6);

    let (code, out, _) = run(bin().args(["fixtures", "--list", "--format", "text"]));
    assert_eq!(code, 0);
    for name in gaugekit::fixtures::fixture_names() {
        assert!(out.contains(&name), "{name} missing from listing");
    }
    assert_eq!(run(bin().args(["fixtures", "lp(2)", "--d", "4"])).0, 3);
}
