use clap::Parser;
use hypmetrica::cli::{catalog_domain, execute, parse_keyword, CommandConfig, Diagnostic, MetricRecord, THREADS_ENV};
use hypmetrica::Error;
use std::path::PathBuf;
use std::process::{Command, Output};

fn config(args: &[&str]) -> CommandConfig {
    CommandConfig::try_parse_from(std::iter::once("hypmetrica").chain(args.iter().copied())).unwrap()
}

fn run(args: &[&str]) -> String {
    execute(&config(args)).unwrap().primary
}

fn bin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hypmetrica")).args(args).output().unwrap()
}

/// Rows of a CSV table keyed by its header.
fn table(s: &str) -> (Vec<String>, Vec<Vec<String>>) {
    let mut r = csv::Reader::from_reader(s.as_bytes());
    let header = r.headers().unwrap().iter().map(String::from).collect();
    let rows = r.records().map(|rec| rec.unwrap().iter().map(String::from).collect()).collect();
    (header, rows)
}

fn column(s: &str, name: &str) -> Vec<f64> {
    let (h, rows) = table(s);
    let i = h.iter().position(|c| c == name).unwrap_or_else(|| panic!("no column {name} in {h:?}"));
    rows.iter().map(|r| r[i].parse().unwrap()).collect()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("hypmetrica-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn diagnostic(out: &Output) -> Diagnostic {
    let err = String::from_utf8_lossy(&out.stderr);
    let line = err.lines().rev().find(|l| l.starts_with('{')).unwrap_or_else(|| panic!("no diagnostic in {err}"));
    serde_json::from_str(line).unwrap()
}

#[test]
fn metric_csv_has_header_lf_and_full_precision() {
    let out = run(&["metric", "--kind", "apollonian", "--domain", "unit_disk", "--x", "0,0", "--y", "0.5,0"]);
    assert!(!out.contains('\r'));
    assert!(out.ends_with('\n'));
    let (h, rows) = table(&out);
    assert_eq!(h, ["kind", "x1", "x2", "y1", "y2", "value", "error_estimate"]);
    assert_eq!(rows.len(), 1);
    assert!(rows[0][5].contains('e'), "{}", rows[0][5]);
    let v = column(&out, "value")[0];
    assert!((v - 3f64.ln()).abs() < 1e-4);
}

#[test]
fn metric_json_round_trips() {
    let out = run(&["metric", "--kind", "j_min", "--domain", "upper_half_plane", "--x", "0,1", "--y", "0,3", "--format", "json"]);
    assert!(out.ends_with('\n'));
    let r: MetricRecord = serde_json::from_str(&out).unwrap();
    assert!((r.value.value - 3f64.ln()).abs() < 1e-15);
    let again = serde_json::to_string_pretty(&r).unwrap() + "\n";
    assert_eq!(again, out);
}

#[test]
fn negative_coordinates_parse() {
    let out = run(&["metric", "--kind", "j_product", "--domain", "unit_disk", "--x", "-0.5,-0.25", "--y", "0.1,-0.3"]);
    assert!(column(&out, "value")[0] > 0.0);
}

#[test]
fn output_is_deterministic() {
    let args = ["relate", "--domain", "square", "--a", "j_min", "--b", "j_product", "--scales", "0.3,0.1,0.03", "--samples", "64"];
    assert_eq!(run(&args), run(&args));
    let other = ["relate", "--domain", "square", "--a", "j_min", "--b", "j_product", "--scales", "0.3,0.1,0.03", "--seed", "7"];
    assert_ne!(run(&args), run(&other));
}

#[test]
fn density_of_disk_center() {
    let out = run(&["density", "--kind", "mu", "--domain", "unit_disk", "--x", "0,0"]);
    assert!((column(&out, "value")[0] - 2.0).abs() < 1e-9);
}

#[test]
fn bound_rows() {
    let out = run(&["bound", "--name", "N", "--A", "1", "--B", "-1"]);
    assert_eq!(column(&out, "value"), [4.0]);
    let out = run(&["bound", "--name", "lambda_star_gamma", "--gamma", "1", "--f2", "0"]);
    assert_eq!(table(&out).1.len(), 2);
    let out = run(&["bound", "--name", "delta_gamma", "--gamma", "0", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert!(v.to_string().contains("delta_gamma"));
}

#[test]
fn norm_of_koebe() {
    let out = run(&["norm", "--family", "koebe", "--truncation", "128"]);
    let (h, _) = table(&out);
    let v = column(&out, &h[0]);
    assert!((v[0] - 6.0).abs() < 0.05, "{out}");
}

#[test]
fn radius_u_row() {
    let out = run(&["radius", "--name", "u", "--alpha", "0.5", "--lambda", "1"]);
    let v = column(&out, &table(&out).0[0])[0];
    assert!(v > 0.0 && v < 1.0);
}

#[test]
fn plot_writes_svg_and_companion_csv() {
    let svg = scratch("qh.svg");
    let code = hypmetrica::cli::main_with_args([
        "hypmetrica",
        "plot",
        "--kind",
        "qh",
        "--domain",
        "annulus(1,4)",
        "--grid",
        "12",
        "--format",
        "svg",
        "--out",
        svg.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    let text = std::fs::read_to_string(&svg).unwrap();
    assert!(text.starts_with("<svg") || text.starts_with("<?xml"));
    let csv = std::fs::read_to_string(svg.with_extension("csv")).unwrap();
    assert!(!table(&csv).1.is_empty());
}

#[test]
fn catalog_keywords() {
    assert_eq!(parse_keyword("annulus(1, 4)").unwrap(), ("annulus".to_string(), vec![1.0, 4.0]));
    assert_eq!(parse_keyword("unit_disk").unwrap(), ("unit_disk".to_string(), vec![]));
    assert!(parse_keyword("annulus(1,4").is_err());
    assert!(catalog_domain("annulus(1,4)").is_ok());
    assert!(catalog_domain("annulus(4,1)").is_err());
    assert!(catalog_domain("nowhere").is_err());
}

#[test]
fn validation_errors_exit_two_with_diagnostic() {
    for args in [
        &["metric", "--kind", "alpha", "--domain", "unit_disk", "--x", "0,0", "--y", "0.5,0", "--tol", "0.5"][..],
        &["metric", "--kind", "alpha", "--domain", "unit_disk", "--x", "0,0", "--y", "2,0"],
        &["metric", "--kind", "alpha", "--domain", "unit_disk", "--x", "0,0", "--y", "0.5,0", "--format", "svg"],
        &["bound", "--name", "N", "--A", "0.5", "--B", "0.5"],
        &["bound", "--name", "nope"],
        &["metric", "--kind"],
    ] {
        let out = bin(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert_eq!(diagnostic(&out).exit_code, 2);
    }
}

#[test]
fn bad_thread_count_is_rejected() {
    let out = Command::new(env!("CARGO_BIN_EXE_hypmetrica")).args(["scenarios"]).env(THREADS_ENV, "0").output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(diagnostic(&out).message.contains(THREADS_ENV));
}

#[test]
fn numeric_failures_map_to_three_with_trace() {
    for e in [
        Error::NoRoot { lo: 0.0, hi: 1.0, f_lo: 1.0, f_hi: 2.0 },
        Error::NonConvergent("x".into()),
        Error::HypergeometricFailure("x".into()),
        Error::ResolutionTooCoarse("x".into()),
    ] {
        let d = Diagnostic::from_error(&e);
        assert_eq!(d.exit_code, 3);
        assert!(d.trace.is_some());
    }
    let d = Diagnostic::from_error(&Error::EmptyInput);
    assert_eq!((d.exit_code, d.trace), (2, None));
}

#[test]
fn binary_writes_stdout() {
    let out = bin(&["bound", "--name", "lambda_star", "--mu", "0"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(column(&text, "value"), [1.0]);
}
