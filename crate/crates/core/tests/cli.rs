use std::f64::consts::PI;
use std::fs;
use std::path::Path;

use confluent_susy::cli::{self, EXIT_IRREGULAR, EXIT_OK, EXIT_USAGE, EXIT_VERIFY_FAILED};
use confluent_susy::grid::GridSeries;

fn run(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv: Vec<&str> = std::iter::once("confluent").chain(args.iter().copied()).collect();
    let code = cli::run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn json(text: &str) -> serde_json::Value {
    serde_json::from_str(text).unwrap_or_else(|e| panic!("{e}: {text}"))
}

fn prefix(dir: &Path, name: &str) -> String {
    dir.join(name).display().to_string()
}

#[test]
fn box_partner_files() {
    let dir = tempfile::tempdir().unwrap();
    let out = prefix(dir.path(), "fig1");
    let (code, _, err) = run(&["partner", "--model", "box", "--lambda", "4pi^2", "--k", "0.555", "--out", &out]);
    assert_eq!(code, EXIT_OK, "{err}");

    let potential = GridSeries::from_csv(&fs::read_to_string(format!("{out}_potential.csv")).unwrap()).unwrap();
    assert_eq!(potential.len(), 501);
    assert_eq!(potential.x[0], 0.0);
    assert_eq!(potential.column(0)[0], 0.0);

    let states = GridSeries::from_csv(&fs::read_to_string(format!("{out}_states.csv")).unwrap()).unwrap();
    assert_eq!(states.width(), 3);

    let sidecar = json(&fs::read_to_string(format!("{out}.json")).unwrap());
    assert_eq!(sidecar["regularity"]["regular"], true);
    assert!(sidecar["max_residual"].as_f64().unwrap() < 1e-5);
}

#[test]
fn json_output_round_trips_bit_exact() {
    let dir = tempfile::tempdir().unwrap();
    let csv = prefix(dir.path(), "a");
    let js = prefix(dir.path(), "b");
    assert_eq!(run(&["partner", "--model", "box", "--k", "0.555", "--out", &csv]).0, EXIT_OK);
    assert_eq!(
        run(&["partner", "--model", "box", "--k", "0.555", "--format", "json", "--out", &js]).0,
        EXIT_OK
    );
    let a = GridSeries::from_csv(&fs::read_to_string(format!("{csv}_potential.csv")).unwrap()).unwrap();
    let b = GridSeries::from_json(&fs::read_to_string(format!("{js}_potential.json")).unwrap()).unwrap();
    for (p, q) in a.column(0).iter().zip(b.column(0)) {
        assert_eq!(p.to_bits(), q.to_bits());
    }
}

#[test]
fn radial_partner_residual() {
    let dir = tempfile::tempdir().unwrap();
    let out = prefix(dir.path(), "fig2");
    let (code, _, err) = run(&[
        "partner", "--model", "radial_osc", "--ell", "1", "--lambda", "8", "--k", "-0.01", "--out", &out,
    ]);
    assert_eq!(code, EXIT_OK, "{err}");
    let sidecar = json(&fs::read_to_string(format!("{out}.json")).unwrap());
    assert!(sidecar["max_residual"].as_f64().unwrap() < 1e-5);
}

#[test]
fn singular_constant_exits_two_unless_forced() {
    let dir = tempfile::tempdir().unwrap();
    let out = prefix(dir.path(), "gap");
    let (code, msg, _) = run(&["partner", "--model", "box", "--k", "0.25", "--out", &out]);
    assert_eq!(code, EXIT_IRREGULAR);
    assert!(msg.contains("x = 0.5"), "{msg}");
    assert!(!Path::new(&format!("{out}_potential.csv")).exists());

    let (code, _, _) = run(&["partner", "--model", "box", "--k", "0.25", "--force", "--out", &out]);
    assert_eq!(code, EXIT_OK);
    let sidecar = json(&fs::read_to_string(format!("{out}.json")).unwrap());
    assert_eq!(sidecar["forced"], true);
    assert_eq!(sidecar["regularity"]["regular"], false);
}

#[test]
fn config_file_then_flags() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    fs::write(&cfg, "model = box\nk = 0.25\ngrid = 0, 1, 51\n").unwrap();
    let out = prefix(dir.path(), "cfg");
    let cfg = cfg.display().to_string();
    assert_eq!(run(&["partner", "--config", &cfg, "--out", &out]).0, EXIT_IRREGULAR);
    assert_eq!(run(&["partner", "--config", &cfg, "--k", "-1", "--out", &out]).0, EXIT_OK);
    let potential = GridSeries::from_csv(&fs::read_to_string(format!("{out}_potential.csv")).unwrap()).unwrap();
    assert_eq!(potential.len(), 51);
}

#[test]
fn verify_exit_codes() {
    let (code, out, _) = run(&["verify", "--model", "box"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.lines().any(|l| l.starts_with("PASS box.wronskian_anchors")));

    let (code, out, _) = run(&["verify", "--model", "box", "--tol-check", "1e-30"]);
    assert_eq!(code, EXIT_VERIFY_FAILED);
    assert!(out.contains("FAIL"));

    let (code, out, _) = run(&["verify", "--model", "edho", "--format", "json"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(json(&out)["all_passed"], true);
}

#[test]
fn norm_commands() {
    let (code, out, _) = run(&["norm", "--model", "box", "--format", "json"]);
    assert_eq!(code, EXIT_OK);
    let v = json(&out);
    assert!((v["wronskian"].as_f64().unwrap() - 0.5).abs() < 1e-10);
    assert!((v["amplitude"].as_f64().unwrap() - 2f64.sqrt()).abs() < 1e-10);

    let (code, out, _) = run(&["norm", "--model", "edho", "--format", "json"]);
    assert_eq!(code, EXIT_OK);
    let v = json(&out);
    let expected = PI.sqrt() / 2.0;
    assert!((v["wronskian"].as_f64().unwrap() - expected).abs() < 1e-7);
    assert!((v["quadrature"].as_f64().unwrap() - expected).abs() < 1e-7);
    assert!(v["right_limit"].as_f64().unwrap().abs() < 1e-7);
}

#[test]
fn integrate_box_half_interval() {
    let (code, out, err) = run(&["integrate", "--model", "box", "--lambda", "pi^2", "--x", "0.5", "--format", "json"]);
    assert_eq!(code, EXIT_OK, "{err}");
    let v = json(&out);
    assert!((v["wronskian"].as_f64().unwrap() - 0.25).abs() < 1e-12);
    assert!((v["quadrature"].as_f64().unwrap() - 0.25).abs() < 1e-10);
}

#[test]
fn regularity_report() {
    let (code, out, _) = run(&["regularity", "--model", "box", "--lambda", "4pi^2"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("(-inf, 0] U [0.5, inf)"), "{out}");
}

#[test]
fn usage_errors() {
    assert_eq!(run(&["bogus"]).0, EXIT_USAGE);
    assert_eq!(run(&["partner", "--lambda", "abc"]).0, EXIT_USAGE);
    assert_eq!(run(&["integrate", "--model", "box"]).0, EXIT_USAGE);
    assert_eq!(run(&["norm", "--model", "box", "--n", "0"]).0, EXIT_USAGE);
    assert_eq!(run(&["--help"]).0, EXIT_OK);
}
