use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use relupoly::sampler::ReluNetwork;
use tempfile::TempDir;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_relupoly"));
    c.env("RELUPOLY_THREADS", "1");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p
}

fn x2(dir: &Path) -> PathBuf {
    write(dir, "x2.json", r#"{"dim":1,"terms":[{"alpha":[2],"coeff":1.0}]}"#)
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn compile_x2_reproduces_target() {
    let dir = TempDir::new().unwrap();
    let poly = x2(dir.path());
    let out = dir.path().join("net.json");
    let o = run(&["compile", "--poly", s(&poly), "--n", "2048", "--seed", "3", "--out", s(&out)]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let net = ReluNetwork::from_json_str(&fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(net.n(), 2048);
    let summary = String::from_utf8_lossy(&o.stderr);
    assert!(summary.contains("a = 0"));
    assert!(summary.contains("fischer_norm[k=2] = 1.414"));
    // Seed-averaged value at x = 1 over a few networks.
    let mut acc = 0.0;
    for seed in 0..8 {
        let o = run(&["compile", "--poly", s(&poly), "--n", "1024", "--seed", &seed.to_string(), "--eval", "0"]);
        let net = ReluNetwork::from_json_str(&String::from_utf8_lossy(&o.stdout)).unwrap();
        acc += net.eval(&[1.0]);
    }
    assert!((acc / 8.0 - 1.0).abs() < 0.1, "mean {}", acc / 8.0);
}

#[test]
fn constant_gives_empty_network() {
    let dir = TempDir::new().unwrap();
    let poly = write(dir.path(), "c.json", r#"{"dim":2,"terms":[{"alpha":[0,0],"coeff":-2.5}]}"#);
    let o = run(&["compile", "--poly", s(&poly)]);
    assert!(o.status.success());
    let net = ReluNetwork::from_json_str(&String::from_utf8_lossy(&o.stdout)).unwrap();
    assert_eq!(net.n(), 0);
    assert_eq!(net.eval(&[0.3, 0.4]), -2.5);
}

#[test]
fn shift_transform_sets_offset() {
    let dir = TempDir::new().unwrap();
    let poly = x2(dir.path());
    let o = run(&["compile", "--poly", s(&poly), "--transform", "shift:1.5", "--n", "64"]);
    assert!(o.status.success());
    let net = ReluNetwork::from_json_str(&String::from_utf8_lossy(&o.stdout)).unwrap();
    assert_eq!(net.a, 2.25);
}

#[test]
fn parse_errors_exit_two_with_position() {
    let dir = TempDir::new().unwrap();
    let poly = write(dir.path(), "bad.json", "{\"dim\":1,\n\"terms\":[{\"alpha\":[-1],\"coeff\":1.0}]}");
    let o = run(&["compile", "--poly", s(&poly)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 2"));

    let missing = run(&["compile", "--poly", "/nonexistent/p.json"]);
    assert_eq!(missing.status.code(), Some(2));
    let usage = run(&["compile"]);
    assert_eq!(usage.status.code(), Some(2));
    let bad_transform = run(&["compile", "--poly", s(&x2(dir.path())), "--transform", "rotate:1"]);
    assert_eq!(bad_transform.status.code(), Some(2));
}

#[test]
fn verify_runs_and_reports_coverage() {
    let o = run(&["verify", "--suite", "funkhecke"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let report: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(report["passed"], true);
    assert!(report["checks"].as_array().unwrap().iter().all(|c| c["suite"] == "funkhecke"));
    assert!(!report["coverage"].as_object().unwrap().is_empty());
}

#[test]
fn verify_verdicts_do_not_depend_on_seed() {
    let verdicts = |seed: &str| {
        let o = run(&["verify", "--seed", seed]);
        let r: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
        (o.status.code(), r["checks"].as_array().unwrap().iter().map(|c| c["passed"].clone()).collect::<Vec<_>>())
    };
    let a = verdicts("1");
    assert_eq!(a.0, Some(0));
    assert_eq!(a, verdicts("777"));
}

#[test]
fn bound_grid_ratios() {
    let dir = TempDir::new().unwrap();
    let poly = x2(dir.path());
    let o = run(&["bound", "--poly", s(&poly), "--format", "json"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let rows = v["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 3);
    assert!(rows.iter().all(|r| r["k_max"] == 2));
    let b: Vec<f64> = rows.iter().map(|r| r["bound_loose"].as_f64().unwrap()).collect();
    assert!((b[0] / b[1] - 2.0).abs() < 1e-12 && (b[1] / b[2] - 2.0).abs() < 1e-12);
    assert!((b[0] / b[2] - 4.0).abs() < 1e-12);
}

#[test]
fn bound_ridge_sweep_rows() {
    let o = run(&["bound", "--ridge", "1,1,0.5", "--dist", "sphere", "--dims", "2,8", "--n-grid", "64"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = String::from_utf8_lossy(&o.stdout);
    let lines: Vec<&str> = text.lines().collect();
    assert!(lines[0].starts_with("f_id,d,k_max,sigma_X2"));
    assert!(lines[1].starts_with("ridge_d2,2,2,0.5,64"));
    assert!(lines[2].starts_with("ridge_d8,8,2,0.125,64"));
}

#[test]
fn error_csv_is_reproducible_and_bounded() {
    let dir = TempDir::new().unwrap();
    let poly = x2(dir.path());
    let bounds = dir.path().join("bounds.csv");
    let args = ["error", "--poly", s(&poly), "--n-grid", "16,64", "--seeds", "4", "--eval", "512"];
    let a = run(&[&args[..], &["--bounds", s(&bounds)]].concat());
    assert!(a.status.success(), "{}", String::from_utf8_lossy(&a.stderr));
    let b = run(&args);
    assert_eq!(a.stdout, b.stdout);
    let text = String::from_utf8_lossy(&a.stdout);
    assert_eq!(text.lines().count(), 1 + 8);
    assert!(text.lines().next().unwrap().ends_with("schema_version"));

    let mut rdr = csv::Reader::from_path(&bounds).unwrap();
    let headers = rdr.headers().unwrap().clone();
    let col = |name: &str| headers.iter().position(|h| h == name).unwrap();
    let (loose, min) = (col("bound_loose"), col("err_min"));
    let mut rows = 0;
    for rec in rdr.records() {
        let rec = rec.unwrap();
        let bound: f64 = rec[loose].parse().unwrap();
        let err: f64 = rec[min].parse().unwrap();
        assert!(err <= bound, "{err} > {bound}");
        rows += 1;
    }
    assert_eq!(rows, 2);
}

#[test]
fn rejects_bad_thread_count() {
    let o = Command::new(env!("CARGO_BIN_EXE_relupoly"))
        .env("RELUPOLY_THREADS", "zero")
        .args(["verify", "--suite", "polycore"])
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
}
