use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn covent(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_covent"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn write_state(dir: &TempDir, file: &str, args: &[&str]) -> String {
    let path = dir.path().join(file);
    let mut full = vec!["state"];
    full.extend_from_slice(args);
    full.extend_from_slice(&["--output", path_str(&path)]);
    let o = covent(&full);
    assert!(o.status.success(), "{}", stderr(&o));
    path_str(&path).to_owned()
}

fn json(o: &Output) -> Value {
    assert!(o.status.success(), "{}", stderr(o));
    serde_json::from_str(&stdout(o)).unwrap()
}

#[test]
fn analyze_singlet() {
    let dir = TempDir::new().unwrap();
    let file = write_state(&dir, "singlet.json", &["singlet"]);
    let v = json(&covent(&["analyze", &file]));
    assert!((v["g"].as_f64().unwrap() - 3.0).abs() < 1e-12);
    assert!(v["l3"].as_f64().unwrap().abs() < 1e-12);
    assert_eq!(v["verdict"], "entangled_certified");
    assert!((v["c_min"].as_f64().unwrap() - 1.0).abs() < 1e-9);
}

#[test]
fn analyze_rho_u_and_csv() {
    let dir = TempDir::new().unwrap();
    let file = write_state(&dir, "rho.json", &["rho_u", "--gamma", "0.25", "--theta", "0.7"]);
    let v = json(&covent(&["analyze", &file]));
    assert!((v["g"].as_f64().unwrap() - 1.5).abs() < 1e-12);
    assert!((v["concurrence"].as_f64().unwrap() - 0.5).abs() < 1e-10);
    assert!((v["purity"].as_f64().unwrap() - 0.625).abs() < 1e-12);

    let o = covent(&["analyze", &file, "--format", "csv"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert_eq!(text.lines().next().unwrap(), "g,g_hs,l3,verdict,c_min,c_max,concurrence,purity");
    assert_eq!(text.lines().count(), 2);
}

#[test]
fn analyze_pure_state_file() {
    let dir = TempDir::new().unwrap();
    let file = dir.path().join("pure.json");
    let h = std::f64::consts::FRAC_1_SQRT_2;
    fs::write(&file, format!(r#"{{"amps": [[{h}, 0], [0, 0], [0, 0], [{h}, 0]]}}"#)).unwrap();
    let v = json(&covent(&["analyze", path_str(&file)]));
    assert!((v["g"].as_f64().unwrap() - 3.0).abs() < 1e-9);
    assert!((v["l3"].as_f64().unwrap() - 8.0).abs() < 1e-9);
}

#[test]
fn malformed_and_invalid_input() {
    let dir = TempDir::new().unwrap();
    let bad = dir.path().join("bad.json");
    fs::write(&bad, "{\"re\": [[1, 0").unwrap();
    let o = covent(&["analyze", path_str(&bad)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("parse error"), "{}", stderr(&o));

    let trace = dir.path().join("trace.json");
    let zeros = "[[0,0,0,0],[0,0,0,0],[0,0,0,0],[0,0,0,0]]";
    fs::write(&trace, format!(r#"{{"re": [[0.99,0,0,0],[0,0,0,0],[0,0,0,0],[0,0,0,0]], "im": {zeros}}}"#)).unwrap();
    let o = covent(&["analyze", path_str(&trace)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("trace"), "{}", stderr(&o));

    let o = covent(&["analyze", path_str(&dir.path().join("missing.json"))]);
    assert_eq!(o.status.code(), Some(2));

    let o = covent(&["scan-bounds", "--rank", "5", "--count", "3"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn infeasible_purity_window_fails() {
    let o = covent(&["purity-slice", "--purity", "0.25", "--window", "1e-9", "--count", "1"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("attempts"), "{}", stderr(&o));
}

#[test]
fn scan_bounds_csv() {
    let o = covent(&["scan-bounds", "--count", "200", "--seed", "3", "--rank", "3,4"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "kind,concurrence,g,purity,rank,violates");
    let rows: Vec<Vec<&str>> = lines.map(|l| l.split(',').collect()).collect();
    assert_eq!(rows.len(), 200 + 2 * 200);
    assert!(rows.iter().all(|r| r.len() == 6));
    let first = |kind: &str| rows.iter().find(|r| r[0] == kind).unwrap().clone();
    let lower = first("lower_bound");
    let upper = first("upper_bound");
    assert_eq!((lower[1], lower[2]), ("0.0", "0.0"));
    assert_eq!((upper[1], upper[2]), ("0.0", "1.0"));
    let last_upper = rows.iter().rev().find(|r| r[0] == "upper_bound").unwrap();
    assert_eq!((last_upper[1], last_upper[2]), ("1.0", "3.0"));
}

#[test]
fn purity_slice_with_summary() {
    let dir = TempDir::new().unwrap();
    let summary = dir.path().join("bins.csv");
    let o = covent(&[
        "purity-slice", "--purity", "0.46", "--count", "300", "--seed", "2", "--summary", path_str(&summary),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = stdout(&o);
    assert_eq!(text.lines().next().unwrap(), "index,concurrence,g,purity");
    assert_eq!(text.lines().count(), 301);
    for line in text.lines().skip(1) {
        let p: f64 = line.split(',').nth(3).unwrap().parse().unwrap();
        assert!((p - 0.46).abs() <= 0.005);
    }
    let bins = fs::read_to_string(&summary).unwrap();
    assert_eq!(bins.lines().next().unwrap(), "c_lo,c_hi,n,g_min,g_max,g_spread,residual_spread");
}

#[test]
fn sample_is_deterministic_and_records_round_trip() {
    let dir = TempDir::new().unwrap();
    let file = write_state(&dir, "s.json", &["singlet"]);
    let rec = dir.path().join("rec.json");
    let args = ["sample", file.as_str(), "--shots", "5000", "--seed", "9", "--record", path_str(&rec)];
    let a = covent(&args);
    let b = covent(&args);
    assert_eq!(stdout(&a), stdout(&b));
    let v = json(&a);
    assert_eq!(v["g_exact"].as_f64().unwrap(), 3.0);
    assert!((v["g_hat"].as_f64().unwrap() - 3.0).abs() < 0.05);

    // Lab-style input: the record alone gives the same estimate.
    let from_record = json(&covent(&["analyze", path_str(&rec)]));
    assert_eq!(from_record["g_hat"], v["g_hat"]);
    assert_eq!(from_record["stderr"], v["stderr"]);

    let other = covent(&["sample", &file, "--shots", "5000", "--seed", "10"]);
    assert_ne!(stdout(&a), stdout(&other));
}

#[test]
fn state_json_round_trips_textually() {
    let dir = TempDir::new().unwrap();
    let file = write_state(&dir, "r.json", &["rho_u", "--gamma", "0.1234567890123", "--theta", "2.2"]);
    let text = fs::read_to_string(&file).unwrap();
    let rho: covent::DensityMatrix = serde_json::from_str(&text).unwrap();
    let again = serde_json::to_string_pretty(&rho).unwrap() + "\n";
    assert_eq!(again, text);
}

#[test]
fn ensemble_spec_file_and_flags_agree() {
    let dir = TempDir::new().unwrap();
    let spec = dir.path().join("spec.json");
    fs::write(&spec, r#"{"kind": "ginibre", "count": 25, "rank": 2, "seed": 5}"#).unwrap();
    let a = covent(&["ensemble", "--spec", path_str(&spec)]);
    let b = covent(&["ensemble", "--kind", "ginibre", "--count", "25", "--rank", "2", "--seed", "5"]);
    assert!(a.status.success(), "{}", stderr(&a));
    assert_eq!(stdout(&a), stdout(&b));
    assert_eq!(stdout(&a).lines().count(), 26);
}
