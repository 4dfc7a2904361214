//! End-to-end runs of the command-line binary.

use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_conetorsion")).args(args).env_remove("CONETORSION_PRECISION").output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn torsion_json_is_deterministic() {
    let args = ["torsion", "--base", "sphere:3", "--precision", "25"];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let v: serde_json::Value = serde_json::from_str(&stdout(&a)).unwrap();
    assert_eq!(v["n"], 3);
    assert_eq!(v["audits"]["passed"], true);
    for key in ["top", "tors", "res_spectral", "res_anomaly", "total"] {
        assert!(v["breakdown"][key].is_string(), "{key}");
    }
}

#[test]
fn table_format() {
    let o = run(&["torsion", "--base", "sphere:1", "--precision", "20", "--format", "table"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("total"));
    assert!(text.contains("audits passed"));
}

#[test]
fn torus_reports_unavailable_pieces() {
    let o = run(&["torsion", "--base", "torus:3", "--precision", "20"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(v["breakdown"]["tors"].is_null());
    assert!(!v["unavailable"].as_array().unwrap().is_empty());
}

#[test]
fn spectrum_of_circle() {
    let o = run(&["spectrum", "--base", "sphere:1", "--cutoff", "10"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().skip(2).collect();
    assert_eq!(lines.len(), 10);
    for (j, l) in lines.iter().enumerate() {
        let fields: Vec<&str> = l.split(',').collect();
        assert_eq!(fields, vec!["0", &((j + 1) * (j + 1)).to_string(), "2"]);
    }
}

#[test]
fn spectrum_file_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("s3.txt");
    let p = path.to_str().unwrap();
    let o = run(&["spectrum", "--base", "sphere:3", "--cutoff", "12", "--out", p]);
    assert_eq!(o.status.code(), Some(0));
    let again = run(&["spectrum", "--spectrum-file", p, "--cutoff", "12"]);
    assert_eq!(again.status.code(), Some(0));
    assert_eq!(stdout(&again), std::fs::read_to_string(&path).unwrap());
}

#[test]
fn user_errors_exit_with_one() {
    assert_eq!(run(&["torsion", "--spectrum-file", "/nonexistent/spec.txt"]).status.code(), Some(1));
    assert_eq!(run(&["torsion", "--base", "sphere:3", "--precision", "19"]).status.code(), Some(1));
    assert_eq!(run(&["torsion", "--base", "lens:3"]).status.code(), Some(1));
    assert_eq!(run(&["torsion", "--base", "sphere:3", "--eps", "1.5"]).status.code(), Some(1));
    assert_eq!(run(&["verify", "--suite", "nope"]).status.code(), Some(1));
    assert_eq!(run(&["bogus"]).status.code(), Some(1));
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}

#[test]
fn verify_dm_suite() {
    let o = run(&["verify", "--suite", "dm"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert_eq!(text.lines().count(), 54);
    for l in text.lines() {
        let v: serde_json::Value = serde_json::from_str(l).unwrap();
        assert_eq!(v["pass"], true);
    }
}

#[test]
fn precision_from_environment() {
    let o = Command::new(env!("CARGO_BIN_EXE_conetorsion"))
        .args(["torsion", "--base", "sphere:1"])
        .env("CONETORSION_PRECISION", "10")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(1));
}
