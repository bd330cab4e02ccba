use std::path::Path;
use std::process::{Command, Output};
use std::time::Instant;

use serde_json::Value;
use tempfile::TempDir;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_gaugenorm"));
    c.env_remove("GAUGENORM_SEED");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!("stdout is not JSON ({e}): {}", String::from_utf8_lossy(&out.stdout))
    })
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn snumbers_of_diagonal() {
    let dir = TempDir::new().unwrap();
    let m = write(dir.path(), "m.json", r#"{"n": 2, "entries": [[3, 0], [0, 1]]}"#);
    let out = run(&["snumbers", &m]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["s"], serde_json::json!([3.0, 1.0]));
    assert_eq!(v["mu"]["breakpoints"], serde_json::json!(["0", "1/2", "1"]));
}

#[test]
fn malformed_json_exits_2() {
    let dir = TempDir::new().unwrap();
    let m = write(dir.path(), "m.json", "{\"entries\": [[1, 2]");
    assert_eq!(run(&["snumbers", &m]).status.code(), Some(2));
    assert_eq!(run(&["snumbers", "/nonexistent/file.json"]).status.code(), Some(2));
    assert_eq!(run(&["snumbers", r#"{"entries": [[1, 2]]}"#]).status.code(), Some(2));
}

#[test]
fn snumbers_64_is_fast() {
    // A fixed linear congruential fill keeps the input deterministic.
    let mut state: u64 = 12345;
    let mut next = || {
        state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        (state >> 11) as f64 / (1u64 << 53) as f64 - 0.5
    };
    let rows: Vec<Vec<[f64; 2]>> = (0..64).map(|_| (0..64).map(|_| [next(), next()]).collect()).collect();
    let dir = TempDir::new().unwrap();
    let m = write(dir.path(), "m.json", &serde_json::json!({ "entries": rows }).to_string());
    let start = Instant::now();
    let out = run(&["snumbers", &m]);
    let elapsed = start.elapsed();
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["s"].as_array().unwrap().len(), 64);
    assert!(elapsed.as_secs_f64() < 1.0, "took {elapsed:?}");
}

#[test]
fn norm_kyfan_two_thirds() {
    let out = run(&["norm", r#"{"kind": "kyfan", "t": "2/3"}"#, r#"{"diag": [3, 2, 1]}"#]);
    assert_eq!(out.status.code(), Some(0));
    assert!((json(&out)["norm"].as_f64().unwrap() - 2.5).abs() < 1e-12);
}

#[test]
fn norm_of_vector() {
    let out = run(&["norm", r#"{"kind": "operator"}"#, r#"{"vector": [-5, [0, 3]]}"#]);
    assert_eq!(json(&out)["norm"].as_f64().unwrap(), 5.0);
}

#[test]
fn dual_kyfan_half() {
    let out = run(&["norm", "--dual", r#"{"kind": "kyfan", "t": "1/2"}"#, r#"{"diag": [2, 1]}"#]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert!((v["norm"].as_f64().unwrap() - 1.5).abs() < 1e-12);
    assert!((v["primal"].as_f64().unwrap() - 2.0).abs() < 1e-12);
    assert_eq!(v["witness"].as_array().unwrap().len(), 2);
}

#[test]
fn dual_beyond_solver_limit_exits_4() {
    let v: Vec<f64> = (0..65).map(|i| i as f64).collect();
    let x = serde_json::json!({ "vector": v }).to_string();
    let out = run(&["norm", "--dual", r#"{"kind": "trace"}"#, &x]);
    assert_eq!(out.status.code(), Some(4));
}

#[test]
fn profile_csv_has_knot() {
    let out = run(&["norm", "--profile", r#"{"kind": "tbracket", "t": 0.75}"#]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text, "s,f\n0,0.75\n0.5,0.75\n1,1\n");
}

#[test]
fn bad_spec_exits_2() {
    let out = run(&["norm", r#"{"kind": "kyfan", "t": 2}"#, r#"{"diag": [1]}"#]);
    assert_eq!(out.status.code(), Some(2));
    let out = run(&["norm", r#"{"kind": "nosuch"}"#, r#"{"diag": [1]}"#]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn dominance_exit_codes() {
    let a = r#"{"diag": [1, 1]}"#;
    let b = r#"{"diag": [2, 0]}"#;
    let out = run(&["dominance", a, b]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["dominates"], Value::Bool(true));

    let out = run(&["dominance", b, a]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["violating_k"], serde_json::json!(1));

    let out = run(&["dominance", b, b]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert!(v["margins"].as_array().unwrap().iter().all(|m| m.as_f64() == Some(0.0)));

    let out = run(&["dominance", a, r#"{"diag": [1, 1, 1]}"#]);
    assert_eq!(out.status.code(), Some(5));
}

#[test]
fn proptest_axioms_pass() {
    let out = run(&["proptest", "--suite", "axioms", "--seed", "7", "--trials", "100"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    assert_eq!(json(&out)["passed"], Value::Bool(true));
}

#[test]
fn proptest_is_deterministic() {
    let a = run(&["proptest", "--suite", "all", "--seed", "7", "--trials", "20"]);
    let b = run(&["proptest", "--suite", "all", "--seed", "7", "--trials", "20"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let c = run(&["proptest", "--suite", "all", "--seed", "8", "--trials", "20"]);
    assert_ne!(a.stdout, c.stdout);
}

#[test]
fn seed_env_var_overrides_flag() {
    let a = run(&["proptest", "--suite", "duality", "--seed", "7", "--trials", "10"]);
    let b = bin()
        .args(["proptest", "--suite", "duality", "--seed", "1", "--trials", "10"])
        .env("GAUGENORM_SEED", "7")
        .output()
        .unwrap();
    assert_eq!(a.stdout, b.stdout);
    let bad = bin().args(["proptest"]).env("GAUGENORM_SEED", "x").output().unwrap();
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn injected_bug_exits_6_with_witness() {
    let dir = TempDir::new().unwrap();
    let w = dir.path().join("witness.json");
    let out = run(&[
        "proptest",
        "--suite",
        "axioms",
        "--seed",
        "7",
        "--trials",
        "5",
        "--inject-bug",
        "--witness-out",
        w.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(6));
    assert_eq!(json(&out)["passed"], Value::Bool(false));
    let witness: Value = serde_json::from_str(&std::fs::read_to_string(&w).unwrap()).unwrap();
    assert_eq!(witness["check"], "triangle");
    assert_eq!(witness["detail"]["matrices"].as_array().unwrap().len(), 2);
}

#[test]
fn unknown_suite_exits_2() {
    assert_eq!(run(&["proptest", "--suite", "nope"]).status.code(), Some(2));
}

#[test]
fn decompose_bracket_and_profile() {
    let out = run(&["decompose", r#"{"kind": "tbracket", "t": "3/4"}"#]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out), serde_json::json!({"atoms": [{"t": 0.75, "w": 1.0}]}));

    let p = r#"{"kind": "piecewise", "knots": [0, 0.5, 1], "values": [0.6, 0.7, 0.95]}"#;
    assert_eq!(run(&["decompose", p]).status.code(), Some(2));
    let p = r#"{"kind": "piecewise", "knots": [0, 1], "values": [0.75, 1]}"#;
    let v = json(&run(&["decompose", p]));
    assert_eq!(v["atoms"].as_array().unwrap().len(), 2);
}

#[test]
fn lpcheck_reports_small_error() {
    let out = run(&["lpcheck", "--p", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert!(v["max_error"].as_f64().unwrap() <= 1e-6);
    assert_eq!(v["rows"].as_array().unwrap().len(), 11);
    let out = run(&["lpcheck", "--p", "3/2", "--grid", "5"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(run(&["lpcheck", "--p", "1"]).status.code(), Some(2));
}
