use std::process::{Command, Output};

use serde_json::Value;

fn bin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_polar-bounds")).args(args).output().expect("binary runs")
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn witness_thm21_degree_four() {
    let out = bin(&["witness", "--bound", "THM21_2_1", "--degree", "4"]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert!(v["equality_gap"].as_f64().unwrap() <= 1e-6);
    assert_eq!(v["evaluation"]["outcome"], "holds");
    let roots = v["instance"]["poly"]["plain_roots"].as_array().unwrap();
    assert_eq!(roots.len(), 4);
    for r in roots {
        let (re, im) = (r[0].as_f64().unwrap(), r[1].as_f64().unwrap());
        // every root of z^4 + 1 satisfies z^4 = -1
        let z = num_complex::Complex64::new(re, im).powi(4);
        assert!((z.re + 1.0).abs() < 1e-12 && z.im.abs() < 1e-12);
    }
}

#[test]
fn witness_without_closed_form_is_usage_error() {
    assert_eq!(bin(&["witness", "--bound", "F_1_2", "--degree", "3"]).status.code(), Some(2));
}

#[test]
fn fuzz_all_bounds_exits_zero() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let out = bin(&["fuzz", "--bounds", "ALL", "--trials", "100", "--seed", "1", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let report: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(report["schema"], "polar-bounds/1");
    assert_eq!(report["sections"].as_array().unwrap().len(), 18);
}

#[test]
fn fuzz_csv_to_stdout() {
    let out = bin(&["fuzz", "--bounds", "B_1_1,EL_1_6", "--trials", "3", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(String::from_utf8(out.stdout).unwrap().lines().count(), 7);
}

#[test]
fn check_round_trips_a_witness() {
    let out = bin(&["witness", "--bound", "HA_1_11", "--degree", "5"]);
    let instance = stdout_json(&out)["instance"].clone();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("inst.json");
    std::fs::write(&path, serde_json::to_string(&instance).unwrap()).unwrap();
    let out = bin(&["check", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout_json(&out)["check"], "HA_1_11");
    let out = bin(&["check", path.to_str().unwrap(), "--mode", "uniform"]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn check_hypothesis_failure_exits_one() {
    // a zero at 0.5 breaks the zero-free disk required by the bound
    let instance = serde_json::json!({
        "bound_id": "EL_1_6",
        "poly": {
            "leading_scale": [1.0, 0.0],
            "plain_roots": [[0.5, 0.0], [2.0, 0.0]],
            "special_root": [0.0, 0.0],
            "special_multiplicity": 0
        },
        "k": 1.0,
        "alpha": 0.0
    });
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    std::fs::write(&path, instance.to_string()).unwrap();
    let out = bin(&["check", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let v = stdout_json(&out);
    assert_eq!(v["error"], "hypothesis_violated");
    let clauses = v["hypothesis"]["clauses"].as_array().unwrap();
    assert!(clauses.iter().any(|c| c["name"] == "roots_outside" && c["ok"] == false));
}

#[test]
fn malformed_input_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("junk.json");
    std::fs::write(&path, "{ not json").unwrap();
    let out = bin(&["check", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(!out.stderr.is_empty());
    assert_eq!(bin(&["check", dir.path().join("missing.json").to_str().unwrap()]).status.code(), Some(2));
    assert_eq!(bin(&["fuzz", "--trials", "0"]).status.code(), Some(2));
    assert_eq!(bin(&["fuzz", "--bounds", "B_1_1,XYZ"]).status.code(), Some(2));
    assert_eq!(bin(&[]).status.code(), Some(2));
}

#[test]
fn sharpness_writes_result() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("sharp.json");
    let out = bin(&["sharpness", "--bound", "B_1_1", "--budget", "40", "--seed", "3", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert!(v["best_ratio"].as_f64().unwrap() >= 1.0 - 1e-9);
    assert!(v["evaluations"].as_u64().unwrap() <= 40);
}
