use std::process::{Command, Output};

use serde_json::Value;

fn cevian(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cevian"))
        .args(args)
        .output()
        .expect("run cevian")
}

fn json(args: &[&str]) -> Value {
    let mut all = args.to_vec();
    all.extend(["--format", "json"]);
    let out = cevian(&all);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn ratio_at_the_centroid_is_tight() {
    let v = json(&["ratio", "--n", "2", "--lambda", "0.3333333333333333,0.3333333333333333,0.3333333333333334"]);
    assert!((v["cevian_ratio"].as_f64().unwrap() - 0.25).abs() < 1e-14);
    assert!(v["theorem1_slack"].as_f64().unwrap().abs() < 1e-14);
    assert_eq!(v["corner_ratios"].as_array().unwrap().len(), 3);
}

#[test]
fn ratio_renormalizes_with_a_warning() {
    let out = cevian(&["ratio", "--n", "2", "--lambda", "1,1,2"]);
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("renormalized"));
}

#[test]
fn non_interior_point_is_a_domain_error() {
    let out = cevian(&["ratio", "--n", "2", "--lambda", "0.5,0.5,0"]);
    assert_eq!(out.status.code(), Some(3));
    let out = cevian(&["ratio", "--n", "2", "--lambda", "0.5,0.7,-0.2"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn usage_errors_exit_with_two() {
    assert_eq!(cevian(&["verify", "--suite", "moebius", "--n", "3"]).status.code(), Some(2));
    assert_eq!(cevian(&["verify", "--suite", "nope", "--n", "3"]).status.code(), Some(2));
    assert_eq!(cevian(&["ratio", "--n", "3", "--lambda", "0.5,0.5"]).status.code(), Some(2));
    assert_eq!(cevian(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn constants_csv_has_a_header_and_one_row_per_n() {
    let out = cevian(&["constants", "--n-min", "2", "--n-max", "5", "--format", "csv"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    let header = lines.next().unwrap();
    assert!(header.starts_with("n,theta,"));
    assert!(header.contains("metallic"));
    assert_eq!(lines.count(), 4);
}

#[test]
fn constants_json_matches_closed_forms() {
    let v = json(&["constants", "--n-min", "2", "--n-max", "3"]);
    let rows = v.as_array().unwrap();
    assert!((rows[0]["theta"].as_f64().unwrap() - (3.0 - 5f64.sqrt()) / 2.0).abs() < 1e-14);
    assert!((rows[1]["theta"].as_f64().unwrap() - (2.0 - 3f64.sqrt())).abs() < 1e-14);
}

#[test]
fn verify_passes_and_reports_its_plan() {
    let v = json(&["verify", "--suite", "theorem1", "--n", "3", "--trials", "2000", "--seed", "5"]);
    assert_eq!(v["passed"], Value::Bool(true));
    assert_eq!(v["suite"], "theorem1");
    assert_eq!(v["trials"], 2000);
    assert_eq!(v["seed"], 5);
    assert!(v["violations"].as_array().unwrap().is_empty());
    assert!(v["max_ratio_observed"].as_f64().unwrap() <= v["bound"].as_f64().unwrap());
}

#[test]
fn verify_with_an_impossible_tolerance_reports_violations() {
    let out = cevian(&[
        "verify", "--suite", "eq2", "--n", "3", "--trials", "200", "--tol", "1e-30", "--format", "json",
    ]);
    assert_eq!(out.status.code(), Some(1));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["passed"], Value::Bool(false));
    assert!(!v["violations"].as_array().unwrap().is_empty());
}

#[test]
fn optimize_recovers_theta() {
    let v = json(&["optimize", "--n", "3", "--restarts", "8", "--seed", "1"]);
    let theta = v["theta"].as_f64().unwrap();
    assert!((v["argmax_x"].as_f64().unwrap() - theta).abs() < 1e-8);
    assert!(v["simplex_max_deviation"].as_f64().unwrap() < 1e-5);
    assert_eq!(v["distinct_optima"], 1);
}

#[test]
fn audit_flags_every_dimension() {
    let v = json(&["audit-bounds", "--n-max", "4"]);
    let rows = v.as_array().unwrap();
    assert_eq!(rows.len(), 3);
    assert!(rows.iter().all(|r| r["flagged"] == Value::Bool(true)));
    assert!((rows[0]["ratio"].as_f64().unwrap() - 9.0).abs() < 1e-9);
}

#[test]
fn output_is_deterministic() {
    let args = ["verify", "--suite", "decomposition", "--n", "4", "--trials", "3000", "--seed", "9", "--format", "csv"];
    assert_eq!(cevian(&args).stdout, cevian(&args).stdout);
}

#[test]
fn text_output_lists_fields() {
    let out = cevian(&["optimize", "--n", "2", "--restarts", "4"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("theta"));
    assert!(text.contains("lambda_star"));
}
