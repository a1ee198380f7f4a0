//! End-to-end runs of the command-line front end through `cli::run`.

use gamma_lab::cli::run;
use std::io::Cursor;

const VIOLATING: &str = r#"{"n": 2, "backend": "dense", "ops": [[[[3,0]]], [[[1,0]]]]}"#;
const INSIDE: &str = r#"{"n": 2, "backend": "dense", "ops": [[[[1.2,0]]], [[[0.5,0]]]]}"#;

fn invoke(args: &[&str], stdin: &str) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("gamma-lab").chain(args.iter().copied());
    let code = run(argv, &mut Cursor::new(stdin.as_bytes()), &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

#[test]
fn exit_codes() {
    assert_eq!(invoke(&["classify", "-"], VIOLATING).0, 2);
    assert_eq!(invoke(&["classify", "-"], INSIDE).0, 0);
    assert_eq!(invoke(&["fundamental", "-"], INSIDE).0, 0);
    assert_eq!(invoke(&["classify", "-"], "{not json").0, 3);
    assert_eq!(invoke(&["classify", "/nonexistent/input.json"], "").0, 3);
    assert_eq!(invoke(&["frobnicate"], "").0, 3);
    assert_eq!(invoke(&["example", "3"], "").0, 3);
    assert_eq!(invoke(&["--help"], "").0, 0);
    assert_eq!(invoke(&["--version"], "").0, 0);
}

#[test]
fn json_reports_are_reproducible_for_a_seed() {
    let args = ["classify", "-", "--format", "json", "--seed", "11"];
    let (c1, a, _) = invoke(&args, INSIDE);
    let (c2, b, _) = invoke(&args, INSIDE);
    assert_eq!((c1, c2), (0, 0));
    assert_eq!(a, b);
    let v: serde_json::Value = serde_json::from_str(&a).unwrap();
    assert_eq!(v["seed"], 11);
    assert_eq!(v["command"], "classify");
    assert!(v["versions"]["gamma-lab"].is_string());
}

#[test]
fn violation_report_carries_a_witness() {
    let (code, out, _) = invoke(&["classify", "-", "--format", "json"], VIOLATING);
    assert_eq!(code, 2);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    let checks = v["checks"].as_array().unwrap();
    assert!(checks.iter().any(|c| c["status"] == "fail" && !c["witness"].is_null()));
}

#[test]
fn out_flag_writes_the_report_file() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("t.json");
    let report = dir.path().join("r.json");
    std::fs::write(&input, INSIDE).unwrap();
    let (code, _, _) = invoke(&["fundamental", input.to_str().unwrap(), "--format", "json", "--out", report.to_str().unwrap()], "");
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    assert_eq!(v["command"], "fundamental");
}

#[test]
fn shallow_dilation_still_matches_moments() {
    // The dilation is block upper triangular, so moments of every degree match at any depth.
    let (code, out, _) = invoke(&["dilate", "-", "--levels", "1", "--degree", "3"], INSIDE);
    assert_eq!(code, 0, "{out}");
    assert!(!out.contains("fail"));
}

#[test]
fn dilate_rejects_symbolic_input() {
    let (_, ex, _) = invoke(&["example", "1", "--format", "json"], "");
    let v: serde_json::Value = serde_json::from_str(&ex).unwrap();
    let tuple = v["data"]["tuple"].to_string();
    let (code, _, err) = invoke(&["dilate", "-"], &tuple);
    assert_eq!(code, 3);
    assert!(err.contains("dense"), "{err}");
}

#[test]
fn second_example_reports_expected_failures() {
    let (code, out, _) = invoke(&["example", "2"], "");
    assert_eq!(code, 0);
    assert!(out.contains("fail (expected)"));
    let (code, out, _) = invoke(&["example", "1"], "");
    assert_eq!(code, 0);
    assert!(!out.contains("fail"));
}

#[test]
fn necessary_runs_on_symbolic_example_tuples() {
    for which in ["1", "2"] {
        let (_, ex, _) = invoke(&["example", which, "--format", "json"], "");
        let v: serde_json::Value = serde_json::from_str(&ex).unwrap();
        let tuple = v["data"]["tuple"].to_string();
        let (code, out, err) = invoke(&["necessary", "-"], &tuple);
        assert_ne!(code, 3, "{err}");
        assert!(!out.is_empty());
    }
}
