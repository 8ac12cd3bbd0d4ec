//! End-to-end checks of the command-line interface: outputs, formats,
//! stdin-fed verbs, and error statuses.

use std::io::Write;
use std::process::{Command, Stdio};

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_curvalg")
}

fn run_ok(args: &[&str]) -> String {
    let out = Command::new(bin()).args(args).output().expect("spawn");
    assert!(
        out.status.success(),
        "expected success for {args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).expect("utf8")
}

fn run_fail(args: &[&str]) -> String {
    let out = Command::new(bin()).args(args).output().expect("spawn");
    assert_eq!(
        out.status.code(),
        Some(1),
        "expected exit 1 for {args:?}, stdout: {}",
        String::from_utf8_lossy(&out.stdout)
    );
    String::from_utf8(out.stderr).expect("utf8")
}

fn run_with_stdin(args: &[&str], input: &str) -> String {
    let mut child = Command::new(bin())
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("spawn");
    child
        .stdin
        .as_mut()
        .unwrap()
        .write_all(input.as_bytes())
        .unwrap();
    let out = child.wait_with_output().expect("wait");
    assert!(
        out.status.success(),
        "stdin verb failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).expect("utf8")
}

#[test]
fn dims_matches_expected_counts() {
    let out = run_ok(&["dims", "--n", "3"]);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["val"], serde_json::json!([1, 1, 2, 2, 2, 1, 1]));
    assert_eq!(v["tilde"], serde_json::json!([1, 1, 1]));
    assert_eq!(v["curv"], serde_json::json!(13));
    // n = 1 has an empty tilde ring
    let out = run_ok(&["dims", "--n", "1"]);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["tilde"], serde_json::json!([]));
    assert_eq!(v["curv"], serde_json::json!(3));
}

#[test]
fn basis_lists_labels_in_order() {
    let out = run_ok(&["basis", "--n", "2"]);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    let labels = v["labels"].as_array().unwrap();
    assert_eq!(labels.len(), 7);
    assert_eq!(labels[0]["basis"], "Delta");
    assert!(labels.iter().any(|l| l["basis"] == "N"));
}

#[test]
fn reduce_and_mul() {
    let out = run_ok(&["reduce", "--n", "1", "s"]);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["normal_form"], "1/2 * t^2");
    let out = run_ok(&["reduce", "--n", "3", "--ring", "tilde", "s"]);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["normal_form"], "3/2 * t^2");
    let out = run_ok(&["mul", "--n", "2", "s", "s"]);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["product"], "1/6 * t^4");
}

#[test]
fn dual_mul_through_expressions() {
    // (v + t*u)^2 = 0 in the dual algebra
    let out = run_ok(&["dual-mul", "--n", "3", "v + t*u", "v + t*u"]);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["terms"].as_array().unwrap().len(), 0);
    // t * t * t at n = 2 lands on (6/pi) Delta*_10
    let out = run_ok(&["dual-mul", "--n", "2", "t^2", "t"]);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    let terms = v["terms"].as_array().unwrap();
    assert_eq!(terms.len(), 1);
    assert_eq!(terms[0]["basis"], "DeltaStar");
    assert_eq!(terms[0]["coeff"], "6/1 * pi^-1");
}

#[test]
fn kinematic_formats() {
    let json = run_ok(&["kinematic-local", "--n", "2", "--format", "json"]);
    assert!(json.contains("\"basis\":\"Delta\""));
    let csv = run_ok(&["kinematic-local", "--n", "2", "--format", "csv"]);
    assert!(csv.starts_with("target_basis,target_k,target_q,"));
    let tex = run_ok(&["kinematic-local", "--n", "2", "--format", "latex"]);
    assert!(tex.contains("\\otimes"));
    let gjson = run_ok(&["kinematic-global", "--n", "2", "--format", "json"]);
    assert!(gjson.contains("\"target\":\"1\""));
    let gcsv = run_ok(&["kinematic-global", "--n", "2", "--format", "csv"]);
    assert!(gcsv.starts_with("target,left,right,coeff_text"));
    let gtex = run_ok(&["kinematic-global", "--n", "2", "--format", "latex"]);
    assert!(gtex.contains("\\otimes"));
}

#[test]
fn globalize_and_module_mul_from_stdin() {
    // N labels die under globalization
    let n10 = r#"{"n":3,"terms":[{"basis":"N","k":1,"q":0,"coeff":"1/1"}]}"#;
    let out = run_with_stdin(&["globalize", "--n", "3"], n10);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["valuation"], "0");
    // module multiplication by t sends Delta_00 to (2/pi) Delta_10
    let d00 = r#"{"n":3,"terms":[{"basis":"Delta","k":0,"q":0,"coeff":"1/1"}]}"#;
    let out = run_with_stdin(&["module-mul", "--n", "3", "t"], d00);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    let terms = v["terms"].as_array().unwrap();
    assert_eq!(terms.len(), 1);
    assert_eq!(terms[0]["k"], 1);
    assert_eq!(terms[0]["coeff"], "2/1 * pi^-1");
}

#[test]
fn image_check_reports_membership_and_preimage() {
    let out = run_ok(&["image-check", "--n", "3", "--lambda", "0/1", "t^2", "0"]);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["member"], serde_json::json!(true));
    assert_eq!(v["preimage"], "1/1 * t^2");
    let out = run_ok(&["image-check", "--n", "3", "--lambda", "0/1", "t^2", "1"]);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["member"], serde_json::json!(false));
    assert_eq!(v["preimage"], serde_json::Value::Null);
}

#[test]
fn angular_check_examples() {
    let out = run_ok(&[
        "angular-check",
        "--n",
        "4",
        "--lambda",
        "0/1",
        "t^4 - 6*s*t^2 + 6*s^2",
    ]);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["angular"], serde_json::json!(true));
    let out = run_ok(&["angular-check", "--n", "3", "--lambda", "0/1", "s"]);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["angular"], serde_json::json!(false));
    assert_eq!(v["residue"], "1/10 * t^5");
    assert!(v["witness"].is_object());
}

#[test]
fn failures_exit_one_with_diagnostics() {
    let err = run_fail(&["reduce", "--n", "2", "t^-1"]);
    assert!(err.contains("error"), "stderr: {err}");
    let err = run_fail(&["tlambda", "--n", "2", "--lambda", "1/0"]);
    assert!(err.contains("error"), "stderr: {err}");
    run_fail(&["dims", "--n", "0"]);
    run_fail(&["no-such-verb"]);
    run_fail(&["reduce", "--n", "2", "w + 1"]);
    // out-of-range label in element input
    let bad = r#"{"n":2,"terms":[{"basis":"Delta","k":9,"q":0,"coeff":"1/1"}]}"#;
    let mut child = Command::new(bin())
        .args(["globalize", "--n", "2"])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child
        .stdin
        .as_mut()
        .unwrap()
        .write_all(bad.as_bytes())
        .unwrap();
    let out = child.wait_with_output().unwrap();
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn help_exits_zero() {
    let out = Command::new(bin()).arg("--help").output().unwrap();
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stdout).contains("kinematic"));
}
