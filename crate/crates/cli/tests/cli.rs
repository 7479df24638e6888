//! End-to-end tests of the qlevel binary: file I/O, formats, exit codes.

use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_qlevel"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).trim_end().to_string()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).to_string()
}

fn write_temp(name: &str, contents: &str) -> PathBuf {
    let path = std::env::temp_dir().join(format!("qlevel-cli-test-{}-{name}", std::process::id()));
    fs::write(&path, contents).expect("write temp file");
    path
}

const CHARGE_ONE_MODEL: &str = r#"{
    "s": 1, "m": 1,
    "charges": [[1]],
    "rep_charges": [[1]],
    "level": 1,
    "lambda_flags": [true],
    "convention": "prop_literal"
}"#;

/// q -> q^2, p -> 1, lambda -> -1, Q -> q.
const ORDER3_SPEC: &str = r#"{
    "series_power": 2,
    "sym_map": {
        "p":        {"c": {"order": 6, "coords": ["1", "0"]},  "e": 0},
        "lambda_1": {"c": {"order": 6, "coords": ["-1", "0"]}, "e": 0}
    },
    "novikov_map": {
        "Q": {"c": {"order": 6, "coords": ["1", "0"]}, "e": 1}
    }
}"#;

/// p -> 1, lambda -> q, Q -> q with the internal variable kept: the j = 1
/// denominator specializes to (1 - q^0), a pole.
const POLE_SPEC: &str = r#"{
    "series_power": 1,
    "sym_map": {
        "p":        {"c": {"order": 6, "coords": ["1", "0"]}, "e": 0},
        "lambda_1": {"c": {"order": 6, "coords": ["1", "0"]}, "e": 1}
    },
    "novikov_map": {
        "Q": {"c": {"order": 6, "coords": ["1", "0"]}, "e": 1}
    }
}"#;

#[test]
fn expand_prints_the_series() {
    let model = write_temp("m1.json", CHARGE_ONE_MODEL);
    let spec = write_temp("s1.json", ORDER3_SPEC);
    let out = run(&[
        "expand",
        model.to_str().unwrap(),
        spec.to_str().unwrap(),
        "--trunc",
        "9",
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    assert_eq!(stdout(&out), "1 + q - q^3 + q^4 + q^5 - q^6 - q^7 + 2*q^9");
}

#[test]
fn expand_at_trunc_zero_prints_one() {
    let model = write_temp("m2.json", CHARGE_ONE_MODEL);
    let spec = write_temp("s2.json", ORDER3_SPEC);
    let out = run(&[
        "expand",
        model.to_str().unwrap(),
        spec.to_str().unwrap(),
        "--trunc",
        "0",
    ]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "1");
}

#[test]
fn expand_json_round_trips_byte_identically() {
    let model = write_temp("m3.json", CHARGE_ONE_MODEL);
    let spec = write_temp("s3.json", ORDER3_SPEC);
    let out = run(&[
        "expand",
        model.to_str().unwrap(),
        spec.to_str().unwrap(),
        "--trunc",
        "8",
        "--format",
        "json",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    let parsed: qlevel_core::QSeries = serde_json::from_str(&text).unwrap();
    assert_eq!(serde_json::to_string(&parsed).unwrap(), text);
}

#[test]
fn malformed_model_exits_2_and_names_the_field() {
    let model = write_temp(
        "m4.json",
        r#"{"s": 1, "m": 1, "convention": "prop_literal"}"#,
    );
    let spec = write_temp("s4.json", ORDER3_SPEC);
    let out = run(&["expand", model.to_str().unwrap(), spec.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("charges"), "stderr: {}", stderr(&out));
}

#[test]
fn stray_symbol_in_spec_exits_2() {
    let model = write_temp("m6.json", CHARGE_ONE_MODEL);
    let stray = ORDER3_SPEC.replace(
        r#""lambda_1":"#,
        r#""nu": {"c": {"order": 6, "coords": ["1", "0"]}, "e": 0}, "lambda_1":"#,
    );
    let spec = write_temp("s6.json", &stray);
    let out = run(&["expand", model.to_str().unwrap(), spec.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("nu"), "stderr: {}", stderr(&out));
}

#[test]
fn pole_exits_3() {
    let model = write_temp("m5.json", CHARGE_ONE_MODEL);
    let spec = write_temp("s5.json", POLE_SPEC);
    let out = run(&["expand", model.to_str().unwrap(), spec.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
    assert!(stderr(&out).contains("pole"), "stderr: {}", stderr(&out));
}

#[test]
fn verify_single_identity_passes() {
    let out = run(&["verify", "prop1.order5.a", "--trunc", "12"]);
    assert!(out.status.success(), "{}", stderr(&out));
    assert!(stdout(&out).starts_with("pass"));
}

#[test]
fn verify_unknown_name_exits_2() {
    let out = run(&["verify", "prop9.missing"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn verify_json_report_shape() {
    let out = run(&[
        "verify",
        "prop3.order7.a",
        "--trunc",
        "10",
        "--format",
        "json",
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["name"], "prop3.order7.a");
    assert_eq!(v["status"], "pass");
    assert_eq!(v["trunc"], 10);
    assert!(v["first_mismatch"].is_null());
}

#[test]
fn catalog_lists_the_registry() {
    let out = run(&["catalog", "--format", "json"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let rows = v.as_array().unwrap();
    assert_eq!(rows.len(), 15);
    assert!(rows.iter().any(|r| r["name"] == "prop4.family"));
}

#[test]
fn mock_prints_the_oracle_series() {
    let out = run(&["mock", "prop2.order3.a", "--trunc", "3"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "1 + q - 2*q^2 + 3*q^3");
}

#[test]
fn mock_unknown_oracle_exits_2() {
    let out = run(&["mock", "prop9.missing"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn verify_all_passes_at_small_truncation() {
    let out = run(&["verify", "all", "--trunc", "6", "--format", "json"]);
    assert!(out.status.success(), "{}", stderr(&out));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["all_pass"], true);
    assert_eq!(v["identities"].as_array().unwrap().len(), 14);
    assert_eq!(v["prop4_family"].as_array().unwrap().len(), 15);
}

#[test]
fn shipped_samples_expand_to_matching_series() {
    // The order-7 sample model and specialization expand to exactly the
    // series the corresponding oracle prints.
    let root = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../..");
    let model = root.join("samples/order7.model.json");
    let spec = root.join("samples/order7_f0.spec.json");
    let expand = run(&[
        "expand",
        model.to_str().unwrap(),
        spec.to_str().unwrap(),
        "--trunc",
        "15",
    ]);
    assert!(expand.status.success(), "{}", stderr(&expand));
    let oracle = run(&["mock", "prop3.order7.a", "--trunc", "15"]);
    assert!(oracle.status.success());
    assert_eq!(stdout(&expand), stdout(&oracle));
}

#[test]
fn selfcheck_is_deterministic_and_clean() {
    let a = run(&["selfcheck", "--seed", "11"]);
    let b = run(&["selfcheck", "--seed", "11"]);
    assert!(a.status.success(), "{}", stderr(&a));
    assert_eq!(stdout(&a), stdout(&b));
    assert!(stdout(&a).contains("suites clean"));
}
