use std::process::{Command, Output};

use serde_json::Value;

fn nakano(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nakano")).args(args).output().expect("binary runs")
}

fn ok(args: &[&str]) -> String {
    let out = nakano(args);
    assert_eq!(out.status.code(), Some(0), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn code(args: &[&str]) -> i32 {
    nakano(args).status.code().unwrap()
}

fn json(args: &[&str]) -> Value {
    let text = ok(args);
    assert!(text.ends_with('\n') && text.trim_end().lines().count() == 1);
    serde_json::from_str(&text).unwrap()
}

#[test]
fn exit_ok() {
    assert!(ok(&["norm", "2", "[[1,1],[2,1]]"]).contains("norm: 1.414213562373"));
    assert!(ok(&["norm", "prefix(1=1; 2)", "[[1,1],[2,1]]"]).contains("norm: 1.618033988750"));
    assert!(ok(&["norm", "2", "[]"]).contains("norm: 0.000000000000"));
}

#[test]
fn exit_parse_error() {
    let out = nakano(&["compare", "merge(even: 2, 1 +)", "2"]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("1:19") && err.contains("                  ^"), "{err}");
    assert_eq!(code(&["compare", "0.5", "2"]), 2);
    assert_eq!(code(&["norm", "2", "[[0,1]]"]), 2);
    assert_eq!(code(&["nonsense"]), 2);
}

#[test]
fn exit_numeric_failure() {
    assert_eq!(code(&["norm", "3", "[[1,2],[5,1]]", "--max-iter", "3"]), 3);
}

#[test]
fn exit_internal_inconsistency() {
    assert_eq!(code(&["compare", "1 + 1/n", "n", "--inject-inconsistency"]), 4);
}

#[test]
fn exit_precondition_unmet() {
    assert_eq!(code(&["witness", "--linf", "2"]), 5);
    assert_eq!(code(&["witness", "2", "3"]), 5);
    assert_eq!(code(&["probe", "n", "1"]), 5);
}

#[test]
fn exit_horizon_exhausted() {
    assert_eq!(code(&["witness", "--linf", "blocks", "--count", "9"]), 6);
}

#[test]
fn compare_examples() {
    let text = ok(&["compare", "1 + 1/n", "n"]);
    assert!(text.contains("SS: Yes — Thm 2.2"), "{text}");
    assert!(ok(&["compare", "blocks", "inf"]).contains("SS: No — Thm 2.3"));
    assert!(ok(&["compare", "2", "2"]).contains("Equal: Yes — Prop 1.2"));
    // Unknown verdicts keep exit 0 and show the reason
    let text = ok(&["compare", "16", "blocks"]);
    assert!(text.contains("Equal: Unknown — Prop 1.2 — "), "{text}");
}

#[test]
fn compare_json_schema() {
    let v = json(&["--json", "compare", "2", "2 + recip(blocks)"]);
    assert_eq!(v["p"], "2");
    assert_eq!(v["q"], "2 + recip(blocks)");
    let report = v["report"].as_object().unwrap();
    let keys: Vec<&str> = report.keys().map(String::as_str).collect();
    assert_eq!(
        keys,
        [
            "compact",
            "inclusion_holds",
            "l_weakly_compact",
            "m_weakly_compact",
            "spaces_equal",
            "strictly_singular",
            "weakly_compact",
            "witnesses"
        ]
    );
    let ss = &report["strictly_singular"];
    assert_eq!(ss["answer"], "no");
    assert_eq!(ss["citation"], "Thm 2.1");
    assert!(ss["certificate"]["kind"].is_string() && ss["certificate"]["statement"].is_string());
    assert_eq!(report["witnesses"]["equality"]["indices"], serde_json::json!([1, 2, 6, 33, 289]));
}

#[test]
fn witness_examples() {
    assert!(ok(&["witness", "--linf", "blocks", "--count", "4"]).starts_with("indices: 1, 2, 6, 33\n"));
    let w = json(&["witness", "2", "2 + absdiff(2, 2)", "--count", "3", "--json"]);
    assert_eq!(w["indices"], serde_json::json!([1, 2, 3]));
    let strict = json(&["witness", "2", "2 + recip(blocks)", "--count", "3", "--strict", "--json"]);
    assert_eq!(strict["indices"], serde_json::json!([2, 6, 33]));
}

#[test]
fn probe_examples() {
    let rows = |v: &Value| -> Vec<f64> { v["rows"].as_array().unwrap().iter().map(|r| r["ratio"].as_f64().unwrap()).collect() };
    let r = rows(&json(&["--json", "probe", "2", "4", "--lengths", "16"]));
    assert!((r[0] - 0.5).abs() < 1e-6);
    let r = rows(&json(&["--json", "probe", "2", "2", "--lengths", "16"]));
    assert!((r[0] - 1.0).abs() < 1e-9);
    let r = rows(&json(&["--json", "probe", "1 + 1/n", "n", "--lengths", "4,64,1024"]));
    assert!(r[0] > r[1] && r[1] > r[2], "{r:?}");
}

#[test]
fn space_report() {
    let v = json(&["--json", "space", "blocks"]);
    assert_eq!(v["space"]["separable"]["answer"], "no");
    assert_eq!(v["space"]["linf_witness"]["indices"], serde_json::json!([1, 2, 6, 33, 289]));
    assert!(ok(&["space", "2"]).contains("Reflexive: Yes — §1-remark"));
}
