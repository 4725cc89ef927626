//! The command line: exit codes, report shapes and JSON round trips.

use serde_json::{json, Value};
use std::path::PathBuf;
use tdlc::cli::{run, EXIT_INCONCLUSIVE, EXIT_INPUT, EXIT_OK};
use tdlc::fixtures::fixture;

fn tdlc(args: &[&str]) -> (i32, String) {
    let mut out = Vec::new();
    let mut full = vec!["tdlc"];
    full.extend_from_slice(args);
    let code = run(full, &mut out);
    (code, String::from_utf8(out).unwrap())
}

/// Writes a fixture's problem document, keeping only `keep` subgroups.
fn problem_file(tag: &str, name: &str, keep: &[&str]) -> PathBuf {
    let mut doc = fixture(name).unwrap().document;
    let obj = doc.as_object_mut().unwrap();
    for k in ["name", "source", "description", "expected"] {
        obj.remove(k);
    }
    let subs = obj["subgroups"].as_object().unwrap().clone();
    obj["subgroups"] = Value::Object(subs.into_iter().filter(|(k, _)| keep.contains(&k.as_str())).collect());
    write_doc(tag, &doc)
}

fn write_doc(tag: &str, doc: &Value) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("tdlc-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(format!("{tag}.json"));
    std::fs::write(&path, serde_json::to_string(doc).unwrap()).unwrap();
    path
}

fn json_of(out: &str) -> Value {
    serde_json::from_str(out).unwrap_or_else(|e| panic!("not JSON ({e}): {out}"))
}

#[test]
fn scale_of_the_shift_is_p() {
    for (p, name) in [(2, "laurent-shift-p2"), (3, "laurent-shift-p3")] {
        let f = problem_file(name, name, &["O"]);
        let (code, out) = tdlc(&["scale", "--input", f.to_str().unwrap()]);
        assert_eq!(code, EXIT_OK, "{out}");
        assert!(out.starts_with(&format!("scale = {p} (")), "{out}");
    }
}

#[test]
fn scale_of_the_cofinite_shift_and_identity_is_one() {
    let f = problem_file("s61", "shift-cofinite", &["V"]);
    let (code, out) = tdlc(&["scale", "--input", f.to_str().unwrap()]);
    assert_eq!(code, EXIT_OK, "{out}");
    assert!(out.starts_with("scale = 1 ("), "{out}");
    let f = problem_file("id", "identity-smoke", &[]);
    let (code, out) = tdlc(&["scale", "--input", f.to_str().unwrap()]);
    assert_eq!(code, EXIT_OK, "{out}");
    assert!(out.starts_with("scale = 1 ("), "{out}");
}

#[test]
fn tidy_trace_and_json_round_trip() {
    let f = problem_file("ex-p2", "even-pair-sum-p2", &["U"]);
    let (code, out) = tdlc(&["tidy", "--input", f.to_str().unwrap(), "--json"]);
    assert_eq!(code, EXIT_OK, "{out}");
    let report = json_of(&out);
    let trace = &report["results"]["trace"];
    assert_eq!(trace["n"], json!(3));
    let ds: Vec<&Value> = trace["displacements"].as_array().unwrap().iter().map(|d| &d["value"]).collect();
    assert_eq!(ds, [&json!(4), &json!(2), &json!(1)]);
    assert_eq!(report["exit_code"], json!(0));
    assert!(report["inputs_digest"].as_str().unwrap().starts_with("sha256:"));
    // The final subgroup loads back as an input and is tidy with displacement 1.
    let mut doc = fixture("even-pair-sum-p2").unwrap().document;
    doc["subgroups"] = json!({"W": trace["w"].clone()});
    for k in ["name", "source", "description", "expected"] {
        doc.as_object_mut().unwrap().remove(k);
    }
    let g = write_doc("ex-w", &doc);
    let (code, out) = tdlc(&["tidy", "--input", g.to_str().unwrap(), "--json"]);
    assert_eq!(code, EXIT_OK, "{out}");
    let again = json_of(&out);
    assert_eq!(again["results"]["input_report"]["ta"], json!(true));
    assert_eq!(again["results"]["input_report"]["displacement"]["value"], json!(1));
}

#[test]
fn json_output_is_stable_without_timing() {
    let f = problem_file("stable", "cp3-nilpotent-flag-p2", &["F"]);
    let a = tdlc(&["tidy", "--input", f.to_str().unwrap(), "--json"]);
    let b = tdlc(&["tidy", "--input", f.to_str().unwrap(), "--json"]);
    assert_eq!(a, b);
    assert!(!a.1.contains("timing_ms"));
    let (_, t) = tdlc(&["tidy", "--input", f.to_str().unwrap(), "--json", "--timing"]);
    assert!(t.contains("timing_ms"));
}

#[test]
fn tb2_failure_witness_is_reported() {
    let f = problem_file("vplus", "shift-cofinite", &["V_plus"]);
    let (code, out) = tdlc(&["tidy", "--input", f.to_str().unwrap()]);
    assert_eq!(code, EXIT_OK, "{out}");
    assert!(out.contains("changes from 2 to 1"), "{out}");
}

#[test]
fn input_errors_exit_with_two() {
    assert_eq!(tdlc(&["scale", "--input", "/nonexistent/problem.json"]).0, EXIT_INPUT);
    assert_eq!(tdlc(&["scale"]).0, EXIT_INPUT);
    assert_eq!(tdlc(&["frobnicate"]).0, EXIT_INPUT);
    let bad = write_doc("bad", &json!({"schema": 1, "universe": "laurent", "p": 4, "endo": {}}));
    assert_eq!(tdlc(&["scale", "--input", bad.to_str().unwrap()]).0, EXIT_INPUT);
    let f = problem_file("many", "shift-cofinite", &["V", "V_plus"]);
    let (code, out) = tdlc(&["scale", "--input", f.to_str().unwrap(), "--subgroup", "missing"]);
    assert_eq!(code, EXIT_INPUT, "{out}");
    assert_eq!(tdlc(&["examples", "no-such-fixture"]).0, EXIT_INPUT);
}

#[test]
fn starved_horizons_exit_with_three() {
    let f = problem_file("starved", "even-pair-sum-p2", &["U"]);
    let (code, out) = tdlc(&["tidy", "--input", f.to_str().unwrap(), "--horizon", "1", "--json"]);
    assert_eq!(code, EXIT_INCONCLUSIVE, "{out}");
    assert_eq!(json_of(&out)["exit_code"], json!(EXIT_INCONCLUSIVE));
}

#[test]
fn check_runs_named_suites() {
    let (code, out) = tdlc(&[
        "check",
        "--property",
        "tidy-iff-minimizing",
        "--property",
        "powers-converse-fails",
        "--max-order",
        "8",
    ]);
    assert_eq!(code, EXIT_OK, "{out}");
    assert!(out.contains("PASS tidy-iff-minimizing"), "{out}");
    assert!(out.contains("PASS powers-converse-fails"), "{out}");
    assert_eq!(tdlc(&["check", "--property", "nonsense"]).0, EXIT_INPUT);
}

#[test]
fn check_on_an_input_case() {
    let f = problem_file("swap", "cp2-swap", &[]);
    let (code, out) = tdlc(&["check", "--input", f.to_str().unwrap(), "--property", "scalesame"]);
    assert_eq!(code, EXIT_OK, "{out}");
    assert!(out.contains("checking the input"), "{out}");
}

#[test]
fn examples_pass_and_list() {
    let (code, out) = tdlc(&["examples", "identity-smoke", "cp2-swap"]);
    assert_eq!(code, EXIT_OK, "{out}");
    assert_eq!(out.lines().filter(|l| l.starts_with("PASS")).count(), 2);
    let (code, out) = tdlc(&["examples", "--list", "--json"]);
    assert_eq!(code, EXIT_OK);
    assert!(json_of(&out)["results"]["fixtures"].as_array().unwrap().len() >= 10);
}

#[test]
fn fixture_mismatch_reports_both_values() {
    let mut doc = fixture("identity-smoke").unwrap().document;
    doc["expected"] = json!([{"op": "scale", "args": ["O"], "value": 2}]);
    let report = tdlc::fixtures::run(
        &tdlc::fixtures::Fixture {
            name: "x".into(),
            source: tdlc::fixtures::Source::Smoke,
            description: String::new(),
            document: doc,
        },
        &Default::default(),
    )
    .unwrap();
    assert!(!report.passed());
    assert!(report.mismatches()[0].contains("expected 2, got 1"));
}
