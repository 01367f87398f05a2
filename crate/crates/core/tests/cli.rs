use std::path::PathBuf;
use std::process::Command;

use serde_json::{json, Value};

const BIN: &str = env!("CARGO_BIN_EXE_hodge-stability");

fn write(name: &str, doc: &Value) -> PathBuf {
    let path = std::env::temp_dir().join(format!("hodge-cli-{}-{name}.json", std::process::id()));
    std::fs::write(&path, doc.to_string()).unwrap();
    path
}

fn run(args: &[&str]) -> (i32, Value, String) {
    let out = Command::new(BIN).args(args).output().unwrap();
    let stdout: Value = serde_json::from_slice(&out.stdout).unwrap_or(Value::Null);
    (out.status.code().unwrap(), stdout, String::from_utf8_lossy(&out.stderr).into_owned())
}

fn curve_context(g: i64) -> Value {
    json!({"characteristic": 0, "dim": 1, "omega_degree": 2 * g - 2, "omega_semistable": true, "omega_stable": true})
}

fn strictly_semistable_doc() -> Value {
    json!({"hodge_system": {
        "context": curve_context(2),
        "components": [
            {"rank": 2, "degree": -2, "semistable": true, "stable": false},
            {"rank": 2, "degree": 2, "semistable": true, "stable": false}
        ],
        "theta": "isomorphisms",
        "e0_subsheaf": {"rank": 1, "degree": -1}
    }})
}

fn oper_filtration() -> Value {
    json!({
        "context": curve_context(2),
        "graded": [{"rank": 1, "degree": -1, "stable": true}, {"rank": 1, "degree": 1, "stable": true}],
        "transversal": true,
        "theta_squares_to_zero": true,
        "theta_iso": true
    })
}

#[test]
fn check_system_on_strictly_semistable_example() {
    let p = write("ss", &strictly_semistable_doc());
    let (code, out, err) = run(&["check-system", p.to_str().unwrap()]);
    assert_eq!(code, 0, "{err}");
    assert_eq!(out["semistable"], "yes");
    assert_eq!(out["stable"], "no");
    assert_eq!(out["certificate"]["profile"], json!([[1, -1], [1, 1]]));
    assert_eq!(out["certificate"]["slope"], "0/1");
    assert_eq!(out["mu_total"], "0/1");
    assert_eq!(out["consistent"], true);
    assert!(err.contains("semistable: yes"));
}

#[test]
fn check_system_on_declared_example() {
    let doc = json!({"hodge_system": {
        "context": curve_context(2),
        "components": [{"rank": 1, "degree": 3, "stable": true}, {"rank": 2, "degree": 5, "semistable": true}],
        "theta": {"declared": [[[1, 3]]]}
    }});
    let p = write("declared", &doc);
    let (code, out, _) = run(&["check-system", p.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(out["semistable"], "no");
    assert_eq!(out["mu_total"], "8/3");
    assert_eq!(out["certificate"]["slope"], "3/1");
}

#[test]
fn search_reports_and_budget_guard() {
    let p = write("search", &strictly_semistable_doc());
    let (code, out, _) = run(&["search", p.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(out["constraint_mode"], "paper");
    assert_eq!(out["max_slope"]["slope"], "0/1");
    assert_eq!(out["stable"], "no");

    let (code, out, err) = run(&["search", p.to_str().unwrap(), "--budget", "3"]);
    assert_eq!(code, 1);
    assert!(out["error"].as_str().unwrap().contains("budget exceeded"));
    assert!(err.contains("budget exceeded"));

    let (code, out, _) = run(&["search", p.to_str().unwrap(), "--mode", "conservative"]);
    assert_eq!(code, 0);
    assert_eq!(out["discrepancy"], Value::Null);

    // Stable bounds need stable flags.
    let (code, _, _) = run(&["search", p.to_str().unwrap(), "--subsheaf", "stable"]);
    assert_eq!(code, 1);
}

#[test]
fn document_search_section_is_honored() {
    let mut doc = strictly_semistable_doc();
    doc["search"] = json!({"budget": 3});
    let p = write("budget-doc", &doc);
    assert_eq!(run(&["search", p.to_str().unwrap()]).0, 1);
    assert_eq!(run(&["search", p.to_str().unwrap(), "--budget", "100"]).0, 0);
}

#[test]
fn invalid_documents_exit_one() {
    let mut doc = strictly_semistable_doc();
    doc["extra"] = json!(1);
    assert_eq!(run(&["check-system", write("unknown", &doc).to_str().unwrap()]).0, 1);

    let mut doc = strictly_semistable_doc();
    doc["hodge_system"]["components"][1]["degree"] = json!(3);
    let (code, out, _) = run(&["check-system", write("inconsistent", &doc).to_str().unwrap()]);
    assert_eq!(code, 1);
    assert!(out["error"].is_string());

    let two = json!({"hodge_system": strictly_semistable_doc()["hodge_system"], "griffiths_filtration": oper_filtration()});
    assert_eq!(run(&["check-system", write("two", &two).to_str().unwrap()]).0, 1);

    let oper = json!({"griffiths_filtration": oper_filtration()});
    assert_eq!(run(&["check-system", write("wrong-kind", &oper).to_str().unwrap()]).0, 1);
}

#[test]
fn check_oper_and_connection() {
    let p = write("oper", &json!({"griffiths_filtration": oper_filtration()}));
    let (code, out, _) = run(&["check-oper", p.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(out["generalized_oper"], true);
    assert_eq!(out["classical_oper"], true);
    assert_eq!(out["verdict"]["semistable"], "yes");
    assert_eq!(out["hn_profile"], json!([
        {"rank": 1, "degree": 1, "semistable": true, "stable": true},
        {"rank": 1, "degree": -1, "semistable": true, "stable": true}
    ]));

    let mut f = oper_filtration();
    f["theta_iso"] = json!(false);
    let (code, out, _) = run(&["check-oper", write("not-oper", &json!({"griffiths_filtration": f})).to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(out["generalized_oper"], false);
    assert_eq!(out["verdict"], Value::Null);
    assert_eq!(out["reasons"], json!(["θ not isomorphism"]));

    let pair = json!({"connection_pair": {"total": {"rank": 2, "degree": 0}, "flat": true, "filtration": oper_filtration()}});
    let (code, out, _) = run(&["check-connection", write("conn", &pair).to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(out["semistable"], "yes");
    assert_eq!(out["stable"], "yes");
    assert_eq!(out["provenance"], "connection:flat-char0");

    let bare = json!({"connection_pair": {"total": {"rank": 2, "degree": 1}, "flat": false, "characteristic": 3}});
    let (code, out, _) = run(&["check-connection", write("bare", &bare).to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(out["semistable"], "unknown");

    let mismatch = json!({"connection_pair": {"total": {"rank": 2, "degree": 1}, "flat": true, "filtration": oper_filtration()}});
    assert_eq!(run(&["check-connection", write("mismatch", &mismatch).to_str().unwrap()]).0, 1);
}

#[test]
fn hn_tensor_command() {
    let doc = json!({"hn_request": {
        "profile": [{"rank": 1, "degree": 5}, {"rank": 2, "degree": 2}],
        "tensor_with": {"rank": 2, "degree": 0, "semistable": true}
    }});
    let (code, out, _) = run(&["hn-tensor", write("hn", &doc).to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(out["polygon"], json!([[0, 0], [2, 10], [6, 14]]));
    assert_eq!(out["concave"], true);

    let bad = json!({"hn_request": {
        "profile": [{"rank": 1, "degree": 1}, {"rank": 1, "degree": 1}],
        "tensor_with": {"rank": 1, "degree": 0, "semistable": true}
    }});
    assert_eq!(run(&["hn-tensor", write("hn-bad", &bad).to_str().unwrap()]).0, 1);
}

#[test]
fn verify_inequalities_and_gallery() {
    let (code, out, _) = run(&["verify-inequalities", "--d-max", "6", "--n-max", "14"]);
    assert_eq!(code, 0);
    assert_eq!(out["all_pass"], true);
    assert!(out["rows"].as_array().unwrap().iter().all(|r| r["status"] == "pass"));

    let (code, out, _) = run(&["gallery", "surjective-not-iso", "--g", "2", "--d", "3"]);
    assert_eq!(code, 0);
    assert_eq!(out["reproduces"], true);
    assert_eq!(out["recomputed"]["certificate"]["mu_total"], "8/3");

    let (code, out, _) = run(&["gallery", "surjective-not-iso", "--g", "2", "--d", "2"]);
    assert_eq!(code, 1);
    assert!(out["error"].as_str().unwrap().contains("hypothesis d > 2g−2 violated"));

    let (code, out, _) = run(&["gallery", "unstable-component", "--d0", "1"]);
    assert_eq!(code, 0);
    assert_eq!(out["e1_hn_profile"][0]["degree"], 3);
}

#[test]
fn reports_are_byte_deterministic() {
    let p = write("det", &strictly_semistable_doc());
    let a = Command::new(BIN).args(["check-system", p.to_str().unwrap()]).output().unwrap();
    let b = Command::new(BIN).args(["check-system", p.to_str().unwrap(), "--parallel"]).output().unwrap();
    assert_eq!(a.stdout, b.stdout);
}
