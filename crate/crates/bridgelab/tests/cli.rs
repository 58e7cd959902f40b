//! End-to-end checks of the binary's exit-code contract and examples.

use std::process::{Command, Output};

fn bridgelab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bridgelab"))
        .args(args)
        .output()
        .unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn model_path(name: &str) -> String {
    format!("{}/models/{name}", env!("CARGO_MANIFEST_DIR"))
}

#[test]
fn eval_examples_from_the_half_model() {
    let m = model_path("cervantes.model.json");
    let out = bridgelab(&["eval", "True(b)", "-m", &m]);
    assert_eq!(stdout(&out).trim(), "0.5");
    assert!(out.status.success());

    let out = bridgelab(&["eval", "Simp True(b)", "-m", &m]);
    assert_eq!(stdout(&out).trim(), "0");

    let out = bridgelab(&["eval", "_|_", "-m", &m]);
    assert_eq!(stdout(&out).trim(), "0");
}

#[test]
fn eval_exit_codes_for_parse_and_semantic_errors() {
    let m = model_path("cervantes.model.json");
    let out = bridgelab(&["eval", "True(b", "-m", &m]);
    assert_eq!(out.status.code(), Some(2));
    let out = bridgelab(&["eval", "True(c)", "-m", &m]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn check_reports_the_mp_countermodel_and_exit_codes() {
    let s = model_path("mp.sequent.json");
    let out = bridgelab(&["check", &s, "--relation", "tt", "--family", "strong-kleene"]);
    assert_eq!(out.status.code(), Some(1));
    let text = stdout(&out);
    assert!(text.contains("invalid"));
    assert!(text.contains("A = 0.5"));
    assert!(text.contains("B = 0"));

    let out = bridgelab(&["check", &s, "--relation", "tt", "--family", "cooper"]);
    assert_eq!(out.status.code(), Some(0));

    let s = model_path("lem.sequent.json");
    let out = bridgelab(&["check", &s, "--relation", "ss"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn check_cap_exceeded_exits_4() {
    let s = model_path("mp.sequent.json");
    let out = bridgelab(&["check", &s, "--cap", "1"]);
    assert_eq!(out.status.code(), Some(4));
}

#[test]
fn proof_exit_code_follows_the_primary_relation() {
    let out = bridgelab(&["proof", "builtin:lem-reductio", "--relation", "ss,st"]);
    assert_eq!(out.status.code(), Some(1));
    let text = stdout(&out);
    assert!(text.contains("NO"));
    assert!(text.contains("countermodel"));

    let out = bridgelab(&["proof", "builtin:lem-reductio", "--relation", "st,ss"]);
    assert_eq!(out.status.code(), Some(0));

    let out = bridgelab(&["proof", "builtin:church", "--relation", "cl"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("~S"));

    let out = bridgelab(&["proof", "builtin:bridge-future", "--relation", "cl"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("Fut Pun(a) & ~Fut Pun(a)"));
}

#[test]
fn unknown_builtin_is_a_semantic_error() {
    let out = bridgelab(&["proof", "builtin:zeno"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn scenario_golden_checks_pass() {
    for name in ["buridan", "cervantes", "jacquette", "liar-bridge"] {
        let out = bridgelab(&["scenario", "run", name, "--check-golden"]);
        assert_eq!(out.status.code(), Some(0), "{name}");
    }
}

#[test]
fn agreement_reports_no_violations() {
    let out = bridgelab(&["agreement"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("containments hold"));
}
