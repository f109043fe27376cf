use std::process::{Command, Output};

use serde_json::Value;

fn confjord(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_confjord")).args(args).output().expect("binary runs")
}

fn json(args: &[&str]) -> (i32, Value) {
    let mut all = vec!["--format", "json"];
    all.extend_from_slice(args);
    let out = confjord(&all);
    let v = serde_json::from_slice(&out.stdout).expect("json report");
    (out.status.code().unwrap(), v)
}

fn without_elapsed(mut v: Value) -> Value {
    v.as_object_mut().unwrap().remove("elapsed_ms");
    v
}

#[test]
fn witt_axioms_pass() {
    let (code, v) = json(&["axioms", "--algebra", "witt", "--depth", "3"]);
    assert_eq!(code, 0);
    assert_eq!(v["status"], "pass");
    assert_eq!(v["schema"], 1);
    assert_eq!(v["details"]["verdicts_agree"], true);
}

#[test]
fn product_prints_component() {
    let out = confjord(&["product", "--family", "full", "--k", "2", "--L", "2", "--a", "E11:0,1", "--b", "E12:0,1"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("z^-2: -E12(0,1)"), "{text}");
}

#[test]
fn identify_full_is_jordan_a() {
    let (code, v) = json(&["identify", "--family", "full", "--k", "2", "--L", "2"]);
    assert_eq!(code, 0);
    assert_eq!(v["details"]["label"], "JordanA");
    assert_eq!(v["details"]["lambda"], "-1");
}

#[test]
fn odd_dagger_is_usage_error() {
    let out = confjord(&["generate", "--family", "dagger", "--k", "3", "--L", "2"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(!out.stderr.is_empty());
}

#[test]
fn unknown_algebra_and_bad_threads_are_usage_errors() {
    assert_eq!(confjord(&["axioms", "--algebra", "nope"]).status.code(), Some(2));
    let out =
        Command::new(env!("CARGO_BIN_EXE_confjord")).env("CONFJORD_THREADS", "0").args(["delta"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn mutant_fails_and_replays() {
    let dir = tempfile::tempdir().unwrap();
    let report = dir.path().join("report.json");
    let out = confjord(&[
        "--format",
        "json",
        "--output",
        report.to_str().unwrap(),
        "axioms",
        "--algebra",
        "sl2-mutant",
        "--depth",
        "1",
    ]);
    assert_eq!(out.status.code(), Some(1));
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    assert_eq!(v["status"], "fail");
    let first = v["failures"][0].clone();
    assert!(first["inputs"]["invocation"].is_object());
    let single = dir.path().join("failure.json");
    std::fs::write(&single, first.to_string()).unwrap();
    let (code, r) = json(&["--replay", single.to_str().unwrap()]);
    assert_eq!(code, 1);
    assert_eq!(r["details"]["reproduced"], true);
    assert_eq!(r["details"]["identical"], true);
    assert_eq!(r["failures"][0]["check_id"], first["check_id"]);
}

#[test]
fn reports_are_deterministic() {
    let args = ["ideal-probe", "--family", "star", "--k", "2", "--L", "1", "--count", "3", "--cap", "4"];
    let (c1, a) = json(&args);
    let (c2, b) = json(&args);
    assert_eq!((c1, c2), (0, 0));
    assert_eq!(without_elapsed(a), without_elapsed(b));
}

#[test]
fn oracle_and_delta_pass() {
    let (code, v) = json(&["oracle", "--u", "1,0,2,0", "--v", "2,0,1,0"]);
    assert_eq!(code, 0, "{v}");
    assert_eq!(v["details"]["scalars"]["z^-1 (0,0)"], "1");
    let (code, v) = json(&["delta", "--case", "sl2", "--window", "2"]);
    assert_eq!(code, 0);
    assert_eq!(v["details"]["kappa_sign"], "printed");
    let out = confjord(&["oracle", "--u", "3,0,1,0", "--v", "1,0,1,0"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn family_commands_run() {
    for args in [
        vec!["closure", "--family", "star", "--k", "2", "--L", "1", "--w-max", "4"],
        vec!["jordan", "--family", "star", "--k", "2", "--L", "2", "--random", "5"],
        vec!["lie", "--family", "full", "--k", "2", "--L", "1", "--random", "5"],
        vec!["generate", "--family", "full", "--k", "2", "--L", "2"],
        vec!["grading", "--k", "2", "--max-weight", "4"],
        vec!["affinize", "--algebra", "sl2", "--window", "2"],
    ] {
        let (code, v) = json(&args);
        assert_eq!(code, 0, "{args:?}: {v}");
    }
}

#[test]
fn algebra_from_file() {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/../../algebras/witt.toml");
    let (code, v) = json(&["axioms", "--file", path, "--depth", "2"]);
    assert_eq!(code, 0, "{v}");
    assert_eq!(v["parameters"]["algebra"], "witt-from-file");
    let (code, v) = json(&["affinize", "--file", path, "--window", "3"]);
    assert_eq!(code, 0);
    let brackets = v["details"]["brackets"].as_array().unwrap();
    let b = brackets.iter().find(|b| b["m"] == 2 && b["n"] == -1).unwrap();
    assert_eq!(b["bracket"], "3*e(1)");
}
