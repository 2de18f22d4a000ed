use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn ring_file(name: &str, text: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("unitary-sandwich-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_unitary-sandwich")).args(args).output().unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

const Z2: &str = "ring zmod 2\nlambda 1\nLambda max\n";

#[test]
fn relations_over_z2_all_pass() {
    let ring = ring_file("z2.ring", Z2);
    let out = run(&["relations", "--ring", ring.to_str().unwrap(), "--n", "3", "--seed", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    assert_eq!(r["suite"], "relations");
    assert_eq!(r["summary"]["fail"], 0);
    assert!(r["summary"]["pass"].as_u64().unwrap() >= 6);
    assert_eq!(r["config"]["n"], 3);
    assert_eq!(r["config"]["Lambda"], serde_json::json!([0, 1]));
}

#[test]
fn reports_are_reproducible() {
    let ring = ring_file("z4.ring", "ring zmod 4\nlambda 1\nLambda {0,2}\n");
    let args = ["lemma46", "--ring", ring.to_str().unwrap(), "--n", "3", "--seed", "9", "--samples", "40"];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let c = run(&["lemma46", "--ring", ring.to_str().unwrap(), "--n", "3", "--seed", "9", "--samples", "40", "--timing"]);
    assert_eq!(c.status.code(), Some(0));
}

#[test]
fn writes_report_file() {
    let ring = ring_file("z2-out.ring", Z2);
    let out_path = ring.with_extension("json");
    let out = run(&[
        "form-params",
        "--ring",
        ring.to_str().unwrap(),
        "--n",
        "3",
        "--seed",
        "0",
        "--out",
        out_path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let r: Value = serde_json::from_str(&std::fs::read_to_string(&out_path).unwrap()).unwrap();
    assert_eq!(r["suite"], "form-params");
}

#[test]
fn usage_and_config_errors_exit_with_two() {
    let ring = ring_file("z2-err.ring", Z2);
    let path = ring.to_str().unwrap();
    assert_eq!(run(&["no-such-suite", "--ring", path, "--n", "3", "--seed", "1"]).status.code(), Some(2));
    assert_eq!(run(&["relations", "--ring", path, "--n", "3"]).status.code(), Some(2));
    assert_eq!(run(&["relations", "--ring", path, "--n", "2", "--seed", "1"]).status.code(), Some(2));
    assert_eq!(run(&["relations", "--ring", path, "--n", "3", "--seed", "1", "--cap", "0"]).status.code(), Some(2));
    let bad = ring_file("bad.ring", "ring zmod 4\nlambda 2\nLambda {0}\n");
    let out = run(&["relations", "--ring", bad.to_str().unwrap(), "--n", "3", "--seed", "1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("λλ̄"));
    let bad = ring_file("bad2.ring", "ring zmod 4\nlambda x\n");
    let out = run(&["relations", "--ring", bad.to_str().unwrap(), "--n", "3", "--seed", "1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2, column 8"));
}

#[test]
fn oversized_groups_are_skipped_with_a_reason() {
    let ring = ring_file("z4-big.ring", "ring zmod 4\nlambda 1\nLambda {0,2}\n");
    let out = run(&["sandwich", "--ring", ring.to_str().unwrap(), "--n", "3", "--seed", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    assert_eq!(r["summary"]["skip"], 1);
    let reason = r["checks"][0]["witness"]["reason"].as_str().unwrap();
    assert!(reason.contains("above the cap"), "{reason}");
}

#[test]
fn sandwich_over_orthogonal_z2() {
    let ring = ring_file("z2-min.ring", "ring zmod 2\nlambda 1\nLambda min\n");
    let out = run(&["sandwich", "--ring", ring.to_str().unwrap(), "--n", "3", "--seed", "7", "--samples", "50"]);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    let checks = r["checks"].as_array().unwrap();
    let passed = |suffix: &str| {
        checks
            .iter()
            .filter(|c| c["name"].as_str().unwrap().ends_with(suffix) && c["status"] == "pass")
            .count()
    };
    assert_eq!(passed(": sandwich"), 50);
    assert_eq!(passed(": unique level"), 50);
    assert_eq!(r["summary"]["fail"], 0);
}
