use std::process::{Command, Output};

use serde_json::Value;
use uqsl21::scalar::{rat, CycScalar, RootConfig};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_uqsl21")).args(args).output().expect("the binary runs")
}

fn json_out(args: &[&str]) -> Value {
    let out = run(args);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn verify_rejects_small_l() {
    let out = run(&["verify", "--l", "2"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("l >= 3"));
}

#[test]
fn unknown_suite_is_a_usage_error() {
    let out = run(&["verify", "--l", "3", "--suite", "everything"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("unknown suite"));
}

#[test]
fn malformed_arguments_exit_with_two() {
    assert_eq!(run(&["compute", "mdim", "--l", "5", "--n", "1"]).status.code(), Some(2));
    assert_eq!(run(&["compute", "mdim", "--l", "5", "--n", "1", "--alpha", "1/2"]).status.code(), Some(2));
    assert_eq!(run(&["compute", "sixj", "--l", "3", "--labels", "0,1/5;0,2/5"]).status.code(), Some(2));
    assert_eq!(run(&["compute", "tv", "--input", "/nonexistent.json"]).status.code(), Some(2));
}

#[test]
fn mdim_matches_closed_form() {
    let v = json_out(&["compute", "mdim", "--l", "5", "--n", "1", "--alpha", "1/3"]);
    let cfg = RootConfig::covering(5, [&rat(1, 3)]).unwrap();
    let brace = |x| cfg.brace(&x).unwrap();
    let want = brace(rat(2, 1)) * (brace(rat(1, 1)) * brace(rat(1, 3)) * brace(rat(7, 3))).inv().unwrap();
    assert_eq!(CycScalar::from_json(&v["value"]).unwrap(), want);
}

#[test]
fn character_table_vanishes_at_the_top() {
    let v = json_out(&["compute", "chi", "--l", "3"]);
    let rows = v["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 3);
    assert!(CycScalar::from_json(&rows[2]["chi"]).unwrap().is_zero());
    assert_eq!(v["curlyD"]["coeffs"][0], "6");
    assert_eq!(json_out(&["char", "--l", "3"]), v);
}

#[test]
fn decompose_gives_three_labels() {
    let v = json_out(&["compute", "decompose", "--l", "3", "--left", "0,1/3", "--right", "0,1/5"]);
    assert_eq!(v["summands"].as_array().unwrap().len(), 3);
    assert_eq!(v["complete"], true);
}

#[test]
fn tv_reads_a_triangulation() {
    let path = format!("{}/../core/tests/fixtures/doubled_tetrahedron.json", env!("CARGO_MANIFEST_DIR"));
    let v = json_out(&["compute", "tv", "--input", &path]);
    assert_eq!(v["value"]["coeffs"][0], "1/6");
}

#[test]
fn verify_output_is_deterministic() {
    let args = ["verify", "--l", "3", "--suite", "decomposition", "--seed", "7", "--json"];
    let first = run(&args);
    let second = run(&args);
    assert_eq!(first.status.code(), Some(0));
    assert_eq!(first.stdout, second.stdout);
    let v: Value = serde_json::from_slice(&first.stdout).unwrap();
    assert_eq!(v["seed"], 7);
    assert_eq!(v["pass"], true);
}

#[test]
fn rational_integer_flags_are_accepted() {
    let out = run(&["verify", "--l", "6/2", "--suite", "relations", "--denom-bound", "15"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
}
