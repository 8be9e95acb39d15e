use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn voalab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_voalab")).args(args).env_remove("VOALAB_MAX_BASIS").output().unwrap()
}

fn root() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
}

fn fixture(name: &str) -> String {
    std::fs::read_to_string(root().join("tests/fixtures").join(name)).unwrap()
}

fn validator() -> jsonschema::Validator {
    let schema: Value =
        serde_json::from_str(&std::fs::read_to_string(root().join("schema/graded_report.schema.json")).unwrap())
            .unwrap();
    jsonschema::validator_for(&schema).unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn json_reports_match_golden_files_and_schema() {
    let v = validator();
    for suite in ["ope-table", "singular-vector", "sugawara", "spectral-flow", "screening", "w25", "oracle-cross"] {
        let out = voalab(&["verify", suite, "--format", "json"]);
        assert_eq!(out.status.code(), Some(0), "{suite}");
        let text = stdout(&out);
        assert_eq!(text, fixture(&format!("{suite}.json")), "{suite} drifted from its golden file");
        let value: Value = serde_json::from_str(&text).unwrap();
        assert!(v.is_valid(&value), "{suite} violates the schema");
    }
}

#[test]
fn flags_reach_the_suite() {
    let out = voalab(&["verify", "modules", "--s-range", "1", "--mode-cutoff", "3", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), fixture("modules-s1.json"));
}

#[test]
fn config_file_is_overridden_by_flags() {
    let dir = std::env::temp_dir().join(format!("voalab-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("cfg.toml");
    std::fs::write(&path, "s_range = 1\nmode_cutoff = 3\noutput_format = \"json\"\n").unwrap();
    let p = path.to_str().unwrap();
    let out = voalab(&["verify", "modules", "--config", p]);
    assert_eq!(stdout(&out), fixture("modules-s1.json"));
    let out = voalab(&["verify", "modules", "--config", p, "--format", "text"]);
    assert!(stdout(&out).starts_with("suite modules"));
    std::fs::write(&path, "no_such_field = 1\n").unwrap();
    assert_eq!(voalab(&["verify", "modules", "--config", p]).status.code(), Some(2));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn usage_errors_exit_with_two() {
    assert_eq!(voalab(&["verify", "unknown"]).status.code(), Some(2));
    assert_eq!(voalab(&["verify", "ope-table", "--weight-cutoff", "-1"]).status.code(), Some(2));
    assert_eq!(voalab(&["eval", "1*x[-1]:E[0,0]", "--op", "weight"]).status.code(), Some(2));
    assert_eq!(voalab(&["eval", "1*:E[0,0]", "--op", "expMode:g"]).status.code(), Some(2));
    assert_eq!(voalab(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn resource_cap_gives_partial_report_and_exit_one() {
    let out = Command::new(env!("CARGO_BIN_EXE_voalab"))
        .args(["verify", "w25", "--format", "json"])
        .env("VOALAB_MAX_BASIS", "5")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    let value: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert!(validator().is_valid(&value));
    let checks = value["checks"].as_array().unwrap();
    assert!(checks.len() > 1);
    assert_eq!(checks.last().unwrap()["name"], "resource");
    assert_eq!(checks.last().unwrap()["status"], "fail");
}

#[test]
fn eval_prints_in_the_element_grammar() {
    let out = voalab(&["eval", "1*:E[3,3]", "--op", "expMode:-6g,0"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), fixture("eval-q-e.txt"));
    let out = voalab(&["eval", "1*:E[-2,0]", "--op", "affine:e,1"]);
    assert_eq!(stdout(&out).trim(), "0");
    let out = voalab(&["eval", "1*:E[0,2]", "--op", "weight"]);
    assert_eq!(stdout(&out).trim(), "weight -1/3 charge -4/3");
}

#[test]
fn several_suites_give_a_json_array_in_order() {
    let out = voalab(&["verify", "singular-vector", "ope-table", "--format", "json", "--parallel"]);
    let value: Value = serde_json::from_str(&stdout(&out)).unwrap();
    let names: Vec<&str> = value.as_array().unwrap().iter().map(|r| r["suite"].as_str().unwrap()).collect();
    assert_eq!(names, ["singular-vector", "ope-table"]);
}
