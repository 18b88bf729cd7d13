use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn hwm(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hwm")).args(args).output().expect("run hwm")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn ok(args: &[&str]) -> String {
    let o = hwm(args);
    assert_eq!(o.status.code(), Some(0), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
    stdout(&o)
}

fn json(args: &[&str]) -> Value {
    serde_json::from_str(&ok(args)).unwrap()
}

#[test]
fn help_matches_golden_files() {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden");
    let cases: [(&str, &[&str]); 7] = [
        ("help.txt", &["--help"]),
        ("help_moments.txt", &["moments", "--help"]),
        ("help_series.txt", &["series", "--help"]),
        ("help_sd.txt", &["sd", "--help"]),
        ("help_simulate.txt", &["simulate", "--help"]),
        ("help_verify.txt", &["verify", "--help"]),
        ("help_graph.txt", &["graph", "--help"]),
    ];
    for (file, args) in cases {
        let want = std::fs::read_to_string(dir.join(file)).unwrap();
        assert_eq!(ok(args), want, "{file}");
    }
}

#[test]
fn moments_examples() {
    assert_eq!(ok(&["moments", "--word", "x1^4", "--symbolic"]).trim(), "2*a[1,1]^2 + a[1,2]");
    assert_eq!(ok(&["moments", "--word", "x1"]).trim(), "0");
    let four = ok(&["moments", "--word", "x1^2 x2^2 x1^2 x2^2", "--engine", "all"]);
    assert_eq!(four.trim(), "3*a[1,1]^2*a[2,1]^2 + a[1,1]^2*a[2,2] + a[1,2]*a[2,1]^2 + a[1,2]*a[2,2]");
    assert_eq!(ok(&["sd", "--word", "x1^2", "--word", "x1^2"]).trim(), "a[1,1]^2 + a[1,2]");
    assert_eq!(ok(&["moments", "--word", "x1^6", "--param", "const:1", "--engine", "all"]).trim(), "12");
}

#[test]
fn moments_json_reports_every_engine() {
    let v = json(&["moments", "--word", "x1^2 y1 x1^2 y1", "--engine", "all", "--format", "json"]);
    assert_eq!(v["agree"], true);
    assert_eq!(v["engines"].as_object().unwrap().len(), 3);
    let v = json(&["moments", "--word", "x1^4", "--param", "list:1,1/2", "--format", "json"]);
    assert_eq!(v["result"]["value"], "5/2");
}

#[test]
fn parameter_files() {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR"));
    let f = dir.join("params.json");
    std::fs::write(&f, r#"{"matrices":[{"name":"x1","a":["1","1/3","1/5"]}], "y":{"kind":"diagonal","moments":["0","1","0","3"]}}"#).unwrap();
    let out = ok(&["moments", "--word", "x1^2 y1^2 x1^2 y1^2", "--param", f.to_str().unwrap(), "--engine", "all"]);
    assert_eq!(out.trim(), "5");
}

#[test]
fn series_examples() {
    let v = json(&["series", "--kmax", "1", "--order", "6", "--param", "trivial:1"]);
    let c: Vec<&str> = v["series"][0]["coefficients"].as_array().unwrap().iter().map(|c| c["value"]["terms"][0]["coeff"].as_str().unwrap_or("0")).collect();
    assert_eq!(c, ["1", "0", "1", "0", "2", "0", "5"]);
    let pretty = ok(&["series", "--kmax", "2", "--order", "4", "--symbolic", "--format", "pretty", "--check"]);
    assert!(pretty.contains("c_2[2] = 2*a[1,1]"), "{pretty}");
    assert!(pretty.contains("c_1[4] = 2*a[1,1]^2 + a[1,2]"), "{pretty}");
}

#[test]
fn simulate_examples() {
    let v = json(&["simulate", "--ensemble", "erdos-renyi", "--alpha", "1", "--n", "1000", "--reps", "100", "--word", "x^4", "--seed", "7"]);
    assert_eq!(v["predicted"], 3.0);
    assert_eq!(v["within_tolerance"], true, "{v}");
    let v = json(&["simulate", "--ensemble", "erdos-renyi", "--alpha", "1", "--n", "1000", "--reps", "100", "--word", "x^2", "--seed", "7"]);
    assert_eq!(v["within_tolerance"], true, "{v}");
    let v = json(&["simulate", "--ensemble", "truncated-levy", "--alpha-stable", "1", "--cutoff", "1", "--n", "500", "--reps", "50", "--word", "x^2"]);
    assert_eq!(v["predicted"], 1.0);
    assert_eq!(v["within_tolerance"], true, "{v}");
}

#[test]
fn verify_passes_and_catches_a_corrupted_tree_table() {
    let v = json(&["verify", "--degree", "8", "--param", "trivial:1", "--y-degree", "0"]);
    assert_eq!(v["passed"], true);
    let o = hwm(&["verify", "--degree", "6", "--y-degree", "0", "--param", "const:1", "--tree-param", "list:1,5,1"]);
    assert_eq!(o.status.code(), Some(4));
    assert!(String::from_utf8_lossy(&o.stderr).contains("x1^4"));
}

#[test]
fn graph_examples() {
    let v = json(&["graph", "--graph", r#"{"vertices":2,"edges":[[0,1,"x1"],[1,0,"x1"]]}"#]);
    assert_eq!((v["cyclic"].clone(), v["fat_tree"].clone(), v["r"].clone(), v["limit"].clone()), (true.into(), true.into(), 2.into(), "a[1,1]".into()));
    assert_eq!(v["type"], serde_json::json!([1]));
    let v = json(&["graph", "--graph", r#"{"vertices":3,"edges":[[0,1,"x1"],[1,2,"x1"],[2,0,"x1"]]}"#]);
    assert_eq!((v["fat_tree"].clone(), v["limit"].clone()), (false.into(), "0".into()));
    let v = json(&["graph", "--graph", r#"{"vertices":4,"edges":[[0,1,"x1"],[0,2,"x1"],[0,3,"x1"]]}"#]);
    assert_eq!(v["r"], 3);
    let o = hwm(&["graph", "--graph", r#"{"vertices":3,"edges":[[0,1,"x1"]]}"#]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("connected"));
}

#[test]
fn exit_codes() {
    let parse = hwm(&["moments", "--word", "x1 z"]);
    assert_eq!(parse.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&parse.stderr).contains("byte 3"));
    assert_eq!(hwm(&["moments", "--word", "x1^8", "--kmax", "2"]).status.code(), Some(2));
    assert_eq!(hwm(&["moments", "--word", "x1^12", "--engine", "partition", "--partition-cap", "10"]).status.code(), Some(3));
    assert_eq!(hwm(&["simulate", "--ensemble", "erdos-renyi", "--word", "x^2"]).status.code(), Some(2));
    assert_eq!(hwm(&["verify", "--degree", "11"]).status.code(), Some(3));
}

#[test]
fn json_is_byte_identical_across_runs_and_thread_counts() {
    let sims = ["simulate", "--ensemble", "network", "--alpha", "2", "--weights", "gaussian", "--n", "300", "--reps", "12", "--word", "x1^2 x2^2", "--seed", "3"];
    let a = ok(&sims);
    assert_eq!(a, ok(&sims));
    let mut one_thread = sims.to_vec();
    one_thread.extend(["--threads", "1"]);
    assert_eq!(a, ok(&one_thread));
    let m = ["moments", "--word", "x1^2 x2^2 x1 x2 x1 x2", "--engine", "all", "--format", "json"];
    assert_eq!(ok(&m), ok(&m));
}
