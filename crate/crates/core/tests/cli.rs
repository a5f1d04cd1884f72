use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn ecpeg(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ecpeg")).args(args).current_dir(dir).output().unwrap()
}

fn ok(dir: &Path, args: &[&str]) {
    let out = ecpeg(dir, args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
}

fn json(path: &Path) -> serde_json::Value {
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn construct_writes_code_ledger_and_metadata() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    ok(d, &["construct", "--algo", "ecpeg", "--n", "100", "--rate", "0.5", "--dv", "4", "--gc", "10", "--seed", "7", "--out", "a"]);
    ok(d, &["construct", "--algo", "ecpeg", "--n", "100", "--rate", "0.5", "--dv", "4", "--gc", "10", "--seed", "7", "--out", "b"]);
    let alist = fs::read(d.join("a/code.alist")).unwrap();
    assert_eq!(alist, fs::read(d.join("b/code.alist")).unwrap());
    let meta = json(&d.join("a/metadata.json"));
    assert_eq!(meta["config"]["m"], 50);
    assert_eq!(meta["config"]["seed"], 7);
    assert_eq!(meta["summary"]["girth"]["finite"], 6);
    assert!(meta["version"].is_string());
    let ledger = json(&d.join("a/ledger.json"));
    assert_eq!(ledger["g_c"], 10);
    assert_eq!(ledger["parameters"]["n"], 100);
}

#[test]
fn invalid_parameters_fail() {
    let dir = tempfile::tempdir().unwrap();
    let out = ecpeg(dir.path(), &["construct", "--n", "10", "--m", "3", "--dv", "4", "--seed", "1", "--out", "x"]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("exceeds"));
    let out = ecpeg(dir.path(), &["construct", "--n", "10", "--m", "5", "--dv", "2", "--out", "x"]);
    assert!(!out.status.success());
    let out = ecpeg(dir.path(), &["construct", "--n", "10", "--m", "4", "--rate", "0.5", "--dv", "2", "--seed", "1", "--out", "x"]);
    assert!(!out.status.success());
}

#[test]
fn toml_config_drives_construction() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    fs::write(d.join("run.toml"), "algo = \"peg\"\nn = 40\nrate = 0.5\ndv = 3\nseed = 11\n").unwrap();
    ok(d, &["construct", "--config", "run.toml", "--out", "c"]);
    let meta = json(&d.join("c/metadata.json"));
    assert_eq!(meta["config"]["algo"], "peg");
    assert_eq!(meta["config"]["m"], 20);
    assert!(!d.join("c/ledger.json").exists());
}

#[test]
fn acyclic_code_analyzes_cleanly() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    fs::write(d.join("tree.alist"), "3 3\n2 2\n1 2 2\n2 2 1\n1 0\n1 2\n2 3\n1 2\n2 3\n3 0\n").unwrap();
    ok(d, &["analyze", "--code", "tree.alist", "--out", "an"]);
    let stop = json(&d.join("an/stopsets.json"));
    assert!(stop["min_size"].is_null());
    let fam = json(&d.join("an/sample_sets.json"));
    assert_eq!(fam["covers"], serde_json::json!([]));
    assert_eq!(fs::read_to_string(d.join("an/failure.csv")).unwrap(), "strategy,n,mu,s,p_f,stderr\n");
}

#[test]
fn analysis_subcommands_and_budget_errors() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    ok(d, &["construct", "--n", "48", "--rate", "0.5", "--dv", "4", "--seed", "3", "--out", "code"]);
    ok(d, &["sample-sets", "--code", "code/code.alist", "--seed", "3", "--out", "ss"]);
    let fam = json(&d.join("ss/sample_sets.json"));
    assert!(fam["sample_sets"]["10"].as_array().unwrap().len() > 0);
    ok(d, &["stopsets", "--code", "code/code.alist", "--mu-max", "7", "--out", "st"]);
    let csv = fs::read_to_string(d.join("st/ss.csv")).unwrap();
    assert!(csv.starts_with("vn,ss1,ss2,ss3,ss4,ss5,ss6,ss7\n"));
    assert_eq!(csv.lines().count(), 49);
    ok(d, &["failure-curves", "--code", "code/code.alist", "--mu-max", "7", "--s-min", "5", "--s-max", "10", "--trials", "2000", "--out", "fc"]);
    let curve = fs::read_to_string(d.join("fc/failure.csv")).unwrap();
    assert!(curve.lines().any(|l| l.starts_with("random_mc,48,")));
    assert!(curve.lines().any(|l| l.starts_with("greedy,48,")));

    // refusing to overwrite, then the budget error path
    let again = ecpeg(d, &["stopsets", "--code", "code/code.alist", "--mu-max", "7", "--out", "st"]);
    assert!(!again.status.success());
    let out = ecpeg(d, &["analyze", "--code", "code/code.alist", "--mu-max", "14", "--budget", "1000", "--out", "big"]);
    assert_eq!(out.status.code(), Some(3));
    assert_eq!(json(&d.join("big/error.json"))["error"], "budget_exceeded");
    assert!(!d.join("big/failure.csv").exists());
}

#[test]
fn compare_merges_both_algorithms() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    ok(d, &["compare", "--n", "32", "--rate", "0.5", "--dv", "3", "--seeds", "1,2,3", "--mu-max", "6", "--out", "cmp"]);
    let csv = fs::read_to_string(d.join("cmp/compare.csv")).unwrap();
    assert!(csv.starts_with("algo,seed,strategy,n,mu,s,p_f,stderr\n"));
    assert!(csv.lines().any(|l| l.starts_with("peg,3,")));
    assert!(csv.lines().any(|l| l.starts_with("ecpeg,1,")));
    let summary = json(&d.join("cmp/summary.json"));
    assert!(summary["ecpeg"]["median_sample_set_size"].is_number());
    assert_eq!(summary["config"]["seeds"], serde_json::json!([1, 2, 3]));
}
