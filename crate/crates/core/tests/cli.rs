use std::process::{Command, Output};

use qbounded::words::parse_words;
use serde_json::Value;

fn qbounded(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qbounded")).args(args).env_remove("QBOUNDED_SEED").output().unwrap()
}

fn body(out: &Output) -> Value {
    let mut v: Value = serde_json::from_slice(&out.stdout).unwrap();
    v.as_object_mut().unwrap().remove("timing");
    v
}

fn scratch(name: &str) -> std::path::PathBuf {
    let dir = std::env::temp_dir().join(format!("qbounded-cli-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn witness_file() {
    let path = scratch("witness3.txt");
    let out = qbounded(&["regularity", "witness", "--m", "3", "--output", path.to_str().unwrap()]);
    assert!(out.status.success());
    let words = parse_words(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(words.len(), 1);
    assert_eq!((words[0].len(), words[0].alph().len()), (10, 6));
}

#[test]
fn compute_n_small() {
    let out = qbounded(&["regularity", "compute-n", "--m", "2", "--q", "2", "--cap", "4"]);
    let v = body(&out);
    assert_eq!((v["result"]["N"].clone(), v["result"]["exhaustive"].clone()), (3.into(), true.into()));
}

#[test]
fn joux_reports_repeat_exactly() {
    let args = ["attack", "joux", "--n", "16", "--r", "4", "--trials", "3", "--seed", "7"];
    let (a, b) = (qbounded(&args), qbounded(&args));
    assert!(a.status.success());
    assert_eq!(body(&a), body(&b));
    let v = body(&a);
    assert_eq!(v["result"]["trials"].as_array().unwrap().len(), 3);
    assert_eq!(v["config"]["seed"], 7);
    assert!(!a.stderr.is_empty(), "summary goes to stderr");
}

#[test]
fn seed_comes_from_environment() {
    let with_env = Command::new(env!("CARGO_BIN_EXE_qbounded"))
        .args(["hashsim", "birthday", "--n", "10", "--trials", "3"])
        .env("QBOUNDED_SEED", "5")
        .output()
        .unwrap();
    let with_flag = qbounded(&["hashsim", "birthday", "--n", "10", "--trials", "3", "--seed", "5"]);
    assert!(with_env.status.success());
    assert_eq!(body(&with_env), body(&with_flag));
}

#[test]
fn exit_codes() {
    assert_eq!(qbounded(&["attack", "joux", "--r", "3"]).status.code(), Some(2));
    assert_eq!(qbounded(&["attack", "gihf", "--r", "2", "--l", "5", "--n", "8", "--seed", "1"]).status.code(), Some(2));
    assert_eq!(qbounded(&["classics", "cadence", "/nonexistent/words.txt"]).status.code(), Some(3));

    let words = scratch("bad-cert-words.txt");
    let cert = scratch("bad-cert.json");
    std::fs::write(&words, "1 2 1\n").unwrap();
    std::fs::write(&cert, r#"{"A":[1,2],"p":1,"splits":[]}"#).unwrap();
    let out = qbounded(&["verify", "cert", words.to_str().unwrap(), "--cert", cert.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(body(&out)["result"]["valid"], false);
}

#[test]
fn attack_structure_from_file() {
    let words = scratch("perms.txt");
    std::fs::write(&words, "1 2 3 4 2 1 4 3\n").unwrap();
    let out = qbounded(&["nesting", "attack-structure", words.to_str().unwrap(), "--n", "2", "--k", "2", "--q", "2"]);
    assert!(out.status.success());
    let v = body(&out);
    assert_eq!(v["result"]["B"], serde_json::json!([1, 2, 3, 4]));
    assert_eq!(v["result"]["p"], 2);
    assert_eq!(v["result"]["splits"], serde_json::json!([4]));
}
