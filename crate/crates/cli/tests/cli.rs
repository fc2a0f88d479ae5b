use std::process::{Command, Output};

use serde_json::Value;

fn bracket(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bracket")).args(args).output().expect("spawn bracket")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn error_record(o: &Output) -> Value {
    serde_json::from_str(String::from_utf8_lossy(&o.stderr).trim()).expect("JSON error record")
}

#[test]
fn gen_fibonacci_prefix() {
    let o = bracket(&["gen", "--word", "fib_sturmian", "--range", "56"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "10101101011011010110101101101011011010110101101101011010\n");
    let lines = bracket(&["gen", "--word", "fib_sturmian", "--range", "4", "--lines"]);
    assert_eq!(stdout(&lines), "1\n0\n1\n0\n");
    let raw = bracket(&["gen", "--word", "fib_sturmian", "--range", "4", "--raw"]);
    assert_eq!(raw.stdout, vec![1, 0, 1, 0]);
    let slice = bracket(&["gen", "--word", "fib_sturmian", "--range", "6", "--start", "50"]);
    assert_eq!(stdout(&slice), "011010\n");
}

#[test]
fn eval_floor_phi() {
    let o = bracket(&["eval", "--expr", "floor(phi*n)", "--n", "4"]);
    assert!(o.status.success());
    let v: Value = serde_json::from_str(stdout(&o).trim()).unwrap();
    assert_eq!(v["value"], "6");
    let range = bracket(&["eval", "--expr", "floor(phi*n)", "--n", "-1", "--to", "3"]);
    let values: Vec<String> =
        stdout(&range).lines().map(|l| serde_json::from_str::<Value>(l).unwrap()["value"].as_str().unwrap().to_string()).collect();
    assert_eq!(values, ["-2", "0", "1", "3", "4"]);
}

#[test]
fn verify_sturmian_suite_passes() {
    let o = bracket(&["verify", "--suite", "sturmian"]);
    assert!(o.status.success(), "{}", stdout(&o));
    let out = stdout(&o);
    assert!(out.lines().count() >= 1 && out.lines().all(|l| l.starts_with("PASS")), "{out}");
}

#[test]
fn analyze_and_lattice_reports() {
    let o = bracket(&["analyze", "--word", "fib_sturmian", "--measure", "complexity", "--n", "1..=30", "--horizon", "5000", "--csv"]);
    let out = stdout(&o);
    let mut lines = out.lines();
    assert_eq!(lines.next(), Some("N,value"));
    for (n, l) in (1..).zip(lines) {
        assert_eq!(l, format!("{n},{}", n + 1));
    }
    let pts = std::env::temp_dir().join(format!("bracket-cli-square-{}.txt", std::process::id()));
    std::fs::write(&pts, "# unit square\n0 0\n1 0\n0,1\n1 1\n").unwrap();
    let o = bracket(&["lattice", "cuts", "--points", pts.to_str().unwrap()]);
    std::fs::remove_file(&pts).ok();
    let v: Value = serde_json::from_str(stdout(&o).trim()).unwrap();
    assert_eq!((v["cuts"].as_u64(), v["harding_bound"].as_str()), (Some(14), Some("14")));
    let o = bracket(&["lattice", "approx", "--alpha", "1,1", "--eps", "1/2", "--N", "2"]);
    let v: Value = serde_json::from_str(stdout(&o).trim()).unwrap();
    assert_eq!(v["basis"], serde_json::json!([[1, -1]]));
    assert_eq!(v["certificate"]["first_inclusion"], true);
}

#[test]
fn pisot_commands() {
    let o = bracket(&["pisot", "--a", "1", "--b", "1", "--word", "12"]);
    // members 1, 2, 3, 6, 11
    assert_eq!(stdout(&o), "011100100001\n");
    let o = bracket(&["pisot", "--a", "1", "--b", "1", "--test", "815"]);
    let v: Value = serde_json::from_str(stdout(&o).trim()).unwrap();
    assert_eq!(v["member"], true);
}

#[test]
fn error_exit_codes() {
    let o = bracket(&["gen", "--word", "no_such_word", "--range", "3"]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(error_record(&o)["error"], "UnknownName");
    let o = bracket(&["eval", "--expr", "floor(", "--n", "1"]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(error_record(&o)["kind"], "usage");
    let o = bracket(&["pisot", "--a", "0", "--b", "0"]);
    assert_eq!(o.status.code(), Some(4));
    assert_eq!(error_record(&o)["kind"], "domain");
    assert_eq!(bracket(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(bracket(&["verify", "--suite", "nonexistent"]).status.code(), Some(2));
}

#[test]
fn identical_commands_give_identical_bytes() {
    let runs = [
        vec!["analyze", "--word", "sturmian_product", "--measure", "discrepancy", "--n", "10,100,1000", "--horizon", "2000"],
        vec!["lattice", "prefix", "--h", "n", "--h", "floor(sqrt(3)*n)", "--N", "8", "--step", "1/4", "--verify", "4"],
        vec!["verify", "--suite", "nested", "--json"],
    ];
    for args in &runs {
        let a = bracket(args);
        let b = bracket(args);
        assert!(!a.stdout.is_empty());
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}

#[test]
fn definition_files_extend_the_catalog() {
    let defs = std::env::temp_dir().join(format!("bracket-cli-defs-{}.txt", std::process::id()));
    std::fs::write(&defs, "word silver_copy = silver_sturmian\n").unwrap();
    let a = bracket(&["--defs", defs.to_str().unwrap(), "gen", "--word", "silver_copy", "--range", "40"]);
    std::fs::remove_file(&defs).ok();
    let b = bracket(&["gen", "--word", "silver_sturmian", "--range", "40"]);
    assert!(a.status.success(), "{}", String::from_utf8_lossy(&a.stderr));
    assert_eq!(a.stdout, b.stdout);
}
