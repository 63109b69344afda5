use std::path::PathBuf;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ocpadic")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn temp_file(name: &str, body: &str) -> PathBuf {
    let path = std::env::temp_dir().join(format!("ocpadic-cli-{}-{name}", std::process::id()));
    std::fs::write(&path, body).unwrap();
    path
}

#[test]
fn degree_bound() {
    let o = run(&["es", "degree-bound", "--n", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert_eq!(out.lines().next(), Some("8/9"));
    assert_eq!(out.lines().last(), Some("# ocpadic 0.1.0"));
}

#[test]
fn zero_matrix_has_trivial_fredholm_series() {
    let m = temp_file("zero.json", "[0,0]\n[0,0]\n");
    let o = run(&["fredholm", "det", "--in", m.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().next(), Some("1"));
}

#[test]
fn newton_polygon_of_diagonal() {
    let m = temp_file("diag.json", "[1,0]\n[0,3]\n");
    let o = run(&["fredholm", "polygon", "--in", m.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("0/1 1\n1/1 1\n"));
}

#[test]
fn suite_is_deterministic() {
    let args = ["--p", "3", "--N", "12", "--seed", "7", "suite", "all"];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.status.code(), Some(0), "{}", stdout(&a));
    assert_eq!(stdout(&a), stdout(&b));
    assert!(stdout(&a).contains("0 failed"));
}

#[test]
fn malformed_input_exits_2() {
    let m = temp_file("garbage.json", "garbage\n");
    let o = run(&["fredholm", "det", "--in", m.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(run(&["--p", "notaprime", "es", "degree-bound"]).status.code(), Some(2));
}

#[test]
fn non_adapted_slope_exits_1() {
    let m = temp_file("adapt.json", "[1,0]\n[0,3]\n");
    let o = run(&["fredholm", "factor", "--h", "0", "--in", m.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("not adapted"));
}

#[test]
fn json_report_carries_version() {
    let o = run(&["--json", "es", "degree-bound", "--n", "1"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["version"], "ocpadic 0.1.0");
    assert_eq!(v["result"], "2/3");
    assert_eq!(v["pass"], true);
}

#[test]
fn out_receives_data_payload() {
    let m = temp_file("payload.json", "[1,0]\n[0,3]\n");
    let out = std::env::temp_dir().join(format!("ocpadic-cli-{}-out.txt", std::process::id()));
    let o = run(&["fredholm", "det", "--in", m.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let body = std::fs::read_to_string(&out).unwrap();
    assert!(!body.contains("# ocpadic"));
    assert!(!body.is_empty());
}
