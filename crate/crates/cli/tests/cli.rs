use std::process::{Command, Output};

fn thom(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_thom"))
        .args(args)
        .env_remove("THOM_FORMAT")
        .output()
        .expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = thom(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

#[test]
fn verdict_reports_witness() {
    let text = stdout(&["verdict", "SO(5)", "3"]);
    assert!(text.contains("NOT_IN_IMAGE"));
    assert!(text.contains("Sq1,Sq2"));
    assert!(text.contains("u1^6"));
}

#[test]
fn verdict_json_schema() {
    let text = stdout(&["--format", "json", "verdict", "SO(5)", "3", "--prime", "2"]);
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["schema"], "thom-report/1");
    assert_eq!(v["result"]["status"], "NOT_IN_IMAGE");
    assert_eq!(v["result"]["witnesses"][0]["word"], "Sq1,Sq2");
}

#[test]
fn homology_of_so5() {
    let text = stdout(&["cells", "5", "--homology"]);
    let row7 = text.lines().find(|l| l.trim_start().starts_with("7 ")).unwrap();
    assert_eq!(row7.split_whitespace().nth(1), Some("Z"));
}

#[test]
fn table1_rows() {
    let text = stdout(&["table1", "SO(4)", "SO(5)", "PSO(10)"]);
    let rows: Vec<Vec<&str>> = text.lines().skip(1).map(|l| l.split_whitespace().collect()).collect();
    assert_eq!(&rows[0][..3], ["SO(4)", "yes", "-"]);
    assert_eq!(&rows[1][..3], ["SO(5)", "no", "3"]);
    assert_eq!(&rows[2][..3], ["PSO(10)", "no", "7"]);
}

#[test]
fn output_is_deterministic() {
    let args = ["--format", "json", "table1", "Ss(12)", "E8"];
    assert_eq!(stdout(&args), stdout(&args));
}

#[test]
fn diagrams_are_dot() {
    assert!(stdout(&["--format", "dot", "cells", "4"]).starts_with("digraph"));
    assert!(stdout(&["bockstein", "SO(5)", "2", "--diagram"]).contains("digraph"));
}

#[test]
fn apply_and_bound() {
    assert!(stdout(&["apply", "SO(5)", "2", "Sq3", "u1^3 + u3"]).contains("= u1^6"));
    assert!(stdout(&["bound", "SO(5)", "3"]).contains("multiplier 32"));
    assert!(stdout(&["bound", "Sp(2)", "3"]).contains("multiplier 1"));
}

#[test]
fn strict_flags_taint() {
    let out = thom(&["--strict", "apply", "G2", "2", "Sq2", "x3"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(thom(&["apply", "G2", "2", "Sq2", "x3"]).status.success());
}

#[test]
fn bad_input_fails() {
    assert_eq!(thom(&["scan", "SO(1)"]).status.code(), Some(1));
    assert_eq!(thom(&["basis", "SO(5)", "3", "2"]).status.code(), Some(1));
    assert_eq!(thom(&["nonsense"]).status.code(), Some(2));
}
