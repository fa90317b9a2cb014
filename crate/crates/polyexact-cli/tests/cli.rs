use std::path::PathBuf;
use std::process::{Command, Output};

fn data(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name).display().to_string()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_polyexact")).args(args).output().expect("binary runs")
}

fn stdout_ok(args: &[&str]) -> String {
    let out = run(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

#[test]
fn pentagon_area() {
    let (p, f) = (data("pentagon.hrep"), data("const1.poly"));
    assert_eq!(stdout_ok(&["integrate", "--polytope", &p, "--poly", &f]), "6/1\n");
    assert_eq!(stdout_ok(&["integrate", "--polytope", &p, "--poly", &f, "--method", "cone"]), "6/1\n");
    assert_eq!(stdout_ok(&["volume", "--polytope", &p, "--decimal", "2"]), "6/1 6.00\n");
}

#[test]
fn jobs_do_not_change_results() {
    let (p, f) = (data("square13.hrep"), data("f.poly"));
    let one = stdout_ok(&["integrate", "--polytope", &p, "--poly", &f]);
    let four = stdout_ok(&["--jobs", "4", "integrate", "--polytope", &p, "--poly", &f]);
    assert_eq!(one, four);
    let k = data("623.knap");
    assert_eq!(stdout_ok(&["topk", "--knapsack", &k, "-k", "2"]), stdout_ok(&["topk", "--knapsack", &k, "-k", "2", "--jobs", "3", "--seed", "7"]));
}

#[test]
fn topk_and_evaluate() {
    let k = data("623.knap");
    let text = stdout_ok(&["topk", "--knapsack", &k, "-k", "2"]);
    assert!(text.starts_with("knapsack = [6, 2, 3]\nE_2 = 1/72\n"), "{text}");
    let path = std::env::temp_dir().join(format!("polyexact-cli-{}.topk", std::process::id()));
    std::fs::write(&path, &text).unwrap();
    let values = stdout_ok(&["evaluate", "--topk", path.to_str().unwrap(), "-t", "0..5", "10"]);
    std::fs::remove_file(&path).unwrap();
    assert_eq!(values, "0 1/1\n1 0/1\n2 1/1\n3 1/1\n4 1/1\n5 1/1\n10 3/1\n");
    assert_eq!(stdout_ok(&["evaluate", "--knapsack", &k, "-t", "0..5", "10"]), values);
}

#[test]
fn coset_polys() {
    let text = stdout_ok(&["coset-polys", "--knapsack", &data("623.knap")]);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 6);
    assert_eq!(lines[0], "t = 0 mod 6: 1/72*t^2 + 1/4*t + 1");
    assert_eq!(lines[1], "t = 1 mod 6: 1/72*t^2 + 1/18*t - 5/72");
}

#[test]
fn dlx() {
    assert_eq!(stdout_ok(&["dlx", "--file", &data("abcd.sp")]), "SOLUTION x3 x4\n");
    assert_eq!(stdout_ok(&["dlx", "--file", &data("abcd.sp"), "--policy", "first"]), "SOLUTION x3 x4\n");
    let out = run(&["dlx", "--file", &data("infeasible.sp")]);
    assert_eq!(out.status.code(), Some(3));
    assert_eq!(String::from_utf8_lossy(&out.stdout), "INFEASIBLE\n");
    let reduced = stdout_ok(&["dlx", "--milp", &data("sample.milp")]);
    assert!(reduced.contains("CONSTRAINTS\nc1: x1 <= 3\nc2: x2 >= -2\nINTEGERS\nx1\n"), "{reduced}");
}

#[test]
fn bounds() {
    let (p, f) = (data("square13.hrep"), data("f.poly"));
    let text = stdout_ok(&["bounds", "--polytope", &p, "--poly", &f, "-k", "10", "--digits", "2"]);
    assert!(text.contains(" 11.07\n") && text.contains(" 23.40\n"), "{text}");
    let text = stdout_ok(&["bounds", "--polytope", &p, "--poly", &f, "-k", "40", "--discrete", "--digits", "2"]);
    assert!(text.ends_with("integer max 18\n"), "{text}");
}

#[test]
fn handelman() {
    let (p, f) = (data("square13.hrep"), data("f.poly"));
    let text = stdout_ok(&["handelman", "--polytope", &p, "--poly", &f]);
    assert!(text.starts_with("degree 3\nshift "), "{text}");
    let bound = stdout_ok(&["handelman", "--polytope", &p, "--poly", &f, "--bound", "-t", "3"]);
    assert!(bound.starts_with("bound "), "{bound}");
}

#[test]
fn output_file() {
    let path = std::env::temp_dir().join(format!("polyexact-cli-{}.out", std::process::id()));
    let out = stdout_ok(&["dlx", "--file", &data("abcd.sp"), "-o", path.to_str().unwrap()]);
    assert!(out.is_empty());
    assert_eq!(std::fs::read_to_string(&path).unwrap(), "SOLUTION x3 x4\n");
    std::fs::remove_file(&path).unwrap();
}

#[test]
fn exit_codes() {
    let missing = run(&["topk", "--knapsack", "no/such/file", "-k", "1"]);
    assert_eq!(missing.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&missing.stderr).contains("parse error"));
    let bad_flag = run(&["integrate", "--nope"]);
    assert_eq!(bad_flag.status.code(), Some(2));
    // k larger than N is a domain error of the knapsack module.
    let out = run(&["topk", "--knapsack", &data("623.knap"), "-k", "5"]);
    assert_eq!(out.status.code(), Some(3));
    // A negative polynomial has no continuous bounds.
    let neg = std::env::temp_dir().join(format!("polyexact-cli-{}.poly", std::process::id()));
    std::fs::write(&neg, "[[-1,[0,0]]]").unwrap();
    let out = run(&["bounds", "--polytope", &data("square13.hrep"), "--poly", neg.to_str().unwrap(), "-k", "2"]);
    std::fs::remove_file(&neg).unwrap();
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("optimize"));
}
