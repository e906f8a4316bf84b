//! End-to-end checks of the `afav` binary: reports, exit codes, round trips.

use std::path::Path;
use std::process::{Command, Output};

fn afav(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_afav"))
        .args(args)
        .env_remove("AFAV_BUDGET")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn line<'a>(text: &'a str, prefix: &str) -> &'a str {
    text.lines()
        .find(|l| l.starts_with(prefix))
        .unwrap_or_else(|| panic!("no `{prefix}` line in:\n{text}"))
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

fn emit_usquare(dir: &Path) -> String {
    let path = dir.join("usquare.txt");
    let o = afav(&["emit", "usquare", "--t", "1", "-o", path.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    path.to_str().unwrap().to_string()
}

#[test]
fn emitted_usquare_accepts_a_square() {
    let dir = tempfile::tempdir().unwrap();
    let file = emit_usquare(dir.path());
    let o = afav(&["run", &file, "--input", "0000", "--epsilon", "1/3"]);
    let out = stdout(&o);
    assert_eq!(code(&o), 0);
    assert_eq!(line(&out, "decision="), "decision=accept epsilon=1/3");
    assert_eq!(line(&out, "max="), "max=1 (~1.0000000000)");
}

#[test]
fn path_lines_show_exact_and_decimal_probabilities() {
    let o = afav(&["usquare", "--t", "1", "--n", "4", "--list-paths"]);
    let out = stdout(&o);
    assert!(out.contains("path 001000 state=acc p=1 (~1.0000000000)\n"), "{out}");
    assert!(out.contains("path 010000 state=acc p=1/7 (~0.1428571428)\n"), "{out}");
    let paths: Vec<&str> = out.lines().filter(|l| l.starts_with("path ")).collect();
    let mut sorted = paths.clone();
    sorted.sort();
    assert_eq!(paths, sorted);
}

#[test]
fn marker_in_input_is_an_input_error() {
    let dir = tempfile::tempdir().unwrap();
    let file = emit_usquare(dir.path());
    let o = afav(&["run", &file, "--input", "00^0", "--epsilon", "1/3"]);
    assert_eq!(code(&o), 6);
    assert!(String::from_utf8_lossy(&o.stderr).contains("not in the alphabet"));
}

#[test]
fn dedup_flag_does_not_change_the_verdict() {
    let dir = tempfile::tempdir().unwrap();
    let file = emit_usquare(dir.path());
    let with = stdout(&afav(&["run", &file, "--input", "000", "--epsilon", "1/3"]));
    let without = stdout(&afav(&["run", &file, "--input", "000", "--epsilon", "1/3", "--no-dedup"]));
    for prefix in ["max=", "min=", "decision="] {
        assert_eq!(line(&with, prefix), line(&without, prefix));
    }
}

#[test]
fn reports_are_identical_across_worker_counts() {
    let dir = tempfile::tempdir().unwrap();
    let lang = write(dir.path(), "odd.lang", "base 32\nperiod 01\n");
    let run = |threads: &str| {
        stdout(&afav(&[
            "unary", "--lang", &lang, "--n", "10", "--list-paths", "--no-dedup", "--threads", threads,
        ]))
    };
    let single = run("1");
    assert_eq!(single.lines().filter(|l| l.starts_with("path ")).count(), 2048);
    assert_eq!(single, run("4"));
    assert_eq!(single, run("1"));
}

#[test]
fn exit_codes_follow_the_decision() {
    assert_eq!(code(&afav(&["usquare", "--t", "1", "--n", "9"])), 0);
    assert_eq!(code(&afav(&["usquare", "--t", "1", "--n", "10"])), 1);
    // t = 1 gives 1/3 at gap 1, which misses the 1/4 bound: inconclusive
    assert_eq!(code(&afav(&["usquare", "--t", "1", "--n", "10", "--epsilon", "1/4"])), 2);
}

#[test]
fn errors_have_distinct_codes() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write(dir.path(), "bad.txt", "machine broken\naffine 0\n");
    assert_eq!(code(&afav(&["usquare", "--t", "1"])), 3);
    assert_eq!(code(&afav(&["usquare", "--t", "0", "--n", "3"])), 4);
    assert_eq!(code(&afav(&["run", &bad, "--input", "", "--epsilon", "1/3"])), 5);
    assert_eq!(code(&afav(&["run", "/nonexistent/m.txt", "--epsilon", "1/3"])), 8);
    let budget = Command::new(env!("CARGO_BIN_EXE_afav"))
        .args(["subsetsum", "--t", "1", "--input", "1#1#1#1#1"])
        .env("AFAV_BUDGET", "4")
        .output()
        .unwrap();
    assert_eq!(code(&budget), 7);
    assert_eq!(code(&afav(&["subsetsum", "--t", "1", "--input", "1#1#1#1#1", "--budget", "4"])), 7);
}

#[test]
fn json_report_parses() {
    let o = afav(&["upoly", "--coeffs", "0,1,1", "--t", "2", "--n", "6", "--check", "--json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["machine"], "upoly-0_1_1-t2");
    assert_eq!(v["decision"], "accept");
    assert_eq!(v["max_probability"], "1");
    assert_eq!(v["oracle"]["agree"], true);
}

#[test]
fn check_agrees_with_oracles() {
    let mut runs = Vec::new();
    for n in 0..=30 {
        runs.push(vec!["usquare".to_string(), "--t".into(), "5".into(), "--n".into(), n.to_string()]);
        for coeffs in ["0,0,1", "0,1,1", "0,0,0,1", "0,1,0,2", "2,0,1"] {
            runs.push(
                ["upoly", "--coeffs", coeffs, "--t", "1", "--n"]
                    .iter()
                    .map(|s| s.to_string())
                    .chain([n.to_string()])
                    .collect(),
            );
        }
    }
    for input in ["101#11#1", "1101#1#100#1000", "0#1", "111#10#10#10", "1010#1#11#110#1001"] {
        runs.push(["subsetsum", "--t", "3", "--input", input].iter().map(|s| s.to_string()).collect());
    }
    for mut args in runs {
        args.push("--check".into());
        let argv: Vec<&str> = args.iter().map(String::as_str).collect();
        let out = stdout(&afav(&argv));
        assert!(line(&out, "oracle=").ends_with("agree=yes"), "{args:?}\n{out}");
    }
}

#[test]
fn unary_check_in_both_backends() {
    let dir = tempfile::tempdir().unwrap();
    let lang = write(dir.path(), "even.lang", "base 32\nperiod 10 # even lengths\n");
    for n in 0..=7 {
        let n = n.to_string();
        let exact = stdout(&afav(&["unary", "--lang", &lang, "--k", "283/100", "--n", &n, "--check"]));
        assert!(line(&exact, "oracle=").ends_with("agree=yes"), "{exact}");
        let pruned = stdout(&afav(&["unary", "--lang", &lang, "--n", &n, "--check", "--prune"]));
        assert_eq!(line(&pruned, "max="), line(&exact, "max="));
        let interval = stdout(&afav(&["unary", "--lang", &lang, "--n", &n, "--precision", "16", "--check"]));
        assert!(interval.contains("scalar=interval"));
        assert!(line(&interval, "oracle=").ends_with("agree=yes"), "{interval}");
    }
}

#[test]
fn gadgets_match_their_closed_forms() {
    let cases: [&[&str]; 5] = [
        &["gadget", "binary", "--w", "1011"],
        &["gadget", "count1", "--steps", "12"],
        &["gadget", "count2", "--steps", "12"],
        &["gadget", "square", "--variant", "dim3", "--steps", "9"],
        &["gadget", "poly", "--coeffs", "1,2,3", "--steps", "4"],
    ];
    for args in cases {
        let o = afav(args);
        assert_eq!(code(&o), 0, "{args:?}");
        assert!(stdout(&o).contains("match=yes"));
    }
    let square = stdout(&afav(&["gadget", "square", "--steps", "9"]));
    assert_eq!(line(&square, "value="), "value=81");
    let binary = stdout(&afav(&["gadget", "binary", "--w", "1011"]));
    assert_eq!(line(&binary, "state="), "state=(1, 11, -11)");
}

#[test]
fn predicate_languages_cannot_be_emitted() {
    let dir = tempfile::tempdir().unwrap();
    let lang = write(dir.path(), "sq.lang", "base 32\noracle squares\ntruncation 8\n");
    assert_eq!(code(&afav(&["emit", "unary", "--lang", &lang])), 5);
    let even = write(dir.path(), "even.lang", "base 32\nperiod 10\n");
    let o = afav(&["emit", "unary", "--lang", &even]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).starts_with("machine unary-b32\n"));
}
