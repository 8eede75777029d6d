//! End-to-end tests of the command-line binary: flags, exit codes, output
//! routing, and byte-level determinism.

use std::process::{Command, Output};

fn holoroot(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_holoroot"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8 stdout")
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).expect("utf-8 stderr")
}

#[test]
fn expand_json_to_stdout() {
    let out = holoroot(&["expand", "--k", "2", "--order", "4", "--format", "json"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains(r#"{"q":2,"r":2,"num":"-1","den":"4"}"#));
    assert_eq!(stderr(&out).trim(), "k=2 Q=4 entries=15");
}

#[test]
fn expand_order_zero_has_one_entry() {
    let out = holoroot(&["expand", "--k", "3", "--order", "0"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "C(0,0) = -1\n");
    assert_eq!(stderr(&out).trim(), "k=3 Q=0 entries=1");
}

#[test]
fn expand_rejects_k_below_two() {
    let out = holoroot(&["expand", "--k", "1", "--order", "2"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn expand_writes_files_and_routes_the_summary() {
    let dir = std::env::temp_dir().join("holoroot-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("table.csv");
    let path_str = path.to_str().unwrap();
    let out = holoroot(&[
        "expand", "--k", "2", "--order", "1", "--format", "csv", "--out", path_str,
    ]);
    assert!(out.status.success());
    assert_eq!(stdout(&out).trim(), "k=2 Q=1 entries=3");
    assert_eq!(
        std::fs::read_to_string(&path).unwrap(),
        "q,r,num,den\n0,0,-1,1\n1,1,0,1\n1,2,1,2\n"
    );
    // unwritable path reports an I/O failure
    let out = holoroot(&[
        "expand", "--k", "2", "--order", "1", "--out", "/nonexistent-dir/x.json",
    ]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn expand_is_byte_deterministic() {
    let a = holoroot(&["expand", "--k", "4", "--order", "5", "--format", "json"]);
    let b = holoroot(&["expand", "--k", "4", "--order", "5", "--format", "json"]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn eval_at_zero_is_exact() {
    let out = holoroot(&["eval", "--k", "3", "--order", "4", "--sigma", "0,0,0"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("series     = -1+0i"), "{text}");
    assert!(text.contains("newton     = -1+0i"), "{text}");
    assert!(text.contains("difference = 0e0"), "{text}");
}

#[test]
fn eval_small_sigma_agrees_to_truncation_error() {
    let out = holoroot(&["eval", "--k", "2", "--order", "8", "--sigma", "0.01,0.02"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let diff_line = text
        .lines()
        .find(|l| l.starts_with("difference"))
        .expect("difference printed");
    let value: f64 = diff_line.split('=').nth(1).unwrap().trim().parse().unwrap();
    assert!(value <= 1e-12, "difference {value}");
}

#[test]
fn eval_far_from_the_basin_exits_4() {
    let out = holoroot(&["eval", "--k", "2", "--order", "4", "--sigma", "10,10"]);
    assert_eq!(out.status.code(), Some(4));
    assert!(stderr(&out).contains("warning"));
}

#[test]
fn eval_rejects_wrong_sigma_length() {
    let out = holoroot(&["eval", "--k", "2", "--order", "4", "--sigma", "1,2,3"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn eval_accepts_fractions() {
    let out = holoroot(&["eval", "--k", "2", "--order", "6", "--sigma", "1/100,1/50"]);
    assert!(out.status.success());
}

#[test]
fn verify_identities_passes() {
    let out = holoroot(&["verify", "identities", "--k", "3"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.lines().filter(|l| l.starts_with("PASS")).count() >= 7);
    assert!(!text.contains("FAIL"));
}

#[test]
fn verify_recurrences_reports_the_discrepancy() {
    let out = holoroot(&["verify", "recurrences", "--k", "2", "--order", "8"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("DISCREPANCY"), "{text}");
    assert!(text.contains("-1/4"), "{text}");
    assert!(text.contains("1/3"), "{text}");
    assert!(text.contains("result: PASS"), "{text}");
}

#[test]
fn verify_determinant_reports_the_sign() {
    let out = holoroot(&["verify", "determinant", "--k", "2"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("eps = -1"));
}

#[test]
fn verify_target_flag_is_an_alias() {
    let positional = holoroot(&["verify", "newton", "--k", "2"]);
    let flagged = holoroot(&["verify", "--target", "newton", "--k", "2"]);
    assert!(positional.status.success());
    assert_eq!(positional.stdout, flagged.stdout);
    let conflict = holoroot(&["verify", "newton", "--target", "surface", "--k", "2"]);
    assert_eq!(conflict.status.code(), Some(2));
}

#[test]
fn verify_rejects_unknown_targets() {
    let out = holoroot(&["verify", "bogus", "--k", "2"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn newton_table_golden() {
    let out = holoroot(&["newton-table", "--k", "2", "--max-m", "3"]);
    assert!(out.status.success());
    assert_eq!(
        stdout(&out),
        "N_0 = 2\n\
         N_1 = 1 * s1^1\n\
         N_2 = -2 * s2^1 + 1 * s1^2\n\
         N_3 = -3 * s1^1 s2^1 + 1 * s1^3\n\
         DN_-1 = 0\n\
         DN_0 = 1\n\
         DN_1 = 1 * s1^1\n\
         DN_2 = -1 * s2^1 + 1 * s1^2\n\
         DN_3 = -2 * s1^1 s2^1 + 1 * s1^3\n"
    );
}
