//! Black-box tests of the agring binary: exit codes, report text, JSON
//! certificate output, determinism under a fixed seed.

use std::io::Write;
use std::process::{Command, Output, Stdio};

fn run(args: &[&str], stdin: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_agring"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary spawns");
    child
        .stdin
        .as_mut()
        .unwrap()
        .write_all(stdin.as_bytes())
        .unwrap();
    child.wait_with_output().unwrap()
}

const BUCHSBAUM_SESSION: &str = "ring A = F(32003)[x,y] / (x^2, x*y);\n\
     filtration M = adic(maxideal(A));\n\
     certify buchsbaum M;\n";

#[test]
fn certify_exit_zero() {
    let out = run(&[], BUCHSBAUM_SESSION);
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", text);
    assert!(text.contains("G_BUCHSBAUM"), "{}", text);
}

#[test]
fn parse_error_exit_four() {
    let out = run(&[], "ring A = F(7)[x]; ideal I = (y);");
    assert_eq!(out.status.code(), Some(4));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("1:"), "{}", err);
    assert!(err.contains("unknown variable"), "{}", err);
}

#[test]
fn sanity_fail_exit_three() {
    let session = "ring A = F(32003)[x,y,z] / (x*y, x*z);\n\
         filtration M = adic(maxideal(A));\n\
         certify buchsbaum M;\n";
    let out = run(&[], session);
    assert_eq!(out.status.code(), Some(3));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("INPUT_SANITY_FAIL"), "{}", text);
}

#[test]
fn hilbert_and_corso_lines() {
    let session = "ring A = F(32003)[x,y] / (x^2, x*y);\n\
         filtration M = adic(maxideal(A));\n\
         hilbert M 8;\n\
         corso M;\n";
    let out = run(&[], session);
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", text);
    assert!(text.contains("e = [1, -1]"), "{}", text);
    assert!(text.contains("lhs 0  rhs -1"), "{}", text);
}

#[test]
fn json_certificate_written() {
    let dir = std::env::temp_dir().join(format!("agring-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("cert.json");
    let out = run(&["--json", path.to_str().unwrap()], BUCHSBAUM_SESSION);
    assert_eq!(out.status.code(), Some(0));
    let json = std::fs::read_to_string(&path).unwrap();
    let parsed: serde_json::Value = serde_json::from_str(&json).unwrap();
    assert_eq!(parsed[0]["verdict"], "G_BUCHSBAUM");
    assert_eq!(parsed[0]["invariants"]["i_a"], 1);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn deterministic_under_seed() {
    let a = run(&["--seed", "9"], BUCHSBAUM_SESSION);
    let b = run(&["--seed", "9"], BUCHSBAUM_SESSION);
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(a.status.code(), b.status.code());
}
