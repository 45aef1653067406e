//! Exit-status contract and output plumbing of the binary.

use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_magring")).args(args).output().expect("run binary")
}

#[test]
fn usage_errors_exit_with_two() {
    for args in [
        &["mu-curve", "--a", "0.3"][..],
        &["nu", "--p", "1", "--alpha", "0"],
        &["profile", "--a", "0.3", "--p", "4", "--alpha", "-0.5"],
        &["klt", "--a", "0.3", "--p", "4", "--phi", "-1"],
        &["hardy", "--a", "0.3", "--p", "4", "--phi-file", "/nonexistent/phi.csv"],
        &["frobnicate"],
    ] {
        let out = run(args);
        let code = out.status.code();
        // A missing file is an i/o failure, not a usage error.
        let expected = if args.contains(&"/nonexistent/phi.csv") { 3 } else { 2 };
        assert_eq!(code, Some(expected), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
        assert!(out.stdout.is_empty());
    }
}

#[test]
fn help_and_version_succeed() {
    assert!(run(&["--help"]).status.success());
    assert!(run(&["--version"]).status.success());
}

#[test]
fn output_flag_writes_the_same_bytes() {
    let dir = std::env::temp_dir().join(format!("magring-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("nu.csv");
    let args = ["nu", "--p", "4", "--alpha", "0"];
    let direct = run(&args);
    assert!(direct.status.success());
    let mut with_file = args.to_vec();
    with_file.extend(["--output", path.to_str().unwrap()]);
    let out = run(&with_file);
    assert!(out.status.success() && out.stdout.is_empty());
    assert_eq!(std::fs::read(&path).unwrap(), direct.stdout);
    assert_eq!(String::from_utf8(direct.stdout).unwrap(), "p,alpha,nu\r\n4,0,0.20109166596\r\n");
    std::fs::remove_dir_all(&dir).unwrap();
}
