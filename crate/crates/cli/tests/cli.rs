//! End-to-end checks of the `grpd` binary and the spec file format,
//! including the determinism contract: `check --suite all --seed 7` on every
//! bundled fixture exits 0 and emits byte-identical machine reports across
//! consecutive runs.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

fn grpd(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_grpd"))
        .args(args)
        .env_remove("GRPD_SEED")
        .output()
        .expect("binary runs")
}

const FIXTURES: [&str; 5] = [
    "canonical_1_1.vbg",
    "canonical_2_3.vbg",
    "trivcore_pair2.vbg",
    "trivbase_pair2.vbg",
    "pullback_pair2.vbg",
];

#[test]
fn check_all_is_deterministic_and_green_on_every_fixture() {
    for name in FIXTURES {
        let path = fixture(name);
        let args = ["check", path.to_str().unwrap(), "--suite", "all", "--seed", "7", "--format", "machine"];
        let first = grpd(&args);
        assert!(
            first.status.success(),
            "{name} exited {:?}: {}",
            first.status.code(),
            String::from_utf8_lossy(&first.stdout)
        );
        let second = grpd(&args);
        assert!(second.status.success());
        assert_eq!(first.stdout, second.stdout, "{name}: machine reports differ between runs");
        assert!(!first.stdout.is_empty());
        let text = String::from_utf8(first.stdout).unwrap();
        assert!(text.lines().any(|l| l.starts_with("record\t")));
        assert!(text.lines().all(|l| !l.contains("result=fail")));
    }
}

#[test]
fn validate_fixtures() {
    for name in FIXTURES {
        let out = grpd(&["validate", fixture(name).to_str().unwrap()]);
        assert!(out.status.success(), "{name} failed validation");
    }
    let out = grpd(&["validate", fixture("corrupted.vbg").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("inv_invertible"), "report should name the singular inversion: {text}");
    assert!(text.contains("d0"), "report should name the arrow: {text}");
}

#[test]
fn dual_pipeline_produces_a_valid_spec() {
    let dir = tempfile::tempdir().unwrap();
    let out_path = dir.path().join("out.vbg");
    let out = grpd(&[
        "dual",
        fixture("trivcore_pair2.vbg").to_str().unwrap(),
        "-o",
        out_path.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let out = grpd(&["validate", out_path.to_str().unwrap()]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    // The dual of a rank (0,1) instance has rank (1,0).
    assert!(text.contains("rank (1,0)"), "{text}");
}

#[test]
fn core_command_prints_anchors() {
    let out = grpd(&["core", fixture("canonical_1_1.vbg").to_str().unwrap()]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("core dim 1"));
    assert!(text.contains("anchor [[0]]"));
    assert!(text.contains("anchor [[1]]"));
}

#[test]
fn frames_command_is_seeded_and_tagged() {
    let path = fixture("canonical_1_1.vbg");
    let a = grpd(&["frames", path.to_str().unwrap(), "--seed", "5", "--per-arrow", "2"]);
    let b = grpd(&["frames", path.to_str().unwrap(), "--seed", "5", "--per-arrow", "2"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let text = String::from_utf8(a.stdout).unwrap();
    assert_eq!(text.lines().filter(|l| l.starts_with("arrow ")).count(), 4);
    // Empty samples pass vacuously, with a warning.
    let empty = grpd(&["frames", path.to_str().unwrap(), "--seed", "5", "--per-arrow", "0"]);
    assert!(empty.status.success());
    assert!(String::from_utf8(empty.stdout).unwrap().contains("warning"));
}

#[test]
fn seed_env_variable_is_honored() {
    let path = fixture("canonical_1_1.vbg");
    let by_flag = grpd(&["check", path.to_str().unwrap(), "--suite", "groupoid", "--seed", "11", "--format", "machine"]);
    let by_env = Command::new(env!("CARGO_BIN_EXE_grpd"))
        .args(["check", path.to_str().unwrap(), "--suite", "groupoid", "--format", "machine"])
        .env("GRPD_SEED", "11")
        .output()
        .expect("binary runs");
    assert_eq!(by_flag.stdout, by_env.stdout);
}

#[test]
fn usage_errors_exit_2() {
    let out = grpd(&["check"]);
    assert_eq!(out.status.code(), Some(2));
    let out = grpd(&["no-such-command"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn missing_file_is_a_reported_error() {
    let out = grpd(&["validate", "/nonexistent/nope.vbg"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8(out.stderr).unwrap().contains("parse error"));
}
