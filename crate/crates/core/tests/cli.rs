//! End-to-end CLI checks: subcommand behavior and exit codes.

use std::path::Path;
use std::process::{Command, Output};

fn cutmimic(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cutmimic"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn gen_and_verify_planar() {
    let dir = tempfile::tempdir().unwrap();
    let out = cutmimic(&["gen", "planar", "--k", "4", "--out", "inst"], dir.path());
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));

    let out = cutmimic(&["verify", "unique-cycles", "--instance", "inst"], dir.path());
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("4/4 important cuts unique"), "{text}");
    assert!(text.contains("unique-cycles: PASS"), "{text}");

    let out = cutmimic(&["verify", "claim-paths", "--instance", "inst"], dir.path());
    assert!(out.status.success());
    assert!(stdout(&out).contains("claim-paths: PASS"));

    let out = cutmimic(&["verify", "identity-submatrix", "--instance", "inst"], dir.path());
    assert!(out.status.success());
    assert!(stdout(&out).contains("4 x 4 identity: true"));
}

#[test]
fn rank_important_only_k5() {
    let dir = tempfile::tempdir().unwrap();
    assert!(cutmimic(&["gen", "planar", "--k", "5", "--out", "inst"], dir.path())
        .status
        .success());
    let out = cutmimic(
        &["rank", "--graph", "inst/primal.graph", "--rows", "important-only"],
        dir.path(),
    );
    assert!(out.status.success());
    assert!(stdout(&out).contains("rank 8 over the rationals"), "{}", stdout(&out));
}

#[test]
fn validate_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    assert!(cutmimic(&["gen", "planar", "--k", "3", "--out", "inst"], dir.path())
        .status
        .success());
    // identity: exit 0
    let out = cutmimic(
        &[
            "validate",
            "--original",
            "inst/primal.graph",
            "--compressed",
            "inst/primal.graph",
        ],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(0));

    // perturbed weight with identical terminals: verification failure, exit 1
    let text = std::fs::read_to_string(dir.path().join("inst/primal.graph")).unwrap();
    let perturbed = text.replacen("2/1", "3/1", 1);
    assert_ne!(text, perturbed);
    std::fs::write(dir.path().join("perturbed.graph"), perturbed).unwrap();
    let out = cutmimic(
        &[
            "validate",
            "--original",
            "inst/primal.graph",
            "--compressed",
            "perturbed.graph",
        ],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(1), "{}", stdout(&out));

    // missing file: usage/input error, exit 2
    let out = cutmimic(
        &["validate", "--original", "nope.graph", "--compressed", "nope.graph"],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(2));

    // unknown subcommand: exit 2
    let out = cutmimic(&["frobnicate"], dir.path());
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn mincut_profile_compress_roundtrip() {
    let dir = tempfile::tempdir().unwrap();
    assert!(cutmimic(&["gen", "planar", "--k", "4", "--out", "inst"], dir.path())
        .status
        .success());
    let out = cutmimic(
        &["mincut", "--graph", "inst/primal.graph", "--side", "fn,f1"],
        dir.path(),
    );
    assert!(out.status.success());
    assert!(stdout(&out).contains("min cut 73/1"), "{}", stdout(&out));

    let out = cutmimic(
        &["profile", "--graph", "inst/primal.graph", "--uniqueness"],
        dir.path(),
    );
    assert!(out.status.success());
    assert_eq!(stdout(&out).lines().count(), 7);

    let out = cutmimic(
        &["compress", "--graph", "inst/primal.graph", "--out", "small.graph"],
        dir.path(),
    );
    assert!(out.status.success());
    let out = cutmimic(
        &[
            "validate",
            "--original",
            "inst/primal.graph",
            "--compressed",
            "small.graph",
        ],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn dblexp_gen_and_side_assignment() {
    let dir = tempfile::tempdir().unwrap();
    let out = cutmimic(&["gen", "dblexp", "--r", "2", "--out", "d2"], dir.path());
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(stdout(&out).contains("268 vertices / 2822 edges"));

    let out = cutmimic(&["verify", "side-assignment", "--instance", "d2"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("10/10 important sets"));

    // odd r is a parameter error
    let out = cutmimic(&["gen", "dblexp", "--r", "3", "--out", "d3"], dir.path());
    assert_eq!(out.status.code(), Some(2));
    // r = 6 trips the size guard
    let out = cutmimic(&["gen", "dblexp", "--r", "6", "--out", "d6"], dir.path());
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn export_dot_outputs() {
    let dir = tempfile::tempdir().unwrap();
    assert!(cutmimic(&["gen", "planar", "--k", "3", "--out", "inst"], dir.path())
        .status
        .success());
    let out = cutmimic(
        &["export", "dot", "--instance", "inst", "--which", "dual"],
        dir.path(),
    );
    assert!(out.status.success());
    let text = stdout(&out);
    assert_eq!(text.matches("pos=").count(), 4);
    assert_eq!(text.matches(" -- ").count(), 5);
    assert!(text.contains("penwidth=2"));

    let out = cutmimic(
        &["export", "dot", "--graph", "inst/primal.graph", "--out", "primal.dot"],
        dir.path(),
    );
    assert!(out.status.success());
    let dot = std::fs::read_to_string(dir.path().join("primal.dot")).unwrap();
    assert_eq!(dot.matches("doublecircle").count(), 3);
}
