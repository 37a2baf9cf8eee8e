use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

fn entangle(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_entangle")).args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn path_str(p: &Path) -> &str {
    p.to_str().expect("utf-8 temp path")
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("valid JSON report")
}

#[test]
fn werner_above_threshold_is_ppt_entangled() {
    let dir = TempDir::new().unwrap();
    let file = dir.path().join("w.qs");
    let gen = entangle(&["gen", "werner", "--d", "2", "--p", "0.9", "-o", path_str(&file)]);
    assert!(gen.status.success());

    let out = entangle(&["analyze", "-i", path_str(&file), "--criteria", "ppt"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("verdict: ENTANGLED"), "{}", stdout(&out));

    let report = json(&entangle(&["--json", "analyze", "-i", path_str(&file), "--criteria", "ppt"]));
    assert_eq!(report["command"], "analyze");
    assert_eq!(report["tool"], "entangle");
}

#[test]
fn ghz_three_tangle_is_one() {
    let dir = TempDir::new().unwrap();
    let file = dir.path().join("ghz.qs");
    assert!(entangle(&["gen", "ghz", "--n", "3", "-o", path_str(&file)]).status.success());
    let report = json(&entangle(&["--json", "measure", "-i", path_str(&file), "--measures", "tangle3"]));
    let value = report["results"]["measures"][0]["value"].as_f64().unwrap();
    assert!((value - 1.0).abs() < 1e-9);
}

#[test]
fn selftest_passes() {
    let out = entangle(&["selftest", "--seed", "7", "--trials", "100"]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    assert!(stdout(&out).contains("7 of 7 checks passed"));
}

#[test]
fn exit_codes_follow_error_class() {
    assert_eq!(entangle(&["gen", "--no-such-flag"]).status.code(), Some(2));
    assert_eq!(entangle(&["analyze", "-i", "/nonexistent/state.qs"]).status.code(), Some(3));
    assert_eq!(entangle(&["distill", "recurrence", "--f0", "0.5"]).status.code(), Some(4));

    let dir = TempDir::new().unwrap();
    let file = dir.path().join("bad.qs");
    std::fs::write(&file, "QSTATE 1\nkind density\ndims 2 2\n1 0\n").unwrap();
    let out = entangle(&["analyze", "-i", path_str(&file)]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line"));
}

#[test]
fn reports_are_byte_identical_for_a_seed() {
    let run = || {
        let dir = TempDir::new().unwrap();
        let file = dir.path().join("r.qs");
        let gen = entangle(&["gen", "random-density", "--dims", "2,3", "--seed", "11", "-o", path_str(&file)]);
        assert!(gen.status.success());
        let analysis = entangle(&["--json", "analyze", "-i", path_str(&file)]);
        let teleport = entangle(&["--json", "sim", "teleport", "--mode", "haar", "--samples", "50", "--seed", "3"]);
        (std::fs::read(&file).unwrap(), analysis.stdout, teleport.stdout)
    };
    assert_eq!(run(), run());
}

#[test]
fn recurrence_reaches_target() {
    let report = json(&entangle(&["--json", "distill", "recurrence", "--f0", "0.7", "--target", "0.99"]));
    assert_eq!(report["results"]["reached_target"], true);
}

#[test]
fn identity_channel_state_is_maximally_entangled() {
    let dir = TempDir::new().unwrap();
    let kraus = dir.path().join("id.kraus");
    std::fs::write(&kraus, "KRAUS 1\ndims 2 2\ncount 1\n1 0\n0 0\n0 0\n1 0\n").unwrap();
    let out = entangle(&["channel", "choi", "--kraus", path_str(&kraus)]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("coherent information 1.0"));
}
