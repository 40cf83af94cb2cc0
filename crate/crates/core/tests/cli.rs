//! End-to-end runs of the `bifinite` binary: golden outputs, determinism and
//! exit codes.

use std::path::PathBuf;
use std::process::{Command, Output};

fn bifinite(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bifinite")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn golden(name: &str) -> String {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name);
    std::fs::read_to_string(path).unwrap()
}

fn scratch(name: &str, text: &str) -> String {
    let dir = std::env::temp_dir().join(format!("bifinite-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path.to_string_lossy().into_owned()
}

fn json(o: &Output) -> serde_json::Value {
    serde_json::from_slice(&o.stdout).expect("valid json")
}

#[test]
fn check_extension_ex1_matches_golden() {
    let o = bifinite(&["check-extension", "builtin:ex1"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert_eq!(stdout(&o), golden("check_extension_ex1.txt"));
}

#[test]
fn resolve_ex2_bimodule_matches_golden() {
    let o = bifinite(&["resolve", "builtin:ex2", "--which", "bimodule", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert_eq!(stdout(&o), golden("resolve_ex2_bimodule.json"));
}

#[test]
fn gldim_dual_numbers_matches_golden() {
    let o = bifinite(&["gldim", "builtin:kx2"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), golden("gldim_kx2.txt"));
}

#[test]
fn json_output_is_byte_identical_across_runs() {
    for args in [
        &["bound", "builtin:a3", "--format", "json", "--probes", "20"][..],
        &["check-extension", "builtin:ex2", "--format", "json"][..],
        &["gldim", "builtin:cyc2", "--format", "json", "--seed", "7"][..],
    ] {
        let a = bifinite(args);
        let b = bifinite(args);
        assert_eq!(a.status.code(), Some(0), "{args:?}: {}", stderr(&a));
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}

#[test]
fn info_reports_dimensions() {
    let o = bifinite(&["info", "builtin:kx2", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["algebras"][0]["dim"], 2);
    assert_eq!(v["algebras"][0]["radical_dim"], 1);
    assert_eq!(v["algebras"][1]["dim"], 1);

    let v = json(&bifinite(&["info", "builtin:ex1", "--format", "json"]));
    let (a, b) = (v["algebras"][0]["dim"].as_u64().unwrap(), v["algebras"][1]["dim"].as_u64().unwrap());
    assert_eq!(b + 1, a);
}

#[test]
fn bound_certificates_on_finite_global_dimension() {
    let o = bifinite(&["bound", "builtin:a3", "--format", "json", "--probes", "30"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v = json(&o);
    assert_eq!(v["findim"]["kind"], "exact-via-gldim");
    let certs = v["certificates"].as_array().unwrap();
    assert_eq!(certs.len(), 30);
    assert!(certs.iter().all(|c| c["outcome"] != "failed"));
    assert!(certs.iter().any(|c| c["outcome"] == "verified"));
}

#[test]
fn user_file_with_adjoined_unit() {
    let path = scratch(
        "a2-nounit.pres",
        "field 1009\nvertex 1 2\narrow a: 1 -> 2\ncap 2\n\ngenerator a\n",
    );
    let o = bifinite(&["check-extension", &path, "--adjoin-unit", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v = json(&o);
    assert_eq!(v["extension"]["dim_a"], 3);
    assert_eq!(v["extension"]["dim_b"], 2);
}

#[test]
fn strict_turns_inconclusive_into_exit_four() {
    assert_eq!(bifinite(&["gldim", "builtin:kx2"]).status.code(), Some(0));
    assert_eq!(bifinite(&["--strict", "gldim", "builtin:kx2"]).status.code(), Some(4));
}

#[test]
fn parse_errors_exit_two_with_location() {
    let path = scratch("nonparallel.pres", "vertex 1\nvertex 2\narrow a: 1 -> 2\narrow b: 2 -> 1\nrelation a - b\ncap 3\n");
    let o = bifinite(&["info", &path]);
    assert_eq!(o.status.code(), Some(2));
    let err = stderr(&o);
    assert!(err.contains("line 5, column"), "{err}");
    assert!(err.contains("not parallel"), "{err}");

    assert_eq!(bifinite(&["info", "/nonexistent/x.pres"]).status.code(), Some(2));
    assert_eq!(bifinite(&["info", "builtin:nope"]).status.code(), Some(2));
    assert_eq!(bifinite(&["--cutoff", "0", "info", "builtin:kx2"]).status.code(), Some(2));
    assert_eq!(bifinite(&["--field", "10", "info", "builtin:kx2"]).status.code(), Some(2));
}

#[test]
fn build_errors_exit_three_with_check_name() {
    let path = scratch("loop.pres", "vertex 1\narrow a: 1 -> 1\ncap 5\n");
    let o = bifinite(&["info", &path]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("NotAdmissible"), "{}", stderr(&o));
}

#[test]
fn reproduction_with_small_cutoff_keeps_example_rows() {
    let o = bifinite(&["--cutoff", "5", "--probes", "10", "verify-paper", "--format", "json"]);
    let v = json(&o);
    let rows = v["acceptance"].as_array().unwrap();
    for id in ["ex1-bimodule-resolution", "ex2-bimodule-resolution"] {
        let r = rows.iter().find(|r| r["id"] == id).unwrap();
        assert_eq!(r["passed"], true, "{r}");
    }
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
}
