//! End-to-end checks of the binary: exit codes, determinism of data files,
//! and config validation.

use std::path::Path;
use std::process::{Command, Output};

fn levylab(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_levylab"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

#[test]
fn exact_lcf_reports_the_known_value() {
    let dir = tempfile::tempdir().unwrap();
    let out = levylab(
        &["lcf", "--dist", "rademacher", "--vector", "1,1,1,1", "--radius", "0.5", "--exact"],
        dir.path(),
    );
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("lcf.value = 0.375"), "{text}");
}

#[test]
fn identical_configs_reproduce_identical_csv_bytes() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("exp.toml");
    std::fs::write(
        &cfg,
        r#"experiment = "tail"
n = 8
dist = "standard-complex-gaussian"
matrix = "zero"
etas = "1e-2,1e-1"
trials = 300
seed = 11
out_csv = "curve.csv"
"#,
    )
    .unwrap();
    let first = levylab(&["run", "exp.toml"], dir.path());
    assert!(first.status.success(), "{:?}", first);
    let bytes_a = std::fs::read(dir.path().join("curve.csv")).unwrap();
    let second = levylab(&["run", "exp.toml", "--threads", "1"], dir.path());
    assert!(second.status.success());
    let bytes_b = std::fs::read(dir.path().join("curve.csv")).unwrap();
    assert_eq!(bytes_a, bytes_b, "CSV outputs must be byte-identical across runs");
}

#[test]
fn unknown_config_key_is_rejected_by_name() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.toml");
    std::fs::write(
        &cfg,
        r#"experiment = "lcf"
dist = "rademacher"
vector = "1,1"
radius = 0.5
radiuss = 1.0
"#,
    )
    .unwrap();
    let out = levylab(&["run", "bad.toml"], dir.path());
    assert!(!out.status.success());
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("radiuss"), "error must name the bad key: {err}");
}

#[test]
fn missing_required_key_is_named() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("missing.toml");
    std::fs::write(&cfg, "experiment = \"lcf\"\ndist = \"rademacher\"\nradius = 0.5\n").unwrap();
    let out = levylab(&["run", "missing.toml"], dir.path());
    assert!(!out.status.success());
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("vector"), "{err}");
}

#[test]
fn integer_vector_witness_fails_certification_with_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    let out = levylab(
        &[
            "diophantine", "--vector", "1,2,3", "--f", "0.5", "--g", "2", "--alpha", "0.1",
            "--cxi", "2",
        ],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(1));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("FAIL annulus-certified"), "{text}");
}

#[test]
fn json_report_carries_hash_and_checks() {
    let dir = tempfile::tempdir().unwrap();
    let out = levylab(
        &[
            "count", "verify-lemma", "--p", "3", "--n", "2", "--k", "1", "--s", "1", "--t", "1",
            "--alpha", "0.5", "--out", "rep.json",
        ],
        dir.path(),
    );
    assert!(out.status.success());
    let rep: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("rep.json")).unwrap())
            .unwrap();
    assert!(rep["content_hash"].as_str().unwrap().starts_with("sha256:"));
    assert_eq!(rep["checks"][0]["pass"], serde_json::Value::Bool(true));
    assert_eq!(rep["value_strings"]["bound"], "54");
}

#[test]
fn tail_csv_has_the_documented_header() {
    let dir = tempfile::tempdir().unwrap();
    let out = levylab(
        &[
            "tail", "--n", "4", "--dist", "gaussian", "--etas", "1e-2,1e-1", "--trials", "150",
            "--seed", "3", "--out-csv", "c.csv",
        ],
        dir.path(),
    );
    assert!(out.status.success(), "{:?}", out);
    let text = std::fs::read_to_string(dir.path().join("c.csv")).unwrap();
    assert!(text.starts_with("eta,hits,trials,empirical,edelman_bound,sst_bound\n"));
}

#[test]
fn unknown_suite_is_an_error() {
    let dir = tempfile::tempdir().unwrap();
    let out = levylab(&["verify", "spectral"], dir.path());
    assert_eq!(out.status.code(), Some(2));
}
