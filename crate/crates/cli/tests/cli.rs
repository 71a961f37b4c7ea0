//! End-to-end tests of the binary: output schemas, exit codes, determinism.

use std::path::Path;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_padic-lp"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(output: &Output) -> String {
    String::from_utf8(output.stdout.clone()).expect("utf-8 stdout")
}

fn write_function(dir: &Path, name: &str, level: u32, samples: &[f64]) -> String {
    let path = dir.join(name);
    let body = serde_json::json!({ "level": level, "samples": samples });
    std::fs::write(&path, serde_json::to_string(&body).unwrap()).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn sweep_emits_csv_with_exact_header_and_increasing_ratio() {
    let output = run(&["sweep", "--m-min", "1", "--m-max", "4"]);
    assert!(output.status.success());
    let text = stdout(&output);
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "m,alpha,beta,j0,j1,level,l2_squared,besov_pos,besov_neg,bv,ratio"
    );
    let ratios: Vec<f64> = lines
        .map(|l| l.rsplit(',').next().unwrap().parse().unwrap())
        .collect();
    assert_eq!(ratios.len(), 4);
    for pair in ratios.windows(2) {
        assert!(pair[1] > pair[0]);
    }
}

#[test]
fn counterexample_reports_reference_l2() {
    let output = run(&[
        "counterexample",
        "--alpha",
        "1",
        "--beta",
        "4",
        "--j0",
        "1",
        "--j1",
        "2",
    ]);
    assert!(output.status.success());
    let report: serde_json::Value = serde_json::from_str(&stdout(&output)).unwrap();
    assert_eq!(report["report"]["computed"]["l2_squared"], 9.0);
    assert_eq!(report["status"], "pass");
}

#[test]
fn norm_of_coset_indicator_besov() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_function(dir.path(), "f.json", 1, &[1.0, 0.0]);
    let output = run(&[
        "norm",
        "--input",
        &input,
        "--family",
        "besov",
        "--s",
        "1",
        "--q",
        "inf",
        "--p",
        "1",
        "--homogeneous",
    ]);
    assert!(output.status.success());
    let report: serde_json::Value = serde_json::from_str(&stdout(&output)).unwrap();
    assert_eq!(report["value"], 0.5);
}

#[test]
fn norm_exact_arith_agrees_with_float_path() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_function(dir.path(), "f.json", 2, &[1.0, -0.5, 0.25, 0.0]);
    for family in ["bv", "second-difference"] {
        let float = run(&["norm", "--input", &input, "--family", family]);
        let exact = run(&[
            "norm",
            "--input",
            &input,
            "--family",
            family,
            "--exact-arith",
        ]);
        assert!(float.status.success() && exact.status.success());
        let a: serde_json::Value = serde_json::from_str(&stdout(&float)).unwrap();
        let b: serde_json::Value = serde_json::from_str(&stdout(&exact)).unwrap();
        assert_eq!(a["value"], b["value"], "family {family}");
    }
}

#[test]
fn decompose_writes_block_files() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_function(dir.path(), "f.json", 2, &[1.0, 0.0, 0.0, 0.0]);
    let out_dir = dir.path().join("dec");
    let output = run(&[
        "decompose",
        "--input",
        &input,
        "--output",
        out_dir.to_str().unwrap(),
    ]);
    assert!(output.status.success());
    let mean: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(out_dir.join("s0.json")).unwrap()).unwrap();
    assert_eq!(mean["level"], 0);
    assert_eq!(mean["samples"][0], 0.25);
    let d1: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(out_dir.join("delta_01.json")).unwrap())
            .unwrap();
    assert_eq!(d1["level"], 2);
    assert_eq!(d1["samples"][0], 0.5);
}

#[test]
fn check_interp_accepts_explicit_sequence() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("seq.json");
    std::fs::write(&path, "[1.0, 0.5, 0.25, 0.125]").unwrap();
    let output = run(&["check-interp", "--input", path.to_str().unwrap()]);
    assert!(output.status.success());
    let report: serde_json::Value = serde_json::from_str(&stdout(&output)).unwrap();
    assert_eq!(report["status"], "pass");
    assert_eq!(report["checked"], 1);
}

#[test]
fn reports_are_byte_identical_for_fixed_seed() {
    let args = ["check-bv", "-J", "5", "--count", "12", "--seed", "7"];
    let first = run(&args);
    let second = run(&args);
    assert!(first.status.success());
    assert_eq!(first.stdout, second.stdout);
}

#[test]
fn malformed_function_file_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    std::fs::write(&path, "{\"level\": 2, \"samples\": [1.0]}").unwrap();
    let output = run(&["norm", "--input", path.to_str().unwrap(), "--family", "bv"]);
    assert_eq!(output.status.code(), Some(2));

    let garbled = dir.path().join("garbled.json");
    std::fs::write(&garbled, "not json").unwrap();
    let output = run(&[
        "norm",
        "--input",
        garbled.to_str().unwrap(),
        "--family",
        "bv",
    ]);
    assert_eq!(output.status.code(), Some(2));
}

#[test]
fn invalid_flags_exit_two() {
    let output = run(&["sweep", "--m-min", "3", "--m-max", "1"]);
    assert_eq!(output.status.code(), Some(2));

    let output = run(&["sweep"]);
    assert_eq!(output.status.code(), Some(2));

    let output = run(&[
        "counterexample",
        "--alpha",
        "1",
        "--beta",
        "3",
        "--j0",
        "1",
        "--j1",
        "2",
    ]);
    assert_eq!(output.status.code(), Some(2));
}

#[test]
fn sobolev_norm_rejects_exact_arith() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_function(dir.path(), "f.json", 1, &[1.0, 0.0]);
    let output = run(&[
        "norm",
        "--input",
        &input,
        "--family",
        "sobolev",
        "--s",
        "1",
        "--p",
        "2",
        "--homogeneous",
        "--exact-arith",
    ]);
    assert_eq!(output.status.code(), Some(2));
}
