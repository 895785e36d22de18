use std::path::{Path, PathBuf};
use std::process::Command;

use mhopf::catalog::{ClassicalDouble, Group};
use mhopf::cli::{self, format};
use mhopf::{Scalar, Tensor};
use num_traits::{One, Zero};
use serde_json::Value;

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("data").join(name)
}

fn run(args: &[&str]) -> (i32, String, String) {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let mut argv = vec!["mhopf"];
    argv.extend_from_slice(args);
    let code = cli::run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn verify_z2_pair_passes() {
    let (code, out, _) = run(&["verify", path_str(&data("z2_pair.json"))]);
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("PASS"));
}

#[test]
fn verify_int_group_on_small_window() {
    let (code, out, _) = run(&["--window", "4", "verify", path_str(&data("int_group.json"))]);
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("window 4"));
}

#[test]
fn broken_coassociativity_is_caught() {
    let text = std::fs::read_to_string(data("z2_pair.json")).unwrap();
    let mut doc: Value = serde_json::from_str(&text).unwrap();
    // T1(δ_0⊗δ_1) = δ_1⊗δ_1 becomes δ_0⊗δ_1
    let t1 = doc["A"]["t1"].as_array_mut().unwrap();
    let row = t1.iter_mut().find(|r| r[0] == 0 && r[1] == 1).unwrap();
    row[2] = Value::from(0);
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("broken.json");
    std::fs::write(&file, doc.to_string()).unwrap();
    let (code, out, _) = run(&["verify", path_str(&file)]);
    assert_eq!(code, 1, "{out}");
    assert!(out.contains("witness:"), "{out}");
}

#[test]
fn parse_error_exits_2_with_location() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("bad.json");
    std::fs::write(&file, "{ \"group\": \"S3\", }").unwrap();
    let (code, _, err) = run(&["verify", path_str(&file)]);
    assert_eq!(code, 2);
    assert!(err.contains("line 1"), "{err}");

    std::fs::write(&file, r#"{"algebra": {"name": "x", "basis": [0], "mul": [[0, 0, 7, "1"]]}}"#).unwrap();
    let (code, _, err) = run(&["verify", path_str(&file)]);
    assert_eq!(code, 2);
    assert!(err.contains("/algebra/mul/0"), "{err}");
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(run(&["frobnicate"]).0, 2);
    assert_eq!(run(&["verify"]).0, 2);
    assert_eq!(run(&["verify", "/nonexistent/spec.json"]).0, 2);
    assert_eq!(run(&["--help"]).0, 0);
}

#[test]
fn s3_double_export_matches_oracle_and_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let json = dir.path().join("d_s3.json");
    let (code, _, err) = run(&["double", path_str(&data("s3_pair.json")), "--out", path_str(&json)]);
    assert_eq!(code, 0, "{err}");

    let text = std::fs::read_to_string(&json).unwrap();
    let h = match format::load_json(&text).unwrap() {
        format::Loaded::Algebra(h) => h,
        format::Loaded::Pairing(_) => panic!("a double exports as a single algebra"),
    };
    assert_eq!(h.window(0).len(), 36);
    let oracle = ClassicalDouble::new(&Group::symmetric3());
    for (k, v) in oracle.multiplication_table() {
        assert_eq!(h.algebra().mul_labels(&k[0], &k[1]).unwrap(), v);
    }
    for b in oracle.basis() {
        let x = Tensor::basis(ClassicalDouble::label(b.0, b.1));
        assert_eq!(h.delta_n_covered(&x, &[], 1).unwrap(), oracle.coproduct(b));
    }

    let (code, out, _) = run(&["verify", path_str(&json)]);
    assert_eq!(code, 0, "{out}");

    let csv = dir.path().join("d_s3.csv");
    let spec = data("s3_pair.json");
    let args = ["double", path_str(&spec), "--format", "csv", "--out", path_str(&csv)];
    assert_eq!(run(&args).0, 0);
    let (code, out, _) = run(&["verify", path_str(&csv)]);
    assert_eq!(code, 0, "{out}");
}

#[test]
fn z2_double_counit() {
    let (code, out, _) = run(&["double", path_str(&data("z2_pair.json"))]);
    assert_eq!(code, 0);
    let h = match format::load_json(&out).unwrap() {
        format::Loaded::Algebra(h) => h,
        format::Loaded::Pairing(_) => unreachable!(),
    };
    assert_eq!(h.window(0).len(), 4);
    for g in 0..2 {
        for x in 0..2 {
            let want = if g == 0 { Scalar::one() } else { Scalar::zero() };
            let v = Tensor::basis(ClassicalDouble::label(g, x));
            assert_eq!(h.counit(&v).unwrap(), want);
        }
    }
}

#[test]
fn double_of_lazy_pair_is_refused() {
    let (code, _, err) = run(&["double", path_str(&data("int_group.json"))]);
    assert_eq!(code, 2, "{err}");
}

#[test]
fn report_is_deterministic_and_complete() {
    let spec = data("z2_pair.json");
    let (c1, first, _) = run(&["report", path_str(&spec), "--seed", "17"]);
    let (c2, second, _) = run(&["report", path_str(&spec), "--seed", "17"]);
    assert_eq!((c1, c2), (0, 0), "{first}");
    assert_eq!(first, second);
    assert!(first.contains("star: ⟨a*,b⟩"), "{first}");
    assert!(first.contains("star: ⟨a,b*⟩"), "{first}");
    assert!(first.contains("ambiguous source"), "{first}");
}

#[test]
fn window_comes_from_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_mhopf"))
        .args(["verify", path_str(&data("int_group.json"))])
        .env("MHOPF_DEFAULT_WINDOW", "3")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.contains("window 3"), "{stdout}");
}
