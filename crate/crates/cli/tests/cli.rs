use std::path::Path;
use std::process::{Command, Output};

use serde_json::{json, Value};

use crossmod::{sampling, FamilyOverBase};

fn crossmod(args: &[&str], input: Option<&Path>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_crossmod"));
    cmd.args(args);
    if let Some(p) = input {
        cmd.arg(p);
    }
    cmd.output().expect("run crossmod")
}

fn write(dir: &Path, name: &str, v: &Value) -> std::path::PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, v.to_string()).unwrap();
    p
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn crossed_module_random_samples_pass() {
    let dir = tempfile::tempdir().unwrap();
    let p = write(dir.path(), "in.json", &json!({"random": {"n": 4, "count": 30}}));
    for mode in ["exact", "float"] {
        let out = crossmod(&["--mode", mode, "check", "crossed-module"], Some(&p));
        assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
        assert_eq!(stdout_json(&out)["passed"], json!(true));
    }
}

#[test]
fn corrupted_associator_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let good = write(dir.path(), "good.json", &json!({"random": {"n": 4, "count": 20}}));
    let bad = write(dir.path(), "bad.json", &json!({"random": {"n": 4, "count": 20}, "associator": {"scale": 2}}));
    assert_eq!(crossmod(&["check", "coherence"], Some(&good)).status.code(), Some(0));
    let out = crossmod(&["check", "coherence"], Some(&bad));
    assert_eq!(out.status.code(), Some(1));
    let report = stdout_json(&out);
    let cocycle = report["laws"].as_array().unwrap().iter().find(|l| l["law"] == "omega-iota-cocycle").unwrap();
    assert!(cocycle["failure_count"].as_u64().unwrap() > 0);
}

#[test]
fn explicit_samples_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let mut rng = sampling::rng(5);
    let s = sampling::coherence_sample(&mut rng, 3);
    let p = write(dir.path(), "in.json", &json!({"samples": [s.to_json()], "quotient": "integral-lattice"}));
    let out = crossmod(&["check", "coherence"], Some(&p));
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout_json(&out)["conventions"]["quotient"], json!("Lambda3(Z^n)"));
}

#[test]
fn input_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let garbage = dir.path().join("garbage.json");
    std::fs::write(&garbage, "{not json").unwrap();
    assert_eq!(crossmod(&["classify"], Some(&garbage)).status.code(), Some(2));
    assert_eq!(crossmod(&["classify"], Some(&dir.path().join("missing.json"))).status.code(), Some(2));

    let float_phase = json!({"omega": {"form": "standard", "theta_hat": [[0, 0.25], [0, 0]]}, "U": {"n": 2, "c": []}});
    let p = write(dir.path(), "float.json", &float_phase);
    let out = crossmod(&["--mode", "exact", "classify"], Some(&p));
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("exact"));
    assert_eq!(crossmod(&["--mode", "float", "classify"], Some(&p)).status.code(), Some(0));

    let bad_index = write(dir.path(), "obs.json", &json!({"n": 4, "points": {"p": [{"subtorus": [0, 1, 2], "dd": 1}]}}));
    assert_eq!(crossmod(&["obstruction"], Some(&bad_index)).status.code(), Some(2));
    assert_eq!(crossmod(&["selftest", "--suite", "nope"], None).status.code(), Some(2));
}

#[test]
fn invalid_action_fails_classification() {
    let dir = tempfile::tempdir().unwrap();
    // U not integral: rejected by validation rather than classified
    let a = json!({"omega": {"form": "standard", "theta_hat": [[0, 0, 0], [0, 0, 0], [0, 0, 0]]}, "U": {"n": 3, "c": [{"num": 1, "den": 2}]}});
    let p = write(dir.path(), "a.json", &a);
    let out = crossmod(&["classify"], Some(&p));
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout_json(&out)["validation"]["passed"] == json!(false));
}

#[test]
fn classify_reports_generator() {
    let dir = tempfile::tempdir().unwrap();
    let a = json!({"omega": {"form": "standard", "theta_hat": [[0, 0, 0], [0, 0, 0], [0, 0, 0]]}, "U": {"n": 3, "c": [1]}});
    let p = write(dir.path(), "a.json", &a);
    let out = crossmod(&["classify"], Some(&p));
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert_eq!(v["m"], json!([1]));
    assert_eq!(v["dd"]["coeffs"], json!([1]));
    assert_eq!(v["conventions"]["dd_sign"], json!("+"));
}

#[test]
fn obstruction_uses_one_based_subtori() {
    let dir = tempfile::tempdir().unwrap();
    let input = json!({"n": 4, "points": {"a": [{"subtorus": [2, 3, 4], "dd": -2}], "b": []}});
    let p = write(dir.path(), "obs.json", &input);
    let out = crossmod(&["obstruction"], Some(&p));
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert_eq!(v["obstruction"]["points"]["a"], json!([0, 0, 0, -2]));
    assert_eq!(v["liftable"], json!({"a": false, "b": true}));
    assert_eq!(v["liftable_everywhere"], json!(false));
}

#[test]
fn tdual_decisions() {
    let dir = tempfile::tempdir().unwrap();
    for (winding, m, want) in [(0, 0, "Classical"), (1, 0, "NoncommutativeTorusBundle"), (0, 1, "NonassociativeOnly")] {
        let f = FamilyOverBase::circle(3, 5, winding, &[m]).unwrap();
        let p = write(dir.path(), "f.json", &f.to_json());
        let out = crossmod(&["tdual"], Some(&p));
        assert_eq!(out.status.code(), Some(0));
        assert_eq!(stdout_json(&out)["decision"], json!(want));
    }
}

#[test]
fn fell_demo_suites() {
    for suite in ["phi", "associator", "axioms", "norms"] {
        let out = crossmod(&["fell-demo", "--n", "3", "--N", "3", "--m", "1", "--suite", suite, "--pairs", "5", "--triples", "20"], None);
        assert_eq!(out.status.code(), Some(0), "{suite}");
    }
    let out = crossmod(&["--mode", "float", "fell-demo", "--N", "3", "--m", "-2", "--suite", "associator", "--triples", "20"], None);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(crossmod(&["fell-demo", "--m", "1,2"], None).status.code(), Some(2));
}

#[test]
fn json_out_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let target = dir.path().join("out.json");
    let out = crossmod(&["selftest", "--suite", "exterior", "--json-out", target.to_str().unwrap()], None);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(target).unwrap()).unwrap();
    assert_eq!(v["suites"][0]["suite"], json!("exterior"));
}
