use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn prepro(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_prepro")).args(args).output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("bad json ({e}): {}", String::from_utf8_lossy(&o.stdout)))
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

const A2_X: &str = r#"{ "quiver": "A2", "field": "Q", "dim": {"1": 1, "2": 1}, "action": {"a1": [["1"]]} }"#;
const A2_S1: &str = r#"{ "quiver": "A2", "field": "Q", "dim": {"1": 1}, "action": {} }"#;
const A2_S2: &str = r#"{ "quiver": "A2", "field": "Q", "dim": {"2": 1}, "action": {} }"#;

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn validate_exit_codes() {
    let dir = TempDir::new().unwrap();
    let good = write(dir.path(), "x.json", A2_X);
    assert_eq!(code(&prepro(&["validate", s(&good)])), 0);
    assert_eq!(code(&prepro(&["validate", "d4:T"])), 0);

    let shape = write(dir.path(), "shape.json", r#"{ "quiver": "A2", "field": "Q", "dim": {"1": 1, "2": 1}, "action": {"a1": [["1", "2"]]} }"#);
    let o = prepro(&["validate", s(&shape)]);
    assert_eq!(code(&o), 2, "{}", stderr(&o));

    // x(a1*) x(a1) = 1 at vertex 1 violates the relation
    let bad = write(
        dir.path(),
        "bad.json",
        r#"{ "quiver": "A2", "field": "Q", "dim": {"1": 1, "2": 1}, "action": {"a1": [["1"]], "a1*": [["1"]]} }"#,
    );
    let o = prepro(&["--format", "json", "validate", s(&bad)]);
    assert_eq!(code(&o), 1);
    let v = json(&o);
    assert_eq!(v["valid"], false);
    assert_eq!(v["relation_failures"][0]["vertex"], "1");

    assert_eq!(code(&prepro(&["validate", "/nonexistent/module.json"])), 2);
    assert_eq!(code(&prepro(&["validate", "d4:Q"])), 2);
}

#[test]
fn ext_dimensions() {
    let o = prepro(&["--format", "json", "ext", "d4:T", "d4:S4"]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    assert_eq!((v["ext1"].as_u64(), v["ext1_reverse"].as_u64()), (Some(2), Some(2)));

    let dir = TempDir::new().unwrap();
    let s1 = write(dir.path(), "s1.json", A2_S1);
    let v = json(&prepro(&["--format", "json", "ext", s(&s1), s(&s1)]));
    assert_eq!(v["ext1"], 0);

    let k1 = write(dir.path(), "k1.json", r#"{ "quiver": "Kronecker", "field": "Q", "dim": {"1": 1}, "action": {} }"#);
    let k2 = write(dir.path(), "k2.json", r#"{ "quiver": "Kronecker", "field": "Q", "dim": {"2": 1}, "action": {} }"#);
    let o = prepro(&["--format", "json", "ext", s(&k1), s(&k2)]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    assert_eq!(v["ext1"], 2);
    assert_eq!(v["checks"]["euler_form"], true);
}

#[test]
fn euler_and_fingerprint() {
    let dir = TempDir::new().unwrap();
    let x = write(dir.path(), "x.json", A2_X);
    let v = json(&prepro(&["--format", "json", "euler", s(&x), "--word", "1,2"]));
    assert_eq!(v["euler"], 1);
    let v = json(&prepro(&["--format", "json", "euler", s(&x), "--word", "2,1"]));
    assert_eq!(v["euler"], 0);

    let zero = write(dir.path(), "zero.json", r#"{ "quiver": "A2", "field": "Q", "dim": {}, "action": {} }"#);
    let v = json(&prepro(&["--format", "json", "euler", s(&zero), "--word", ""]));
    assert_eq!(v["euler"], 1);

    let o = prepro(&["euler", s(&x), "--word", "1"]);
    assert_eq!(code(&o), 2);

    let v = json(&prepro(&["--format", "json", "fingerprint", s(&x)]));
    assert_eq!(v["euler"], serde_json::json!([1, 0]));
    assert_eq!(v["words"], serde_json::json!(["(1,2)", "(2,1)"]));
}

#[test]
fn fingerprint_output_reverifies() {
    let o = prepro(&["--format", "json", "fingerprint", "d4:M(1)"]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    let euler = v["euler"].as_array().unwrap();
    assert_eq!(euler.len(), 60);
    // refit every profile from the recorded samples alone
    for (p, e) in v["profiles"].as_array().unwrap().iter().zip(euler) {
        let samples: Vec<(u64, u64)> = p["samples"]
            .as_array()
            .unwrap()
            .iter()
            .map(|s| (s[0].as_u64().unwrap(), s[1].as_u64().unwrap()))
            .collect();
        let bound = p["degree_bound"].as_u64().unwrap() as usize;
        let refit = prepro_core::flag_euler::fit_profile(p["word"].as_str().unwrap(), &samples, bound).unwrap();
        assert_eq!(refit.euler, e.as_i64().unwrap());
        let parsed: prepro_core::flag_euler::CountProfile = serde_json::from_value(p.clone()).unwrap();
        assert_eq!(parsed, refit);
    }
}

#[test]
fn verify_a2_pair() {
    let dir = TempDir::new().unwrap();
    let s1 = write(dir.path(), "S1.json", A2_S1);
    let s2 = write(dir.path(), "S2.json", A2_S2);
    let o = prepro(&["--format", "json", "verify", "--thm", "1.2", s(&s1), s(&s2)]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let v = json(&o);
    assert_eq!(v["passed"], true);
    assert_eq!(v["ledger"][0]["lhs"], 1);

    // the same pair through the stratified formula, with the middle terms as anchors
    let x = write(dir.path(), "x.json", A2_X);
    let y = write(dir.path(), "y.json", r#"{ "quiver": "A2", "field": "Q", "dim": {"1": 1, "2": 1}, "action": {"a1*": [["1"]]} }"#);
    let o = prepro(&["--format", "json", "verify", "--thm", "1.1", s(&s1), s(&s2), "--fwd", s(&x), "--bwd", s(&y)]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let v = json(&o);
    assert_eq!(v["tables"][0]["strata"][0]["chi_proj"], 1);

    // wrong anchor: the stratum of x has no representative
    let o = prepro(&["verify", "--thm", "1.1", s(&s1), s(&s2), "--fwd", s(&y), "--bwd", s(&y)]);
    assert_eq!(code(&o), 3, "{}", stderr(&o));

    let o = prepro(&["verify", "--thm", "1.1", s(&s1), s(&s1)]);
    assert_eq!(code(&o), 1);
    assert!(stderr(&o).contains("is meaningless if"));

    let d = write(dir.path(), "d.json", r#"{ "source": "S1", "target": "S2", "maps": {} }"#);
    let o = prepro(&["verify", "--thm", "1.2", s(&s1), s(&s2), "--d", s(&d)]);
    assert_eq!(code(&o), 1);
    assert!(stderr(&o).contains("split class"));
}

#[test]
fn verify_d4_with_anchors() {
    let o = prepro(&[
        "verify", "--thm", "1.1", "d4:T", "d4:S4", "--fwd", "d4:R", "d4:A", "d4:B", "d4:C", "--bwd", "d4:M(1)", "d4:M(0)",
        "d4:M(-1)", "d4:M(inf)",
    ]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let out = String::from_utf8_lossy(&o.stdout);
    assert!(out.contains("result      PASS"));
}

#[test]
fn example_d4() {
    let o = prepro(&["example-d4"]);
    assert_eq!(code(&o), 0);
    let out = String::from_utf8_lossy(&o.stdout);
    assert!(out.contains("δ_T·δ_S4 = δ_M(1) + δ_R + δ_F + δ_G + δ_H"), "{out}");

    let o = prepro(&["--format", "json", "example-d4", "--lambda", "2"]);
    assert_eq!(code(&o), 0);
    assert_eq!(json(&o)["lambda_is_generic"], true);

    for bad in ["0", "-1"] {
        let o = prepro(&["example-d4", "--lambda", bad]);
        assert_eq!(code(&o), 2);
        assert!(stderr(&o).contains("excluded"));
    }
}

fn strip_timing(v: &mut Value) {
    match v {
        Value::Object(m) => {
            m.remove("elapsed_ms");
            m.values_mut().for_each(strip_timing);
        }
        Value::Array(a) => a.iter_mut().for_each(strip_timing),
        _ => {}
    }
}

#[test]
fn output_is_deterministic_across_job_counts() {
    let mut a = json(&prepro(&["--format", "json", "--jobs", "1", "example-d4"]));
    let mut b = json(&prepro(&["--format", "json", "--jobs", "4", "example-d4"]));
    strip_timing(&mut a);
    strip_timing(&mut b);
    assert_eq!(a, b);
    let report: prepro_core::mult_verify::VerificationReport = serde_json::from_value(a["verification"].clone()).unwrap();
    assert!(report.passed);
}

#[test]
fn flags() {
    assert_eq!(code(&prepro(&["--jobs", "0", "ext", "d4:T", "d4:S4"])), 2);
    assert_eq!(code(&prepro(&["--primes", "3,4,5", "euler", "d4:T", "--word", "1,2,3,4"])), 2);
    let v = json(&prepro(&["--format", "json", "--primes", "11,13,17", "euler", "d4:T", "--word", "1,2,3,4"]));
    assert_eq!(v["samples"][0][0], 11);
    // too few primes for the degree bound
    assert_eq!(code(&prepro(&["--primes", "11,13", "euler", "d4:T", "--word", "1,2,3,4"])), 2);
    assert_eq!(code(&prepro(&["verify", "--thm", "2.0", "d4:T", "d4:S4"])), 2);
    assert_eq!(code(&prepro(&["frobnicate"])), 2);
}

#[test]
fn non_polynomial_count_exits_3() {
    // the pencil t ↦ b* - t a* has eigenvalues ±√2: two eigenlines when 2 is a
    // square mod p, none otherwise
    let dir = TempDir::new().unwrap();
    let m = write(
        dir.path(),
        "sqrt2.json",
        r#"{ "quiver": "Kronecker", "field": "Q", "dim": {"1": 2, "2": 2},
             "action": {"a*": [["1", "0"], ["0", "1"]], "b*": [["0", "1"], ["2", "0"]]} }"#,
    );
    assert_eq!(code(&prepro(&["validate", s(&m)])), 0);
    let o = prepro(&["fingerprint", s(&m)]);
    assert_eq!(code(&o), 3, "{}", stderr(&o));
    assert!(stderr(&o).contains("not polynomial"));
}
