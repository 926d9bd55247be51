use serde_json::Value;
use std::path::PathBuf;
use std::process::{Command, Output};

fn asai(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_asai")).args(args).output().expect("binary runs")
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("JSON on stdout")
}

fn fixture(name: &str) -> String {
    format!("{}/../core/fixtures/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn temp_file(name: &str, contents: &str) -> PathBuf {
    let path = std::env::temp_dir().join(format!("asai-cli-{}-{name}", std::process::id()));
    std::fs::write(&path, contents).unwrap();
    path
}

#[test]
fn unramified_zeta_normalizes_to_one() {
    let out = asai(&["zeta", "--phi", "unramified", "--g", "identity", "--normalize"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout_json(&out)["normalized"], "1");
}

#[test]
fn delta1_inert_at_five() {
    let out = asai(&["delta1-verify", "--prime", "5", "--case", "inert"]);
    assert_eq!(out.status.code(), Some(0));
    let r = stdout_json(&out);
    assert_eq!(r["a_of_s_is_one"], true);
    assert_eq!(r["factor_matches"], true);
}

#[test]
fn satake_specializes() {
    let out = asai(&["satake", "--double-coset", "1", "--satake", "2", "1/2"]);
    assert_eq!(stdout_json(&out)["value"], "15/2");
}

#[test]
fn hilbert_check_on_fixture() {
    let (form, inputs) = (fixture("synthetic_q5_w2.json"), fixture("inputs_q5_ell3.json"));
    let out = asai(&["hilbert-check", "--form", &form, "--inputs", &inputs, "--ell", "3", "--s0", "7,13"]);
    assert_eq!(out.status.code(), Some(0));
    let r = stdout_json(&out);
    assert_eq!(r["member"], true);
    assert_eq!(r["required"], 2);
}

#[test]
fn s0_prime_not_one_mod_ell_is_an_input_error() {
    let (form, inputs) = (fixture("synthetic_q5_w2.json"), fixture("inputs_q5_ell3.json"));
    let out = asai(&["hilbert-check", "--form", &form, "--inputs", &inputs, "--ell", "5", "--s0", "7,13"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(out.stdout.is_empty());
}

#[test]
fn bad_prime_is_an_input_error() {
    assert_eq!(asai(&["euler-poly", "--prime", "9", "--kind", "asai-inert"]).status.code(), Some(2));
    assert_eq!(asai(&["satake", "--nonresidue", "4", "--double-coset", "1"]).status.code(), Some(2));
}

#[test]
fn deep_translate_overflows_the_precision_cap() {
    let g = temp_file("g.json", r#"{"inert": [["1", ["0", "1/243"]], ["0", "1"]]}"#);
    let out = asai(&["zeta", "--phi", "unramified", "--g", g.to_str().unwrap(), "--precision-cap", "2"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn output_is_independent_of_workers() {
    let one = asai(&["gstar-factor", "--delta1", "inert", "--workers", "1"]);
    let four = asai(&["gstar-factor", "--delta1", "inert", "--workers", "4"]);
    assert_eq!(one.status.code(), Some(0));
    assert_eq!(one.stdout, four.stdout);
}

#[test]
fn out_flag_writes_the_report() {
    let path = std::env::temp_dir().join(format!("asai-cli-{}-euler.json", std::process::id()));
    let out = asai(&["euler-poly", "--kind", "standard-f", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["coefficients"].as_array().unwrap().len(), 3);
}
