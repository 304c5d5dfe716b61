use std::io::Write;
use std::process::{Command, Output, Stdio};

use serde_json::Value;

fn sbraid(args: &[&str], stdin: Option<&str>) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_sbraid"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary runs");
    if let Some(text) = stdin {
        child.stdin.take().unwrap().write_all(text.as_bytes()).unwrap();
    } else {
        drop(child.stdin.take());
    }
    child.wait_with_output().unwrap()
}

fn json_out(out: &Output) -> Value {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("json on stdout")
}

#[test]
fn split_moves_delta_left() {
    let v = json_out(&sbraid(&["--n", "3", "split", "s2 d1"], None));
    assert_eq!(v, serde_json::json!({"trace": [{"conj": "s2", "i": 1}], "braid": "s2"}));
}

#[test]
fn split_rewrites_tau_first() {
    let v = json_out(&sbraid(&["--n", "3", "split", "t1"], None));
    assert_eq!(v["trace"][0]["conj"], "s1^-1");
    assert_eq!(v["braid"], "s1^-1");
}

#[test]
fn nu_of_one_symbol_has_two_terms() {
    let v = json_out(&sbraid(&["--n", "3", "nu", "b[x1;2]@3"], None));
    let terms = v["terms"].as_array().unwrap();
    assert_eq!(terms.len(), 2);
    assert!(terms.contains(&serde_json::json!({"coeff": 1, "element": "b[x1;2]@3"})));
    assert!(terms.contains(&serde_json::json!({"coeff": -1, "element": "1"})));
}

#[test]
fn nu_then_decode_round_trips() {
    let nu = sbraid(&["--n", "3", "nu", "b[1;2]@3, b[x1;3]@3, b[1;2]@3"], None);
    let sum = String::from_utf8(nu.stdout).unwrap();
    let v = json_out(&sbraid(&["--n", "3", "decode"], Some(&sum)));
    assert_eq!(v["word"], serde_json::json!(["b[1;2]@3", "b[x1;3]@3", "b[1;2]@3"]));
}

#[test]
fn preimage_of_a_commuting_pair_is_one_class() {
    let nu = sbraid(&["--n", "4", "nu", "b[1;2]@4, b[1;2]@2"], None);
    let sum = String::from_utf8(nu.stdout).unwrap();
    let v = json_out(&sbraid(
        &["--n", "4", "preimage", "--lmax", "2", "--gens", "b[1;2]@4, b[1;2]@2, b[1;3]@4"],
        Some(&sum),
    ));
    assert_eq!(v["classes"].as_array().unwrap().len(), 1);
}

#[test]
fn eta_of_generators() {
    let out = sbraid(&["eta", "t1"], None);
    assert_eq!(
        String::from_utf8(out.stdout).unwrap().trim(),
        r#"{"terms":[{"coeff":1,"element":"s1"},{"coeff":-1,"element":"s1^-1"}]}"#
    );
    let out = sbraid(&["--format", "text", "eta", "d2"], None);
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "+1 s2 s2\n-1 \n");
}

#[test]
fn parse_reports_order_and_permutation() {
    let v = json_out(&sbraid(&["--n", "3", "parse", "s1 d2 a1"], None));
    assert_eq!(v["order"], 1);
    assert_eq!(v["length"], 3);
    // δ counts as a transposition, like σ and τ
    assert_eq!(v["permutation"], serde_json::json!([2, 3, 1]));
}

#[test]
fn errors_name_operation_and_token() {
    let out = sbraid(&["--n", "3", "split", "s1 q7"], None);
    assert_eq!(out.status.code(), Some(1));
    let err: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(err["error"]["operation"], "split");
    assert_eq!(err["error"]["code"], "braid_presentations::malformed_token");
    assert!(err["error"]["message"].as_str().unwrap().contains("q7"));
}

#[test]
fn invalid_session_is_a_usage_error() {
    assert_eq!(sbraid(&["--n", "1", "parse", "s1"], None).status.code(), Some(2));
    assert_eq!(sbraid(&["--genus", "0", "parse", "s1"], None).status.code(), Some(2));
}

#[test]
fn suite_is_deterministic_and_passes() {
    let a = sbraid(&["suite", "--seed", "7"], None);
    let b = sbraid(&["suite", "--seed", "7"], None);
    assert!(a.status.success(), "{}", String::from_utf8_lossy(&a.stdout));
    assert_eq!(a.stdout, b.stdout);
    let v: Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(v["seed"], 7);
    assert_eq!(v["passed"], true);
}
