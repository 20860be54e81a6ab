use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> (Value, i32, Vec<u8>) {
    let Output { status, stdout, .. } = Command::new(env!("CARGO_BIN_EXE_singord")).args(args).output().expect("run singord");
    let v = serde_json::from_slice(&stdout).unwrap_or(Value::Null);
    (v, status.code().unwrap_or(-1), stdout)
}

#[test]
fn cusp_invariants() {
    let (v, code, _) = run(&["invariants", "y^2-x^3"]);
    assert_eq!(code, 0);
    assert_eq!((v["mu"].as_u64(), v["delta"].as_u64(), v["branches"].as_u64()), (Some(2), Some(1), Some(1)));
    assert_eq!(v["tau"], 2);
    assert_eq!(v["type"], "A2");
}

#[test]
fn crit0_scheme_and_file_round_trip() {
    let (v, code, _) = run(&["scheme", "y^2-x^3", "--kind", "crit0"]);
    assert_eq!(code, 0);
    assert_eq!(v["degree"], 5);
    let dir = std::env::temp_dir().join(format!("singord-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("cusp.json");
    std::fs::write(&path, serde_json::to_string(&v["scheme"]).unwrap()).unwrap();
    let path = path.to_str().unwrap();
    let (c, code, _) = run(&["castelnuovo", path]);
    assert_eq!(code, 0);
    assert_eq!(c["castelnuovo"], serde_json::json!([1, 2, 2, 0]));
    let (h, _, _) = run(&["cohomology", path, "--degree", "1"]);
    assert_eq!((h["h0"].as_u64(), h["h1"].as_u64()), (Some(0), Some(2)));
    let (o, code, _) = run(&["orders", path, "--trials", "3"]);
    assert_eq!((code, o["ord0"].as_u64(), o["ord1"].as_u64()), (0, Some(2), Some(2)));
    let (b, code, _) = run(&["bounds", path]);
    assert_eq!(code, 0);
    assert!(b["bounds"].as_array().unwrap().iter().all(|r| r["verdict"] == "PASS"));
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn realize_a7() {
    let (v, code, bytes) = run(&["realize", "--target", "A7", "--flavor", "crit", "--seed", "1"]);
    assert_eq!(code, 0);
    assert!(v["degree"].as_u64().unwrap() <= 5);
    assert_eq!(v["verified"], true);
    let (_, _, again) = run(&["realize", "--target", "A7", "--flavor", "crit", "--seed", "1"]);
    assert_eq!(bytes, again);
}

#[test]
fn plane_curve_with_two_targets() {
    let (v, code, _) = run(&["realize", "--target", "A2,A1", "--flavor", "top"]);
    assert_eq!(code, 0);
    assert_eq!(v["checks"]["irreducible"], true);
    assert_eq!(v["checks"]["extra_sing_clean"], true);
}

#[test]
fn keys_are_sorted() {
    let (_, _, bytes) = run(&["bounds", "x^4+y^4"]);
    let text = String::from_utf8(bytes).unwrap();
    let v: Value = serde_json::from_str(&text).unwrap();
    let keys: Vec<&String> = v.as_object().unwrap().keys().collect();
    let mut sorted = keys.clone();
    sorted.sort();
    assert_eq!(keys, sorted);
    assert!(!text.contains('.'), "no floating point in output");
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["invariants", "x^2 +"]).1, 2);
    assert_eq!(run(&["invariants", "x^2"]).1, 2);
    assert_eq!(run(&["scheme", "y^2-x^3", "--kind", "nope"]).1, 2);
    assert_eq!(run(&["ak-family", "--m", "1"]).1, 2);
    assert_eq!(run(&["nosuch"]).1, 2);
    assert_eq!(run(&["ak-family", "--m", "2"]).1, 0);
}
