use serde_json::Value;

use matlen_wasm::{census, family, quantum_plane};

fn parse(s: String) -> Value {
    serde_json::from_str(&s).unwrap()
}

#[test]
fn quantum_plane_summary() {
    let v = parse(quantum_plane(4, 0));
    assert_eq!(v["p"], 5);
    assert_eq!(v["summary"]["c"], 6);
    assert_eq!(v["summary"]["r_star"], 16);
    assert_eq!(v["summary"]["ordered_rewriting"], "holds");
    let v = parse(quantum_plane(2, 5));
    assert_eq!(v["q"], 4);
    assert_eq!(v["summary"]["ranks"], serde_json::json!([1, 3, 4, 4]));
}

#[test]
fn errors_are_json() {
    assert!(parse(quantum_plane(1, 0))["error"].is_string());
    assert!(parse(quantum_plane(3, 11))["error"].is_string());
    assert!(parse(family("nope", 3, 2, 0, 5))["error"].is_string());
    assert!(parse(family("random", 3, 2, 0, 4))["error"].is_string());
    assert!(parse(census(9, 9))["error"].as_str().unwrap().contains("cap"));
}

#[test]
fn families() {
    let v = parse(family("sl2", 4, 0, 0, 0));
    assert_eq!(v["c"], 3);
    assert_eq!(v["commutator_closed"], true);
    assert_eq!(v["field"], "Q");
    let a = family("random", 3, 2, 7, 5);
    assert_eq!(a, family("random", 3, 2, 7, 5));
    assert_eq!(parse(a)["consistent"], true);
}

#[test]
fn census_small_case() {
    let v = parse(census(3, 3));
    assert_eq!(v["words_checked"], 3);
    assert_eq!(v["violations"], serde_json::json!([]));
}
