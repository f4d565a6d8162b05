//! End-to-end runs of the `boselab` binary.

use std::process::{Command, Output};

use serde_json::Value;

fn boselab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_boselab"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json_of(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn strip_timing(v: &mut Value) {
    match v {
        Value::Object(map) => {
            map.remove("timing_ms");
            map.values_mut().for_each(strip_timing);
        }
        Value::Array(items) => items.iter_mut().for_each(strip_timing),
        _ => {}
    }
}

#[test]
fn identical_arguments_give_identical_json() {
    let args = [
        "subplane",
        "verify",
        "--q",
        "3",
        "--modulus",
        "2,1,0",
        "--seed",
        "7",
        "--samples",
        "3",
    ];
    let (mut a, mut b) = (json_of(&boselab(&args)), json_of(&boselab(&args)));
    strip_timing(&mut a);
    strip_timing(&mut b);
    assert_eq!(
        serde_json::to_string(&a).unwrap(),
        serde_json::to_string(&b).unwrap()
    );
    assert_eq!(a["params"]["modulus"], "2,1,0");
}

#[test]
fn exit_code_follows_the_verdict() {
    let ok = boselab(&[
        "subline",
        "verify",
        "--q",
        "2",
        "--seed",
        "1",
        "--samples",
        "5",
    ]);
    assert!(ok.status.success());
    assert_eq!(json_of(&ok)["pass"], true);
    let failing = boselab(&[
        "scroll",
        "verify",
        "--q",
        "2",
        "--seed",
        "1",
        "--samples",
        "5",
    ]);
    assert_eq!(failing.status.code(), Some(1));
    assert_eq!(json_of(&failing)["pass"], false);
}

#[test]
fn unknown_suite_is_a_usage_error() {
    let out = boselab(&["nosuch", "verify", "--q", "2"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("unknown suite"));
}

#[test]
fn spread_report_is_embedded() {
    let out = boselab(&["spread", "verify", "--q", "2", "--modulus", "1,1,0"]);
    assert!(out.status.success());
    let v = json_of(&out);
    assert_eq!(v["spread"]["plane_count"], 73);
    assert_eq!(v["spread"]["points_covered"], 511);
    assert_eq!(v["spread"]["regular"], true);
    assert_eq!(v["spread"]["multiplicity_histogram"]["1"], 511);
}

#[test]
fn conic_form_is_checked() {
    let out = boselab(&[
        "conic",
        "verify",
        "--q",
        "2",
        "--form",
        "x*z:1, y^2:-1",
        "--seed",
        "3",
        "--samples",
        "2",
    ]);
    assert!(out.status.success());
    let v = json_of(&out);
    let given = v["checks"]
        .as_array()
        .unwrap()
        .iter()
        .find(|c| c["name"] == "given_conic")
        .expect("given_conic check");
    assert_eq!(given["counters"]["points"], 63);
    let bad = boselab(&["conic", "verify", "--q", "2", "--form", "x^2:1"]);
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn json_flag_writes_a_file() {
    let path = std::env::temp_dir().join(format!("boselab-cli-{}.json", std::process::id()));
    let out = boselab(&[
        "fields",
        "verify",
        "--q",
        "4",
        "--json",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    std::fs::remove_file(&path).ok();
    assert_eq!(v["suite"], "fields");
    assert_eq!(v["params"]["p"], 2);
    assert_eq!(v["params"]["e"], 2);
}

#[test]
fn order_dim_reports_histograms() {
    let out = boselab(&[
        "scroll",
        "order-dim",
        "--q",
        "3",
        "--seed",
        "1",
        "--samples",
        "50",
    ]);
    assert!(out.status.success());
    let v = json_of(&out);
    assert_eq!(v["scroll"]["draws"], 50);
    assert_eq!(v["plane_control"]["max_hits"], 1);
    assert!(v["scroll"]["max_hits"].as_u64().unwrap() <= 6);
}
