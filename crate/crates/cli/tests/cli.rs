use std::fs;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bianchi")).args(args).output().expect("spawn bianchi")
}

fn json(args: &[&str]) -> (Value, i32) {
    let out = run(args);
    let v = serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!("{args:?}: {e}\n{}", String::from_utf8_lossy(&out.stdout))
    });
    (v, out.status.code().expect("exit code"))
}

#[test]
fn cusps_of_level_three() {
    let (v, code) = json(&["cusps", "--d", "1", "--N", "3"]);
    assert_eq!(code, 0);
    assert_eq!(v["count"], 8);
    assert_eq!(v["classes"].as_array().unwrap().len(), 8);
    assert_eq!(v["cross_check"]["agrees"], true);
    assert_eq!(v["method"], "enumeration");
    assert!(!v["warnings"].as_array().unwrap().is_empty(), "N = 3 is an orbifold level");
}

#[test]
fn exact_traces_and_lefschetz_numbers() {
    let (v, code) = json(&["trace-h1", "--N", "7"]);
    assert_eq!(code, 0);
    assert_eq!(v["value"], "-2");
    let (v, _) = json(&["lefschetz", "--d", "1", "--N", "5", "--k", "0"]);
    assert_eq!(v["value"], "-4");
    assert_eq!(v["method"], "closed-form");
    let (v, _) = json(&["index-oracle", "--N", "5"]);
    assert_eq!(v["cross_check"]["agrees"], true);
}

#[test]
fn output_is_deterministic() {
    for args in [&["cusps", "--N", "5"][..], &["cocycle-eval", "--d", "2"], &["sigma-matrix", "--N", "3"]] {
        let a = run(args);
        let b = run(args);
        assert!(a.status.success());
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}

#[test]
fn csv_output() {
    let out = run(&["dims", "--N", "5", "--format", "csv"]);
    assert!(out.status.success());
    let s = String::from_utf8(out.stdout).unwrap();
    let mut lines = s.lines();
    assert_eq!(lines.next(), Some("key,value"));
    assert!(s.lines().any(|l| l == "inputs.N,5"));
    assert!(s.lines().any(|l| l.starts_with("value.h1,")));
}

#[test]
fn invalid_input_exits_with_two() {
    for args in [
        &["cusps", "--d", "4", "--N", "3"][..],
        &["cusps", "--d", "0", "--N", "3"],
        &["dims"],
        &["cusps", "--N", "1"],
        &["dims", "--N", "3", "--eps", "2"],
        &["cycle", "--N", "2", "--t-floor", "0.5"],
        &["coboundary-check", "--matrix", "1,1,1,1"],
        &["coboundary-check", "--matrix", "1,x,0,1"],
        &["cocycle-eval", "--t", "-1"],
        &["cycle", "--d", "2", "--N", "2"],
    ] {
        let (v, code) = json(args);
        assert_eq!(code, 2, "{args:?}");
        assert_eq!(v["error"]["kind"], "validation", "{args:?}");
    }
    assert_eq!(run(&["no-such-command"]).status.code(), Some(2));
    assert_eq!(run(&["cusps", "--N", "three"]).status.code(), Some(2));
}

#[test]
fn tolerance_failure_exits_with_three() {
    let (v, code) = json(&["coboundary-check", "--d", "2", "--matrix", "0,-1,1,0", "--tol", "1e-300"]);
    assert_eq!(code, 3);
    assert_eq!(v["error"]["kind"], "tolerance");
    let (_, code) = json(&["coboundary-check", "--d", "2", "--matrix", "0,-1,1,0"]);
    assert_eq!(code, 0);
}

#[test]
fn cache_is_reused_and_bad_blobs_are_recomputed() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    let plain = run(&["cusps", "--N", "5"]).stdout;
    let first = run(&["cusps", "--N", "5", "--cache-dir", d]);
    assert!(first.status.success());
    let blobs: Vec<_> = fs::read_dir(dir.path()).unwrap().map(|e| e.unwrap().path()).collect();
    assert_eq!(blobs.len(), 1);
    let second = run(&["cusps", "--N", "5", "--cache-dir", d]);
    assert!(second.stderr.is_empty(), "{}", String::from_utf8_lossy(&second.stderr));

    // different key and version bytes: rejected, recomputed, rewritten
    let mut blob = fs::read(&blobs[0]).unwrap();
    blob[14] ^= 1;
    fs::write(&blobs[0], &blob).unwrap();
    let third = run(&["cusps", "--N", "5", "--cache-dir", d]);
    assert!(String::from_utf8_lossy(&third.stderr).contains("code version"));
    fs::write(&blobs[0], b"garbage").unwrap();
    let fourth = run(&["cusps", "--N", "5", "--cache-dir", d]);
    assert!(String::from_utf8_lossy(&fourth.stderr).contains("recomputing"));

    // plain, cached and recomputed outputs differ only in nothing
    let strip = |b: &[u8]| {
        let mut v: Value = serde_json::from_slice(b).unwrap();
        v["inputs"].as_object_mut().unwrap().remove("cache_dir");
        v
    };
    for o in [&first, &second, &third, &fourth] {
        assert_eq!(strip(&o.stdout), strip(&plain));
    }

    let g = run(&["cocycle-eval", "--d", "2", "--cache-dir", d]);
    let g2 = run(&["cocycle-eval", "--d", "2", "--cache-dir", d]);
    assert_eq!(g.stdout, g2.stdout);
    assert_eq!(g.stdout, run(&["cocycle-eval", "--d", "2"]).stdout);
}

#[test]
fn cycle_coefficients_over_gaussian_integers() {
    let (v, code) = json(&["cycle", "--N", "2"]);
    assert_eq!(code, 0);
    let values = v["values"].as_array().unwrap();
    assert_eq!(values.len(), 12);
    for e in values {
        assert!(e["value"]["re"].as_f64().unwrap().abs() < 1e-8);
        assert!(e["value"]["im"].as_f64().unwrap().abs() < 1e-8);
    }
}
