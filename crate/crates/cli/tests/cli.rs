use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn poslab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_poslab"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("one JSON object")
}

fn scratch(name: &str, contents: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("poslab-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, contents).unwrap();
    path
}

#[test]
fn certify_odd_on_star_file() {
    let path = scratch("star.txt", "2 4 3\n0 1\n0 2\n0 3\n");
    let v = json(&poslab(&["certify-odd", "--input", path.to_str().unwrap()]));
    assert_eq!(v["kind"], "certify-odd");
    let density = v["density"].as_str().unwrap();
    assert!(density.starts_with('-') && density.contains('/'));
    assert!(v["alpha"].as_str().unwrap().contains('/'));
    assert_eq!(v["polynomial"], serde_json::json!(["1/1", "-4/1", "3/1", "-1/1"]));
}

#[test]
fn copy_prob_on_tight_six_cycle() {
    let v = json(&poslab(&["copy-prob", "--graph", "tight:3:6"]));
    assert_eq!(v["probability"], "1/2048");
    assert_eq!(v["numerator"], "1");
    assert_eq!(v["denominator"], "2048");
}

#[test]
fn exit_codes() {
    assert_eq!(poslab(&["density", "--graph", "K:3", "--target", "tight:3:6"]).status.code(), Some(2));
    assert_eq!(poslab(&["mc-density", "--graph", "K:2", "--n", "5"]).status.code(), Some(2));
    assert_eq!(poslab(&["max-code", "--graph", "K:3", "--n", "5", "--budget", "100"]).status.code(), Some(3));
    assert_eq!(poslab(&["copy-prob", "--input", "/nonexistent/poslab.txt"]).status.code(), Some(4));
    assert_eq!(poslab(&["copy-prob", "--graph", "nonsense:1"]).status.code(), Some(4));
    let bad = scratch("bad.txt", "2 3 1\n0 7\n");
    assert_eq!(poslab(&["indpoly", "--input", bad.to_str().unwrap()]).status.code(), Some(4));
}

#[test]
fn same_seed_gives_identical_bytes() {
    for args in [
        &["mc-density", "--graph", "tight:3:6", "--n", "40", "--samples", "30000", "--seed", "11"][..],
        &["minimize", "--graph", "star:3", "--seed", "5", "--restarts", "2", "--iterations", "40"][..],
        &["mc-density", "--graph", "edge:3", "--n", "30", "--samples", "5000", "--seed", "2", "--format", "csv"][..],
    ] {
        let (a, b) = (poslab(args), poslab(args));
        assert!(a.status.success());
        assert_eq!(a.stdout, b.stdout);
    }
}

#[test]
fn csv_monte_carlo_row() {
    let out = poslab(&["mc-density", "--graph", "edge:3", "--n", "30", "--samples", "5000", "--seed", "2", "--format", "csv"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "H-name,r,n,samples,estimate,stderr,seed");
    let row: Vec<&str> = lines[1].split(',').collect();
    assert_eq!((row[0], row[1], row[2], row[3], row[6]), ("edge:3", "3", "30", "5000", "2"));
}

#[test]
fn certificates_replay_and_tampering_is_caught() {
    let runs: [&[&str]; 6] = [
        &["certify-odd", "--graph", "K:2"],
        &["levi", "--graph", "tight:3:6"],
        &["qvanish", "--graph", "pendant-c4", "--family", "[[1]]"],
        &["code-bound", "--graph", "K:3", "--n", "5"],
        &["max-code", "--graph", "K:3", "--n", "3"],
        &["stable-involution", "--graph", "C:4"],
    ];
    let mut lines = String::new();
    for args in runs {
        let out = poslab(args);
        assert!(out.status.success(), "{args:?}");
        lines.push_str(&String::from_utf8(out.stdout).unwrap());
    }
    let good = scratch("good.jsonl", &lines);
    let out = poslab(&["--verify", good.to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stdout));
    assert_eq!(String::from_utf8(out.stdout).unwrap().matches("\"valid\":true").count(), 6);

    let mut cert = json(&poslab(&["certify-odd", "--graph", "K:2"]));
    cert["density"] = "-1/7".into();
    let bad = scratch("tampered.jsonl", &cert.to_string());
    let out = poslab(&["--verify", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8(out.stdout).unwrap().contains("\"valid\":false"));
}
