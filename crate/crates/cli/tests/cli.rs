use std::process::{Command, Output};

use serde_json::Value;

fn steer(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_steer"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn write_cm(dir: &tempfile::TempDir, name: &str, matrix: &[[f64; 4]; 4]) -> String {
    let path = dir.path().join(name);
    let doc = serde_json::json!({
        "hbar": 1.0,
        "modes_alice": 1,
        "modes_bob": 1,
        "matrix": matrix,
    });
    std::fs::write(&path, doc.to_string()).unwrap();
    path.to_str().unwrap().to_owned()
}

#[test]
fn thresholds_prints_table() {
    let out = steer(&["thresholds", "--d", "2"]);
    assert!(out.status.success());
    let s = String::from_utf8(out.stdout).unwrap();
    for v in ["0.333333", "0.500000", "0.707107"] {
        assert!(s.contains(v), "{s}");
    }
}

#[test]
fn thresholds_rejects_d1() {
    let out = steer(&["thresholds", "--d", "1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(!out.stderr.is_empty());
}

#[test]
fn boundary_writes_csv() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("b.csv");
    let out = steer(&["boundary", "--d-max", "2", "--out", path.to_str().unwrap()]);
    assert!(out.status.success());
    assert_eq!(
        std::fs::read_to_string(&path).unwrap(),
        "d,eta_ent,eta_steer_werner,eta_steer_iso\n2,0.333333,0.500000,0.500000\n"
    );
}

#[test]
fn boundary_sweep_is_monotone_and_ordered() {
    let out = steer(&["boundary", "--d-max", "100"]);
    assert!(out.status.success());
    let s = String::from_utf8(out.stdout).unwrap();
    let rows: Vec<Vec<f64>> = s
        .lines()
        .skip(1)
        .map(|l| l.split(',').map(|x| x.parse().unwrap()).collect())
        .collect();
    assert_eq!(rows.len(), 99);
    for r in &rows {
        assert!(r[1] < r[2] && r[1] < r[3], "{r:?}");
    }
    for w in rows.windows(2) {
        assert!(w[1][2] > w[0][2]);
        if w[0][0] >= 2.0 {
            assert!(w[1][3] < w[0][3], "{w:?}");
        }
    }
}

#[test]
fn boundary_error_creates_no_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("b.csv");
    let out = steer(&["boundary", "--d-max", "1", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(!path.exists());
}

#[test]
fn boundary_unwritable_path_fails() {
    let out = steer(&["boundary", "--d-max", "3", "--out", "/nonexistent-dir/b.csv"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn boundary_is_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    assert!(steer(&["boundary", "--d-max", "20", "--out", a.to_str().unwrap()]).status.success());
    assert!(steer(&["boundary", "--d-max", "20", "--out", b.to_str().unwrap()]).status.success());
    assert_eq!(std::fs::read(a).unwrap(), std::fs::read(b).unwrap());
}

#[test]
fn gaussian_check_tmsv() {
    let dir = tempfile::tempdir().unwrap();
    let (c, s) = (2.0f64.cosh() / 2.0, 2.0f64.sinh() / 2.0);
    let m = [[c, 0.0, s, 0.0], [0.0, c, 0.0, -s], [s, 0.0, c, 0.0], [0.0, -s, 0.0, c]];
    let out = steer(&["gaussian-check", &write_cm(&dir, "tmsv.json", &m)]);
    assert!(out.status.success());
    let v = json(&out);
    assert_eq!(v["valid"], true);
    assert_eq!(v["steerable_by_alice"], true);
    assert_eq!(v["steerable_by_bob"], true);
    assert!((v["reid_product"].as_f64().unwrap() - 0.017_663).abs() < 1e-5);
}

#[test]
fn gaussian_check_vacuum() {
    let dir = tempfile::tempdir().unwrap();
    let m = [[0.5, 0.0, 0.0, 0.0], [0.0, 0.5, 0.0, 0.0], [0.0, 0.0, 0.5, 0.0], [0.0, 0.0, 0.0, 0.5]];
    let out = steer(&["gaussian-check", &write_cm(&dir, "vac.json", &m)]);
    assert!(out.status.success());
    let v = json(&out);
    assert_eq!(v["valid"], true);
    assert_eq!(v["steerable_by_alice"], false);
    assert_eq!(v["steerable_by_bob"], false);
    assert!((v["reid_product"].as_f64().unwrap() - 0.25).abs() < 1e-12);
    assert_eq!(v["margins"]["validity"]["boundary"], true);
}

#[test]
fn gaussian_check_invalid_cm_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    // Alice's mode at 0.4: min eigenvalue of V + iΣ is −0.1.
    let m = [[0.4, 0.0, 0.0, 0.0], [0.0, 0.4, 0.0, 0.0], [0.0, 0.0, 0.5, 0.0], [0.0, 0.0, 0.0, 0.5]];
    let out = steer(&["gaussian-check", &write_cm(&dir, "bad.json", &m)]);
    assert_eq!(out.status.code(), Some(3));
    let v = json(&out);
    assert_eq!(v["valid"], false);
    assert!((v["margins"]["validity"]["min_eigenvalue"].as_f64().unwrap() + 0.1).abs() < 1e-12);
}

#[test]
fn gaussian_check_parse_failure_is_distinct() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("junk.json");
    std::fs::write(&path, "{not json").unwrap();
    let out = steer(&["gaussian-check", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn simulate_rejects_bad_eta() {
    let out = steer(&["simulate", "--family", "werner", "--d", "2", "--eta", "1.5"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn simulate_verdicts() {
    let honest = steer(&[
        "simulate", "--family", "werner", "--d", "2", "--eta", "0.75", "--mode", "honest", "--runs", "1000000",
        "--seed", "7",
    ]);
    assert!(honest.status.success());
    assert_eq!(json(&honest)["verdict"], "Steering");

    let cheat = steer(&[
        "simulate", "--family", "werner", "--d", "2", "--eta", "0.5", "--mode", "cheat", "--runs", "1000000",
        "--seed", "7",
    ]);
    assert!(cheat.status.success());
    assert_eq!(json(&cheat)["verdict"], "NoSteeringDetected");
}

#[test]
fn simulate_is_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let run = |name: &str| {
        let path = dir.path().join(name);
        let out = steer(&[
            "simulate", "--family", "iso", "--d", "3", "--eta", "0.6", "--mode", "cheat", "--runs", "50000",
            "--seed", "11", "--out", path.to_str().unwrap(),
        ]);
        assert!(out.status.success());
        std::fs::read(path).unwrap()
    };
    assert_eq!(run("a.json"), run("b.json"));
}

#[test]
fn witness_reports_json() {
    let out = steer(&["witness", "--family", "isotropic", "--d", "3", "--eta", "0.9", "--bases", "5"]);
    assert!(out.status.success());
    let v = json(&out);
    assert_eq!(v["verdict"], "Steering");
}
