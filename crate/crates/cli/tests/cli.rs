use std::collections::BTreeSet;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn tomoctx(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tomoctx"))
        .args(args)
        .env_remove("TOMOCTX_SEED")
        .output()
        .expect("spawn tomoctx")
}

fn stdout_of(args: &[&str]) -> String {
    let out = tomoctx(args);
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn json_of(args: &[&str]) -> Value {
    serde_json::from_str(&stdout_of(args)).unwrap()
}

fn rows(csv: &str) -> Vec<Vec<String>> {
    csv.lines()
        .skip(1)
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect()
}

fn num(s: &str) -> f64 {
    s.parse().unwrap()
}

fn write_operator(path: &Path, dim: usize, diag: f64) {
    let entries: Vec<Vec<[f64; 2]>> = (0..dim)
        .map(|r| {
            (0..dim)
                .map(|c| if r == c { [diag, 0.0] } else { [0.0, 0.0] })
                .collect()
        })
        .collect();
    let body = serde_json::json!({ "dim": dim, "entries": entries });
    std::fs::write(path, body.to_string()).unwrap();
}

#[test]
fn maximally_mixed_operator_has_flat_tomogram() {
    let dir = tempfile::tempdir().unwrap();
    let op = dir.path().join("mixed.json");
    write_operator(&op, 3, 1.0 / 3.0);
    let out = dir.path().join("tom.csv");
    stdout_of(&[
        "tomogram",
        "--operator",
        op.to_str().unwrap(),
        "--output",
        out.to_str().unwrap(),
    ]);
    let text = std::fs::read_to_string(&out).unwrap();
    assert!(text.starts_with("k,m,alpha,beta,omega\n"));
    let rows = rows(&text);
    assert_eq!(rows.len(), 64 * 32 * 3);
    for r in &rows {
        assert_eq!(r[0], "op");
        assert!((num(&r[4]) - 1.0 / 3.0).abs() < 1e-14);
    }
}

#[test]
fn identity_rotation_traces_the_boundary_curve() {
    let text = stdout_of(&[
        "tomogram",
        "--scenario",
        "kcbs",
        "--simplex",
        "--grid-alpha",
        "4",
        "--grid-beta",
        "9",
    ]);
    let mut seen = 0;
    for (i, r) in rows(&text).iter().filter(|r| r[0] == "3").enumerate() {
        let beta = std::f64::consts::PI * (i % 9) as f64 / 8.0;
        let (c, s) = ((beta / 2.0).cos(), (beta / 2.0).sin());
        assert!((num(&r[1]) - c.powi(4)).abs() < 1e-14);
        assert!((num(&r[2]) - beta.sin().powi(2) / 2.0).abs() < 1e-14);
        assert!((num(&r[3]) - s.powi(4)).abs() < 1e-14);
        seen += 1;
    }
    assert_eq!(seen, 36);
}

#[test]
fn mirrored_projectors_cover_the_same_simplex_region() {
    let text = stdout_of(&["tomogram", "--scenario", "kcbs", "--simplex"]);
    let points = |k: &str| -> BTreeSet<[i64; 3]> {
        rows(&text)
            .iter()
            .filter(|r| r[0] == k)
            .map(|r| [1, 2, 3].map(|c| (num(&r[c]) * 1e9).round() as i64))
            .collect()
    };
    let (two, four) = (points("2"), points("4"));
    assert!(!two.is_empty());
    assert_eq!(two, four);
}

#[test]
fn inequality_reports() {
    let e = json_of(&["inequality", "entropic"]);
    assert_eq!(e["violated"], Value::Bool(true));
    assert!((e["value"].as_f64().unwrap() - 0.091_090_725_660_379_07).abs() < 1e-15);
    assert_eq!(e["direction"], "<=");

    let pm = json_of(&["inequality", "peres-mermin"]);
    assert_eq!(pm["value"].as_f64().unwrap(), 6.0);
    assert_eq!(pm["bound"].as_f64().unwrap(), 4.0);

    let b = json_of(&["inequality", "ncycle", "--bounds-only", "--n", "5"]);
    assert_eq!(b["classical"].as_f64().unwrap(), -3.0);
    assert!((b["quantum"].as_f64().unwrap() - (5.0 - 4.0 * 5f64.sqrt())).abs() < 1e-14);

    let t = json_of(&["inequality", "entropic", "--route", "tomographic"]);
    assert!((t["value"].as_f64().unwrap() - e["value"].as_f64().unwrap()).abs() < 1e-9);
}

#[test]
fn even_cycle_without_bounds_only_is_rejected() {
    let out = tomoctx(&["inequality", "ncycle", "--n", "6"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).starts_with("error:"));
}

#[test]
fn exit_codes() {
    assert_eq!(tomoctx(&["inequality", "no-such-family"]).status.code(), Some(2));
    assert_eq!(tomoctx(&[]).status.code(), Some(2));
    assert_eq!(
        tomoctx(&["tomogram", "--scenario", "peres-mermin"]).status.code(),
        Some(1)
    );
    let coarse = tomoctx(&["verify", "--grid", "4", "4", "4"]);
    assert_eq!(coarse.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&coarse.stderr).contains("reconstruction-spin-1"));
    let fine = tomoctx(&["verify"]);
    assert_eq!(fine.status.code(), Some(0));
    let report: Value = serde_json::from_slice(&fine.stdout).unwrap();
    assert_eq!(report["all_passed"], Value::Bool(true));
}

#[test]
fn single_point_scan_matches_inequality() {
    let scan = stdout_of(&[
        "scan",
        "entropic",
        "--axis",
        "0.2366:0.2366:1",
        "--axis",
        "0.1698:0.1698:1",
    ]);
    let rows = rows(&scan);
    assert_eq!(rows.len(), 1);
    let e = json_of(&["inequality", "entropic", "--theta", "0.2366", "--phi", "0.1698"]);
    assert_eq!(num(&rows[0][2]), e["value"].as_f64().unwrap());
    assert_eq!(rows[0][3], "1");
}

#[test]
fn seed_from_environment_matches_flag() {
    let dir = tempfile::tempdir().unwrap();
    let base = [
        "scan",
        "entropic",
        "--axis",
        "0:1.5707963:8",
        "--axis",
        "0:0.785:8",
        "--maximize",
    ];
    let run = |seed_env: Option<&str>, extra: &[&str], name: &str| -> Vec<u8> {
        let path = dir.path().join(name);
        let mut cmd = Command::new(env!("CARGO_BIN_EXE_tomoctx"));
        cmd.args(base)
            .args(extra)
            .args(["--output", path.to_str().unwrap()])
            .env_remove("TOMOCTX_SEED");
        if let Some(s) = seed_env {
            cmd.env("TOMOCTX_SEED", s);
        }
        let out = cmd.output().unwrap();
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
        out.stdout
    };
    let from_env = run(Some("7"), &[], "a.csv");
    let from_flag = run(None, &["--seed", "7"], "b.csv");
    assert_eq!(from_env, from_flag);
    let v: Value = serde_json::from_slice(&from_env).unwrap();
    assert!(v["value"].as_f64().unwrap() > 0.0911 - 1e-4);

    let bad = Command::new(env!("CARGO_BIN_EXE_tomoctx"))
        .args(["inequality", "peres-mermin"])
        .env("TOMOCTX_SEED", "not-a-number")
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(2));
}
