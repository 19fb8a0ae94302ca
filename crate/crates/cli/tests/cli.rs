use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_vaismanlab"))
        .args(args)
        .env("VAISMANLAB_THREADS", "2")
        .output()
        .expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let out = run(args);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("valid json")
}

fn csv_rows(out: &Output) -> Vec<csv::StringRecord> {
    let mut r = csv::Reader::from_reader(&out.stdout[..]);
    r.records().map(|x| x.unwrap()).collect()
}

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * b.abs().max(1.0)
}

#[test]
fn verify_passes_and_reports_schema() {
    let v = json(&["verify", "--model", "hopf:3", "--points", "3"]);
    assert_eq!(v["schema"], 1);
    assert_eq!(v["pass"], true);
    assert_eq!(v["points"], 3);
    assert!(v["records"].as_array().unwrap().len() >= 20);
}

#[test]
fn verify_with_impossible_tolerance_exits_one() {
    let out = run(&["verify", "--model", "hopf:2", "--points", "1", "--tol", "0"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn bad_model_exits_two() {
    assert_eq!(run(&["verify", "--model", "hopf:9"]).status.code(), Some(2));
    assert_eq!(run(&["verify", "--model", "torus:2"]).status.code(), Some(2));
    assert_eq!(run(&["curvature", "--zeta", "-1"]).status.code(), Some(2));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn curvature_values_for_hopf4() {
    let v = json(&["curvature", "--model", "hopf:4", "--zeta", "0"]);
    assert!(close(v["s_c"].as_f64().unwrap(), 6.0, 1e-9));
    assert!(close(v["scal_direct"].as_f64().unwrap(), 10.5, 1e-9));

    let flat = json(&["curvature", "--model", "hopf:4", "--zeta", "-1/4"]);
    assert!(flat["lc_ricci_norm"].as_f64().unwrap() <= 1e-9);

    let zero = json(&["curvature", "--model", "hopf:4", "--zeta", "-7/8"]);
    assert!(zero["scal_direct"].as_f64().unwrap().abs() <= 1e-8);
}

#[test]
fn flow_table_follows_chern_scalar_law() {
    let out = run(&["flow", "--model", "hopf:3", "--t", "0:0.5:0.1"]);
    assert!(out.status.success());
    let rows = csv_rows(&out);
    assert_eq!(rows.len(), 6);
    for r in &rows {
        let t: f64 = r[0].parse().unwrap();
        let s_c: f64 = r[2].parse().unwrap();
        let direct: f64 = r[3].parse().unwrap();
        let formula: f64 = r[4].parse().unwrap();
        assert!(close(s_c, 3.0 / (1.0 - 1.5 * t), 1e-9), "t={t}");
        assert!(close(direct, formula, 1e-8), "t={t}");
    }
}

#[test]
fn flow_past_collapse_exits_two_without_output() {
    let out = run(&["flow", "--model", "hopf:2", "--t", "0.2,1.0"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(out.stdout.is_empty());
}

#[test]
fn flow_on_hopf4_uses_n_over_two_speed() {
    let out = run(&["flow", "--model", "hopf:4", "--t", "0.1,0.25"]);
    let rows = csv_rows(&out);
    for r in &rows {
        let t: f64 = r[0].parse().unwrap();
        let s_c: f64 = r[2].parse().unwrap();
        assert!(close(s_c, 6.0 / (1.0 - 2.0 * t), 1e-9));
    }
}

#[test]
fn exotic7_catalog_has_28_rows() {
    let v = json(&["brieskorn", "exotic7"]);
    let rows = v["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 28);
    for r in rows {
        assert!(r["S"].is_string() && r["upper"].is_string() && r["verdict"].is_string());
    }
}

#[test]
fn brieskorn_check_and_scan() {
    let v = json(&["brieskorn", "check", "2,3,7,7"]);
    assert!(v["verdict"].is_string());
    assert_eq!(run(&["brieskorn", "check", "2,3"]).status.code(), Some(2));
    let s = json(&["brieskorn", "scan", "--n", "4", "--max", "8"]);
    assert!(s["rows"].is_array());
}

#[test]
fn output_is_deterministic() {
    for args in [
        &["verify", "--model", "lens:1:2", "--points", "2", "--seed", "11"][..],
        &["flow", "--model", "hopf:2", "--t", "0:0.9:0.15"][..],
        &["brieskorn", "exotic7", "--csv"][..],
    ] {
        let a = run(args);
        let b = run(args);
        assert!(a.status.success());
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}

#[test]
fn out_flag_writes_file() {
    let dir = std::env::temp_dir().join(format!("vaismanlab-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("scal.csv");
    let out = run(&["scal-table", "--model", "hopf:3", "--out", path.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.starts_with("zeta,s_C,"));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn gh_distortion_shrinks_along_the_flow() {
    let out = run(&["gh", "--model", "hopf:2", "--samples", "400", "--k", "10", "--t", "0.1,0.4"]);
    let rows = csv_rows(&out);
    assert_eq!(rows.len(), 2);
    let d: Vec<f64> = rows.iter().map(|r| r[1].parse().unwrap()).collect();
    assert!(d[1] < d[0], "{d:?}");
    assert_eq!(run(&["gh", "--model", "lens:1:1", "--samples", "400"]).status.code(), Some(2));
    assert_eq!(run(&["gh", "--model", "hopf:2", "--samples", "10"]).status.code(), Some(2));
}
