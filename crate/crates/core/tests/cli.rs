use std::process::{Command, Output};

use serde_json::Value;

fn sweepout(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sweepout")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn catenoid_solve_reports_both_parameters() {
    let out = sweepout(&["catenoid", "solve", "--r", "1", "--h", "0.1", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let res = &v["result"];
    let c = res["c_unstable"].as_f64().unwrap();
    // c·cosh(h/c) = r
    assert!((c * (0.1 / c).cosh() - 1.0).abs() < 1e-9);
    let c2 = res["c_stable"].as_f64().unwrap();
    assert!((c2 * (0.1 / c2).cosh() - 1.0).abs() < 1e-9);
    assert!(res["area_unstable"].as_f64().unwrap() > res["area_stable"].as_f64().unwrap());
    assert_eq!(v["pass"], Value::Bool(true));
    assert_eq!(v["config_hash"].as_str().unwrap().len(), 64);
}

#[test]
fn identical_config_gives_identical_bytes() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    for p in [&a, &b] {
        let out = sweepout(&["catenoid", "scan", "--points", "6", "--out", p.to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(0));
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    let other = sweepout(&["catenoid", "scan", "--points", "7", "--json"]);
    let first: Value = serde_json::from_slice(&std::fs::read(&a).unwrap()).unwrap();
    assert_ne!(first["config_hash"], json(&other)["config_hash"]);
}

#[test]
fn doubling_sweep_has_positive_margin() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("report.json");
    let csv = dir.path().join("report.csv");
    let out = sweepout(&["doubling", "sweep", "--m", "2", "--out", p.to_str().unwrap(), "--csv", csv.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v: Value = serde_json::from_slice(&std::fs::read(&p).unwrap()).unwrap();
    let summary = &v["result"]["summary"];
    assert!(summary["margin"].as_f64().unwrap() > 0.0);
    let rows = v["result"]["rows"].as_array().unwrap();
    let ts: Vec<f64> = rows.iter().map(|r| r["t"].as_f64().unwrap()).collect();
    assert!(ts.windows(2).all(|w| w[0] <= w[1]));
    let sup = rows.iter().map(|r| r["area"].as_f64().unwrap()).fold(f64::MIN, f64::max);
    assert_eq!(sup, summary["sup_area"].as_f64().unwrap());
    let text = std::fs::read_to_string(&csv).unwrap();
    assert!(text.starts_with("t,area,"));
    assert_eq!(text.lines().count(), rows.len() + 1);
}

#[test]
fn neck_fit_slope_is_the_dimension() {
    let out = sweepout(&["neck", "fit", "--n", "3", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let slope = json(&out)["result"]["slope"].as_f64().unwrap();
    assert!((slope - 3.0).abs() < 1e-6);
}

#[test]
fn verification_failure_exits_two() {
    // A gap tolerance no discretisation can meet.
    let out = sweepout(&["width", "--h", "0.3", "--tol", "1e-12"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stdout).contains("FAIL"));
    let out = sweepout(&["fermi", "tube", "--n", "32", "--h", "0.05", "--min-kappa", "1e6"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn usage_errors_exit_one() {
    for args in [
        vec!["bogus"],
        vec!["catenoid", "solve"],
        vec!["catenoid", "solve", "--h", "abc"],
        vec!["catenoid", "solve", "--h", "2"],
        vec!["neck", "fit", "--n", "9"],
        vec!["verify-all", "--only", "42"],
    ] {
        let out = sweepout(&args);
        assert_eq!(out.status.code(), Some(1), "{args:?}");
        assert!(!out.stderr.is_empty());
    }
    let out = Command::new(env!("CARGO_BIN_EXE_sweepout"))
        .args(["neck", "fit"])
        .env("SWEEPOUT_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn help_exits_zero() {
    let out = sweepout(&["--help"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8_lossy(&out.stdout);
    for sub in ["catenoid", "width", "fermi", "cutoff", "doubling", "neck", "verify-all"] {
        assert!(text.contains(sub), "{sub}");
    }
}

#[test]
fn verify_all_subset() {
    let out = sweepout(&["verify-all", "--only", "1,10", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let ids: Vec<u64> = v["result"].as_array().unwrap().iter().map(|r| r["id"].as_u64().unwrap()).collect();
    assert_eq!(ids, [1, 10]);
    let out = sweepout(&["verify-all", "--only", "2"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stdout).starts_with("FAIL  2"));
}

#[test]
fn doubling_export_writes_a_mesh() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("slice.txt");
    let out = sweepout(&["doubling", "export", "--m", "2", "--stage", "necks", "--param", "0.2", "--mesh", p.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let mesh = sweepout::mesh::io::parse(&std::fs::read_to_string(&p).unwrap()).unwrap();
    assert!(!mesh.triangles.is_empty());
    let on_sphere = mesh.vertices.iter().all(|v| (v.norm() - 1.0).abs() < 1e-12);
    assert!(on_sphere);
}
