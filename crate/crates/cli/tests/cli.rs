use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::tempdir;

fn wgdp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_wgdp"))
        .args(args)
        .output()
        .expect("spawn wgdp")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn read_json(path: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn column(csv: &str, name: &str) -> Vec<f64> {
    let mut lines = csv.lines();
    let idx = lines
        .next()
        .unwrap()
        .split(',')
        .position(|h| h == name)
        .unwrap();
    lines
        .map(|l| l.split(',').nth(idx).unwrap().parse().unwrap())
        .collect()
}

#[test]
fn bare_point_at_resonant_optimum() {
    let o = wgdp(&[
        "bare",
        "--gamma-q",
        "0.16",
        "--delta",
        "0",
        "--Gamma1",
        "0.16",
    ]);
    assert!(o.status.success());
    let eta = column(&stdout(&o), "eta");
    let gamma_q = std::f64::consts::TAU * 0.16;
    assert!((eta[0] - 1.0 / (1.0 + 2.0 * gamma_q)).abs() < 1e-14);
}

#[test]
fn csv_layout() {
    let o = wgdp(&["sweep", "--axis", "h:0:0.5:3", "--axis", "delta:-1:1:2"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(!text.contains('\r'));
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(
        lines[0],
        "param1,param2,eta,p_t,p_r,p_q,p_a,p_b,conversion,status"
    );
    assert_eq!(lines.len(), 7);
    // h = 0 decouples the atom; the last axis varies fastest
    assert!(lines[1].starts_with(
        "0.0000000000000000e0,-1.0000000000000000e0,0.0000000000000000e0,1.0000000000000000e0,"
    ));
    assert!(lines[2].starts_with("0.0000000000000000e0,1.0000000000000000e0,"));
    assert!(lines[6].starts_with("5.0000000000000000e-1,1.0000000000000000e0,"));
    for l in &lines[1..] {
        assert_eq!(l.split(',').count(), 10);
        assert!(l.ends_with(",ok"));
    }
}

#[test]
fn unknown_axis_parameter_is_a_usage_error() {
    let o = wgdp(&["sweep", "--axis", "bogus:0:1:3"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("unknown parameter `bogus`"));
    assert!(o.stdout.is_empty());
}

#[test]
fn conflicting_couplings_are_rejected() {
    let o = wgdp(&["bare", "--h", "0.1", "--Gamma1", "0.2"]);
    assert_eq!(o.status.code(), Some(2));
    let o = wgdp(&["bare", "--V", "0.1"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn figure_three_peak() {
    let o = wgdp(&["fig", "3", "--count", "41"]);
    assert!(o.status.success());
    let eta = column(&stdout(&o), "eta");
    assert_eq!(eta.len(), 41 * 41);
    let max = eta.iter().copied().fold(f64::MIN, f64::max);
    assert!((max - 0.3322).abs() < 1e-3, "{max}");
}

#[test]
fn figure_six_writes_data_and_manifest() {
    let dir = tempdir().unwrap();
    let out = dir.path().join("fig6.csv");
    let o = wgdp(&["fig", "6", "--out", out.to_str().unwrap()]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("max eta="));

    let text = std::fs::read_to_string(&out).unwrap();
    assert_eq!(text.lines().count(), 2002);
    let v = column(&text, "param1");
    let g = column(&text, "param2");
    let k = v.iter().position(|&x| (x - 0.61).abs() < 1e-9).unwrap();
    assert!((g[k] - 0.288).abs() < 5e-3);
    assert_eq!(column(&text, "p_t")[0], 1.0);

    let manifest = read_json(&out.with_file_name("fig6.csv.manifest.json"));
    assert_eq!(manifest["command"], "fig 6");
    assert_eq!(manifest["coupling"], "matched");
    assert_eq!(manifest["derived"]["parameter"], "g");
    let user = manifest["parameters"].as_object().unwrap();
    let angular = manifest["angular"].as_object().unwrap();
    assert_eq!(user.len(), angular.len());
    for (k, u) in user {
        assert_eq!(
            angular[k].as_f64().unwrap(),
            std::f64::consts::TAU * u.as_f64().unwrap()
        );
    }
    assert!((user["gamma_c"].as_f64().unwrap() - 0.76).abs() < 1e-15);
}

#[test]
fn json_round_trip_reproduces_cells() {
    let dir = tempdir().unwrap();
    let first = dir.path().join("a.json");
    let second = dir.path().join("b.json");
    let o = wgdp(&[
        "sweep",
        "--axis",
        "V:0:2:9",
        "--axis",
        "g:0:1:5",
        "--gamma-c",
        "0.5",
        "--delta",
        "0.1",
        "--format",
        "json",
        "--out",
        first.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    let o = wgdp(&[
        "sweep",
        "--config",
        first.to_str().unwrap(),
        "--format",
        "json",
        "--out",
        second.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let (a, b) = (read_json(&first), read_json(&second));
    assert_eq!(a["cells"], b["cells"]);
    assert_eq!(a["axes"], b["axes"]);
    assert_eq!(a["manifest"]["parameters"], b["manifest"]["parameters"]);
    let cell = &a["cells"][12];
    assert_eq!(cell["status"], "ok");
    assert_eq!(cell["solution"]["t"].as_array().unwrap().len(), 2);
    assert!(cell["shares"]["conversion"].is_number());
}

#[test]
fn optimize_cavity_reports_maximum() {
    let o = wgdp(&["optimize", "cavity"]);
    assert!(o.status.success());
    let eta = column(&stdout(&o), "eta")[0];
    assert!((eta - 0.5439).abs() < 1e-3, "{eta}");
    assert!(String::from_utf8_lossy(&o.stderr).contains("eta_max=0.54389"));
}

#[test]
fn optimize_json_has_location() {
    let o = wgdp(&["optimize", "matched", "--format", "json"]);
    assert!(o.status.success());
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    let loc = v["optimum"]["location"].as_array().unwrap();
    assert_eq!(loc[0][0], "V");
    assert!((loc[0][1].as_f64().unwrap() - 0.61).abs() < 0.01);
    assert!(v["shares"]["t"].as_f64().unwrap() < 1e-20);
}

#[test]
fn verify_passes() {
    let o = wgdp(&["verify", "--draws", "1000"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&o.stderr).contains("PASS"));
}

#[test]
fn help_exits_cleanly() {
    let o = wgdp(&["--help"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("optimize"));
}
