use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

fn lieflag(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lieflag")).args(args).output().expect("binary runs")
}

fn write(dir: &Path, name: &str, body: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, body).unwrap();
    p
}

fn stdout_json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!("{e}: {}", String::from_utf8_lossy(&out.stdout))
    })
}

const H3: &str = r#"{"schema":"lieflag/1","algebra":{"catalog":{"kind":"heisenberg","n":1}}}"#;

const H3R_MATSUMOTO: &str = r#"{
  "schema": "lieflag/1",
  "algebra": {"catalog": {"kind": "direct_sum_with_abelian", "base": {"kind": "heisenberg", "n": 1}, "k": 1}},
  "family": "matsumoto",
  "drift": [0, 0, 0, 0.3],
  "flags": [{"y": [1, 0, 0, 0], "v": [0, 1, 0, 1]}],
  "scan": {"samples": 500, "seed": 7}
}"#;

#[test]
fn check_heisenberg_passes() {
    let dir = TempDir::new().unwrap();
    let cfg = write(dir.path(), "h3.json", H3);
    let out = lieflag(&["check", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(stdout_json(&out)["ok"], true);
}

#[test]
fn check_reports_matsumoto_bound() {
    let dir = TempDir::new().unwrap();
    let cfg = write(
        dir.path(),
        "m.json",
        r#"{"schema":"lieflag/1","algebra":{"catalog":{"kind":"heisenberg","n":1}},
            "family":"matsumoto","drift":[0.6,0,0]}"#,
    );
    let out = lieflag(&["check", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let v = stdout_json(&out);
    let msgs: Vec<&str> = v["violations"].as_array().unwrap().iter().map(|m| m.as_str().unwrap()).collect();
    assert!(msgs.contains(&"admissibility: 0.6 \u{2265} 0.5"), "{msgs:?}");
}

#[test]
fn check_reports_jacobi_violation_with_residual() {
    let dir = TempDir::new().unwrap();
    let cfg = write(
        dir.path(),
        "bad.json",
        r#"{"schema":"lieflag/1","algebra":{"dim":3,"constants":[
            {"i":1,"j":2,"k":2,"c":1},{"i":2,"j":3,"k":1,"c":1}]}}"#,
    );
    let out = lieflag(&["check", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let v = stdout_json(&out);
    assert_eq!(v["checks"][0]["name"], "jacobi");
    assert!(v["checks"][0]["residual"].as_f64().unwrap() > 0.0);
}

#[test]
fn malformed_and_missing_inputs_exit_two() {
    let dir = TempDir::new().unwrap();
    let cfg = write(dir.path(), "bad.json", "{\"schema\": ");
    for cmd in ["check", "classify", "curvature", "scan"] {
        assert_eq!(lieflag(&[cmd, cfg.to_str().unwrap()]).status.code(), Some(2), "{cmd}");
    }
    let wrong = write(dir.path(), "wrong.json", r#"{"schema":"lieflag/9","algebra":{}}"#);
    assert_eq!(lieflag(&["check", wrong.to_str().unwrap()]).status.code(), Some(2));
    let missing = dir.path().join("nope.json");
    assert_eq!(lieflag(&["classify", missing.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn classify_verdicts() {
    let dir = TempDir::new().unwrap();
    let g1 = write(
        dir.path(),
        "g1.json",
        r#"{"schema":"lieflag/1","algebra":{"catalog":{"kind":"g1","dim":2}},"family":"randers","drift":[0.4,0]}"#,
    );
    let out = lieflag(&["classify", g1.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert_eq!(v["verdict"], "DouglasNonBerwald");
    assert!(!v["witnesses"].as_array().unwrap().is_empty());

    let h = write(
        dir.path(),
        "h.json",
        r#"{"schema":"lieflag/1","algebra":{"catalog":{"kind":"heisenberg","n":1}},"family":"matsumoto","drift":[0.4,0,0]}"#,
    );
    assert_eq!(stdout_json(&lieflag(&["classify", h.to_str().unwrap()]))["verdict"], "NonDouglas");
    let r = write(dir.path(), "r.json", H3);
    assert_eq!(stdout_json(&lieflag(&["classify", r.to_str().unwrap()]))["verdict"], "Riemannian");
}

#[test]
fn curvature_matsumoto_report_and_csv() {
    let dir = TempDir::new().unwrap();
    let cfg = write(dir.path(), "m.json", H3R_MATSUMOTO);
    let csv = dir.path().join("k.csv");
    let out = lieflag(&["curvature", cfg.to_str().unwrap(), "--engine", "all", "--csv", csv.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v = stdout_json(&out);
    let values = v["flags"][0]["values"].as_array().unwrap();
    let get = |name: &str| values.iter().find(|e| e["engine"] == name).unwrap()["value"].as_f64().unwrap();
    assert!((get("generic") - get("matsumoto_berwald")).abs() < 1e-9);
    assert!((get("generic") - get("liu_deng_scaling")).abs() > 1e-3);
    let text = std::fs::read_to_string(&csv).unwrap();
    assert!(text.starts_with("flag_index,engine,value\n"));
    assert!(text.contains("1,matsumoto_berwald,"));
}

#[test]
fn curvature_g1_worked_value() {
    let dir = TempDir::new().unwrap();
    let cfg = write(
        dir.path(),
        "g1.json",
        r#"{"schema":"lieflag/1","algebra":{"catalog":{"kind":"g1","dim":2}},
            "family":"randers","drift":[0.5,0],"flags":[{"y":[0,1],"v":[1,0]}]}"#,
    );
    let out = lieflag(&["curvature", cfg.to_str().unwrap(), "--engine", "closed"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v = stdout_json(&out);
    let values = v["flags"][0]["values"].as_array().unwrap();
    for name in ["g1_closed_form", "randers_douglas_u"] {
        let x = values.iter().find(|e| e["engine"] == name).unwrap()["value"].as_f64().unwrap();
        assert!((x + 0.8125).abs() < 1e-10, "{name}: {x}");
    }
}

#[test]
fn curvature_on_abelian_is_zero() {
    let dir = TempDir::new().unwrap();
    let cfg = write(
        dir.path(),
        "a.json",
        r#"{"schema":"lieflag/1","algebra":{"dim":3,"constants":[]},"family":"randers","drift":[0.2,0,0],
            "flags":[{"y":[1,2,0],"v":[0,1,3]}]}"#,
    );
    let v = stdout_json(&lieflag(&["curvature", cfg.to_str().unwrap()]));
    for e in v["flags"][0]["values"].as_array().unwrap() {
        assert_eq!(e["value"].as_f64().unwrap().abs(), 0.0, "{e}");
    }
}

#[test]
fn curvature_without_flags_fails() {
    let dir = TempDir::new().unwrap();
    let cfg = write(dir.path(), "h3.json", H3);
    assert_eq!(lieflag(&["curvature", cfg.to_str().unwrap()]).status.code(), Some(1));
}

#[test]
fn scan_is_deterministic_and_writes_csv() {
    let dir = TempDir::new().unwrap();
    let cfg = write(dir.path(), "m.json", H3R_MATSUMOTO);
    let csv = dir.path().join("s.csv");
    let a = lieflag(&["scan", cfg.to_str().unwrap(), "--csv", csv.to_str().unwrap()]);
    let b = lieflag(&["scan", cfg.to_str().unwrap()]);
    assert_eq!(a.status.code(), Some(0), "{}", String::from_utf8_lossy(&a.stderr));
    assert_eq!(a.stdout, b.stdout);
    let v = stdout_json(&a);
    assert_eq!(v["samples"], 500);
    assert!(v["min_value"].as_f64().unwrap() < 0.0 && v["max_value"].as_f64().unwrap() > 0.0);
    let text = std::fs::read_to_string(&csv).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "sample_index,y1,y2,y3,y4,v1,v2,v3,v4,K_F,K_g");
    assert_eq!(lines.count(), 500);

    let json = dir.path().join("out.json");
    let c = lieflag(&["scan", cfg.to_str().unwrap(), "--json", json.to_str().unwrap()]);
    assert!(c.stdout.is_empty());
    assert_eq!(std::fs::read(&json).unwrap(), a.stdout);
}

#[test]
fn scan_heisenberg_range() {
    let dir = TempDir::new().unwrap();
    let cfg = write(dir.path(), "h3.json", H3);
    let v = stdout_json(&lieflag(&["scan", cfg.to_str().unwrap(), "--samples", "10000", "--seed", "3"]));
    assert!((v["min_value"].as_f64().unwrap() + 0.75).abs() < 1e-2);
    assert!((v["max_value"].as_f64().unwrap() - 0.25).abs() < 1e-2);
    assert!(v["zero_value"].as_f64().unwrap().abs() < 1e-8);
}

#[test]
fn scan_rejects_non_nilpotent_group() {
    let dir = TempDir::new().unwrap();
    let cfg = write(dir.path(), "g1.json", r#"{"schema":"lieflag/1","algebra":{"catalog":{"kind":"g1","dim":2}}}"#);
    let out = lieflag(&["scan", cfg.to_str().unwrap(), "--samples", "50"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("not nilpotent"));
    let forced = lieflag(&["scan", cfg.to_str().unwrap(), "--samples", "50", "--force"]);
    assert_eq!(forced.status.code(), Some(0));
}

#[test]
fn tolerance_override() {
    let dir = TempDir::new().unwrap();
    let cfg = write(dir.path(), "h3.json", H3);
    let out = Command::new(env!("CARGO_BIN_EXE_lieflag"))
        .args(["classify", cfg.to_str().unwrap()])
        .env("LIEFLAG_TOL", "banana")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    let ok = Command::new(env!("CARGO_BIN_EXE_lieflag"))
        .args(["classify", cfg.to_str().unwrap()])
        .env("LIEFLAG_TOL", "1e-8")
        .output()
        .unwrap();
    assert_eq!(ok.status.code(), Some(0));
}

#[test]
fn json_numbers_round_trip() {
    let dir = TempDir::new().unwrap();
    let cfg = write(dir.path(), "m.json", H3R_MATSUMOTO);
    let out = lieflag(&["curvature", cfg.to_str().unwrap()]);
    let v = stdout_json(&out);
    let g = lieflag_core::Metric::identity(4);
    let flag = lieflag_core::canonicalize_flag(
        &g,
        &lieflag_core::DVector::from_column_slice(&[1.0, 0.0, 0.0, 0.0]),
        &lieflag_core::DVector::from_column_slice(&[0.0, 1.0, 0.0, 1.0]),
    )
    .unwrap();
    for (i, x) in flag.v().iter().enumerate() {
        assert_eq!(v["flags"][0]["v"][i].as_f64().unwrap(), *x);
    }
}
