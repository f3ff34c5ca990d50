use std::process::{Command, Output};

use hyperbell::cli::{self, ConfigLayer, OutputFormat, Report, Row, Study};

fn hyperbell(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hyperbell")).args(args).output().expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = hyperbell(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

#[test]
fn ideal_prints_eight() {
    let out = stdout(&["ideal"]);
    assert!(out.contains("8.000000"));
    assert!(out.contains("2.828427"));
}

#[test]
fn factorizable_bound_with_witness() {
    let out = stdout(&["bounds", "--class", "factorizable"]);
    assert!(out.contains("bound                4"));
    assert!(out.contains("witness replay       4"));
    assert!(!out.contains("context-unrestricted"));
}

#[test]
fn simulate_unit_visibility_near_eight() {
    let out = stdout(&["simulate", "--v", "1.0", "--events", "1000000", "--seed", "7", "--format", "json"]);
    let r: Report = serde_json::from_str(&out).unwrap();
    let (beta, se) = (r.beta.unwrap(), r.std_err.unwrap());
    assert!((beta.abs() - 8.0).abs() < 5.0 * se, "{beta} +/- {se}");
}

#[test]
fn csv_has_sixteen_rows() {
    let out = stdout(&["simulate", "--events", "2000", "--format", "csv"]);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], "setting_u,setting_d,E,std_err,n_events");
    assert_eq!(lines.len(), 17);
    assert!(lines[1..].iter().all(|l| l.split(',').count() == 5));
}

#[test]
fn table_puts_assumptions_before_beta() {
    let out = stdout(&["simulate", "--events", "2000"]);
    let a = out.find("polarization correlations across path contexts").unwrap();
    let b = out.find("joint correlations").unwrap();
    assert!(a < b);
    assert!(out.contains("[MISMATCH]"));
}

#[test]
fn output_is_byte_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    std::fs::write(&cfg, "study = \"simulate\"\nseed = 11\nevents = 5000\nv_pi = 0.91\nv_k = 0.9\n").unwrap();
    let cfg = cfg.to_str().unwrap();
    for format in ["json", "csv", "table"] {
        let a = hyperbell(&["--config", cfg, "--format", format]);
        let b = hyperbell(&["--config", cfg, "--format", format]);
        assert!(a.status.success());
        assert_eq!(a.stdout, b.stdout, "{format}");
    }
}

#[test]
fn out_flag_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("scaling.csv");
    let out = hyperbell(&["scaling", "--dof", "3", "--format", "csv", "--out", path.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    assert_eq!(text.lines().count(), 4);
    assert!(text.starts_with("n_dof,quantum_value,classical_bound,ratio\n"));
}

#[test]
fn json_round_trip_is_exact() {
    let config = ConfigLayer { study: Some(Study::Simulate), events: Some(3000), seed: Some(5), ..Default::default() }
        .resolve()
        .unwrap();
    let report = cli::run(&config).unwrap();
    let bytes = cli::emit(&report, OutputFormat::Json).unwrap();
    let back: Report = serde_json::from_slice(&bytes).unwrap();
    assert_eq!(back, report);
    assert_eq!(cli::emit(&back, OutputFormat::Json).unwrap(), bytes);
}

#[test]
fn json_has_required_keys() {
    let out = stdout(&["ideal", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    let keys: Vec<&str> = v.as_object().unwrap().keys().map(String::as_str).collect();
    for k in ["study", "config", "rows", "beta", "std_err", "bound", "sigmas", "generator_id"] {
        assert!(keys.contains(&k), "{k}");
    }
}

#[test]
fn scaling_rows() {
    let config = ConfigLayer { study: Some(Study::Scaling), dof: Some(3), ..Default::default() }.resolve().unwrap();
    let report = cli::run(&config).unwrap();
    let ratios: Vec<f64> = report
        .rows
        .iter()
        .filter_map(|r| match r {
            Row::Scaling { ratio, .. } => Some(*ratio),
            _ => None,
        })
        .collect();
    assert_eq!(ratios.len(), 3);
    for (n, r) in ratios.iter().enumerate() {
        assert!((r - 2f64.powf((n + 1) as f64 / 2.0)).abs() < 1e-10);
    }
}

fn code(args: &[&str]) -> Option<i32> {
    hyperbell(args).status.code()
}

#[test]
fn exit_codes() {
    assert_eq!(code(&["ideal"]), Some(0));
    assert_eq!(code(&["simulate", "--dof", "3"]), Some(2));
    assert_eq!(code(&["simulate", "--v", "1.2"]), Some(2));
    assert_eq!(code(&["bounds", "--dof", "3", "--guard", "1000"]), Some(4));
    assert_eq!(code(&["ideal", "--out", "/nonexistent-dir/x.txt"]), Some(2));
    assert_eq!(code(&["--config", "/nonexistent-dir/c.toml"]), Some(2));
}

#[test]
fn bad_config_key_is_named() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.toml");
    std::fs::write(&cfg, "study = \"ideal\"\nseeed = 4\n").unwrap();
    let out = hyperbell(&["--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("`seeed`"));
}

#[test]
fn guard_message_names_the_count() {
    let out = hyperbell(&["bounds", "--dof", "2", "--class", "unrestricted", "--guard", "10"]);
    assert_eq!(out.status.code(), Some(4));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("256") && err.contains("10"), "{err}");
}
