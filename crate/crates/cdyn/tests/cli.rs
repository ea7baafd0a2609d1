use std::path::Path;
use std::process::{Command, Output};

use cdyn::format::{read_measure_csv, read_series_csv};
use serde_json::Value;

fn cdyn(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cdyn"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("JSON report on stdout")
}

#[test]
fn classify_reports_orbits_and_census() {
    let out = cdyn(&["classify", "-p", "0.25,0,1", "--period", "1"]);
    assert_eq!(code(&out), 0);
    let r = json(&out);
    let orbits = r["orbits"].as_array().unwrap();
    assert_eq!(orbits.len(), 1);
    assert_eq!(orbits[0]["class"], "rationally-neutral");
    assert_eq!(orbits[0]["root_of_unity_order"], 1);
    assert!((orbits[0]["points"][0][0].as_f64().unwrap() - 0.5).abs() < 1e-6);
    assert_eq!(r["census"]["pass"], true);
    assert!(String::from_utf8_lossy(&out.stderr).contains("rationally-neutral(1)"));

    let r = json(&cdyn(&["classify", "-p", "-1,0,1", "--period", "2"]));
    let two: Vec<&Value> = r["orbits"].as_array().unwrap().iter().filter(|o| o["period"] == 2).collect();
    assert_eq!(two.len(), 1);
    assert_eq!(two[0]["class"], "superattracting");
    let mut pts: Vec<f64> = two[0]["points"].as_array().unwrap().iter().map(|p| p[0].as_f64().unwrap()).collect();
    pts.sort_by(f64::total_cmp);
    assert!((pts[0] + 1.0).abs() < 1e-9 && pts[1].abs() < 1e-9);

    let r = json(&cdyn(&["classify", "-p", "0,0,1"]));
    let classes: Vec<(f64, &str)> = r["orbits"]
        .as_array()
        .unwrap()
        .iter()
        .map(|o| (o["points"][0][0].as_f64().unwrap(), o["class"].as_str().unwrap()))
        .collect();
    assert!(classes.iter().any(|&(z, c)| z.abs() < 1e-12 && c == "superattracting"));
    assert!(classes.iter().any(|&(z, c)| (z - 1.0).abs() < 1e-12 && c == "repelling"));
}

#[test]
fn parse_errors_exit_2() {
    assert_eq!(code(&cdyn(&["classify", "-p", "1,zz"])), 2);
    assert_eq!(code(&cdyn(&["classify"])), 2);
    assert_eq!(code(&cdyn(&["julia", "-p", "1,1"])), 2);
    assert_eq!(code(&cdyn(&["frobnicate"])), 2);
    assert_eq!(code(&cdyn(&["linearize"])), 2);
    assert_eq!(code(&cdyn(&["--help"])), 0);
}

#[test]
fn julia_exact_cloud_on_unit_circle() {
    let out = cdyn(&["julia", "-p", "0,0,1", "-n", "12", "--budget", "65536"]);
    assert_eq!(code(&out), 0);
    let mu = read_measure_csv(&out.stdout[..]).unwrap();
    assert_eq!(mu.len(), 4096);
    assert!((mu.mass() - 1.0).abs() < 1e-9);
    assert!(mu.finite_points().all(|z| (z.norm() - 1.0).abs() < 1e-6));
}

#[test]
fn julia_sampling_needs_a_seed() {
    let out = cdyn(&["julia", "-p", "-2,0,1", "-n", "14", "--samples", "10000"]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("--seed"));
}

#[test]
fn julia_exceptional_basepoint_exits_4() {
    assert_eq!(code(&cdyn(&["julia", "-p", "0,0,1", "--basepoint", "0"])), 4);
}

#[test]
fn julia_writes_csv_report_and_pgm() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("cloud.csv");
    let pgm = dir.path().join("cloud.pgm");
    let out = cdyn(&[
        "julia", "-p", "-1,0,1", "-n", "14", "--samples", "2000", "--seed", "3", "--tasks", "2",
        "--out", csv.to_str().unwrap(), "--pgm", pgm.to_str().unwrap(),
        "--width", "64", "--height", "32", "--bbox", "-2,2,-1,1",
    ]);
    assert_eq!(code(&out), 0);
    let r = json(&out);
    assert_eq!(r["mode"], "sampled");
    assert_eq!(r["points"], 2000);
    assert_eq!(r["walk_length"], 20);
    let bytes = std::fs::read(&pgm).unwrap();
    let header = b"P5\n64 32\n255\n";
    assert_eq!(&bytes[..header.len()], header);
    assert_eq!(bytes.len(), header.len() + 64 * 32);
    assert!(bytes[header.len()..].contains(&255));
    let mu = read_measure_csv(std::fs::File::open(&csv).unwrap()).unwrap();
    assert_eq!(mu.len(), 2000);
}

#[test]
fn measure_reports_follow_the_experiment_layout() {
    let r = json(&cdyn(&["measure", "cesaro-massgap", "-n", "4"]));
    assert_eq!(r["operation"], "cesaro_mass_gap");
    let last = &r["per_n"][3];
    assert_eq!(last["n"], 4);
    assert_eq!(last["bound"], 0.4);
    assert!(last["value"].as_f64().unwrap() <= 0.4 + 1e-9);
    assert_eq!(r["fitted"]["pass"], true);

    let out = cdyn(&["measure", "gap", "-p", "0,0,1", "-x", "2", "-y", "3", "-n", "12", "--threshold", "0.02"]);
    assert_eq!(code(&out), 0);
    let r = json(&out);
    assert!(r["fitted"]["gap"].as_f64().unwrap() < 0.02);
    assert_eq!(r["params"]["mode"], "exact");

    assert_eq!(code(&cdyn(&["measure", "gap", "-p", "0,0,1", "-x", "0", "-y", "3", "-n", "4"])), 4);
    assert_eq!(code(&cdyn(&["measure", "duality", "--cases", "3"])), 2);
}

#[test]
fn linearize_koenigs_series() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("phi.csv");
    let out = cdyn(&["linearize", "-p", "0,0.5,1", "-o", csv.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    let r = json(&out);
    assert_eq!(r["series"]["regime"], "koenigs");
    let s = read_series_csv(std::fs::File::open(&csv).unwrap()).unwrap();
    assert_eq!(s.order(), 30);
    assert!((s.coeff(1).re - 1.0).abs() < 1e-12);
    assert!((s.coeff(2).re - 4.0).abs() < 1e-10);
}

#[test]
fn linearize_siegel_and_arithmetic_checks() {
    let r = json(&cdyn(&["linearize", "--siegel", "golden", "-p", "quad"]));
    assert_eq!(r["series"]["regime"], "siegel");
    assert_eq!(r["series"]["order"], 40);
    assert!(r["series"]["residual"].as_f64().unwrap() < 1e-6);
    assert_eq!(r["series"]["small_denominators"].as_array().unwrap().len(), 39);

    let r = json(&cdyn(&["linearize", "--cremer", "2,4"]));
    let term = &r["cremer"]["terms"][0];
    assert!(term["distance"].as_f64().unwrap() <= std::f64::consts::PI);
    assert_eq!(r["cremer"]["pass"], true);

    assert_eq!(code(&cdyn(&["linearize", "--siegel", "0.25", "-p", "quad"])), 5);
    assert_eq!(code(&cdyn(&["linearize", "--diophantine", "1,2,10"])), 2);
}

#[test]
fn disc_checks() {
    let r = json(&cdyn(&["disc", "denjoy-wolff", "--mobius", "0.5"]));
    assert_eq!(r["check"], "denjoy-wolff");
    assert_eq!(r["details"]["kind"], "boundary-point");
    assert!((r["details"]["alpha"][0].as_f64().unwrap() - 1.0).abs() < 1e-6);

    let out = cdyn(&["disc", "area", "--tail", "0,1"]);
    assert_eq!(code(&out), 0);
    let r = json(&out);
    assert_eq!(r["statistic"], 1.0);
    assert_eq!(r["pass"], true);
    assert_eq!(code(&cdyn(&["disc", "area", "--tail", "0,1.5"])), 3);

    let r = json(&cdyn(&["disc", "koebe", "--series", "koebe-function", "-N", "30"]));
    assert_eq!(r["details"]["a2"][0], 2.0);
    assert_eq!(r["details"]["coverage_pass"], true);
    assert_eq!(r["pass"], true);

    assert_eq!(code(&cdyn(&["disc", "schwarz-pick", "-p", "0,1.5"])), 6);
    assert_eq!(code(&cdyn(&["disc", "schwarz-pick", "--mobius", "0.3"])), 2);
    assert_eq!(code(&cdyn(&["disc", "denjoy-wolff"])), 2);
}

#[test]
fn config_file_supplies_defaults_and_flags_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    std::fs::write(&cfg, "# julia settings\np=-2,0,1\nn=14\nsamples=50\nseed=7\n").unwrap();
    let cfg = cfg.to_str().unwrap();
    let from_file = cdyn(&["--config", cfg, "julia"]);
    let explicit = cdyn(&["julia", "-p", "-2,0,1", "-n", "14", "--samples", "50", "--seed", "7"]);
    assert_eq!(code(&from_file), 0);
    assert_eq!(from_file.stdout, explicit.stdout);
    let overridden = cdyn(&["julia", "--config", cfg, "--seed", "8"]);
    let explicit8 = cdyn(&["julia", "-p", "-2,0,1", "-n", "14", "--samples", "50", "--seed", "8"]);
    assert_eq!(overridden.stdout, explicit8.stdout);
    assert_ne!(overridden.stdout, from_file.stdout);
    assert_eq!(code(&cdyn(&["--config", "/nonexistent/cfg", "julia"])), 2);
}

#[test]
fn report_flag_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("r.json");
    let out = cdyn(&["disc", "area", "--tail", "0,0.5", "--report", path.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    assert!(out.stdout.is_empty());
    let r: Value = serde_json::from_slice(&std::fs::read(Path::new(&path)).unwrap()).unwrap();
    assert_eq!(r["statistic"], 0.25);
}
