use std::path::PathBuf;
use std::process::{Command, Output};

fn focallab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_focallab")).args(args).env_remove("FOCALLAB_JOBS").output().expect("spawn focallab")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).expect("utf8")
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("focallab-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn list_names_every_scenario() {
    let o = focallab(&["list"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    for id in focallab::scenarios::SCENARIO_IDS {
        assert!(text.contains(id), "{id}");
    }
}

#[test]
fn focal_radius_of_the_clifford_torus() {
    let o = focallab(&["--format", "json", "focal", "--scenario", "clifford_torus"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let r = v["quantities"]["focal_radius"].as_f64().unwrap();
    assert!((r - std::f64::consts::FRAC_PI_4).abs() < 1e-6);
    assert!(v["timings"].is_null());
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(focallab(&["focal", "--scenario", "no_such_scenario"]).status.code(), Some(1));
    assert_eq!(focallab(&["focal", "--scenario", "clifford_torus", "--rho", "0.5"]).status.code(), Some(1));
    assert_eq!(focallab(&["verify", "shape-bound", "--scenario", "clifford_torus", "--k", "5"]).status.code(), Some(1));
    assert_eq!(focallab(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(focallab(&["--help"]).status.code(), Some(0));
}

#[test]
fn failed_verification_exits_two() {
    // past the focal radius the annulus formula no longer holds
    let o = focallab(&["tube", "--scenario", "euclidean_plane_circle", "--tube-radius", "1.5"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stdout(&o).contains("FAIL expected"));
    let o = focallab(&["tube", "--scenario", "euclidean_plane_circle", "--tube-radius", "0.3"]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn json_is_deterministic_across_job_counts() {
    let a = focallab(&["--format", "json", "--jobs", "1", "scenario", "--id", "geodesic_sphere", "--random-families", "5"]);
    let b = focallab(&["--format", "json", "--jobs", "3", "scenario", "--id", "geodesic_sphere", "--random-families", "5"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn formats_carry_identical_values() {
    let args = ["verify", "shape-bound", "--scenario", "geodesic_sphere", "--rho", "0.7"];
    let json = stdout(&focallab(&[&["--format", "json"], &args[..]].concat()));
    let csv = stdout(&focallab(&[&["--format", "csv"], &args[..]].concat()));
    let text = stdout(&focallab(&[&["--format", "text", "-v"], &args[..]].concat()));
    let v: serde_json::Value = serde_json::from_str(&json).unwrap();
    let checks = v["checks"].as_array().unwrap();
    let shape = checks.iter().find(|c| c["name"] == "shape-bound").unwrap();
    for s in shape["samples"].as_array().unwrap() {
        let lhs = focallab::report::format_f64(s["lhs"].as_f64().unwrap());
        assert!(csv.contains(&lhs), "{lhs} missing from csv");
        assert!(text.contains(&lhs), "{lhs} missing from text");
    }
    assert!(csv.starts_with("scenario,check,kind,label,params,lhs,rhs,margin,pass"));
}

#[test]
fn config_files_are_strict_and_flags_win() {
    let bad = scratch("unknown.json");
    std::fs::write(&bad, r#"{"command": "focal", "scenario": "geodesic_sphere", "colour": "red"}"#).unwrap();
    assert_eq!(focallab(&["run", "--config", bad.to_str().unwrap()]).status.code(), Some(1));

    let ov = scratch("overrides.json");
    std::fs::write(&ov, r#"{"rho": 0.5}"#).unwrap();
    let from_file = focallab(&["--format", "json", "focal", "--scenario", "geodesic_sphere", "--config", ov.to_str().unwrap()]);
    let v: serde_json::Value = serde_json::from_slice(&from_file.stdout).unwrap();
    assert!((v["quantities"]["focal_radius"].as_f64().unwrap() - 0.5).abs() < 1e-6);
    let flag = focallab(&["--format", "json", "focal", "--scenario", "geodesic_sphere", "--config", ov.to_str().unwrap(), "--rho", "0.9"]);
    let v: serde_json::Value = serde_json::from_slice(&flag.stdout).unwrap();
    assert!((v["quantities"]["focal_radius"].as_f64().unwrap() - 0.9).abs() < 1e-6);
}

#[test]
fn out_flag_writes_a_file() {
    let path = scratch("tube.json");
    let o = focallab(&["--format", "json", "--out", path.to_str().unwrap(), "tube", "--scenario", "flat_torus_circle"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    let vol = v["quantities"]["tube_volume"].as_f64().unwrap();
    assert!((vol - 0.4 * 2f64.sqrt()).abs() < 0.01 * 0.4 * 2f64.sqrt());
}

#[test]
fn expected_soul_failure_on_the_wavy_curve_passes() {
    let o = focallab(&["verify", "soul", "--scenario", "flat_torus_wavy_curve"]);
    assert_eq!(o.status.code(), Some(0));
}
