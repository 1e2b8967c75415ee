use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn bcv(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bcv"))
        .args(args)
        .env_remove("BCV_THREADS")
        .output()
        .expect("bcv runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("valid JSON")
}

#[test]
fn verify_all_suites_pass_in_nil() {
    let out = bcv(&["verify", "--kappa", "0", "--tau", "0.5"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let report = json(&out);
    assert_eq!(report["pass"], true);
    assert_eq!(report["geometry"], "Nil3");
    let suites = report["suites"].as_array().unwrap();
    assert_eq!(suites.len(), 7);
    for suite in suites {
        for entry in suite["entries"].as_array().unwrap() {
            assert_eq!(entry["pass"], true, "{entry}");
            assert!(entry["max_residual"].as_f64().unwrap().is_finite());
        }
    }
    assert!(report.get("wall_time_s").is_none());
}

#[test]
fn verify_filters_to_one_suite() {
    let out = bcv(&["verify", "--kappa", "1", "--tau", "0.5", "--suite", "frame"]);
    assert_eq!(out.status.code(), Some(0));
    let report = json(&out);
    let suites = report["suites"].as_array().unwrap();
    assert_eq!(suites.len(), 1);
    assert_eq!(suites[0]["entries"].as_array().unwrap().len(), 1);
}

#[test]
fn verify_rejects_unknown_suite() {
    let out = bcv(&["verify", "--suite", "nonsense"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("nonsense"));
    assert!(out.stdout.is_empty());
}

#[test]
fn verify_output_is_byte_identical_across_runs() {
    let args = ["verify", "--kappa", "-1", "--tau", "0.5", "--suite", "ricci", "--suite", "theorem52", "--seed", "9"];
    let a = bcv(&args);
    let b = bcv(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn verify_writes_report_file_with_timing() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let out = bcv(&["verify", "--suite", "submersion", "--timing", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let report: serde_json::Value = serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
    assert!(report["wall_time_s"].as_f64().unwrap() >= 0.0);
}

#[test]
fn json_floats_carry_seventeen_significant_digits() {
    let out = bcv(&["verify", "--kappa", "1", "--tau", "0.5", "--suite", "frame"]);
    let text = stdout(&out);
    assert!(text.contains("\"tau\": 5.0000000000000000e-1"), "{text}");
}

fn data_rows(csv: &str) -> Vec<Vec<f64>> {
    csv.lines()
        .skip(1)
        .filter(|l| !l.starts_with('#'))
        .map(|l| l.split(',').map(|x| x.parse().unwrap()).collect())
        .collect()
}

#[test]
fn integrate_steps_by_the_configured_step() {
    let out = bcv(&["integrate", "--kappa", "1", "--tau", "1", "--r0", "1", "--sigma0", "0.7853981634", "--step", "0.01", "--smax", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert_eq!(text.lines().next().unwrap(), "s,r,z,sigma,f,R1,R2,obstruction");
    assert_eq!(text.lines().last().unwrap(), "# status: completed");
    let rows = data_rows(&text);
    assert_eq!(rows.len(), 101);
    for (k, w) in rows.windows(2).enumerate() {
        assert!((w[1][0] - w[0][0] - 0.01).abs() < 1e-12, "row {k}");
        assert!(w[1][6].abs() < 1e-10);
    }
}

#[test]
fn integrate_fixed_point_keeps_radius() {
    let out = bcv(&["integrate", "--kappa", "3", "--tau", "1", "--r0", "0.6666666667", "--sigma0", "1.5707963268", "--smax", "1"]);
    assert_eq!(out.status.code(), Some(0));
    for row in data_rows(&stdout(&out)) {
        assert!((row[1] - 2.0 / 3.0).abs() < 1e-8);
    }
}

#[test]
fn integrate_rejects_tiny_radius() {
    let out = bcv(&["integrate", "--kappa", "0", "--tau", "0.5", "--r0", "1e-9", "--sigma0", "1"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn integrate_reports_early_stop_in_final_line() {
    let out = bcv(&["integrate", "--kappa", "0", "--tau", "0.5", "--r0", "0.5", "--sigma0", "1", "--max-steps", "10"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert_eq!(text.lines().last().unwrap(), "# status: max_steps");
    assert!(data_rows(&text).len() <= 10);
}

fn obj_counts(text: &str) -> (usize, usize) {
    let v = text.lines().filter(|l| l.starts_with("v ")).count();
    let f = text.lines().filter(|l| l.starts_with("f ")).count();
    (v, f)
}

fn header_residual(text: &str) -> f64 {
    text.lines()
        .find_map(|l| l.strip_prefix("# max_tangential_bitension = "))
        .unwrap()
        .parse()
        .unwrap()
}

#[test]
fn mesh_hopf_cylinder_grid() {
    let out = bcv(&["mesh", "hopf-cylinder", "--r0", "1", "--nu", "16", "--nv", "16", "--kappa", "0", "--tau", "0.5"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let text = stdout(&out);
    assert_eq!(obj_counts(&text), (256, 225));
    assert!(header_residual(&text) < 1e-6);
    let max_index = text
        .lines()
        .filter_map(|l| l.strip_prefix("f "))
        .flat_map(|l| l.split(' ').map(|i| i.parse::<usize>().unwrap()).collect::<Vec<_>>())
        .max()
        .unwrap();
    assert_eq!(max_index, 256);
}

#[test]
fn mesh_missing_profile_is_usage_error() {
    let out = bcv(&["mesh", "revolution", "--profile", "missing.csv"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn mesh_outside_domain_is_domain_error() {
    let out = bcv(&["mesh", "hopf-cylinder", "--r0", "3", "--kappa", "-1", "--tau", "0.5"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(out.stdout.is_empty());
}

#[test]
fn mesh_revolution_from_integrated_profile() {
    let dir = tempfile::tempdir().unwrap();
    let profile = dir.path().join("profile.csv");
    let out = bcv(&[
        "integrate", "--kappa", "0", "--tau", "0.5", "--r0", "0.8", "--sigma0", "1.2", "--step", "0.01", "--smax", "0.6",
        "--out", profile.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let obj = dir.path().join("surface.obj");
    let out = bcv(&[
        "mesh", "revolution", "--profile", profile.to_str().unwrap(), "--kappa", "0", "--tau", "0.5", "--nu", "8", "--nv", "6",
        "--out", obj.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let text = fs::read_to_string(&obj).unwrap();
    assert_eq!(obj_counts(&text), (48, 35));
    assert!(header_residual(&text) > 1e-3);
}

fn write_ellipse(path: &Path, a: f64, b: f64) {
    let mut text = String::from("x,y\n");
    for k in 0..=64 {
        let t = std::f64::consts::TAU * k as f64 / 64.0;
        text.push_str(&format!("{},{}\n", a * t.cos(), b * t.sin()));
    }
    fs::write(path, text).unwrap();
}

#[test]
fn mesh_hopf_tube_from_base_curve() {
    let dir = tempfile::tempdir().unwrap();
    let base = dir.path().join("base.csv");
    write_ellipse(&base, 1.0, 0.6);
    let out = bcv(&["mesh", "hopf-tube", "--base", base.to_str().unwrap(), "--tau", "0.5", "--nu", "10", "--nv", "4"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let text = stdout(&out);
    assert_eq!(obj_counts(&text), (40, 27));
    assert!(header_residual(&text) > 1e-3);
    let again = bcv(&["mesh", "hopf-tube", "--base", base.to_str().unwrap(), "--tau", "0.5", "--nu", "10", "--nv", "4"]);
    assert_eq!(out.stdout, again.stdout);
}

#[test]
fn invalid_thread_count_is_usage_error() {
    let out = Command::new(env!("CARGO_BIN_EXE_bcv"))
        .args(["verify", "--suite", "frame"])
        .env("BCV_THREADS", "many")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn thread_count_does_not_change_output() {
    let run = |threads: &str| {
        Command::new(env!("CARGO_BIN_EXE_bcv"))
            .args(["verify", "--kappa", "1", "--tau", "1", "--suite", "frame", "--suite", "submersion"])
            .env("BCV_THREADS", threads)
            .output()
            .unwrap()
            .stdout
    };
    assert_eq!(run("1"), run("4"));
}
