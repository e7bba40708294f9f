//! End-to-end tests of the binary: exit codes, artifact layout, golden-file
//! reproducibility, and the spectrum cache.

use std::path::Path;
use std::process::{Command, Output};

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_weyl1d")
}

fn run(args: &[&str], envs: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(bin());
    cmd.args(args);
    for (k, v) in envs {
        cmd.env(k, v);
    }
    cmd.output().expect("binary should run")
}

fn write_config(dir: &Path, name: &str, body: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, body).unwrap();
    path.to_string_lossy().into_owned()
}

const FLAT_WEYL: &str = r#"{
  "schema_version": 1,
  "space": { "kind": "interval", "length": 3.141592653589793,
             "density": { "family": "constant", "c": 1.0 } },
  "task": "weyl",
  "task_parameters": { "elements": 800, "count": 260 },
  "output": "out",
  "seed": 7
}"#;

#[test]
fn weyl_task_passes_and_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "weyl.json", FLAT_WEYL);

    let out1 = run(&["weyl", "--config", &cfg], &[]);
    assert_eq!(out1.status.code(), Some(0), "{out1:?}");

    let verdict: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("out/verdict.json")).unwrap())
            .unwrap();
    assert_eq!(verdict["pass"], serde_json::Value::Bool(true));
    assert_eq!(verdict["task"], "weyl");
    let tail = &verdict["targets"][0];
    assert_eq!(tail["name"], "tail_ratio");
    assert_eq!(tail["target"].as_f64().unwrap(), 1.0);
    let measured = tail["measured"].as_f64().unwrap();
    assert!((measured - 1.0).abs() <= 0.05, "tail ratio {measured}");

    let csv1 = std::fs::read(dir.path().join("out/results.csv")).unwrap();
    assert!(csv1.starts_with(b"lambda,ratio,target,rel_dev\n"));
    assert!(dir.path().join("out/plotdata/ratio_curve.dat").exists());

    // byte-identical re-run
    let dir2 = tempfile::tempdir().unwrap();
    let out2 = run(
        &["weyl", "--config", &cfg, "--out", dir2.path().to_str().unwrap()],
        &[],
    );
    assert_eq!(out2.status.code(), Some(0));
    let csv2 = std::fs::read(dir2.path().join("results.csv")).unwrap();
    assert_eq!(csv1, csv2, "results.csv must be byte-identical across runs");
}

#[test]
fn weyl_task_misses_with_tiny_tolerance() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "weyl.json", FLAT_WEYL);
    let out = run(
        &["weyl", "--config", &cfg, "--tolerance-scale", "1e-6"],
        &[],
    );
    assert_eq!(out.status.code(), Some(2), "{out:?}");
    let verdict: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("out/verdict.json")).unwrap())
            .unwrap();
    assert_eq!(verdict["pass"], serde_json::Value::Bool(false));
}

#[test]
fn malformed_config_names_the_offending_key() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "bad.json",
        r#"{ "schema_version": 1, "lenght": 3.14 }"#,
    );
    let out = run(&["weyl", "--config", &cfg], &[]);
    assert_eq!(out.status.code(), Some(1));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("lenght"), "diagnostic: {stderr}");
}

#[test]
fn task_subcommand_mismatch_is_a_config_error() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "weyl.json", FLAT_WEYL);
    let out = run(&["spectrum", "--config", &cfg], &[]);
    assert_eq!(out.status.code(), Some(1));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("does not match"), "{stderr}");
}

#[test]
fn convexity_check_rejects_wavy_density_with_witness() {
    let dir = tempfile::tempdir().unwrap();
    // deliberately oscillating sampled density
    let n = 64;
    let grid: Vec<String> = (0..=n)
        .map(|i| format!("{:.17}", std::f64::consts::PI * (i as f64 / n as f64)))
        .collect();
    let values: Vec<String> = (0..=n)
        .map(|i| {
            let x = std::f64::consts::PI * (i as f64 / n as f64);
            format!("{:.17}", 1.1 + (3.0 * x).sin())
        })
        .collect();
    let cfg_body = format!(
        r#"{{
  "schema_version": 1,
  "space": {{ "kind": "interval", "length": 3.141592653589793,
             "density": {{ "family": "sampled", "grid": [{}], "values": [{}] }},
             "N": 3.0 }},
  "task": "convexity-check",
  "task_parameters": {{ "grid_resolution": 64 }},
  "output": "out",
  "seed": 9
}}"#,
        grid.join(","),
        values.join(",")
    );
    let cfg = write_config(dir.path(), "convex.json", &cfg_body);
    let out = run(&["convexity-check", "--config", &cfg], &[]);
    assert_eq!(out.status.code(), Some(2), "{out:?}");
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("\"passed\":false"));
    let verdict: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("out/verdict.json")).unwrap())
            .unwrap();
    let witness = &verdict["witness"];
    assert!(witness["y0"].as_f64().unwrap() < witness["y1"].as_f64().unwrap());
    assert!(witness["margin"].as_f64().unwrap() < 0.0);
}

#[test]
fn ratio_integral_emits_the_specified_columns() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "ratio.json",
        r#"{
  "schema_version": 1,
  "space": { "kind": "interval", "length": 3.141592653589793,
             "density": { "family": "constant", "c": 0.3183098861837907 } },
  "task": "ratio-integral",
  "task_parameters": { "steps": 7 },
  "output": "out",
  "seed": 1
}"#,
    );
    let out = run(&["ratio-integral", "--config", &cfg], &[]);
    assert_eq!(out.status.code(), Some(0), "{out:?}");
    let csv = std::fs::read_to_string(dir.path().join("out/results.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(
        lines.next().unwrap(),
        "r,integral,extrapolated_limit,target,abs_error"
    );
    assert_eq!(lines.count(), 7);
    assert!(dir.path().join("out/plotdata/profile.dat").exists());
}

#[test]
fn heat_trace_and_abelian_pass() {
    let dir = tempfile::tempdir().unwrap();
    let heat = write_config(
        dir.path(),
        "heat.json",
        r#"{
  "schema_version": 1,
  "space": { "kind": "interval", "length": 3.141592653589793,
             "density": { "family": "constant", "c": 1.0 } },
  "task": "heat-trace",
  "task_parameters": { "elements": 600, "count": 140 },
  "output": "out-heat",
  "seed": 1
}"#,
    );
    let out = run(&["heat-trace", "--config", &heat], &[]);
    assert_eq!(out.status.code(), Some(0), "{out:?}");

    let abelian = write_config(
        dir.path(),
        "abelian.json",
        r#"{
  "schema_version": 1,
  "space": { "kind": "interval", "length": 3.141592653589793,
             "density": { "family": "constant", "c": 1.0 } },
  "task": "abelian",
  "task_parameters": { "measure": "square_atoms", "gamma": 0.5, "constant": 1.0 },
  "output": "out-abelian",
  "seed": 1
}"#,
    );
    let out = run(&["abelian", "--config", &abelian], &[]);
    assert_eq!(out.status.code(), Some(0), "{out:?}");
    let csv = std::fs::read_to_string(dir.path().join("out-abelian/results.csv")).unwrap();
    assert!(csv.starts_with("t,lhs,rhs,rel_err\n"));
}

#[test]
fn fixtures_table_lists_reference_quantities() {
    let out = run(&["fixtures"], &[]);
    assert_eq!(out.status.code(), Some(0));
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("circle_r1"));
    assert!(stdout.contains("2.000000"), "circle weyl target");
    assert!(stdout.contains("flat_pi"));
    assert!(stdout.contains("k^2"));
    assert!(stdout.contains("sinpow_N3"));
    assert!(stdout.contains("k(k+2)"));
    assert!(stdout.contains("sampled_degenerate"));
}

#[test]
fn spectrum_task_uses_the_cache_directory() {
    let dir = tempfile::tempdir().unwrap();
    let cache_dir = dir.path().join("cache");
    let cfg = write_config(
        dir.path(),
        "spectrum.json",
        r#"{
  "schema_version": 1,
  "space": { "kind": "interval", "length": 3.141592653589793,
             "density": { "family": "sinpower", "N": 2.0 } },
  "task": "spectrum",
  "task_parameters": { "elements": 300, "count": 40,
                       "grading": { "boundary_graded": { "strength": 1.5 } } },
  "output": "out",
  "seed": 3
}"#,
    );
    let envs = [("WEYL1D_CACHE_DIR", cache_dir.to_str().unwrap())];
    let out1 = run(&["spectrum", "--config", &cfg], &envs);
    assert_eq!(out1.status.code(), Some(0), "{out1:?}");
    let entries: Vec<_> = std::fs::read_dir(&cache_dir).unwrap().collect();
    assert_eq!(entries.len(), 1, "one cache entry after the first run");

    let csv1 = std::fs::read(dir.path().join("out/results.csv")).unwrap();
    let out2 = run(&["spectrum", "--config", &cfg], &envs);
    assert_eq!(out2.status.code(), Some(0));
    let csv2 = std::fs::read(dir.path().join("out/results.csv")).unwrap();
    assert_eq!(csv1, csv2, "cached rerun must reproduce the artifacts");

    let csv = String::from_utf8(csv1).unwrap();
    assert!(csv.starts_with("index,eigenvalue,resolved\n"));
}

#[test]
fn missing_config_file_is_an_io_error() {
    let out = run(&["weyl", "--config", "/nonexistent/nope.json"], &[]);
    assert_eq!(out.status.code(), Some(3), "{out:?}");
}
