//! End-to-end checks of the binary: exit codes, verdict lines, CSV and mesh
//! outputs, and config-file overrides.

use std::path::PathBuf;
use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_steklovlab"))
}

fn scratch(name: &str) -> PathBuf {
    let mut p = std::env::temp_dir();
    p.push(format!("steklovlab-test-{}-{name}", std::process::id()));
    p
}

#[test]
fn disk_validate_passes_and_writes_outputs() {
    let csv = scratch("disk.csv");
    let mesh = scratch("disk.mesh");
    let output = bin()
        .args([
            "disk-validate",
            "--n-theta",
            "128",
            "--n-radial",
            "16",
            "--levels",
            "2",
            "--k-max",
            "2",
        ])
        .arg("--csv")
        .arg(&csv)
        .arg("--dump-mesh")
        .arg(&mesh)
        .output()
        .expect("binary runs");
    let stdout = String::from_utf8_lossy(&output.stdout);
    assert!(output.status.success(), "stdout: {stdout}");
    assert_eq!(stdout.lines().filter(|l| l.starts_with("PASS")).count(), 4);

    let text = std::fs::read_to_string(&csv).unwrap();
    assert_eq!(
        text.lines().next().unwrap(),
        "experiment,eps,teeth,n_theta,n_radial,k,sigma,sigma_bar,target,rel_err,residual,wall_ms"
    );
    assert_eq!(text.lines().count(), 1 + 2 * 3);

    let dump = std::fs::read_to_string(&mesh).unwrap();
    assert!(dump.starts_with("nodes 2049\n"));
    assert!(dump.contains("\ntriangles "));
    assert!(dump.contains("\nboundary_edges "));

    std::fs::remove_file(csv).ok();
    std::fs::remove_file(mesh).ok();
}

#[test]
fn unknown_experiment_fails() {
    let output = bin().arg("spiral-validate").output().expect("binary runs");
    assert!(!output.status.success());
}

#[test]
fn invalid_resolution_reports_config_error() {
    let output = bin()
        .args(["disk-validate", "--n-theta", "60"])
        .output()
        .expect("binary runs");
    assert!(!output.status.success());
    let stderr = String::from_utf8_lossy(&output.stderr);
    assert!(stderr.contains("invalid config"), "stderr: {stderr}");
}

#[test]
fn config_file_fields_are_overridden_by_flags() {
    let config = scratch("config.json");
    std::fs::write(
        &config,
        r#"{"experiment": "disk-validate", "n_theta": 64, "n_radial": 8,
           "levels": 1, "k_max": 1, "curve_samples": 32, "rel_tol": 0.01}"#,
    )
    .unwrap();
    let csv = scratch("override.csv");
    let output = bin()
        .arg("disk-validate")
        .arg("--config")
        .arg(&config)
        .args(["--k-max", "2"])
        .arg("--csv")
        .arg(&csv)
        .output()
        .expect("binary runs");
    assert!(output.status.success());

    let text = std::fs::read_to_string(&csv).unwrap();
    // One level, k = 0..=2 from the flag override, resolution from the file.
    assert_eq!(text.lines().count(), 1 + 3);
    assert!(text.lines().nth(1).unwrap().contains(",64,8,"));

    std::fs::remove_file(config).ok();
    std::fs::remove_file(csv).ok();
}
