use std::path::Path;
use std::process::{Command, Output};

fn spinbeam(args: &[&str], out: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_spinbeam"))
        .args(args)
        .arg("--out")
        .arg(out)
        .output()
        .unwrap()
}

fn write_config(dir: &Path, text: &str) -> String {
    let path = dir.join("config.toml");
    std::fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_owned()
}

fn column(path: &Path, name: &str) -> Vec<f64> {
    let text = std::fs::read_to_string(path).unwrap();
    let mut lines = text.lines();
    let idx = lines.next().unwrap().split(',').position(|h| h == name).unwrap();
    lines.map(|l| l.split(',').nth(idx).unwrap().parse().unwrap()).collect()
}

fn metrics(path: &Path) -> serde_json::Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn out_of_range_damping_exits_with_config_code() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "[beam]\nzeta_flex = [1.5, 0.0016]\n");
    let out = spinbeam(&["--config", &cfg], &dir.path().join("out"));
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("damping ratio out of [0,1)"), "{err}");
}

#[test]
fn missing_config_and_bad_overrides_exit_with_config_code() {
    let dir = tempfile::tempdir().unwrap();
    let out = spinbeam(&["--config", "/nonexistent/spinbeam.toml"], dir.path());
    assert_eq!(out.status.code(), Some(2));
    // two damping ratios configured, three modes requested
    assert_eq!(spinbeam(&["--modes", "3"], dir.path()).status.code(), Some(2));
    assert_eq!(spinbeam(&["--dt", "1e-2"], dir.path()).status.code(), Some(2));
}

#[test]
fn spin_destabilized_exits_with_numerical_code() {
    let dir = tempfile::tempdir().unwrap();
    let out = spinbeam(&["--omega", "2e4", "--tfinal", "0.01"], dir.path());
    assert_eq!(out.status.code(), Some(3), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn patch_without_authority_exits_with_authority_code_after_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "[piezo]\nstart = 0.05\nend = 0.05\n");
    let out_dir = dir.path().join("out");
    let out = spinbeam(&["--config", &cfg, "--tfinal", "0.01"], &out_dir);
    assert_eq!(out.status.code(), Some(4), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(out_dir.join("free_on.manifest.json").exists());
    assert!(!out_dir.join("free_on.csv").exists());
}

#[test]
fn rows_are_uniform_in_time() {
    let dir = tempfile::tempdir().unwrap();
    let out = spinbeam(&["--tfinal", "0.05", "--dt", "1e-5", "--controller", "off"], dir.path());
    assert!(out.status.success());
    let t = column(&dir.path().join("free_off.csv"), "t");
    assert_eq!(t.len(), 5001);
    for (k, t) in t.iter().enumerate() {
        assert_eq!(*t, k as f64 * 1e-5);
    }
}

#[test]
fn no_rotation_means_no_torsion() {
    let dir = tempfile::tempdir().unwrap();
    let out = spinbeam(&["--omega", "0", "--tfinal", "0.2", "--controller", "off"], dir.path());
    assert!(out.status.success());
    let theta = column(&dir.path().join("free_off.csv"), "theta_tip");
    assert!(theta.iter().all(|v| v.abs() < 1e-14));
    let q1 = column(&dir.path().join("free_off.csv"), "q1");
    assert!(q1.iter().all(|v| v.abs() < 1e-14));
}

#[test]
fn controller_settles_the_free_response_sooner() {
    let dir = tempfile::tempdir().unwrap();
    assert!(spinbeam(&["--controller", "on"], dir.path()).status.success());
    assert!(spinbeam(&["--controller", "off"], dir.path()).status.success());
    let on = metrics(&dir.path().join("free_on.metrics.json"));
    let off = metrics(&dir.path().join("free_off.metrics.json"));
    let settled = on["settling_time_s"].as_f64().unwrap();
    if let Some(t) = off["settling_time_s"].as_f64() {
        assert!(settled < t);
    }
    assert!(on["rms_tip_after_transient_m"].as_f64() < off["rms_tip_after_transient_m"].as_f64());
    assert!(on["peak_voltage_V"].as_f64().unwrap() <= 200.0);
    assert_eq!(off["peak_voltage_V"].as_f64(), Some(0.0));
}

#[test]
fn uncontrolled_disturbance_response_sits_at_the_forcing_frequency() {
    let dir = tempfile::tempdir().unwrap();
    assert!(spinbeam(&["--scenario", "disturbance", "--controller", "off"], dir.path()).status.success());
    let csv = dir.path().join("disturbance_off.csv");
    let (t, w) = (column(&csv, "t"), column(&csv, "w_tip"));
    let half = t.len() / 2;
    let power = |f: f64| {
        let (mut re, mut im) = (0.0, 0.0);
        for k in half..t.len() {
            let a = 2.0 * std::f64::consts::PI * f * t[k];
            re += w[k] * a.cos();
            im += w[k] * a.sin();
        }
        re * re + im * im
    };
    let best = (0..=110).map(|i| 5.0 + 0.5 * i as f64).max_by(|a, b| power(*a).total_cmp(&power(*b))).unwrap();
    assert_eq!(best, 24.0);
}

#[test]
fn manifest_records_config_checksum_and_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let out = spinbeam(&["--scenario", "disturbance", "--tfinal", "0.05", "--omega", "7.5"], dir.path());
    assert!(out.status.success());
    let m = metrics(&dir.path().join("disturbance_on.manifest.json"));
    assert_eq!(m["config"]["sim"]["omega"].as_f64(), Some(7.5));
    assert_eq!(m["controller"], "on");
    assert_eq!(m["matrices_sha256"].as_str().unwrap().len(), 64);
    assert_eq!(m["outputs"]["reference_csv"], "disturbance_on_reference.csv");
    assert!(dir.path().join("disturbance_on_reference.csv").exists());
    let att = metrics(&dir.path().join("disturbance_on.metrics.json"))["attenuation_db"].as_f64();
    assert!(att.is_some());
}

#[test]
fn matrix_export_lists_every_block() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("matrices.txt");
    let out = spinbeam(
        &["--tfinal", "0.001", "--export-matrices", path.to_str().unwrap()],
        dir.path(),
    );
    assert!(out.status.success());
    let text = std::fs::read_to_string(path).unwrap();
    for header in ["M1 2 2", "M2 2 2", "CB 2 2", "CT 2 2", "C1 2 2", "C2 2 2", "K1 2 2", "K2 2 2", "D1 2 2", "G1 2 2 2 2", "F1 2", "Mp0 1"] {
        assert!(text.lines().any(|l| l == header), "missing {header}");
    }
}

#[test]
fn more_modes_with_matching_damping_lists() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "[beam]\nzeta_flex = [0.01, 0.0016, 0.002]\nzeta_tors = [0.01, 0.0033, 0.004]\n",
    );
    let out = spinbeam(&["--config", &cfg, "--modes", "3", "--dt", "2e-6", "--tfinal", "0.005"], &dir.path().join("o"));
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = std::fs::read_to_string(dir.path().join("o/free_on.csv")).unwrap();
    assert!(text.starts_with("t,p1,p2,p3,q1,q2,q3,dp1,dp2,dp3,dq1,dq2,dq3,w_tip,theta_tip,v_p\n"));
}
