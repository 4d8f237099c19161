use std::path::Path;
use std::process::{Command, Output};

fn simulate(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_simulate"))
        .args(args)
        .env("SIM_THREADS", "2")
        .output()
        .unwrap()
}

fn rows(path: &Path) -> Vec<Vec<String>> {
    std::fs::read_to_string(path)
        .unwrap()
        .lines()
        .map(|l| l.split(',').map(str::to_owned).collect())
        .collect()
}

#[test]
fn preset_writes_csv_file() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("fig3a.csv");
    let o = simulate(&["--preset", "fig3a", "--out", out.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let table = rows(&out);
    assert_eq!(table[0].len(), 12);
    assert_eq!(table[0][0], "delta_small_hz");
    assert_eq!(table[0][11], "error");
    assert_eq!(table.len(), 201);
    assert_eq!(table[1][0], "-48000000");
    assert!(String::from_utf8_lossy(&o.stderr).contains("200 points, 0 failed"));
}

#[test]
fn stdout_when_no_output_path() {
    let o = simulate(&["--sweep", "omega:1e5:1e6:3:log", "--no-langevin"]);
    assert!(o.status.success());
    let text = String::from_utf8(o.stdout).unwrap();
    assert_eq!(text.lines().count(), 4);
    assert!(text.starts_with("delta_small_hz,omega_hz"));
}

#[test]
fn config_file_and_two_axes() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("params.toml");
    std::fs::write(
        &cfg,
        "omega_rabi_hz = 2e9\ndelta_big_hz = 2e9\noptical_depth = 150\n",
    )
    .unwrap();
    let out = dir.path().join("grid.csv");
    let o = simulate(&[
        "--config",
        cfg.to_str().unwrap(),
        "--sweep",
        "delta_small:-2.2e8:-2.1e8:2:linear",
        "--sweep",
        "omega_rabi:1.9e9:2e9:3:linear",
        "--quad-order",
        "32",
        "--omega-hz",
        "2e6",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let table = rows(&out);
    assert_eq!(table[0].last().unwrap(), "omega_rabi_hz");
    assert_eq!(table.len(), 7);
    assert_eq!(table[1][0], table[3][0]);
    assert_ne!(table[3][0], table[4][0]);
    assert_eq!(table[1][1], "2000000");
    assert_eq!(table[3][12], "2000000000");
}

#[test]
fn pinned_ground_without_pump_absorbs() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("dark.toml");
    std::fs::write(
        &cfg,
        "omega_rabi_hz = 0\ndelta_small_hz = 1e9\noptical_depth = 10\n",
    )
    .unwrap();
    let o = simulate(&[
        "--config",
        cfg.to_str().unwrap(),
        "--pin-ground",
        "--no-langevin",
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = String::from_utf8(o.stdout).unwrap();
    let row: Vec<&str> = text.lines().nth(1).unwrap().split(',').collect();
    let ga: f64 = row[2].parse().unwrap();
    assert!((ga.ln() + 10.0).abs() < 1e-6, "{ga}");
}

#[test]
fn unpumped_points_become_error_rows() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("dark.toml");
    std::fs::write(&cfg, "omega_rabi_hz = 0\n").unwrap();
    let o = simulate(&["--config", cfg.to_str().unwrap()]);
    assert!(o.status.success());
    let text = String::from_utf8(o.stdout).unwrap();
    let row = text.lines().nth(1).unwrap();
    assert!(row.contains("singular"), "{row}");
}

#[test]
fn optimize_delta_reports_detuning() {
    let o = simulate(&["--preset", "fig3a", "--optimize-delta"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = String::from_utf8(o.stdout).unwrap();
    let value: f64 = text
        .trim()
        .strip_prefix("delta_opt = ")
        .and_then(|t| t.split(' ').next())
        .unwrap()
        .parse()
        .unwrap();
    assert!((value + 48.0).abs() < 10.0, "{text}");
}

#[test]
fn bad_inputs_fail_with_messages() {
    for args in [
        vec!["--preset", "fig9"],
        vec!["--sweep", "omega:2:1:5:log"],
        vec!["--quad-order", "48"],
        vec!["--config", "/nonexistent/params.toml"],
    ] {
        let o = simulate(&args);
        assert!(!o.status.success(), "{args:?}");
        assert!(
            String::from_utf8_lossy(&o.stderr).starts_with("error:"),
            "{args:?}"
        );
    }
}

#[test]
fn unknown_config_key_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("typo.toml");
    std::fs::write(&cfg, "omega_rabbi_hz = 1e9\n").unwrap();
    let o = simulate(&["--config", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn unwritable_output_is_an_error() {
    let o = simulate(&["--no-langevin", "--out", "/nonexistent/dir/out.csv"]);
    assert_eq!(o.status.code(), Some(1));
}
