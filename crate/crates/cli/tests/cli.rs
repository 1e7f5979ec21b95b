use std::process::Command;

fn qzeno(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_qzeno"))
        .args(args)
        .output()
        .expect("binary runs")
}

#[test]
fn preset_output_is_deterministic() {
    let a = qzeno(&["reproduce", "fig3", "--jobs", "1"]);
    let b = qzeno(&["reproduce", "fig3", "--jobs", "1"]);
    let c = qzeno(&["reproduce", "fig3", "--jobs", "8"]);
    assert!(a.status.success());
    assert!(!a.stdout.is_empty());
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(a.stdout, c.stdout);
    let text = String::from_utf8(a.stdout).unwrap();
    // Two metadata lines, one header, 200 rows per bath.
    assert_eq!(text.lines().count(), 2 + 1 + 400);
}

#[test]
fn grid_serial_equals_parallel() {
    let args = ["eta", "--set", "grid.alpha=0, 0.01, 0.05, 0.1", "--set", "grid.lambda=0.09, 0.3, 0.6"];
    let serial = qzeno(&[&args[..], &["--jobs", "1"]].concat());
    let parallel = qzeno(&[&args[..], &["--jobs", "4"]].concat());
    assert!(serial.status.success());
    assert_eq!(serial.stdout, parallel.stdout);
}

#[test]
fn config_file_and_output_path() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    let out = dir.path().join("out.csv");
    std::fs::write(
        &cfg,
        "# strong Ohmic\ntask = dynamics\nbath.kind = ohmic\nbath.alpha = 0.1\nbath.omega_c = 10\ngrid.t = linspace(0, 10, 11)\n",
    )
    .unwrap();
    let r = qzeno(&["--config", cfg.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert!(r.status.success(), "{}", String::from_utf8_lossy(&r.stderr));
    let text = std::fs::read_to_string(&out).unwrap();
    let mut lines = text.lines();
    let meta: serde_json::Value = serde_json::from_str(lines.next().unwrap().strip_prefix("# ").unwrap()).unwrap();
    assert_eq!(meta["shift"], "red");
    assert!((meta["omega0"].as_f64().unwrap() - 0.77221).abs() < 2e-3);
    assert!(meta["gamma_pole"].as_f64().is_some());
    assert!(meta["eta"].as_f64().is_some());
    assert_eq!(lines.next(), Some("t,sigma_x"));
    assert_eq!(lines.count(), 11);
}

#[test]
fn json_envelope() {
    let r = qzeno(&["zeno", "--format", "json", "--set", "grid.tau=0.5, 1, 2"]);
    assert!(r.status.success());
    let v: serde_json::Value = serde_json::from_slice(&r.stdout).unwrap();
    assert_eq!(v["task"], "zeno");
    assert_eq!(v["version"], env!("CARGO_PKG_VERSION"));
    assert!(v["wall_time_s"].as_f64().unwrap() >= 0.0);
    assert_eq!(v["cells"][0]["rows"].as_array().unwrap().len(), 3);
    assert_eq!(v["config"]["grid"]["tau"][2], 2.0);
}

#[test]
fn exit_codes() {
    assert_eq!(qzeno(&["eta", "--set", "bath.lambda=-1"]).status.code(), Some(2));
    assert_eq!(qzeno(&["eta", "--set", "bath.nope=1"]).status.code(), Some(2));
    assert_eq!(qzeno(&["eta", "--config", "/nonexistent/run.cfg"]).status.code(), Some(2));
    let r = qzeno(&["eta", "--set", "bath.alpha=0.03", "--set", "bath.lambda=0.01"]);
    assert_eq!(r.status.code(), Some(4));
    assert!(String::from_utf8_lossy(&r.stderr).contains("solutions"));
    assert_eq!(qzeno(&["eta"]).status.code(), Some(0));
}

#[test]
fn printed_config_parses_back() {
    let r = qzeno(&["config", "--set", "grid.tau=logspace(0.1, 10, 7)", "--set", "task=zeno"]);
    assert!(r.status.success());
    let text = String::from_utf8(r.stdout).unwrap();
    let cfg = zeno_cli::parse_config(&text).unwrap();
    assert_eq!(cfg.grid.tau.len(), 7);
    assert_eq!(zeno_cli::emit_config(&cfg), text);
}

#[test]
fn oracle_mirrors_dynamics() {
    let r = qzeno(&["oracle", "--set", "grid.t=linspace(0, 20, 41)", "--set", "oracle.modes=800"]);
    assert!(r.status.success());
    let text = String::from_utf8(r.stdout).unwrap();
    let mut lines = text.lines();
    let meta: serde_json::Value = serde_json::from_str(&lines.next().unwrap()[2..]).unwrap();
    assert!(meta["max_deviation"].as_f64().unwrap() < 0.02);
    assert_eq!(lines.next(), Some("t,sigma_x,sigma_x_oracle,deviation,in_window"));
}

#[test]
fn oracle_zeno_with_amplitude_check() {
    let r = qzeno(&[
        "oracle",
        "--set",
        "oracle.target=zeno",
        "--set",
        "oracle.ode_check=true",
        "--set",
        "oracle.modes=200",
        "--set",
        "oracle.omega_max=50",
        "--set",
        "grid.tau=0.5, 1",
    ]);
    assert!(r.status.success(), "{}", String::from_utf8_lossy(&r.stderr));
    let text = String::from_utf8(r.stdout).unwrap();
    assert!(text.contains("tau,gamma,gamma_oracle,deviation,survival,survival_ode\n"));
}
