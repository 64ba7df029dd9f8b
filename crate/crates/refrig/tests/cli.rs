//! End-to-end checks of the `refrig` binary and the command layer: exit
//! codes, CSV determinism, config round-trip, and the figure tables.

use std::fs;
use std::path::PathBuf;
use std::process::Command;

use refrig::cli::{
    cmd_figure, cmd_report, cmd_sweep, CommandOutput, OutputOptions, RunConfig,
};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_refrig"))
}

fn temp_dir(tag: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("refrig-cli-{tag}-{}", std::process::id()));
    fs::create_dir_all(&dir).unwrap();
    dir
}

fn write_config(dir: &PathBuf, name: &str, contents: &str) -> PathBuf {
    let path = dir.join(name);
    fs::write(&path, contents).unwrap();
    path
}

const FIG2_JSON: &str = r#"{
    "model": "qrc",
    "beta_h": 1.0, "beta_c": 2.0, "beta_w": 0.09,
    "omega_h": 10.0, "omega_c": 0.9, "gamma0": 0.01
}"#;

#[test]
fn report_exit_codes() {
    let dir = temp_dir("exit");
    let cfg = write_config(&dir, "run.json", FIG2_JSON);
    let ok = bin().args(["report", "--config"]).arg(&cfg).output().unwrap();
    assert_eq!(ok.status.code(), Some(0), "{}", String::from_utf8_lossy(&ok.stderr));
    let stdout = String::from_utf8(ok.stdout).unwrap();
    assert!(stdout.contains("beta_limit"), "CSV header expected on stdout");

    // equilibrium: all currents vanish, still prints the row, exits 2
    let eq = write_config(
        &dir,
        "eq.json",
        r#"{"model":"qrc","beta_h":1.0,"beta_c":1.0,"beta_w":1.0,
            "omega_h":10.0,"omega_c":0.9,"gamma0":0.01}"#,
    );
    let out = bin().args(["report", "--config"]).arg(&eq).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.lines().any(|l| l.contains("nan")), "undefined flags print as nan");

    // missing key: exit 1
    let bad = write_config(
        &dir,
        "bad.json",
        r#"{"model":"qrc","beta_h":1.0,"beta_c":2.0,"beta_w":0.09,
            "omega_c":0.9,"gamma0":0.01}"#,
    );
    let out = bin().args(["report", "--config"]).arg(&bad).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("omega_h"));

    // usage error: exit 1
    let out = bin().arg("report").output().unwrap();
    assert_eq!(out.status.code(), Some(1));

    fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn unknown_figure_exits_one_listing_names() {
    let out = bin().args(["figure", "fig7"]).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("fig2") && err.contains("fig5"), "{err}");
}

#[test]
fn validate_exit_codes() {
    let dir = temp_dir("validate");
    let cfg = write_config(&dir, "run.json", FIG2_JSON);
    let out = bin().args(["validate", "--config"]).arg(&cfg).output().unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("method_equivalence_mean"));

    let corrupted = write_config(
        &dir,
        "corrupted.json",
        r#"{"model":"qrc","beta_h":1.0,"beta_c":2.0,"beta_w":0.09,
            "omega_h":10.0,"omega_c":0.9,"gamma0":0.01,
            "tolerances":{"fcs_rel":1e-300,"oracle_rel":1e-4}}"#,
    );
    let out = bin().args(["validate", "--config"]).arg(&corrupted).output().unwrap();
    assert_eq!(out.status.code(), Some(3));

    fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn sweep_writes_deterministic_atomic_csv() {
    let dir = temp_dir("sweep");
    let cfg_text = format!(
        r#"{{"model":"qrc","beta_h":1.0,"beta_c":2.0,"beta_w":0.09,
            "omega_h":10.0,"omega_c":0.9,"gamma0":0.01,
            "sweep":[{{"param":"beta_c","from":1.5,"to":3.5,"points":3}}],
            "outputs":{{"csv_path":"{}"}}}}"#,
        dir.join("sweep.csv").display()
    );
    let cfg = write_config(&dir, "run.json", &cfg_text);

    let out = bin().args(["sweep", "--config"]).arg(&cfg).output().unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let first = fs::read_to_string(dir.join("sweep.csv")).unwrap();

    let out = bin().args(["sweep", "--config"]).arg(&cfg).env("REFRIG_JOBS", "2").output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let second = fs::read_to_string(dir.join("sweep.csv")).unwrap();

    assert_eq!(first, second, "identical configs must produce byte-identical CSV");
    assert_eq!(first.lines().filter(|l| !l.starts_with('#')).count(), 4); // header + 3 rows
    assert!(first.starts_with("# tool_version"));
    // no temp files left behind
    assert!(fs::read_dir(&dir).unwrap().all(|e| {
        !e.unwrap().file_name().to_string_lossy().contains(".tmp")
    }));

    fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn config_round_trips_through_table_metadata() {
    let cfg = RunConfig::from_json(FIG2_JSON).unwrap();
    let out = cmd_report(&cfg, &OutputOptions::default()).unwrap();
    let json = out.table.to_json();
    let parsed: serde_json::Value = serde_json::from_str(&json).unwrap();
    let echoed: RunConfig =
        serde_json::from_value(parsed["metadata"]["config"].clone()).unwrap();
    assert_eq!(echoed, cfg);
    assert_eq!(echoed.build_spec().unwrap(), cfg.build_spec().unwrap());

    // the CSV metadata line carries the same echo
    let csv = out.table.to_csv();
    let line = csv.lines().find(|l| l.starts_with("# config = ")).unwrap();
    let echoed: RunConfig =
        serde_json::from_str(line.trim_start_matches("# config = ")).unwrap();
    assert_eq!(echoed, cfg);
}

#[test]
fn fig2_table_respects_power_bound() {
    let out = cmd_figure("fig2", &OutputOptions::default()).unwrap();
    let power = out.table.column("power_ratio").unwrap();
    assert_eq!(power.len(), 100);
    assert!(power.iter().all(|&v| v > 2.0), "power ratio must exceed 2 on the fig2 grid");
    let nsr = out.table.column("nsr_ratio").unwrap();
    assert!(nsr.iter().all(|&v| v > 2.0));
}

#[test]
fn fig5_table_respects_tur() {
    let out = cmd_figure("fig5", &OutputOptions::default()).unwrap();
    for col in ["q_qrc", "q_qrcn", "q_qri"] {
        let q = out.table.column(col).unwrap();
        assert!(q.iter().all(|&v| v >= 2.0), "{col} dipped below 2");
    }
}

#[test]
fn fig4_heatmap_svg_and_magnitudes() {
    let dir = temp_dir("fig4");
    let opts = OutputOptions { out_dir: Some(dir.clone()), svg: true };
    let out = cmd_figure("fig4b", &opts).unwrap();
    let max_power =
        out.table.column("power_ratio").unwrap().into_iter().fold(0.0f64, f64::max);
    assert!(max_power >= 20.0);
    let svg = fs::read_to_string(dir.join("fig4b.svg")).unwrap();
    assert!(svg.contains("<rect"), "heatmap uses rect cells");
    assert!(dir.join("fig4b.csv").exists() && dir.join("fig4b.json").exists());
    fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn sweep_two_axes_gives_grid_rows() {
    let cfg = RunConfig::from_json(
        r#"{"model":"qrcn","beta_h":1.0,"beta_c":2.0,"beta_w1":0.09,"beta_w2":1.0,
            "omega_prime":2.0,"omega_h":10.0,"omega_c":0.9,"gamma0":0.01,
            "sweep":[{"param":"beta_c","from":1.5,"to":2.5,"points":2},
                     {"param":"omega_prime","from":1.0,"to":3.0,"points":2}]}"#,
    )
    .unwrap();
    let out: CommandOutput = cmd_sweep(&cfg, &OutputOptions::default()).unwrap();
    assert_eq!(out.table.rows.len(), 4);
    assert_eq!(out.table.columns[0], "beta_c");
    assert_eq!(out.table.columns[1], "omega_prime");
}
