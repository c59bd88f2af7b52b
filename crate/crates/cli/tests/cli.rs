//! End-to-end runs of the `ds2` binary.

use std::path::Path;
use std::process::{Command, Output};

use ds2_cli::snapshot;

fn ds2(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ds2"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn run_in(dir: &Path, args: &[&str]) -> Output {
    let out = dir.to_str().unwrap();
    let mut full = args.to_vec();
    full.extend_from_slice(&["-o", out]);
    ds2(&full)
}

#[test]
fn scenarios_subcommand_lists_presets() {
    let out = ds2(&["scenarios"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    for key in ["lump", "ozawa-scale-1.1", "quintic-small", "lump-deform-0.9"] {
        assert!(text.contains(key), "missing {key} in listing");
    }
}

#[test]
fn unknown_scenario_is_a_usage_error_listing_presets() {
    let out = ds2(&["run", "--scenario", "vortex"]);
    assert_eq!(out.status.code(), Some(64));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("available:"), "{err}");
    assert!(err.contains("ozawa-gauss-0.1"), "{err}");
}

#[test]
fn unknown_flag_is_a_usage_error() {
    let out = ds2(&["run", "--scenario", "ozawa", "--frobnicate"]);
    assert_eq!(out.status.code(), Some(64));
}

#[test]
fn quintic_smoke_run_writes_all_artifacts() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_in(
        dir.path(),
        &[
            "run",
            "--scenario",
            "quintic-small",
            "--nx",
            "256",
            "--nt",
            "200",
            "--t-end",
            "0.05",
            "--cadence",
            "5",
        ],
    );
    assert_eq!(out.status.code(), Some(0), "{:?}", out);
    let csv = std::fs::read_to_string(dir.path().join("timeseries.csv")).unwrap();
    assert!(csv.starts_with("t,max_sq_amp,l2_norm,energy,delta_e"));
    assert!(csv.lines().count() > 40);
    let report = std::fs::read_to_string(dir.path().join("report.txt")).unwrap();
    assert!(report.contains("blew_up=false"), "{report}");
    assert!(report.contains("spectral_tail="), "{report}");
    let manifest = std::fs::read_to_string(dir.path().join("manifest.toml")).unwrap();
    let parsed: toml::Table = manifest.parse().unwrap();
    assert_eq!(parsed["scenario"].as_str().unwrap(), "quintic-small");
    assert_eq!(parsed["nx"].as_integer().unwrap(), 256);
}

#[test]
fn ozawa_snapshot_matches_the_exact_solution_at_t0() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_in(
        dir.path(),
        &[
            "run", "--scenario", "ozawa", "--nx", "64", "--ny", "64", "--nt", "64",
            "--t-end", "0.016", "--cadence", "2", "--snapshot", "0",
        ],
    );
    assert_eq!(out.status.code(), Some(0), "{:?}", out);
    let snap = snapshot::read_field(&dir.path().join("snap-000-t+0.000000.dsfld")).unwrap();
    assert_eq!(snap.grid().nx(), 64);
    let grid = *snap.grid();
    let exact =
        ds2::solutions::ozawa_at(grid, ds2::solutions::OzawaParams::default(), 0.0).unwrap();
    assert_eq!(snap.data(), exact.data(), "t=0 snapshot is the initial datum");
    // companions and sidecar
    assert!(dir.path().join("snap-000-t+0.000000.amp2.dsfld").exists());
    assert!(dir.path().join("snap-000-t+0.000000.spec.dsfld").exists());
    let sidecar = std::fs::read_to_string(dir.path().join("snap-000-t+0.000000.txt")).unwrap();
    assert!(sidecar.contains("scenario=ozawa"));
}

#[test]
fn reruns_are_bitwise_identical() {
    let args = [
        "run", "--scenario", "ozawa", "--nx", "64", "--ny", "64", "--nt", "32",
        "--t-end", "0.008", "--cadence", "2", "-p", "2", "--snapshot", "0.008",
    ];
    let d1 = tempfile::tempdir().unwrap();
    let d2 = tempfile::tempdir().unwrap();
    assert_eq!(run_in(d1.path(), &args).status.code(), Some(0));
    assert_eq!(run_in(d2.path(), &args).status.code(), Some(0));
    for name in ["timeseries.csv", "snap-000-t+0.008000.dsfld", "report.txt"] {
        let a = std::fs::read(d1.path().join(name)).unwrap();
        let b = std::fs::read(d2.path().join(name)).unwrap();
        assert_eq!(a, b, "{name} differs between reruns");
    }
}

#[test]
fn worker_env_variable_sets_the_default() {
    let dir = tempfile::tempdir().unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_ds2"))
        .env("DS_WORKERS", "2")
        .args([
            "run", "--scenario", "ozawa", "--nx", "64", "--ny", "64", "--nt", "16",
            "--t-end", "0.004", "--cadence", "2", "-o", dir.path().to_str().unwrap(),
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let manifest = std::fs::read_to_string(dir.path().join("manifest.toml")).unwrap();
    assert!(manifest.contains("workers = 2"), "{manifest}");
}

#[test]
fn config_file_plus_flag_overrides() {
    let dir = tempfile::tempdir().unwrap();
    let cfg_path = dir.path().join("run.toml");
    std::fs::write(
        &cfg_path,
        "scenario = \"ozawa\"\nnx = 64\nny = 64\nnt = 16\nt_end = 0.004\ncadence = 2\n",
    )
    .unwrap();
    let out = run_in(
        dir.path(),
        &["run", "--config", cfg_path.to_str().unwrap(), "--nt", "8"],
    );
    assert_eq!(out.status.code(), Some(0), "{:?}", out);
    let manifest = std::fs::read_to_string(dir.path().join("manifest.toml")).unwrap();
    assert!(manifest.contains("nt = 8"), "flag must beat file: {manifest}");
}

#[test]
fn inline_scenario_without_nt_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let cfg_path = dir.path().join("run.toml");
    std::fs::write(
        &cfg_path,
        "t_end = 0.1\n[inline_scenario]\nbase = \"quintic\"\n",
    )
    .unwrap();
    let out = ds2(&["run", "--config", cfg_path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(64));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("--nt"), "{err}");
}

#[test]
fn overflowing_run_exits_with_code_2() {
    let dir = tempfile::tempdir().unwrap();
    let cfg_path = dir.path().join("run.toml");
    std::fs::write(
        &cfg_path,
        "nx = 64\nnt = 40\nt_end = 0.1\ncadence = 1\n\
         [inline_scenario]\nbase = \"quintic\"\nmodifier = \"scale\"\nfactor = 1e80\n",
    )
    .unwrap();
    let out = run_in(dir.path(), &["run", "--config", cfg_path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2), "{:?}", out);
    let report = std::fs::read_to_string(dir.path().join("report.txt")).unwrap();
    assert!(report.contains("blew_up=true"), "{report}");
    assert!(report.contains("jump_ratio=inf"), "{report}");
}

#[test]
fn snapshot_outside_time_range_is_rejected() {
    let out = ds2(&[
        "run", "--scenario", "ozawa", "--nt", "16", "--snapshot", "0.9",
    ]);
    assert_eq!(out.status.code(), Some(64));
}
