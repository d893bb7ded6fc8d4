//! End-to-end tests of the `cshsim` binary: artifact schemas, exit codes,
//! determinism, and config handling, all through real process invocations.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn cshsim(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cshsim"))
        .args(args)
        .output()
        .expect("spawn cshsim")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8 stdout")
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).expect("utf-8 stderr")
}

const TRAJECTORY_HEADER: &str = "t,h_phi,h_dphi,gauss_abs,gauss_rel,energy,acf_l2,adf_l2";

#[test]
fn trajectory_csv_schema_and_exact_roundtrip() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("traj.csv");
    let out = cshsim(&[
        "simulate",
        "--n",
        "8",
        "--dt",
        "0.05",
        "--t-end",
        "0.2",
        "--record-every",
        "1",
        "--amplitude",
        "0.01",
        "--seed",
        "3",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr(&out));
    assert!(
        stderr(&out).contains("completed"),
        "needs a terminal status line"
    );

    let text = fs::read_to_string(&path).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some(TRAJECTORY_HEADER));
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 5, "initial state plus four recorded steps");
    for row in rows {
        let cells: Vec<&str> = row.split(',').collect();
        assert_eq!(cells.len(), 8, "exactly eight columns: {row}");
        for cell in cells {
            let value: f64 = cell.parse().expect("every cell parses as f64");
            assert_eq!(
                format!("{value:.16e}"),
                cell,
                "cells carry 17 significant digits and round-trip exactly"
            );
        }
    }
}

#[test]
fn zero_amplitude_writes_all_zero_diagnostics() {
    let out = cshsim(&[
        "simulate",
        "--n",
        "8",
        "--dt",
        "0.05",
        "--t-end",
        "0.1",
        "--record-every",
        "1",
        "--amplitude",
        "0",
    ]);
    assert_eq!(out.status.code(), Some(0));
    for row in stdout(&out).lines().skip(1) {
        for cell in row.split(',').skip(1) {
            assert_eq!(cell.parse::<f64>().unwrap(), 0.0, "row: {row}");
        }
    }
}

#[test]
fn unknown_config_key_is_a_config_error() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.ini");
    fs::write(&path, "n = 8\nstep_size = 0.1\n").unwrap();
    let out = cshsim(&["simulate", "--config", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let err = stderr(&out);
    assert!(err.contains("unknown key `step_size`"), "stderr: {err}");
}

#[test]
fn invalid_grid_is_a_config_error() {
    let out = cshsim(&["simulate", "--n", "12"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(
        stderr(&out).contains("power of two"),
        "stderr: {}",
        stderr(&out)
    );
}

#[test]
fn nan_abort_exits_two_after_writing_partial_artifact() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("abort.csv");
    let out = cshsim(&[
        "simulate",
        "--n",
        "8",
        "--amplitude",
        "20",
        "--dt",
        "0.5",
        "--t-end",
        "4",
        "--record-every",
        "1",
        "--s",
        "0.5",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2), "stderr: {}", stderr(&out));
    let err = stderr(&out);
    assert!(err.contains("aborted at t ="), "stderr: {err}");
    let text = fs::read_to_string(&path).unwrap();
    assert!(text.starts_with(TRAJECTORY_HEADER));
    assert!(text.lines().count() >= 2, "partial table still has rows");
}

#[test]
fn equivalence_reports_one_ndjson_line() {
    let out = cshsim(&[
        "equivalence",
        "--n",
        "8",
        "--dt",
        "0.02",
        "--t-end",
        "0.2",
        "--amplitude",
        "0.01",
    ]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr(&out));
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 1, "single-line report: {text}");
    let report: serde_json::Value = serde_json::from_str(lines[0]).unwrap();
    assert_eq!(report["report"], "equivalence");
    let distance = report["l2_distance"].as_f64().unwrap();
    assert!(distance.is_finite() && distance >= 0.0);
}

#[test]
fn convergence_and_continuity_write_study_tables() {
    let out = cshsim(&[
        "convergence",
        "--n",
        "8",
        "--t-end",
        "0.2",
        "--amplitude",
        "0.05",
        "--dts",
        "0.02,0.01",
    ]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr(&out));
    let text = stdout(&out);
    assert_eq!(text.lines().next(), Some("dt,error,gauss_rel"));
    assert_eq!(text.lines().count(), 3);

    let out = cshsim(&[
        "probe-continuity",
        "--n",
        "8",
        "--dt",
        "0.02",
        "--t-end",
        "0.2",
        "--amplitude",
        "0.01",
        "--deltas",
        "1e-3,1e-4",
    ]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr(&out));
    let text = stdout(&out);
    assert_eq!(text.lines().next(), Some("delta,distance,ratio"));
    assert_eq!(text.lines().count(), 3);
    assert!(stderr(&out).contains("ratio spread"));
}

#[test]
fn seed_sweep_fans_out_to_one_file_per_seed() {
    let dir = tempfile::tempdir().unwrap();
    let base = dir.path().join("traj.csv");
    let out = cshsim(&[
        "simulate",
        "--n",
        "8",
        "--dt",
        "0.05",
        "--t-end",
        "0.1",
        "--amplitude",
        "0.01",
        "--seeds",
        "1,2",
        "--out",
        base.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr(&out));
    let a = fs::read_to_string(dir.path().join("traj-seed1.csv")).unwrap();
    let b = fs::read_to_string(dir.path().join("traj-seed2.csv")).unwrap();
    assert!(a.starts_with(TRAJECTORY_HEADER) && b.starts_with(TRAJECTORY_HEADER));
    assert_ne!(a, b, "different seeds draw different data");
    assert!(
        !Path::new(&base).exists(),
        "sweep writes only per-seed files"
    );
}

#[test]
fn seed_sweep_requires_an_output_path() {
    let out = cshsim(&["simulate", "--n", "8", "--seeds", "1,2"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(
        stderr(&out).contains("seed sweep"),
        "stderr: {}",
        stderr(&out)
    );
}

#[test]
fn check_estimates_verdicts_at_and_above_critical() {
    let out = cshsim(&["check-estimates", "--reg-s", "3/10"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert_eq!(text.lines().count(), 6);
    for line in text.lines() {
        let report: serde_json::Value = serde_json::from_str(line).unwrap();
        assert_eq!(report["verdict"], "pass", "line: {line}");
    }

    let out = cshsim(&["check-estimates", "--reg-s", "1/4"]);
    assert_eq!(out.status.code(), Some(0));
    let mut failing: Vec<String> = stdout(&out)
        .lines()
        .map(|line| serde_json::from_str::<serde_json::Value>(line).unwrap())
        .filter(|r| r["verdict"] == "fail")
        .map(|r| r["label"].as_str().unwrap().to_string())
        .collect();
    failing.sort();
    assert_eq!(failing, ["acf-grad-high", "q12/case1"]);

    let out = cshsim(&["check-estimates", "--reg-s", "not-a-number"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn angle_sample_is_deterministic_per_seed() {
    let args = ["angle-sample", "--samples", "2000", "--seed", "2026"];
    let first = cshsim(&args);
    let second = cshsim(&args);
    assert_eq!(first.status.code(), Some(0));
    assert_eq!(
        stdout(&first),
        stdout(&second),
        "same seed, same report bytes"
    );
    let report: serde_json::Value = serde_json::from_str(stdout(&first).trim()).unwrap();
    assert!(report["max_ratio"].as_f64().unwrap().is_finite());

    let other = cshsim(&["angle-sample", "--samples", "2000", "--seed", "7"]);
    assert_ne!(
        stdout(&first),
        stdout(&other),
        "different seed, different draw"
    );
}

#[test]
fn gen_data_is_deterministic_and_scales_to_zero() {
    let args = [
        "gen-data",
        "--n",
        "16",
        "--amplitude",
        "0.05",
        "--seed",
        "9",
    ];
    let first = cshsim(&args);
    let second = cshsim(&args);
    assert_eq!(first.status.code(), Some(0));
    assert_eq!(stdout(&first), stdout(&second));

    let zero = cshsim(&["gen-data", "--n", "16", "--amplitude", "0", "--seed", "9"]);
    let report: serde_json::Value = serde_json::from_str(stdout(&zero).trim()).unwrap();
    assert_eq!(report["h_phi0"].as_f64().unwrap(), 0.0);
    assert_eq!(report["h_phi1"].as_f64().unwrap(), 0.0);
    assert_eq!(report["acf_l2"].as_f64().unwrap(), 0.0);
}

#[test]
fn flags_override_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("run.ini");
    fs::write(
        &path,
        "n = 8\ndt = 0.05\nt_end = 0.05\namplitude = 0.01\nrecord_every = 1\n",
    )
    .unwrap();
    let out = cshsim(&[
        "simulate",
        "--config",
        path.to_str().unwrap(),
        "--dt",
        "0.025",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let second_row_t: f64 = text
        .lines()
        .nth(2)
        .unwrap()
        .split(',')
        .next()
        .unwrap()
        .parse()
        .unwrap();
    assert_eq!(
        second_row_t, 0.025,
        "flag dt must override the file's 0.05 step"
    );
}

#[test]
fn help_exits_zero() {
    let out = cshsim(&["--help"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    for sub in [
        "simulate",
        "equivalence",
        "convergence",
        "probe-continuity",
        "check-estimates",
        "angle-sample",
        "gen-data",
    ] {
        assert!(text.contains(sub), "help must list `{sub}`");
    }
}
