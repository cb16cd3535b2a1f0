//! End-to-end behaviour of the `twdp` binary.

use std::path::PathBuf;
use std::process::{Command, Output};

fn twdp() -> Command {
    Command::new(env!("CARGO_BIN_EXE_twdp"))
}

fn run_ok(args: &[&str]) -> String {
    let out = twdp().args(args).output().expect("spawn twdp");
    assert!(
        out.status.success(),
        "`twdp {}` failed: {}",
        args.join(" "),
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).expect("utf8 stdout")
}

fn tmpdir(tag: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("twdp-cli-{tag}-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

#[test]
fn convert_gamma_to_delta() {
    let out = run_ok(&["convert", "--gamma", "0.5"]);
    let value: f64 = out.trim().strip_prefix("delta=").unwrap().parse().unwrap();
    assert_eq!(value, 0.8);
}

#[test]
fn convert_delta_to_gamma() {
    let out = run_ok(&["convert", "--delta", "0.8"]);
    let value: f64 = out.trim().strip_prefix("gamma=").unwrap().parse().unwrap();
    assert!((value - 0.5).abs() < 1e-12);
}

#[test]
fn sample_then_estimate_round_trip() {
    let dir = tmpdir("roundtrip");
    let samples = dir.join("samples.csv");
    run_ok(&[
        "sample", "--k", "5", "--gamma", "0.5", "--n", "20000", "--seed", "11", "--out",
        samples.to_str().unwrap(),
    ]);
    let out = run_ok(&["estimate", "--in", samples.to_str().unwrap()]);
    let mut lines = out.lines();
    assert_eq!(lines.next().unwrap(), "k_hat,gamma_hat,delta_hat,raw_delta_hat,status");
    let row: Vec<&str> = lines.next().unwrap().split(',').collect();
    let k_hat: f64 = row[0].parse().unwrap();
    let gamma_hat: f64 = row[1].parse().unwrap();
    assert!((k_hat - 5.0).abs() < 1.0, "k_hat {k_hat}");
    assert!((gamma_hat - 0.5).abs() < 0.1, "gamma_hat {gamma_hat}");
    assert_eq!(row[4], "ok");
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn estimate_rayleigh_gives_k_near_zero() {
    let dir = tmpdir("rayleigh");
    let samples = dir.join("rayleigh.csv");
    run_ok(&[
        "sample", "--k", "0", "--gamma", "0", "--n", "50000", "--seed", "5", "--out",
        samples.to_str().unwrap(),
    ]);
    let out = run_ok(&["estimate", "--in", samples.to_str().unwrap()]);
    let row = out.lines().nth(1).unwrap();
    let k_hat: f64 = row.split(',').next().unwrap().parse().unwrap();
    assert!(k_hat.abs() < 0.2, "k_hat {k_hat} not near 0");
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn seed_env_fallback() {
    let with_flag = twdp()
        .args(["sample", "--k", "1", "--gamma", "0.5", "--n", "5", "--seed", "123"])
        .output()
        .unwrap();
    let with_env = twdp()
        .args(["sample", "--k", "1", "--gamma", "0.5", "--n", "5"])
        .env("TWDP_SEED", "123")
        .output()
        .unwrap();
    assert_eq!(with_flag.stdout, with_env.stdout);
}

#[test]
fn usage_errors_exit_one() {
    let out = twdp().args(["convert"]).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    let out = twdp().args(["sample", "--k", "-3", "--gamma", "0.5"]).output().unwrap();
    assert_eq!(out.status.code(), Some(1), "domain error should exit 1");
    let out = twdp().args(["--format", "json", "moments", "--k", "1", "--gamma", "0.5"]).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn numerical_failures_exit_two() {
    // CRB at the Gamma boundary is a numerical/boundary failure
    let out = twdp().args(["crb", "--k", "5", "--gamma", "0"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    // unreadable input file surfaces as an I/O failure
    let out = twdp().args(["estimate", "--in", "/nonexistent/nope.csv"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn perf_grid_has_expected_columns() {
    let out = run_ok(&["perf", "--k", "5", "--gamma", "0.5"]);
    let mut lines = out.lines();
    let header = lines.next().unwrap();
    assert!(header.starts_with("k,gamma,asv_k,asv_gamma,asv_delta,crb_k,crb_gamma"));
    let row: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert_eq!(row.len(), 13);
    let asv_k: f64 = row[2].parse().unwrap();
    assert!((asv_k / 1075.125 - 1.0).abs() < 1e-6);
}

#[test]
fn sweep_dump_raw_reaggregates_exactly() {
    let dir = tmpdir("dumpraw");
    let rows_path = dir.join("rows.csv");
    let raw_path = dir.join("raw.csv");
    run_ok(&[
        "sweep", "--k", "4", "--gamma", "0.6", "--n", "500", "--reps", "40", "--seed", "21",
        "--out", rows_path.to_str().unwrap(), "--dump-raw", raw_path.to_str().unwrap(),
    ]);
    let rows = std::fs::read_to_string(&rows_path).unwrap();
    let raw = std::fs::read_to_string(&raw_path).unwrap();
    let row: Vec<&str> = rows.lines().nth(1).unwrap().split(',').collect();
    // realizations with hard failures leave empty estimate fields and do
    // not enter the aggregates
    let (mut sum, mut min, mut max, mut lines, mut with_k) =
        (0.0_f64, f64::INFINITY, f64::NEG_INFINITY, 0, 0);
    for line in raw.lines().skip(1) {
        let cols: Vec<&str> = line.split(',').collect();
        lines += 1;
        if cols[3].is_empty() {
            continue;
        }
        let k_hat: f64 = cols[3].parse().unwrap();
        sum += k_hat;
        min = min.min(k_hat);
        max = max.max(k_hat);
        with_k += 1;
    }
    assert_eq!(lines, 40);
    assert!(with_k > 0);
    let mean_from_raw = sum / with_k as f64;
    let mean: f64 = row[2].parse().unwrap();
    let row_min: f64 = row[3].parse().unwrap();
    let row_max: f64 = row[4].parse().unwrap();
    assert!((mean - mean_from_raw).abs() < 1e-12 * mean.abs());
    assert_eq!(row_min, min);
    assert_eq!(row_max, max);
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn figure_grid_override_and_output() {
    let dir = tmpdir("figure");
    let path = dir.join("fig5.csv");
    run_ok(&[
        "figure", "--which", "fig5", "--k", "5", "--gamma", "0.2,0.4", "--out",
        path.to_str().unwrap(),
    ]);
    let text = std::fs::read_to_string(&path).unwrap();
    assert_eq!(text.lines().next().unwrap(), "k,v2_v1,err_gamma,err_delta_norm");
    assert_eq!(text.lines().count(), 3);
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn range_grid_syntax() {
    let out = run_ok(&["perf", "--k", "2:1:4", "--gamma", "0.5"]);
    assert_eq!(out.lines().count(), 4); // header + 3 rows
}

fn output_bytes(out: Output) -> Vec<u8> {
    assert!(out.status.success());
    out.stdout
}

#[test]
fn moments_are_byte_reproducible() {
    let a = output_bytes(twdp().args(["moments", "--k", "3", "--gamma", "0.7"]).output().unwrap());
    let b = output_bytes(twdp().args(["moments", "--k", "3", "--gamma", "0.7"]).output().unwrap());
    assert_eq!(a, b);
}
