//! End-to-end tests of the `fracroot` binary: flag parsing, output
//! formats, exit codes, and the manifest round-trip.

use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_fracroot"))
}

/// Fresh per-test scratch directory.
fn scratch(tag: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("fracroot-cli-{tag}-{}", std::process::id()));
    let _ = fs::remove_dir_all(&dir);
    fs::create_dir_all(&dir).expect("can create scratch dir");
    dir
}

fn stdout_of(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

#[test]
fn solve_classical_rows_match_published_counts() {
    let out = bin()
        .args(["solve", "--method", "cfn1", "--function", "f1", "--alpha", "1", "--x0", "-1.5"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let text = stdout_of(&out);
    assert!(text.contains("-0.58400"), "unexpected approximation in {text}");
    let row: Vec<&str> = text.lines().nth(1).unwrap().split_whitespace().collect();
    assert_eq!(row[3], "6", "iteration column in {text}");

    let out = bin()
        .args(["solve", "--method", "cft", "--function", "f1", "--alpha", "1", "--x0", "-1.5"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let text = stdout_of(&out);
    let row: Vec<&str> = text.lines().nth(1).unwrap().split_whitespace().collect();
    assert_eq!(row[3], "5", "iteration column in {text}");
}

#[test]
fn solve_starting_at_the_root_converges_in_zero_iterations() {
    let out = bin()
        .args(["solve", "--method", "cfn2", "--function", "f3", "--alpha", "0.5", "--x0", "0"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let text = stdout_of(&out);
    let row: Vec<&str> = text.lines().nth(1).unwrap().split_whitespace().collect();
    assert_eq!(row[3], "0", "iteration column in {text}");
    assert!(text.contains("converged-residual"), "{text}");
}

#[test]
fn solve_exit_codes_follow_termination_status() {
    // Below alpha ~ 0.72 the damped Caputo Newton iteration on f1 stalls on
    // a spurious attractor: iteration cap.
    let out = bin()
        .args(["solve", "--method", "cfn1", "--function", "f1", "--alpha", "0.5", "--x0", "-1.5"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2), "expected the iteration cap");

    // A huge imaginary start blows the Mittag-Leffler argument bound:
    // numerical failure.
    let out = bin()
        .args(["solve", "--method", "cfn1", "--function", "f3", "--alpha", "0.5", "--x0", "0,1e6"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3), "expected numerical failure");

    // Unknown method: usage error.
    let out = bin()
        .args(["solve", "--method", "nope", "--function", "f1", "--alpha", "1", "--x0", "0"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1), "expected usage error");
    assert!(!out.stderr.is_empty());

    // Missing required flag: usage error from the parser.
    let out = bin().args(["solve", "--method", "cfn1"]).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn solve_trace_writes_csv_and_manifest() {
    let dir = scratch("trace");
    let trace = dir.join("run.csv");
    let out = bin()
        .args(["solve", "--method", "cfn1", "--function", "f1", "--alpha", "1", "--x0", "-1.5"])
        .arg("--trace")
        .arg(&trace)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));

    let body = fs::read_to_string(&trace).unwrap();
    let mut lines = body.lines();
    assert_eq!(lines.next(), Some("k,x_re,x_im,residual"));
    // 6 iterations -> starting point + 6 iterates.
    assert_eq!(lines.count(), 7);

    let manifest = fs::read_to_string(dir.join("run.manifest.json")).unwrap();
    let parsed: serde_json::Value = serde_json::from_str(&manifest).unwrap();
    assert_eq!(parsed["config"]["kind"], "solve");
    assert_eq!(parsed["config"]["alpha"], 1.0);
    assert_eq!(parsed["outputs"][0], trace.to_str().unwrap());
    assert!(parsed["duration_seconds"].as_f64().unwrap() >= 0.0);
}

#[test]
fn plane_writes_outputs_and_prints_percentage() {
    let dir = scratch("plane");
    let prefix = dir.join("p");
    let out = bin()
        .args(["plane", "--method", "cfn1", "--function", "f1", "--axis", "real"])
        .args(["--lo", "-1", "--hi", "0", "--alpha-lo", "0.3", "--alpha-hi", "1"])
        .args(["--nx", "40", "--nalpha", "20", "--out"])
        .arg(&prefix)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "stderr: {}", String::from_utf8_lossy(&out.stderr));

    let text = stdout_of(&out);
    let pct = text.trim();
    assert!(
        pct.split('.').nth(1).map(str::len) == Some(2) && pct.parse::<f64>().is_ok(),
        "percentage with 2 decimals expected, got {pct:?}"
    );

    let ppm = fs::read(dir.join("p.ppm")).unwrap();
    assert!(ppm.starts_with(b"P6\n40 20\n255\n"));
    assert_eq!(ppm.len(), b"P6\n40 20\n255\n".len() + 40 * 20 * 3);

    let csv = fs::read_to_string(dir.join("p.csv")).unwrap();
    assert!(csv.starts_with("alpha,x0_re,x0_im,root_index,iterations\n"));
    assert_eq!(csv.lines().count(), 1 + 40 * 20);

    assert!(dir.join("p.manifest.json").exists());
}

#[test]
fn plane_manifest_round_trip_reproduces_bytes() {
    let dir = scratch("roundtrip");
    let first = dir.join("a");
    let out = bin()
        .args(["plane", "--method", "rlfn2", "--function", "f1", "--axis", "real"])
        .args(["--lo", "-1", "--hi", "0", "--alpha-lo", "0.6", "--alpha-hi", "1"])
        .args(["--nx", "25", "--nalpha", "10", "--out"])
        .arg(&first)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));

    let second = dir.join("b");
    let out = bin()
        .args(["plane", "--from-manifest"])
        .arg(dir.join("a.manifest.json"))
        .arg("--out")
        .arg(&second)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "stderr: {}", String::from_utf8_lossy(&out.stderr));

    assert_eq!(fs::read(dir.join("a.ppm")).unwrap(), fs::read(dir.join("b.ppm")).unwrap());
    assert_eq!(fs::read(dir.join("a.csv")).unwrap(), fs::read(dir.join("b.csv")).unwrap());
}

#[test]
fn plane_worker_count_does_not_change_output_bytes() {
    let dir = scratch("workers");
    for (tag, workers) in [("w1", "1"), ("w5", "5")] {
        let out = bin()
            .args(["plane", "--method", "cfn1", "--function", "f1", "--axis", "real"])
            .args(["--lo", "-1", "--hi", "0", "--alpha-lo", "0.5", "--alpha-hi", "1"])
            .args(["--nx", "20", "--nalpha", "12", "--workers", workers, "--out"])
            .arg(dir.join(tag))
            .output()
            .unwrap();
        assert_eq!(out.status.code(), Some(0));
    }
    // The env var is the default for --workers and must behave the same.
    let out = bin()
        .args(["plane", "--method", "cfn1", "--function", "f1", "--axis", "real"])
        .args(["--lo", "-1", "--hi", "0", "--alpha-lo", "0.5", "--alpha-hi", "1"])
        .args(["--nx", "20", "--nalpha", "12", "--out"])
        .arg(dir.join("we"))
        .env("FRACROOT_WORKERS", "3")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));

    let reference = fs::read(dir.join("w1.ppm")).unwrap();
    assert_eq!(reference, fs::read(dir.join("w5.ppm")).unwrap());
    assert_eq!(reference, fs::read(dir.join("we.ppm")).unwrap());
    let reference = fs::read(dir.join("w1.csv")).unwrap();
    assert_eq!(reference, fs::read(dir.join("w5.csv")).unwrap());
    assert_eq!(reference, fs::read(dir.join("we.csv")).unwrap());
}

#[test]
fn order_replay_recovers_a_synthetic_quadratic_order() {
    let dir = scratch("replay");
    let csv = dir.join("quad.csv");
    fs::write(
        &csv,
        "k,x_re,x_im,residual\n0,1e-1,0,0\n1,1e-2,0,0\n2,1e-4,0,0\n3,1e-8,0,0\n4,1e-16,0,0\n",
    )
    .unwrap();
    let out = bin()
        .args(["order", "--method", "cfn2", "--alpha", "1", "--root", "0", "--replay"])
        .arg(&csv)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let text = stdout_of(&out);
    assert!(text.contains("ACOC: 2.00"), "{text}");
    assert!(text.contains("theoretical order: 2.00 (alpha + 1)"), "{text}");
}

#[test]
fn order_replay_of_a_short_trace_exits_4() {
    let dir = scratch("short");
    let csv = dir.join("short.csv");
    fs::write(&csv, "k,x_re,x_im\n0,1,0\n1,0.5,0\n").unwrap();
    let out = bin()
        .args(["order", "--method", "cfn2", "--alpha", "1", "--root", "0", "--replay"])
        .arg(&csv)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(4));
    assert!(String::from_utf8_lossy(&out.stderr).contains("not enough"));
}

#[test]
fn order_on_classical_traub_reports_cubic_convergence() {
    // Root refined far beyond the 5-digit table value so the error
    // sequence stays meaningful down to the final iterate.
    let out = bin()
        .args(["order", "--method", "cft", "--function", "f1", "--alpha", "1"])
        .args(["--x0", "-1.5", "--root", "-0.5840021918683290"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let text = stdout_of(&out);
    let acoc: f64 =
        text.lines().find_map(|l| l.strip_prefix("ACOC: ")).expect("ACOC line").parse().unwrap();
    assert!((2.7..=3.3).contains(&acoc), "classical Traub ACOC {acoc} not near 3");
    assert!(text.contains("theoretical order: 3.00 (2*alpha + 1)"), "{text}");
    let ratio: f64 = text
        .lines()
        .find_map(|l| l.strip_prefix("constant ratio (empirical/theoretical): "))
        .expect("ratio line")
        .parse()
        .unwrap();
    assert!(ratio.is_finite() && ratio > 0.0, "ratio {ratio}");
}

#[test]
fn selftest_passes_with_at_least_30_checks() {
    let out = bin().arg("selftest").output().unwrap();
    assert_eq!(out.status.code(), Some(0), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let text = stdout_of(&out);
    let ok_lines = text.lines().filter(|l| l.starts_with("ok   ")).count();
    assert!(ok_lines >= 30, "only {ok_lines} checks");
    assert!(text.lines().last().unwrap().contains("checks passed"));
}

#[test]
fn selftest_sabotage_hook_is_detected() {
    let out = bin().args(["selftest", "--sabotage", "gamma"]).output().unwrap();
    assert_eq!(out.status.code(), Some(5));
    let text = stdout_of(&out);
    assert!(text.lines().any(|l| l.starts_with("FAIL ")), "{text}");

    // Unknown sabotage targets are usage errors, not check failures.
    let out = bin().args(["selftest", "--sabotage", "mittag"]).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
}
