//! Black-box tests of the `mckay` binary: output shapes, exit codes,
//! determinism, and the result cache.

use std::path::Path;
use std::process::{Command, Output};

use mckay::{affine_positive_real_roots, z_dt, MultiSeries, Sign};
use num_bigint::BigInt;
use serde_json::Value;

fn mckay_cmd() -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_mckay"));
    // Isolate from the ambient environment; tests opt in explicitly.
    cmd.env_remove("MCKAY_CACHE_DIR");
    cmd
}

fn run(args: &[&str]) -> Output {
    mckay_cmd().args(args).output().expect("binary runs")
}

fn stdout_str(output: &Output) -> String {
    String::from_utf8(output.stdout.clone()).expect("stdout is UTF-8")
}

fn stderr_str(output: &Output) -> String {
    String::from_utf8(output.stderr.clone()).expect("stderr is UTF-8")
}

fn stdout_json(output: &Output) -> Value {
    serde_json::from_str(&stdout_str(output)).expect("stdout is JSON")
}

#[test]
fn roots_d5_lists_twenty_vectors() {
    let out = run(&["roots", "D5"]);
    assert!(out.status.success());
    let text = stdout_str(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 20);
    assert!(lines.contains(&"(1,1,2,2,1)"), "missing the highest root");
}

#[test]
fn roots_a1_lists_one_vector() {
    let out = run(&["roots", "A1"]);
    assert!(out.status.success());
    assert_eq!(stdout_str(&out), "(1)\n");
}

#[test]
fn affine_roots_include_both_low_families() {
    let out = run(&["roots", "D5", "--affine", "--bound", "16"]);
    assert!(out.status.success());
    let text = stdout_str(&out);
    let lines: Vec<&str> = text.lines().collect();
    let expected = affine_positive_real_roots("D5".parse().unwrap(), 16);
    assert_eq!(lines.len(), expected.len());
    // delta - theta (m = 1) and 2 delta - theta (m = 2)
    assert!(lines.contains(&"(1,0,0,0,0,0)"));
    assert!(lines.contains(&"(2,1,1,2,2,1)"));
}

#[test]
fn roots_json_shape() {
    let out = run(&["roots", "A2", "--output", "json"]);
    assert!(out.status.success());
    let payload = stdout_json(&out);
    assert_eq!(payload["label"], "A2");
    assert_eq!(payload["affine"], false);
    assert_eq!(payload["roots"].as_array().unwrap().len(), 3);
}

#[test]
fn partition_ncdt_has_constant_term_one() {
    let out = run(&[
        "partition", "--label", "A1", "--kind", "NCDT", "--order", "4", "--output", "json",
    ]);
    assert!(out.status.success());
    let payload = stdout_json(&out);
    assert_eq!(payload["kind"], "ncdt");
    assert_eq!(payload["assumed_dt_pt"], true);
    assert_eq!(payload["macmahon_exponent"], 2);
    let first_term = &payload["series"]["terms"][0];
    assert_eq!(first_term[0], serde_json::json!([0, 0]));
    assert_eq!(first_term[1], "1");
}

#[test]
fn partition_chamber_with_positive_zeta_is_one() {
    let out = run(&[
        "partition", "--label", "A1", "--kind", "Chamber", "--zeta", "1,1", "--order", "4",
    ]);
    assert!(out.status.success());
    assert_eq!(stdout_str(&out), "1\n");
}

#[test]
fn partition_d5_pt_factors_are_the_m1_row() {
    let out = run(&[
        "partition", "--label", "D5", "--kind", "PT+", "--order", "8", "--output", "factors",
    ]);
    assert!(out.status.success());
    let text = stdout_str(&out);
    let lines: Vec<&str> = text.lines().collect();
    // At order 8 only the m = 1 family contributes: one factor per root.
    assert_eq!(lines.len(), 20);
    for line in &lines {
        assert!(line.starts_with("(1+"), "m = 1 factors have inner sign +");
        assert!(line.ends_with(")^-1"), "m = 1 factors have power -1");
    }
}

#[test]
fn partition_gw_series_has_no_constant_term_issue() {
    let out = run(&[
        "partition", "--label", "A1", "--kind", "gw", "--order", "4", "--output", "json",
    ]);
    assert!(out.status.success());
    let payload = stdout_json(&out);
    assert_eq!(payload["assumed_dt_pt"], Value::Null);
    assert_eq!(payload["series"]["vars"], serde_json::json!(["u", "t1"]));
}

#[test]
fn usage_errors_exit_two() {
    let cases: Vec<Vec<&str>> = vec![
        vec!["roots", "Q9"],
        vec!["partition", "--label", "A1", "--kind", "NCDT", "--order", "4", "--zeta", "1,1"],
        vec!["partition", "--label", "A1", "--kind", "Chamber", "--order", "4"],
        vec!["partition", "--label", "A2", "--kind", "Chamber", "--zeta", "1,1", "--order", "4"],
        vec!["partition", "--label", "A1", "--kind", "Chamber", "--zeta", "1,x", "--order", "4"],
        vec!["partition", "--label", "A1", "--kind", "nope", "--order", "4"],
        vec!["roots", "A1", "--output", "factors"],
        vec!["check", "--which", "gw-pt", "--order", "6"],
        vec!["check", "--label", "A2", "--which", "d5", "--order", "6"],
    ];
    for args in cases {
        let out = run(&args);
        assert_eq!(
            out.status.code(),
            Some(2),
            "expected usage error for {args:?}, stderr: {}",
            stderr_str(&out)
        );
    }
    // Invalid label errors state the accepted grammar.
    let out = run(&["roots", "Q9"]);
    assert!(stderr_str(&out).contains("\"A3\""));
}

#[test]
fn zeta_on_a_wall_exits_one_and_names_the_root() {
    let out = run(&[
        "partition", "--label", "A1", "--kind", "Chamber", "--zeta", "1,-1", "--order", "4",
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(
        stderr_str(&out).contains("(1,1)"),
        "the wall's root is printed: {}",
        stderr_str(&out)
    );
}

#[test]
fn stdout_is_deterministic() {
    let args = [
        "partition", "--label", "A2", "--kind", "dt-", "--order", "6", "--output", "json",
    ];
    let first = run(&args);
    let second = run(&args);
    assert!(first.status.success());
    assert_eq!(first.stdout, second.stdout);
}

fn cache_files(dir: &Path) -> Vec<std::path::PathBuf> {
    std::fs::read_dir(dir)
        .unwrap()
        .map(|entry| entry.unwrap().path())
        .collect()
}

#[test]
fn cache_round_trip_is_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let args = [
        "partition", "--label", "A2", "--kind", "dt+", "--order", "6", "--output", "json",
    ];

    let first = mckay_cmd()
        .args(args)
        .arg("--cache-dir")
        .arg(dir.path())
        .output()
        .unwrap();
    assert!(first.status.success());
    assert!(!stderr_str(&first).contains("cache hit"));
    let files = cache_files(dir.path());
    assert_eq!(files.len(), 1, "one cache entry written");
    assert_eq!(files[0].extension().unwrap(), "json");

    let second = mckay_cmd()
        .args(args)
        .arg("--cache-dir")
        .arg(dir.path())
        .output()
        .unwrap();
    assert!(second.status.success());
    assert!(stderr_str(&second).contains("cache hit"));
    assert_eq!(first.stdout, second.stdout);

    // The stored series deserializes to exactly the fresh computation.
    let entry: Value =
        serde_json::from_str(&std::fs::read_to_string(&files[0]).unwrap()).unwrap();
    let cached = MultiSeries::<BigInt>::from_json(&entry["result"]["series"]).unwrap();
    let fresh = z_dt("A2".parse().unwrap(), Sign::Plus, 6).unwrap().series;
    assert_eq!(cached, fresh);
    assert!(entry["unix_timestamp"].is_u64(), "timestamp lives in the cache file");
    // ... and never on stdout.
    assert!(!stdout_str(&first).contains("timestamp"));
}

#[test]
fn cache_env_var_and_no_cache_flag() {
    let dir = tempfile::tempdir().unwrap();
    let args = [
        "partition", "--label", "A1", "--kind", "pt+", "--order", "4",
    ];

    // --no-cache wins over the environment: nothing is written.
    let out = mckay_cmd()
        .args(args)
        .arg("--no-cache")
        .env("MCKAY_CACHE_DIR", dir.path())
        .output()
        .unwrap();
    assert!(out.status.success());
    assert_eq!(cache_files(dir.path()).len(), 0);

    // The environment variable alone enables the cache.
    let first = mckay_cmd()
        .args(args)
        .env("MCKAY_CACHE_DIR", dir.path())
        .output()
        .unwrap();
    assert!(first.status.success());
    assert_eq!(cache_files(dir.path()).len(), 1);

    let second = mckay_cmd()
        .args(args)
        .env("MCKAY_CACHE_DIR", dir.path())
        .output()
        .unwrap();
    assert!(stderr_str(&second).contains("cache hit"));
    assert_eq!(first.stdout, second.stdout);
}

#[test]
fn check_verifiers_pass_and_exit_zero() {
    let out = run(&["check", "--label", "A2", "--which", "crepant", "--order", "8"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr_str(&out));
    assert!(stdout_str(&out).contains("pass: true"));

    let out = run(&["check", "--which", "d5", "--order", "6"]);
    assert_eq!(out.status.code(), Some(0));

    let out = run(&["check", "--label", "A1", "--which", "gw-pt", "--order", "6"]);
    assert_eq!(out.status.code(), Some(0));

    let out = run(&[
        "check", "--label", "A1", "--which", "bps", "--order", "8", "--output", "json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let payload = stdout_json(&out);
    assert_eq!(payload["pass"], true);
    assert_eq!(payload["report"]["genus0"][0]["n"], "-1");
}

#[test]
fn quiver_lists_arrows_and_superpotential() {
    let out = run(&["quiver", "A1", "--framed"]);
    assert!(out.status.success());
    let text = stdout_str(&out);
    assert!(text.contains("arrow l_{0}: 0 -> 0 [loop]"));
    assert!(text.contains("arrow f: f -> 0 [framing]"));
    assert!(text.contains("+ [")); // superpotential terms are listed
    assert!(text.contains("- ["));
}

#[test]
fn walls_list_includes_the_imaginary_wall() {
    let out = run(&["walls", "A2", "--bound", "4"]);
    assert!(out.status.success());
    assert!(stdout_str(&out).contains("W(1,1,1) (imaginary)"));
}
