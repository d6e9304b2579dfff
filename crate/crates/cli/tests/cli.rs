use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn run(cache: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_toric-severi"))
        .args(args)
        .env("TORIC_SEVERI_CACHE", cache)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn series_g_matches_reversion() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(dir.path(), &["series", "g", "--order", "3"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "0, 1, -6, 60\n");
    let json = run(dir.path(), &["series", "a", "--order", "2", "--format", "json"]);
    let coeffs: Vec<String> = serde_json::from_slice(&json.stdout).unwrap();
    assert_eq!(coeffs, ["1", "-6", "60"]);
}

#[test]
fn template_listings() {
    let dir = tempfile::tempdir().unwrap();
    let empty = run(dir.path(), &["templates", "--delta", "0"]);
    assert_eq!(serde_json::from_slice::<Vec<serde_json::Value>>(&empty.stdout).unwrap().len(), 0);
    let one = run(dir.path(), &["templates", "--delta", "1"]);
    let rows: Vec<serde_json::Value> = serde_json::from_slice(&one.stdout).unwrap();
    assert_eq!(rows.len(), 2);
    assert_eq!(rows[0]["eta"], serde_json::json!(["-1", "1"]));
    let two = run(dir.path(), &["templates", "--delta", "2", "--format", "tsv"]);
    let text = stdout(&two);
    assert_eq!(text.lines().count(), 8);
    assert!(text.contains("{0->1:2, 0->1:2}\t2\t1\t16\t0\t0\t(4)\t(2)\t-3/2\t0\t0\t5/2"));
}

#[test]
fn coefficient_table_json() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(dir.path(), &["coeffs", "--delta", "2"]);
    let tables: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(tables[1]["L"], "39/2");
    assert_eq!(tables[1]["Ctilde"], "-36");
    assert_eq!(tables[1]["b"], serde_json::json!(["-9/2", "1"]));
}

#[test]
fn cache_round_trip_is_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["coeffs", "--delta", "3"];
    let cold = run(dir.path(), &args);
    let entry = dir.path().join("v1").join("templates-3.json");
    assert!(entry.exists());
    let warm = run(dir.path(), &args);
    let mut uncached_args = args.to_vec();
    uncached_args.push("--no-cache");
    let uncached = run(dir.path(), &uncached_args);
    assert_eq!(cold.stdout, warm.stdout);
    assert_eq!(cold.stdout, uncached.stdout);

    let good = fs::read(&entry).unwrap();
    let tampered = String::from_utf8(good.clone()).unwrap().replacen("\"A\":\"230\"", "\"A\":\"0\"", 1);
    assert_ne!(tampered.as_bytes(), good.as_slice());
    fs::write(&entry, tampered).unwrap();
    let recovered = run(dir.path(), &args);
    assert!(recovered.status.success());
    assert_eq!(recovered.stdout, cold.stdout);
    assert_eq!(fs::read(&entry).unwrap(), good);
}

#[test]
fn output_ignores_thread_count() {
    let dir = tempfile::tempdir().unwrap();
    let a = run(dir.path(), &["coeffs", "--delta", "3", "--no-cache", "--threads", "1"]);
    let b = run(dir.path(), &["coeffs", "--delta", "3", "--no-cache", "--threads", "4"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn verify_suites_pass() {
    let dir = tempfile::tempdir().unwrap();
    for suite in ["table1", "coeffs", "gyz", "oracle", "toric"] {
        let out = run(dir.path(), &["verify", suite, "--order", "3"]);
        assert_eq!(out.status.code(), Some(0), "{suite}: {}", stdout(&out));
        assert!(stdout(&out).starts_with(&format!("{suite}\tPASS")));
    }
}

#[test]
fn severi_from_file_and_out_path() {
    let dir = tempfile::tempdir().unwrap();
    let polygon = dir.path().join("p.json");
    fs::write(&polygon, r#"{"dt": 0, "left": [[0, 4]], "right": [[1, 4]]}"#).unwrap();
    let target = dir.path().join("report.json");
    let out = run(
        dir.path(),
        &["severi", "--polygon", polygon.to_str().unwrap(), "--delta", "2", "--out", target.to_str().unwrap()],
    );
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let report: serde_json::Value = serde_json::from_str(&fs::read_to_string(&target).unwrap()).unwrap();
    assert_eq!(report["agree"], true);
    for method in ["bruteforce", "closed", "geometric"] {
        assert_eq!(report["rows"][2]["values"][method]["N"], "225");
    }
}

#[test]
fn unmet_preconditions_are_reported() {
    let dir = tempfile::tempdir().unwrap();
    let polygon = dir.path().join("small.json");
    fs::write(&polygon, r#"{"vertices": [[0,0],[2,0],[0,2]]}"#).unwrap();
    let out = run(dir.path(), &["severi", "--polygon", polygon.to_str().unwrap(), "--delta", "3", "--format", "tsv"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("3\tclosed\tprecondition_unmet"));
}

#[test]
fn input_errors_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let polygon = dir.path().join("bad.json");
    fs::write(&polygon, r#"{"vertices": [[0,0],[2,0],[3,2],[1,3],[0,2]]}"#).unwrap();
    let bad = run(dir.path(), &["severi", "--polygon", polygon.to_str().unwrap(), "--delta", "1"]);
    assert_eq!(bad.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&bad.stderr).contains("h-transverse"));
    let missing = run(dir.path(), &["severi", "--polygon", "/nonexistent.json", "--delta", "1"]);
    assert_eq!(missing.status.code(), Some(2));
    let unknown = run(dir.path(), &["series", "nope", "--order", "2"]);
    assert_eq!(unknown.status.code(), Some(2));
}
