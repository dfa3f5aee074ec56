//! CLI-level acceptance: determinism of the residual scan (criterion 12),
//! the exit-code contract, and output-schema stability.

use std::process::{Command, Output};
use std::time::Instant;

fn gammascope(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gammascope"))
        .args(args)
        .output()
        .expect("failed to spawn gammascope")
}

#[test]
fn criterion_12_residual_scan_byte_identical() {
    let args = ["residual", "--s-start", "1.1", "--s-end", "5.1", "--s-step", "0.25"];
    let start = Instant::now();
    let a = gammascope(&args);
    let b = gammascope(&args);
    let elapsed = start.elapsed();
    let pass = a.status.code() == Some(0)
        && b.status.code() == Some(0)
        && a.stdout == b.stdout
        && !a.stdout.is_empty()
        && elapsed.as_secs_f64() < 30.0;
    println!(
        "criterion 12 [{}] residual scan 1.1..5.1 step 0.25 is byte-identical across runs, < 30 s — {} bytes, elapsed={elapsed:?}",
        if pass { "PASS" } else { "FAIL" },
        a.stdout.len(),
    );
    assert!(pass);
}

#[test]
fn exit_code_contract() {
    // completed run, findings allowed -> 0
    assert_eq!(gammascope(&["selftest"]).status.code(), Some(0));
    let diverging = gammascope(&["residual", "--s-start", "1.5", "--s-end", "1.5", "--s-step", "1"]);
    assert_eq!(diverging.status.code(), Some(0), "findings must not fail the run");
    assert!(!diverging.stderr.is_empty(), "divergence should be reported as a finding");

    // usage / configuration errors -> 1
    assert_eq!(gammascope(&["residual", "--s-start", "5", "--s-end", "2", "--s-step", "1"]).status.code(), Some(1));
    assert_eq!(gammascope(&["residual", "--s-start", "0.5", "--s-end", "2", "--s-step", "1"]).status.code(), Some(1));
    assert_eq!(gammascope(&["--abs-tol", "-1", "selftest"]).status.code(), Some(1));
    assert_eq!(gammascope(&["no-such-command"]).status.code(), Some(1));

    // numerical failure -> 2 (tolerance below what f64 summation can certify)
    assert_eq!(gammascope(&["--abs-tol", "1e-15", "selftest"]).status.code(), Some(2));

    // help and version are successful exits
    assert_eq!(gammascope(&["--help"]).status.code(), Some(0));
    assert_eq!(gammascope(&["--version"]).status.code(), Some(0));
}

#[test]
fn csv_header_and_line_endings() {
    let out = gammascope(&["residual", "--s-start", "2", "--s-end", "3", "--s-step", "0.5"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next(),
        Some("s,gate,finite_block,tail_partial,tail_diverged,lhs,rhs,residual,j_max,terms_capped")
    );
    assert_eq!(lines.count(), 3, "three grid points expected");
    assert!(!text.contains('\r'), "LF line endings only");
}

#[test]
fn json_schema_keys() {
    let out = gammascope(&["--format", "json", "residual", "--s-start", "2", "--s-end", "2", "--s-step", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let obj = doc.as_object().unwrap();
    for key in ["version", "config", "rows", "findings"] {
        assert!(obj.contains_key(key), "missing top-level key {key}");
    }
    let rows = doc["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 1);
    assert_eq!(rows[0]["rhs"], 0.5);
    assert_eq!(rows[0]["gate"], 0.0);
}

#[test]
fn trace_reports_divergence_window() {
    let out = gammascope(&["trace", "--s", "1.5", "--family", "eta"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("j,term,partial_sum,ratio_flag\n"));
    assert!(text.contains(",true"), "late terms should be flagged as growing");
    let findings = String::from_utf8(out.stderr).unwrap();
    assert!(findings.contains("diverge"), "expected a divergence finding, got: {findings}");
}

#[test]
fn output_file_matches_stdout() {
    let dir = std::env::temp_dir().join(format!("gammascope-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("out.csv");
    let to_stdout = gammascope(&["residual", "--s-start", "2", "--s-end", "4", "--s-step", "1"]);
    let to_file = gammascope(&[
        "--output", path.to_str().unwrap(),
        "residual", "--s-start", "2", "--s-end", "4", "--s-step", "1",
    ]);
    assert_eq!(to_file.status.code(), Some(0));
    assert_eq!(std::fs::read(&path).unwrap(), to_stdout.stdout);
    std::fs::remove_dir_all(&dir).unwrap();
}
