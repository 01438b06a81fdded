use std::path::PathBuf;
use std::process::Command;

use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_quasiseq"))
}

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("fixtures")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

fn run(args: &[&str]) -> (i32, String, String) {
    let out = bin().args(args).output().expect("binary runs");
    (
        out.status.code().expect("exit code"),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

fn json(args: &[&str]) -> (i32, Value) {
    let (code, out, err) = run(args);
    let v = serde_json::from_str(&out).unwrap_or_else(|e| panic!("{e}: {out} {err}"));
    (code, v)
}

#[test]
fn factorial_sweep_exits_zero() {
    let (code, v) = json(&["ineq62", "--p", "2", "--n-max", "40"]);
    assert_eq!(code, 0);
    let checks = v["checks"].as_array().unwrap();
    assert_eq!(checks.len(), 1);
    let rows = checks[0]["evidence"].as_array().unwrap();
    // Σ_{n ≤ 40} 2n rows.
    assert_eq!(rows.len(), 40 * 41);
    assert!(rows.iter().all(|r| r["outcome"] == "confirmed"));
    assert!(checks[0]["ms"].is_null());
    assert_eq!(v["tool_version"], env!("CARGO_PKG_VERSION"));
}

#[test]
fn config_errors_exit_three() {
    assert_eq!(
        run(&["seq-check", "--spec", &fixture("malformed.json")]).0,
        3
    );
    assert_eq!(run(&["seq-check", "--spec", "/nonexistent/spec.json"]).0, 3);
    assert_eq!(run(&["seq-show"]).0, 3);
    assert_eq!(run(&["ineq62", "--n-max", "0"]).0, 3);
    assert_eq!(run(&["no-such-command"]).0, 3);
    assert_eq!(run(&["alpha", "--p", "1"]).0, 3);
    assert_eq!(
        run(&["seq-compare", "--spec", &fixture("constant.json")]).0,
        3
    );
}

#[test]
fn table_without_rule_is_inconclusive() {
    let (code, v) = json(&[
        "seq-check",
        "--spec",
        &fixture("table_ok.json"),
        "--checks",
        "quasianalytic",
    ]);
    assert_eq!(code, 2);
    assert_eq!(v["checks"][0]["verdict"]["outcome"], "inconclusive");
    assert_eq!(v["checks"][0]["verdict"]["reason"], "depth_exhausted");
}

#[test]
fn negative_fixture_is_refuted_with_witness() {
    let (code, v) = json(&[
        "seq-check",
        "--spec",
        &fixture("bad_table.json"),
        "--checks",
        "log_convex",
    ]);
    assert_eq!(code, 1);
    let verdict = &v["checks"][0]["verdict"];
    assert_eq!(verdict["outcome"], "refuted");
    let witness = &verdict["evidence"][0];
    assert_eq!(witness["index"], serde_json::json!([1]));
    assert_eq!(witness["outcome"], "refuted");
}

#[test]
fn gevrey_values_shown() {
    let (code, v) = json(&[
        "seq-show",
        "--spec",
        &fixture("gevrey1.json"),
        "--n-max",
        "4",
    ]);
    assert_eq!(code, 0);
    let lo_hi = |row: &Value| -> (f64, f64) {
        let p = |i: usize| row["value"][i].as_str().unwrap().parse::<f64>().unwrap();
        (p(0), p(1))
    };
    let (lo, hi) = lo_hi(&v["checks"][0]["evidence"][3]);
    assert!(lo <= 6f64.ln() && 6f64.ln() <= hi);
    let (lo, hi) = lo_hi(&v["checks"][1]["evidence"][4]);
    assert!(lo <= 576f64.ln() && 576f64.ln() <= hi);
}

#[test]
fn csv_headers_per_check_type() {
    let (code, out, _) = run(&["ckn", "--format", "csv", "--k-max", "3", "--n-max", "5"]);
    assert_eq!(code, 0);
    assert_eq!(
        out.lines().next().unwrap(),
        "k,n,c_num,c_den,bound_upper,verdict"
    );
    assert!(out.lines().any(|l| l.starts_with("2,3,1,1,")));
    let (code, out, _) = run(&["bang", "--format", "csv", "--n-max", "4"]);
    assert_eq!(code, 0);
    assert_eq!(
        out.lines().next().unwrap(),
        "n,lower_bound_log,value_log_lo,value_log_hi,ceiling_log,verdict"
    );
    assert_eq!(out.lines().count(), 1 + 9);
    let (_, out, _) = run(&["ineq62", "--format", "csv", "--n-max", "2"]);
    assert_eq!(
        out.lines().next().unwrap(),
        "check,index,value_lo,value_hi,bound_lo,bound_hi,verdict"
    );
}

#[test]
fn out_directory_reports_are_content_addressed() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    let args = ["ineq62", "--n-max", "5", "--out", d];
    assert_eq!(run(&args).0, 0);
    assert_eq!(run(&args).0, 0);
    let names: Vec<_> = std::fs::read_dir(d)
        .unwrap()
        .map(|e| e.unwrap().file_name())
        .collect();
    assert_eq!(names.len(), 1, "{names:?}");
    let name = names[0].to_str().unwrap();
    assert!(name.starts_with("report-") && name.ends_with(".json"));
    // A different config gets its own document.
    assert_eq!(run(&["ineq62", "--n-max", "6", "--out", d]).0, 0);
    assert_eq!(std::fs::read_dir(d).unwrap().count(), 2);
    // Timed runs differ in content and never overwrite an earlier document.
    let timed = ["ineq62", "--n-max", "5", "--timings", "--out", d];
    assert_eq!(run(&timed).0, 0);
    assert_eq!(run(&timed).0, 0);
    assert!(std::fs::read_dir(d).unwrap().count() >= 3);
}

#[test]
fn substitution_commands() {
    let (code, v) = json(&[
        "thm61",
        "--spec",
        &fixture("shifted_loglog.json"),
        "--p",
        "3",
        "--n-max",
        "10",
        "--radius",
        "3",
    ]);
    assert_eq!(code, 0, "{v}");
    let names: Vec<&str> = v["checks"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| c["name"].as_str().unwrap())
        .collect();
    assert_eq!(names.len(), 3);
    let (code, v) = json(&[
        "seq-transform",
        "--spec",
        &fixture("iterated_log1.json"),
        "--p",
        "2",
        "--n-max",
        "300",
    ]);
    assert_eq!(code, 0);
    assert_eq!(v["checks"][0]["finding"], "convergent");
    let (code, v) = json(&[
        "seq-transform",
        "--spec",
        &fixture("iterated_log2.json"),
        "--p",
        "3",
        "--n-max",
        "300",
    ]);
    assert_eq!(code, 0);
    assert_eq!(v["checks"][0]["finding"], "divergent");
}

#[test]
fn compare_reports_unbounded() {
    let (code, v) = json(&[
        "seq-compare",
        "--spec",
        &fixture("gevrey1.json"),
        "--spec",
        &fixture("constant.json"),
    ]);
    assert_eq!(code, 0);
    assert_eq!(v["checks"][0]["finding"], "unbounded");
    assert!(!v["checks"][0]["verdict"]["evidence"]
        .as_array()
        .unwrap()
        .is_empty());
}

#[test]
fn small_report_all_passes() {
    let (code, v) = json(&["report-all", "--n-max", "1"]);
    assert_eq!(code, 0);
    let names: Vec<&str> = v["checks"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| c["name"].as_str().unwrap())
        .collect();
    for i in 1..=9 {
        assert!(
            names.iter().any(|n| n.starts_with(&format!("[{i}] "))),
            "criterion {i} missing"
        );
    }
}

#[test]
fn precision_override_is_echoed() {
    let (code, v) = json(&[
        "seq-check",
        "--spec",
        &fixture("iterated_log2.json"),
        "--precision",
        "30",
        "--n-max",
        "50",
    ]);
    assert_eq!(code, 0);
    assert_eq!(v["config"]["precision"], 30);
    assert_eq!(v["config"]["specs"][0]["precision"], 30);
}
