//! The command-line contract: exit codes, report schema, determinism.

mod common;

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn case(name: &str) -> String {
    format!("{}/cases/{name}.ore", env!("CARGO_MANIFEST_DIR"))
}

fn scratch(tag: &str) -> PathBuf {
    std::env::temp_dir().join(format!("ore-nakayama-cli-{tag}-{}", std::process::id()))
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ore-nakayama")).args(args).output().expect("binary runs")
}

/// Run with `--json`, returning exit code, stdout and the parsed report.
fn run_json(args: &[&str], tag: &str) -> (i32, String, Value) {
    let path = scratch(tag).with_extension("json");
    let mut full: Vec<&str> = args.to_vec();
    let p = path.to_str().unwrap().to_string();
    full.extend(["--json", &p]);
    let out = run(&full);
    let text = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{tag}: no report ({e}): {}", String::from_utf8_lossy(&out.stderr)));
    let _ = std::fs::remove_file(&path);
    (out.status.code().unwrap(), String::from_utf8(out.stdout).unwrap(), serde_json::from_str(&text).unwrap())
}

fn schema() -> jsonschema::Validator {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../schema/report.schema.json");
    let schema: Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    jsonschema::validator_for(&schema).expect("schema compiles")
}

fn assert_valid(report: &Value) {
    let v = schema();
    let errors: Vec<String> = v.iter_errors(report).map(|e| format!("{} at {}", e, e.instance_path)).collect();
    assert!(errors.is_empty(), "schema violations: {errors:?}");
}

fn without_timings(v: &Value) -> Value {
    match v {
        Value::Object(m) => Value::Object(
            m.iter().filter(|(k, _)| k.as_str() != "timings_ms").map(|(k, x)| (k.clone(), without_timings(x))).collect(),
        ),
        Value::Array(a) => Value::Array(a.iter().map(without_timings).collect()),
        other => other.clone(),
    }
}

fn image(report: &Value, generator: &str) -> String {
    report["nakayama"]["images"]
        .as_array()
        .unwrap()
        .iter()
        .find(|g| g["generator"] == generator)
        .map(|g| g["image"].as_str().unwrap().to_string())
        .unwrap_or_default()
}

#[test]
fn verify_jordan_passes() {
    let (code, _, report) = run_json(&["verify", &case("jordan")], "verify");
    assert_eq!(code, 0);
    assert_eq!(report["outcome"], "ok");
    assert_valid(&report);
    let ranges: Vec<&Value> = report["checks"].as_array().unwrap().iter().filter_map(|c| c.get("verified_range")).collect();
    assert!(ranges.iter().any(|r| **r == serde_json::json!([0, 8])));
}

#[test]
fn inconsistent_delta_names_the_pair() {
    let (code, _, report) = run_json(&["verify", &case("bad-delta")], "bad-delta");
    assert_eq!(code, 1);
    assert_valid(&report);
    let failed: Vec<&Value> = report["checks"].as_array().unwrap().iter().filter(|c| c["status"] == "fail").collect();
    assert!(failed.iter().any(|c| c["witness"].as_str().unwrap().contains("pair (z, x)")), "{failed:?}");
}

#[test]
fn malformed_input_exits_two() {
    let path = scratch("malformed").with_extension("ore");
    std::fs::write(&path, "field Q\ngen x deg\n").unwrap();
    let out = run(&["verify", path.to_str().unwrap()]);
    let _ = std::fs::remove_file(&path);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("3:1"), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(run(&["verify", "/nonexistent.ore"]).status.code(), Some(2));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn nakayama_methods_and_exit_codes() {
    let (code, stdout, report) = run_json(&["nakayama", &case("jordan"), "--method", "ext"], "jordan-ext");
    assert_eq!(code, 0, "{stdout}");
    assert_valid(&report);
    assert_eq!(image(&report, "y"), "2*x + y");
    assert!(stdout.contains("ν(y) = 2*x + y"));

    let (code, _, report) = run_json(&["nakayama", &case("jordan"), "--method", "propagate"], "jordan-prop");
    assert_eq!(code, 3);
    assert_eq!(report["outcome"], "undetermined");
    assert_valid(&report);

    let (code, _, report) = run_json(&["nakayama", &case("quantum-affine")], "qaffine");
    assert_eq!(code, 0);
    assert_eq!(image(&report, "x1"), "1/6*x1");
    assert_eq!(image(&report, "x2"), "2/5*x2");
    assert_eq!(image(&report, "x3"), "15*x3");
    let methods: Vec<&str> =
        report["nakayama"]["images"].as_array().unwrap().iter().map(|g| g["method"].as_str().unwrap()).collect();
    assert_eq!(methods, ["propagation", "merge", "merge"]);
}

#[test]
fn expect_mismatch_exits_one() {
    let text = common::case_text("jordan").replace("y -> 2*x + y", "y -> y");
    let path = scratch("mismatch").with_extension("ore");
    std::fs::write(&path, text).unwrap();
    let (code, _, report) = run_json(&["nakayama", path.to_str().unwrap()], "mismatch");
    let _ = std::fs::remove_file(&path);
    assert_eq!(code, 1);
    let check = report["checks"].as_array().unwrap().iter().find(|c| c["name"] == "expect: nakayama").unwrap();
    assert_eq!(check["status"], "fail");
    assert_valid(&report);
}

#[test]
fn ext_command_reads_the_twist() {
    let (code, _, report) = run_json(&["ext", &case("quantum-plane"), "--degree-cap", "4"], "ext");
    assert_eq!(code, 0);
    assert_eq!(image(&report, "x"), "1/2*x");
    assert_eq!(image(&report, "y"), "2*y");
    assert_eq!(report["nakayama"]["dimension"], 2);
    assert_valid(&report);
    // Ext refuses to guess on an ungraded tower
    let (code, _, _) = run_json(&["ext", &case("weyl")], "ext-weyl");
    assert_eq!(code, 1);
}

#[test]
fn homology_subcommand_selects_checks() {
    let (code, _, report) = run_json(&["homology", &case("quantum-plane"), "--check", "ses", "--check", "resolution"], "homology");
    assert_eq!(code, 0);
    let names: Vec<&str> = report["checks"].as_array().unwrap().iter().map(|c| c["name"].as_str().unwrap()).collect();
    assert!(names.iter().all(|n| n.starts_with("sequence") || n.starts_with("resolution")), "{names:?}");
    let (code, _, _) =
        run_json(&["homology", &case("jordan"), "--check", "lifting", "--inject", "psi-delta-sign"], "homology-bad");
    assert_eq!(code, 1);
}

#[test]
fn reports_are_deterministic() {
    let args = ["nakayama", &case("dim3") as &str];
    let (_, out1, r1) = run_json(&args, "det1");
    let (_, out2, r2) = run_json(&args, "det2");
    assert_eq!(out1, out2);
    assert_eq!(
        serde_json::to_string(&without_timings(&r1)).unwrap(),
        serde_json::to_string(&without_timings(&r2)).unwrap()
    );
    assert_eq!(r1["inputs"][0]["sha256"].as_str().unwrap().len(), 64);
}

#[test]
fn reproduce_named_cases() {
    let (code, stdout, report) = run_json(&["reproduce", "--case", "dim3"], "rep-dim3");
    assert_eq!(code, 0, "{stdout}");
    assert_valid(&report);
    let inner = &report["cases"][0]["cases"][0];
    assert_eq!(inner["nakayama"]["calabi_yau"], true);
    assert_eq!(inner["nakayama"]["dimension"], 3);

    let (code, _, report) = run_json(&["reproduce", "--case", "weyl"], "rep-weyl");
    assert_eq!(code, 0);
    let caveats = report["cases"][0]["cases"][0]["nakayama"]["caveats"].as_array().unwrap().clone();
    assert!(caveats.iter().any(|c| c.as_str().unwrap().contains("up to inner")));

    let (code, _, report) = run_json(&["reproduce", "--case", "G"], "rep-g");
    assert_eq!(code, 0);
    let g = &report["cases"][0]["cases"][0];
    assert_eq!(image(g, "x"), "-2*x");
    assert_eq!(image(g, "y"), "-1/2*y");
    assert_eq!(g["nakayama"]["calabi_yau"], false);
    assert_valid(&report);
}
