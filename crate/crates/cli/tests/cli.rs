use std::path::PathBuf;
use std::process::{Command, Output};

use scheme_forge::scheme::SchemeReport;
use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_scheme-forge"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is one JSON document")
}

fn song_fixture() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../core/fixtures/song_partition.txt")
}

#[test]
fn missing_required_flag_is_usage_error() {
    let out = run(&["verify", "--f", "3", "--n", "28", "--parts", "0"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn unknown_kind_is_usage_error() {
    let out = run(&["construct", "--kind", "six_class", "--p", "3", "--p1", "11"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn invalid_partition_is_usage_error() {
    let out = run(&[
        "verify",
        "--p",
        "3",
        "--f",
        "4",
        "--n",
        "4",
        "--parts",
        "0,1|1,2,3",
    ]);
    assert_eq!(out.status.code(), Some(2));
    let doc = json(&out);
    assert_eq!(doc["schema"], "scheme-forge/1");
    assert_eq!(doc["exit_code"], 2);
}

#[test]
fn non_divisor_index_is_usage_error() {
    let out = run(&[
        "verify",
        "--p",
        "3",
        "--f",
        "4",
        "--n",
        "7",
        "--parts",
        "0|1,2,3,4,5,6",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn field_cap_is_resource_error() {
    let out = run(&[
        "verify",
        "--p",
        "3",
        "--f",
        "4",
        "--n",
        "4",
        "--parts",
        "0|1|2|3",
        "--field-cap",
        "10",
    ]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn search_budget_is_resource_error() {
    let out = run(&["search-nonexistence", "--p", "11"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn non_scheme_is_refutation() {
    let out = run(&[
        "verify",
        "--p",
        "3",
        "--f",
        "4",
        "--n",
        "8",
        "--parts",
        "0,1|2,3,4|5,6,7",
    ]);
    assert_eq!(out.status.code(), Some(1));
    let doc = json(&out);
    assert_eq!(doc["result"]["is_scheme"], false);
    let eig = run(&[
        "eigen",
        "--p",
        "3",
        "--f",
        "4",
        "--n",
        "8",
        "--parts",
        "0,1|2,3,4|5,6,7",
    ]);
    assert_eq!(eig.status.code(), Some(1));
}

#[test]
fn verify_song_sets_over_affine_orbit() {
    let fixture = song_fixture();
    let out = run(&[
        "verify",
        "--p",
        "37",
        "--f",
        "3",
        "--n",
        "28",
        "--parts-file",
        fixture.to_str().unwrap(),
        "--affine-orbit",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let doc = json(&out);
    assert_eq!(doc["result"]["is_scheme"], true);
    assert_eq!(doc["result"]["report"]["class_count"], 4);
    assert_eq!(doc["result"]["report"]["nonsymmetric_pair_count"], 2);
}

#[test]
fn report_round_trips_and_revalidates() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let out = run(&[
        "--output",
        path.to_str().unwrap(),
        "construct",
        "--kind",
        "five_class_3mod8",
        "--p",
        "3",
        "--p1",
        "11",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let doc: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    let report: SchemeReport = serde_json::from_value(doc["result"]["report"].clone()).unwrap();
    assert!(report.is_scheme);
    assert_eq!(report.class_count, 5);
    assert_eq!(report.is_primitive, Some(true));
    report.validate(1e-6).unwrap();
}

#[test]
fn output_is_deterministic() {
    let args = [
        "construct",
        "--kind",
        "four_class_7mod8",
        "--p",
        "11",
        "--p1",
        "7",
    ];
    let a = run(&args);
    let b = bin()
        .args(args)
        .env("SCHEME_FORGE_THREADS", "1")
        .output()
        .unwrap();
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn floats_have_twelve_significant_digits() {
    let out = run(&[
        "eigen", "--p", "3", "--f", "4", "--n", "4", "--parts", "0|1|2|3",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let doc = json(&out);
    let mut floats = Vec::new();
    collect_floats(&doc, &mut floats);
    assert!(!floats.is_empty());
    for x in floats {
        let digits: String = format!("{x:e}")
            .split('e')
            .next()
            .unwrap()
            .chars()
            .filter(char::is_ascii_digit)
            .collect();
        assert!(digits.trim_start_matches('0').len() <= 12, "{x}");
    }
}

fn collect_floats(v: &Value, out: &mut Vec<f64>) {
    match v {
        Value::Number(n) if n.is_f64() => out.push(n.as_f64().unwrap()),
        Value::Array(items) => items.iter().for_each(|x| collect_floats(x, out)),
        Value::Object(map) => map.values().for_each(|x| collect_floats(x, out)),
        _ => {}
    }
}

#[test]
fn bad_thread_count_is_usage_error() {
    let out = bin()
        .args(["search-nonexistence", "--p", "3"])
        .env("SCHEME_FORGE_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn search_p3_finds_nothing_and_reports_progress() {
    let out = run(&["search-nonexistence", "--p", "3", "--max-classes", "4"]);
    assert_eq!(out.status.code(), Some(0));
    let doc = json(&out);
    assert_eq!(doc["result"]["found"], Value::Array(vec![]));
    assert_eq!(doc["result"]["checked"], 966 + 1701);
    assert!(String::from_utf8_lossy(&out.stderr).contains("progress"));
}

#[test]
fn sanity_search_survivors_pass_oracle() {
    let out = run(&["search-nonexistence", "--p", "3", "--sanity"]);
    assert_eq!(out.status.code(), Some(0));
    let doc = json(&out);
    let found = doc["result"]["found"].as_array().unwrap();
    assert!(!found.is_empty());
    assert!(found.iter().all(|s| s["oracle_verified"] == true));
}

#[test]
fn fusion_of_cyclotomic_scheme() {
    let out = run(&[
        "fuse", "--p", "3", "--f", "4", "--n", "4", "--parts", "0|1|2|3", "--lambda", "1,3|2,4",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["result"]["is_fusion"], true);
    let bad = run(&[
        "fuse",
        "--p",
        "3",
        "--f",
        "4",
        "--n",
        "8",
        "--parts",
        "0|1|2|3|4|5|6|7",
        "--lambda",
        "1,2|3,4,5,6,7,8",
    ]);
    assert_eq!(bad.status.code(), Some(1));
    assert_eq!(json(&bad)["result"]["is_fusion"], false);
    let direct = run(&[
        "verify",
        "--p",
        "3",
        "--f",
        "4",
        "--n",
        "8",
        "--parts",
        "0,1|2,3,4,5,6,7",
    ]);
    assert_eq!(json(&direct)["result"]["is_scheme"], false);
}

#[test]
fn gauss_verify_index2() {
    let out = run(&["gauss-verify", "--p", "3", "--p1", "11"]);
    assert_eq!(out.status.code(), Some(0));
    let doc = json(&out);
    assert_eq!(
        doc["result"]["report"]["entries"].as_array().unwrap().len(),
        22
    );
    let entry = &doc["result"]["report"]["entries"][1];
    assert!(
        entry["direct"].is_array() && entry["formula"].is_array() && entry["abs_err"].is_number()
    );
}
