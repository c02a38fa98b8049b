use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use commacat::{fixture, run_document, Document};
use commacat_core::verify::{verify_all, Setting};
use commacat_core::{Limits, Verdict};
use serde_json::{json, Value};
use tempfile::TempDir;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_commacat"))
}

fn exec(args: &[&str], file: Option<&Path>) -> Output {
    let mut c = bin();
    c.args(args);
    if let Some(f) = file {
        c.arg(f);
    }
    c.env_remove("COMMACAT_MAX_DIM");
    c.output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn fixture_json(name: &str) -> Value {
    serde_json::from_str(&fixture::fixture(name).unwrap().to_canonical()).unwrap()
}

fn write(dir: &TempDir, name: &str, v: &Value) -> PathBuf {
    let path = dir.path().join(name);
    std::fs::write(&path, serde_json::to_string(v).unwrap()).unwrap();
    path
}

fn validate(v: &Value) -> Output {
    let dir = TempDir::new().unwrap();
    let path = write(&dir, "doc.json", v);
    exec(&["validate"], Some(&path))
}

#[test]
fn pristine_fixtures_validate() {
    for name in fixture::FIXTURES {
        let o = validate(&fixture_json(name));
        assert!(o.status.success(), "{name}: {}", stderr(&o));
        assert_eq!(stdout(&o), "valid\n");
    }
}

#[test]
fn flipped_structure_constant_names_the_triple() {
    let mut doc = fixture_json("dual-numbers");
    // 1 * x = 1 + x
    doc["algebras"]["R"]["mul"][0][1][0] = json!(1);
    let o = validate(&doc);
    assert_eq!(o.status.code(), Some(2));
    let err = stderr(&o);
    assert!(
        err.contains("algebras.R: associativity fails on basis triple (0, 0, 1)"),
        "{err}"
    );
    assert!(!err.contains("unresolved"), "failures must not cascade: {err}");
}

#[test]
fn unbalanced_phi_is_reported_on_the_object() {
    let mut doc = fixture_json("dual-numbers");
    doc["comma_objects"]["bad"] = json!({"bimodule": "U", "a": "R.R", "b": "S.k", "phi": [[0, 1]]});
    let o = validate(&doc);
    assert_eq!(o.status.code(), Some(2));
    let err = stderr(&o);
    assert!(err.contains("comma_objects.bad.phi:"), "{err}");
    assert!(err.contains("balancing relation"), "{err}");
}

#[test]
fn structural_errors_carry_paths() {
    let mut doc = fixture_json("dual-numbers");
    doc["comma_objects"]["T1"]["b"] = json!("S.nope");
    doc["modules"]["R.k"]["action"][0] = json!([[1, 0]]);
    doc["modules"]["S.k"]["action"][0] = json!([[5]]);
    let o = validate(&doc);
    assert_eq!(o.status.code(), Some(2));
    let err = stderr(&o);
    assert!(
        err.contains("comma_objects.T1.b: unresolved reference to module 'S.nope'"),
        "{err}"
    );
    assert!(
        err.contains("modules.R.k.action[0]: row 0 has 2 entries, expected 1"),
        "{err}"
    );
    assert!(
        err.contains("modules.S.k.action[0]: entry (0, 0) = 5 is not a residue mod 2"),
        "{err}"
    );
    // objects built on the broken modules are not reported again
    assert_eq!(err.lines().count(), 3, "{err}");
}

#[test]
fn composite_modulus_is_rejected() {
    let o = validate(&json!({"field": {"p": 4}}));
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("field.p: 4 is not prime"));
}

#[test]
fn unknown_fields_are_rejected() {
    let o = validate(&json!({"field": {"p": 2}, "extra": 1}));
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn canonical_form_is_a_fixed_point() {
    for name in fixture::FIXTURES {
        let canonical = fixture::fixture(name).unwrap().to_canonical();
        // compact, keys reversed
        fn reversed(v: &Value) -> Value {
            match v {
                Value::Object(m) => Value::Object(m.iter().rev().map(|(k, v)| (k.clone(), reversed(v))).collect()),
                Value::Array(a) => Value::Array(a.iter().map(reversed).collect()),
                other => other.clone(),
            }
        }
        let shuffled = serde_json::to_string(&reversed(&serde_json::from_str(&canonical).unwrap())).unwrap();
        let again = Document::parse(&shuffled).unwrap().to_canonical();
        assert_eq!(again, canonical, "{name}");
        assert_eq!(Document::parse(&again).unwrap().to_canonical(), again);
    }
}

#[test]
fn fixture_subcommand_prints_the_canonical_document() {
    let o = exec(&["fixture", "a2"], None);
    assert!(o.status.success());
    assert_eq!(stdout(&o), fixture::a2().to_canonical());
    assert_eq!(exec(&["fixture", "nope"], None).status.code(), Some(2));
}

#[test]
fn empty_task_list_gives_an_empty_report() {
    let dir = TempDir::new().unwrap();
    let path = write(&dir, "empty.json", &json!({"field": {"p": 2}}));
    let o = exec(&["run"], Some(&path));
    assert!(o.status.success());
    let report: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(report["entries"], json!([]));
    let o = exec(&["run", "--format", "text"], Some(&path));
    assert_eq!(stdout(&o), "no tasks\n");
}

#[test]
fn exit_codes() {
    let dir = TempDir::new().unwrap();
    let missing = dir.path().join("missing.json");
    assert_eq!(exec(&["run"], Some(&missing)).status.code(), Some(2));
    let garbage = dir.path().join("garbage.json");
    std::fs::write(&garbage, "not json").unwrap();
    assert_eq!(exec(&["validate"], Some(&garbage)).status.code(), Some(2));
    assert_eq!(exec(&["run", "--fixture", "nope"], None).status.code(), Some(2));
    let o = exec(&["run", "--fixture", "a2", "--task", "nope"], None);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("nope"));
}

#[test]
fn hom_table_text_golden() {
    let o = exec(
        &["run", "--fixture", "a2", "--task", "hom-table", "--format", "text"],
        None,
    );
    assert!(o.status.success());
    let expected = "\
task 0 (hom-table)
  0 0 0 0 0
  0 1 0 0 1
  0 0 1 1 1
  0 1 0 1 1
  0 1 1 1 2
  [holds] hom-table: 5x5 table over universe T; 0 disagreement(s) with T-module Hom
";
    assert_eq!(stdout(&o), expected);
}

#[test]
fn max_dim_flag_and_env_agree() {
    let by_flag = exec(
        &["run", "--fixture", "a2", "--task", "hom-table", "--max-dim", "3"],
        None,
    );
    let by_env = bin()
        .args(["run", "--fixture", "a2", "--task", "hom-table"])
        .env("COMMACAT_MAX_DIM", "3")
        .output()
        .unwrap();
    assert!(by_flag.status.success() && by_env.status.success());
    assert_eq!(by_flag.stdout, by_env.stdout);
    let report: Value = serde_json::from_str(&stdout(&by_flag)).unwrap();
    assert_eq!(report["limits"]["max_dim"], json!(3));
}

#[test]
fn certificates_replay_and_tampering_is_caught() {
    let dir = TempDir::new().unwrap();
    let o = exec(&["run", "--fixture", "a2", "--task", "hom-table"], None);
    let mut report: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let good = write(&dir, "good.json", &report);
    let ok = exec(&["validate", "--certificate"], Some(&good));
    assert!(ok.status.success(), "{}", stderr(&ok));
    assert_eq!(stdout(&ok), "25 certificates confirmed\n");

    let fact = &mut report["entries"][0]["verdict"]["certificates"][6]["fact"];
    assert_eq!(fact["kind"], json!("hom-dim"));
    let dim = fact["dim"].as_u64().unwrap();
    fact["dim"] = json!(dim + 1);
    let bad = write(&dir, "bad.json", &report);
    let o = exec(&["validate", "--certificate"], Some(&bad));
    assert_eq!(o.status.code(), Some(2));
    assert!(
        stderr(&o).contains("entries[0].verdict.certificates[6]"),
        "{}",
        stderr(&o)
    );
}

fn outline(v: &Verdict, depth: usize, out: &mut Vec<String>) {
    out.push(format!("{}{} {}", "  ".repeat(depth), v.claim, v.outcome.as_str()));
    for s in &v.sub {
        outline(s, depth + 1, out);
    }
}

fn record_outline(v: &commacat::report::VerdictRecord, depth: usize, out: &mut Vec<String>) {
    out.push(format!("{}{} {}", "  ".repeat(depth), v.claim, v.outcome));
    for s in &v.sub {
        record_outline(s, depth + 1, out);
    }
}

#[test]
fn document_route_matches_the_built_in_setting() {
    let limits = Limits::default();
    let report = run_document(&fixture::a2(), &["verify-all".to_string()], limits).unwrap();
    let mut from_doc = Vec::new();
    record_outline(&report.entries[0].verdict, 0, &mut from_doc);
    let direct = verify_all(&Setting::a2(limits).unwrap()).unwrap();
    let mut from_code = Vec::new();
    outline(&direct, 0, &mut from_code);
    assert_eq!(from_doc, from_code);
}
