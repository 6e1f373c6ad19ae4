use std::io::Write;
use std::process::{Command, Output};

fn gkcalc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gkcalc")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn workspace_file(json: &str) -> tempfile::NamedTempFile {
    let mut f = tempfile::NamedTempFile::new().expect("temp file");
    f.write_all(json.as_bytes()).expect("write workspace");
    f
}

/// A one-dimensional algebra given by its product table only, so its classes cannot be decided.
const OPAQUE: &str = r#"{
  "groups": { "1": "trivial" },
  "algebras": {
    "C": { "complex": { "group": "1" } },
    "D": { "explicit": { "group": "1", "basis": ["u"], "products": [[0, 0, [[0, 1]]]], "unit": [1] } }
  },
  "homs": { "h": { "matrix": { "source": "C", "target": "D", "matrix": [[1]] } } }
}"#;

#[test]
fn validate_accepts_the_builtin_corpus() {
    let o = gkcalc(&["validate"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).starts_with("workspace OK"));
}

#[test]
fn broken_workspace_exits_2_with_location() {
    let f = workspace_file(r#"{ "groups": { "1": "trivial" }, "algebras": { "A": { "complex": { "group": "G" } } } }"#);
    let o = gkcalc(&["--workspace", f.path().to_str().unwrap(), "validate"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("algebras.A"), "{}", stderr(&o));
}

#[test]
fn kgroup_reports_rank() {
    let o = gkcalc(&["kgroup", "CM2"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).contains("Z^2"), "{}", stdout(&o));
    let o = gkcalc(&["--format", "machine", "kgroup", "M2z"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).expect("machine output is JSON");
    assert_eq!(v["rank"], 2);
}

#[test]
fn product_reports_the_class() {
    let o = gkcalc(&["product", "gen_p . phi"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).contains("class: [0 | 1]"), "{}", stdout(&o));
    let o = gkcalc(&["--format", "machine", "product", "gen_p - gen_p"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["key"], serde_json::json!([[0]]));
}

#[test]
fn product_certificates_and_ast() {
    let o = gkcalc(&["--format", "machine", "product", "gen_p . phi", "--emit-certificate", "--dump-ast"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["certificates"].as_array().map(Vec::len), Some(2));
    assert!(v["ast"].is_object());
}

#[test]
fn ill_typed_word_exits_2() {
    let o = gkcalc(&["product", "gen_p . gen_q"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("cannot compose"), "{}", stderr(&o));
}

#[test]
fn undecidable_target_exits_1() {
    let f = workspace_file(OPAQUE);
    let path = f.path().to_str().unwrap();
    let o = gkcalc(&["--workspace", path, "product", "h"]);
    assert_eq!(o.status.code(), Some(1), "{}{}", stdout(&o), stderr(&o));
    assert!(stderr(&o).contains("Indeterminate"), "{}", stderr(&o));
}

#[test]
fn fuzz_is_deterministic() {
    let a = gkcalc(&["fuzz-relations", "--seed", "7", "--count", "40"]);
    let b = gkcalc(&["fuzz-relations", "--seed", "7", "--count", "40"]);
    assert_eq!(a.status.code(), Some(0), "{}", stderr(&a));
    assert_eq!(a.stdout, b.stdout);
    assert!(stdout(&a).trim_end().ends_with("PASS"));
}

#[test]
fn fuzz_catches_a_broken_fusion_rule() {
    let o = gkcalc(&["fuzz-relations", "--count", "40", "--fusion", "broken"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).trim_end().ends_with("FAIL"), "{}", stderr(&o));
}

#[test]
fn bad_arguments_exit_2() {
    assert_eq!(gkcalc(&["kgroup"]).status.code(), Some(2));
}
