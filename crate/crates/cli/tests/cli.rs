use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn qpoly(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qpoly"))
        .args(args)
        .env_remove("QPOLY_MAX_LATTICE")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn gen(dir: &Path, name: &str, args: &[&str]) -> PathBuf {
    let path = dir.join(name);
    let mut full = vec!["gen"];
    full.extend_from_slice(args);
    full.extend_from_slice(&["--out", path.to_str().unwrap()]);
    let o = qpoly(&full);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    path
}

fn weights_json(path: &Path, extra: &[&str]) -> Value {
    let mut args = vec!["weights", path.to_str().unwrap()];
    args.extend_from_slice(extra);
    let o = qpoly(&args);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_str(&stdout(&o)).unwrap()
}

#[test]
fn gabidulin_file_reports_mrd_weights() {
    let dir = tempfile::tempdir().unwrap();
    let g = gen(dir.path(), "g.jsonl", &["gabidulin", "--q", "2", "--m", "3", "--n", "2", "--k", "1"]);
    let text = fs::read_to_string(&g).unwrap();
    let record: Value = serde_json::from_str(text.trim()).unwrap();
    assert_eq!(record["generators"].as_array().unwrap().len(), 3);
    let doc = weights_json(&g, &["--anticode"]);
    assert_eq!(doc["schema_version"], 1);
    assert_eq!(doc["k"], 3);
    assert_eq!(doc["weights"], serde_json::json!([2, 2, 2]));
    assert_eq!(doc["dual_weights"], serde_json::json!([2, 2, 2]));
    assert_eq!(doc["a_weights"], serde_json::json!([2, 2, 2]));
    assert_eq!(doc["axioms"]["verdict"], "POLYMATROID");
    assert_eq!(doc["wei"]["partition_ok"], true);
    assert_eq!(doc["witnesses"].as_array().unwrap().len(), 3);
}

#[test]
fn bigexample_flag_file() {
    let dir = tempfile::tempdir().unwrap();
    let y = gen(dir.path(), "y.jsonl", &["uniform-support", "--q", "2", "--m", "5", "--n", "3", "--basis", "1,0,0", "--basis", "0,1,0"]);
    let x = gen(dir.path(), "x.jsonl", &["uniform-support", "--q", "2", "--m", "5", "--n", "3", "--basis", "1,0,0"]);
    let x_text = fs::read_to_string(&x).unwrap();
    let record: Value = serde_json::from_str(x_text.trim()).unwrap();
    assert_eq!(record["generators"].as_array().unwrap().len(), 5);
    let flag = dir.path().join("flag.jsonl");
    fs::write(&flag, fs::read_to_string(&y).unwrap() + &x_text).unwrap();
    let doc = weights_json(&flag, &[]);
    assert_eq!(doc["input"]["kind"], "flag");
    assert_eq!(doc["weights"], serde_json::json!([1, 1, 1, 1, 1]));
    assert_eq!(doc["dual_weights"], serde_json::json!([1, 1, 1, 1, 1, 2, 2, 2, 2, 2]));
    assert_eq!(doc["axioms"]["verdict"], "DEMI_POLYMATROID");
    let o = qpoly(&["verify", flag.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));

    let reversed = dir.path().join("reversed.jsonl");
    fs::write(&reversed, x_text + &fs::read_to_string(&y).unwrap()).unwrap();
    let o = qpoly(&["weights", reversed.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("nesting"));
}

#[test]
fn empty_code_is_an_input_error() {
    let dir = tempfile::tempdir().unwrap();
    let z = dir.path().join("z.jsonl");
    fs::write(&z, r#"{"kind":"code","q":2,"p":2,"e":1,"m":2,"n":2,"generators":[]}"#).unwrap();
    let o = qpoly(&["weights", z.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("empty code has no weights"));
}

#[test]
fn parse_errors_name_the_field() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.jsonl");
    fs::write(&bad, r#"{"kind":"code","q":2,"p":2,"e":1,"m":2,"n":2,"generators":[[[1,0],[0]]]}"#).unwrap();
    let o = qpoly(&["weights", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("generators[0][1]"));
    fs::write(&bad, r#"{"kind":"code","q":2,"p":2,"e":1,"m":2,"generators":[]}"#).unwrap();
    let o = qpoly(&["weights", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("`n`"));
}

#[test]
fn lattice_guard_exits_three() {
    let dir = tempfile::tempdir().unwrap();
    let g = gen(dir.path(), "g.jsonl", &["gabidulin", "--q", "2", "--m", "3", "--n", "2", "--k", "1"]);
    let o = qpoly(&["weights", g.to_str().unwrap(), "--max-lattice", "4"]);
    assert_eq!(o.status.code(), Some(3));
    let o = Command::new(env!("CARGO_BIN_EXE_qpoly"))
        .args(["weights", g.to_str().unwrap()])
        .env("QPOLY_MAX_LATTICE", "4")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn nullity_table_is_demi_with_informational_r3() {
    let dir = tempfile::tempdir().unwrap();
    let t = gen(dir.path(), "t.jsonl", &["uniform", "--q", "2", "--m", "2", "--n", "2", "--r", "1", "--nullity"]);
    let o = qpoly(&["verify", t.to_str().unwrap(), "--axioms"]);
    assert_eq!(o.status.code(), Some(0));
    let doc: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let detail = &doc["checks"][0]["detail"];
    assert_eq!(detail["verdict"], "DEMI_POLYMATROID");
    assert_eq!(detail["r3"]["type"], "submodular");
}

#[test]
fn corrupted_table_fails_r2() {
    let dir = tempfile::tempdir().unwrap();
    let t = gen(dir.path(), "t.jsonl", &["uniform", "--q", "2", "--m", "2", "--n", "2", "--r", "1"]);
    let mut record: Value = serde_json::from_str(fs::read_to_string(&t).unwrap().trim()).unwrap();
    let entries = record["entries"].as_array_mut().unwrap();
    let full = entries.iter_mut().find(|e| e["basis"].as_array().unwrap().len() == 2).unwrap();
    full["value"] = Value::from(full["value"].as_i64().unwrap() - 1);
    fs::write(&t, serde_json::to_string(&record).unwrap()).unwrap();
    let o = qpoly(&["verify", t.to_str().unwrap(), "--axioms"]);
    assert_eq!(o.status.code(), Some(1));
    let doc: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let check = &doc["checks"][0];
    assert_eq!(check["detail"]["verdict"], "NEITHER");
    assert_eq!(check["detail"]["r2"]["type"], "monotone");
    assert!(check["certificate"].is_array());
}

#[test]
fn random_suite_passes() {
    let o = qpoly(&["verify", "--wei", "--trials", "100", "--seed", "3"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let doc: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(doc["passed"], true);
    assert!(doc["checks"].as_array().unwrap().len() >= 100);
}

#[derive(serde::Serialize, serde::Deserialize)]
#[serde(deny_unknown_fields)]
struct CodeLine {
    kind: String,
    q: u32,
    p: u32,
    e: u32,
    m: usize,
    n: usize,
    generators: Vec<Vec<Vec<u32>>>,
}

#[test]
fn generation_is_deterministic_and_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["random", "--q", "2", "--m", "2", "--n", "2", "--k", "2", "--seed", "7"];
    let a = fs::read_to_string(gen(dir.path(), "a.jsonl", &args)).unwrap();
    let b = fs::read_to_string(gen(dir.path(), "b.jsonl", &args)).unwrap();
    assert_eq!(a, b);
    // re-serializing a parsed file is byte-identical
    let v: CodeLine = serde_json::from_str(a.trim()).unwrap();
    assert_eq!(serde_json::to_string(&v).unwrap() + "\n", a);
    let c = gen(dir.path(), "c.jsonl", &["random", "--q", "4", "--m", "2", "--n", "2", "--k", "3", "--seed", "1"]);
    let doc = weights_json(&c, &[]);
    assert_eq!(doc["input"]["q"], 4);
    assert_eq!(doc["k"], 3);
}

#[test]
fn invalid_generation_parameters() {
    let o = qpoly(&["gen", "gabidulin", "--q", "2", "--m", "2", "--n", "3", "--k", "1"]);
    assert_eq!(o.status.code(), Some(2));
    let o = qpoly(&["gen", "random", "--q", "6", "--m", "2", "--n", "2", "--k", "1"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn text_reports_are_stable() {
    let dir = tempfile::tempdir().unwrap();
    let g = gen(dir.path(), "g.jsonl", &["gabidulin", "--q", "2", "--m", "3", "--n", "2", "--k", "1"]);
    let run = || stdout(&qpoly(&["weights", g.to_str().unwrap(), "--format", "text"]));
    let first = run();
    assert!(first.contains("weights: 2 2 2"));
    assert_eq!(first, run());
}
