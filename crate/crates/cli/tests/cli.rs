use std::io::Write;
use std::process::{Command, Output};

use serde_json::Value;

fn racb(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_racb")).args(args).output().expect("racb runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

const FREE2: &str = r#"{"rank": 2, "labels": [[1, "inf"], ["inf", 1]]}"#;
const SQUARE: &str = r#"{"rank": 2, "labels": [[1, 2], [2, 1]]}"#;
const THIN_SQUARE: &str = r#"{"diagram": {"rank": 2, "labels": [[1, 2], [2, 1]]}, "colors": {"1": {"size": 2}, "2": {"size": 2}}}"#;
const THICK: &str = r#"{"diagram": {"rank": 2, "labels": [[1, "inf"], ["inf", 1]]}, "colors": {"1": {"size": 3}, "2": {"size": 2}}}"#;

fn small_config() -> tempfile::NamedTempFile {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    write!(
        f,
        r#"{{"words": {{"max_rank": 3, "max_len": 4, "weak_steps": 100, "weak_pairs": 20, "random_checks": 50}},
            "building": {{"max_rank": 2, "implosion_families": 5}}}}"#
    )
    .unwrap();
    f
}

#[test]
fn usage_errors_exit_3() {
    assert_eq!(racb(&["frobnicate"]).status.code(), Some(3));
    assert_eq!(racb(&["verify", "nothing"]).status.code(), Some(3));
    assert_eq!(racb(&["word", "nf", "--diagram", FREE2, "[\"7\"]"]).status.code(), Some(3));
    assert_eq!(racb(&["building", "ball", "--building", THICK, "--export", "svg"]).status.code(), Some(3));
    assert_eq!(racb(&["--help"]).status.code(), Some(0));
}

#[test]
fn word_commands() {
    let o = racb(&["word", "nf", "--diagram", SQUARE, r#"["2","1","2"]"#]);
    assert_eq!(stdout(&o).trim(), r#"["1","2","2"]"#);
    let o = racb(&["word", "reduced", "--diagram", SQUARE, r#"["2","1","2"]"#]);
    assert_eq!(stdout(&o).trim(), "false");
    let o = racb(&["--json", "word", "equivalent", "--diagram", FREE2, "[1,2]", "[2,1]"]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["equivalent"], false);
    let o = racb(&["word", "weak-homotopic", "--diagram", SQUARE, "[1,2]", "[2,1,2]"]);
    assert_eq!(stdout(&o).trim(), "yes");
}

#[test]
fn diagram_commands() {
    let o = racb(&["diagram", "product", "--M", FREE2, "--factors", SQUARE, r#"{"rank": 1, "labels": [[1]]}"#]);
    assert!(o.status.success());
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["diagram"]["rank"], 3);
    assert_eq!(v["parts"].as_array().unwrap().len(), 2);
    let d = serde_json::to_string(&v["diagram"]).unwrap();
    let o = racb(&["--json", "diagram", "decompose", &d]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["parts"].as_array().unwrap().len(), 2);
    let o = racb(&["diagram", "symmetries", SQUARE]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v.as_array().unwrap().len(), 2);
}

#[test]
fn parkour_commands() {
    let o = racb(&["diagram", "product", "--M", FREE2, "--factors", SQUARE, r#"{"rank": 1, "labels": [[1]]}"#]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let d = serde_json::to_string(&v["diagram"]).unwrap();
    let names: Vec<String> = v["diagram"]["names"].as_array().map_or_else(
        || vec!["1".into(), "2".into(), "3".into()],
        |a| a.iter().map(|x| x.as_str().unwrap().to_string()).collect(),
    );
    let part = format!(r#"{{"parts": [["{}", "{}"], ["{}"]]}}"#, names[0], names[1], names[2]);
    let w = format!(r#"["{}", "{}", "{}"]"#, names[0], names[2], names[1]);
    let o = racb(&["parkour", "map", "--diagram", &d, "--partition", &part, &w]);
    assert_eq!(stdout(&o).trim(), "[0,1,0]");
    let o = racb(&["parkour", "blocks", "--diagram", &d, "--partition", &part, &w]);
    assert_eq!(serde_json::from_str::<Value>(&stdout(&o)).unwrap().as_array().unwrap().len(), 3);
    let o = racb(&["parkour", "rmin", "--diagram", &d, "--partition", &part, &w]);
    assert!(o.status.success());
}

#[test]
fn ball_exports() {
    let o = racb(&["building", "ball", "--building", THICK, "--radius", "0", "--export", "dot"]);
    let dot = stdout(&o);
    assert!(dot.starts_with("graph G {"));
    assert_eq!(dot.matches(" -- ").count(), 0);
    assert_eq!(dot.matches("label=").count(), 1);
    let o = racb(&["building", "ball", "--building", THIN_SQUARE, "--radius", "2", "--export", "json"]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["nodes"].as_array().unwrap().len(), 4);
    assert_eq!(v["edges"].as_array().unwrap().len(), 4);
}

#[test]
fn building_delta_and_implode() {
    let o = racb(&["--json", "building", "delta", "--building", THICK, "[]", "[[0,1],[1,1],[0,2]]"]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["distance"], 3);
    assert_eq!(v["weyl_distance"], serde_json::json!(["1", "2", "1"]));
    let o = racb(&["building", "implode", "--building", THICK, "--relations", r#"{"1": [[0, 1, 2]]}"#, "--radius", "2"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(!v["map"].as_array().unwrap().is_empty());
}

#[test]
fn city_commands() {
    let o = racb(&["city", "build"]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["params"], serde_json::json!([2, 2, 2]));
    let o = racb(&["city", "skeletal", "--radius", "2", "--export", "dot"]);
    assert!(stdout(&o).contains("shape=box"));
    let o = racb(&["city", "verify", "--maxlen", "3"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
}

#[test]
fn verify_suites_and_mutant() {
    let cfg = small_config();
    let path = cfg.path().to_str().unwrap();
    let o = racb(&["--config", path, "verify", "words"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let o = racb(&["--config", path, "--json", "verify", "building"]);
    assert_eq!(o.status.code(), Some(0));
    let reports: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(reports.as_array().unwrap().iter().all(|r| r["outcome"] == "pass"));
    let o = racb(&["--config", path, "--json", "verify", "building", "--mutant", "overwrite"]);
    assert_eq!(o.status.code(), Some(1));
    let reports: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let fail = reports.as_array().unwrap().iter().find(|r| r["outcome"] == "fail").unwrap();
    assert!(fail["counterexample"].is_object());
}

#[test]
fn unknown_only_exits_2() {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    write!(f, r#"{{"words": {{"max_rank": 2, "max_len": 4, "weak_steps": 10, "weak_pairs": 20, "random_checks": 10}}}}"#).unwrap();
    let o = racb(&["--config", f.path().to_str().unwrap(), "verify", "words"]);
    assert_eq!(o.status.code(), Some(2), "{}", stdout(&o));
    assert!(stdout(&o).contains("UNKNOWN"));
}

#[test]
fn reports_are_deterministic() {
    let cfg = small_config();
    let path = cfg.path().to_str().unwrap();
    let strip = |o: &Output| -> Vec<Value> {
        let mut v: Vec<Value> = serde_json::from_str(&stdout(o)).unwrap();
        for r in &mut v {
            r.as_object_mut().unwrap().remove("millis");
        }
        v
    };
    let a = racb(&["--config", path, "--seed", "5", "--json", "verify", "words"]);
    let b = racb(&["--config", path, "--seed", "5", "--json", "verify", "words"]);
    assert_eq!(strip(&a), strip(&b));
}

#[test]
fn element_files_round_trip() {
    let o = racb(&["universal", "sample", "--radius", "2", "--seed", "3"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let mut f = tempfile::NamedTempFile::new().unwrap();
    f.write_all(&o.stdout).unwrap();
    let o = racb(&["universal", "check", f.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let o = racb(&["universal", "iota", "--radius", "2", "--count", "3"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
}

#[test]
fn application_examples() {
    for k in ["1", "2"] {
        let o = racb(&["universal", "application", "--example", k, "--samples", "2"]);
        assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    }
    assert_eq!(racb(&["universal", "application", "--example", "3"]).status.code(), Some(3));
}
