use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn utk(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_utk")).args(args).output().expect("utk runs")
}

fn corpus_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../corpus")
}

fn corpus_file(name: &str) -> String {
    corpus_dir().join(name).display().to_string()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

/// A copy of the corpus with `edit` applied to one file.
fn mutated_corpus(file: &str, edit: impl Fn(&str) -> String) -> tempfile::TempDir {
    let dir = tempfile::tempdir().unwrap();
    for entry in fs::read_dir(corpus_dir()).unwrap() {
        let path = entry.unwrap().path();
        let name = path.file_name().unwrap().to_str().unwrap().to_string();
        let text = fs::read_to_string(&path).unwrap();
        let text = if name == file { edit(&text) } else { text };
        fs::write(dir.path().join(name), text).unwrap();
    }
    dir
}

#[test]
fn check_prelude_passes() {
    let o = utk(&["check", &corpus_file("prelude.tt")]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
}

#[test]
fn check_failure_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("bad.tt");
    fs::write(&f, "def bad : U0 := U0\n").unwrap();
    let o = utk(&["check", f.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("FAIL  bad"));
}

#[test]
fn missing_file_exits_two() {
    assert_eq!(utk(&["check", "/nonexistent/x.tt"]).status.code(), Some(2));
}

#[test]
fn unknown_flag_exits_two() {
    assert_eq!(utk(&["check", "--frobnicate"]).status.code(), Some(2));
}

#[test]
fn unknown_definition_exits_two() {
    let o = utk(&["normalize", &corpus_file("prelude.tt"), "--def", "no_such_thing"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn coerce_refl_normalizes_to_the_identity() {
    let o = utk(&["normalize", &corpus_file("prelude.tt"), "--def", "coerce_refl"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "\\A a -> a");
}

#[test]
fn normalize_json() {
    let o = utk(&["--json", "normalize", &corpus_file("prelude.tt"), "--def", "coerce_refl"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["name"], "coerce_refl");
    assert_eq!(v["normal_form"], "\\A a -> a");
}

#[test]
fn corpus_passes_with_json_report() {
    let o = utk(&["--json", "corpus", "--dir", corpus_dir().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["pass"], true);
    let decls = v["declarations"].as_array().unwrap();
    assert!(decls.len() > 100);
    for d in decls {
        assert_eq!(d["status"], "ok", "{d}");
        assert!(d["name"].is_string());
        assert!(d["error"].is_null());
    }
}

#[test]
fn corpus_reports_a_theorem_whose_body_is_replaced() {
    let dir = mutated_corpus("decomposition.tt", |text| {
        let start = text.find("def thm_ua ").expect("thm_ua is in decomposition.tt");
        let body = start + text[start..].find(":=").unwrap() + 2;
        let end = body + text[body..].find("\n\n").unwrap_or(text.len() - body);
        format!("{} *{}", &text[..body], &text[end..])
    });
    let o = utk(&["corpus", "--dir", dir.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("FAIL  thm_ua"), "{}", stdout(&o));
}

#[test]
fn missing_corpus_exits_two() {
    assert_eq!(utk(&["corpus", "--dir", "/nonexistent"]).status.code(), Some(2));
}

#[test]
fn model_selftest_low_dimension() {
    let o = utk(&["--json", "model-selftest", "--max-dim", "1"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["pass"], true);
    assert!(v["declarations"].as_array().unwrap().iter().any(|d| d["name"] == "axiom 3/1; C, C, K"));
}

#[test]
fn model_selftest_rejects_large_dimension() {
    assert_eq!(utk(&["model-selftest", "--max-dim", "3"]).status.code(), Some(2));
}

#[test]
fn model_selftest_with_extra_fixtures() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("extra.cset");
    fs::write(&f, "set pair\ndim 0: x y\ndim 1: x y\nact same\n").unwrap();
    let o = utk(&["model-selftest", "--max-dim", "1", "--fixtures", f.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("axiom 1/pair"));
}

#[test]
fn model_selftest_rejects_bad_fixtures() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("bad.cset");
    fs::write(&f, "dim 0: x\n").unwrap();
    let o = utk(&["model-selftest", "--fixtures", f.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}
