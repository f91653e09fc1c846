//! Loading the proof corpus and checking its theorem table.
//!
//! The corpus directory holds `.tt` files, a `MANIFEST` listing them in
//! dependency order, and `THEOREMS.tsv` with one row per named result:
//! identifier, anchor, quote, and optionally a statement written in surface
//! syntax that the identifier's type must be convertible with.

use std::fs;
use std::io;
use std::path::Path;

use thiserror::Error;

use crate::kernel::{types_equal, GlobalScope};
use crate::report::{check_source, Report};
use crate::surface::{parse_term, resolve_term};
use crate::syntax::Context;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TheoremEntry {
    pub identifier: String,
    pub anchor: String,
    pub quote: String,
    pub statement: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CorpusError {
    #[error("missing theorem `{0}`")]
    MissingTheorem(String),
    #[error("`{identifier}` does not have the recorded statement: {detail}")]
    StatementShapeMismatch { identifier: String, detail: String },
}

pub fn parse_theorem_map(tsv: &str) -> Result<Vec<TheoremEntry>, String> {
    let mut out = Vec::new();
    for (n, line) in tsv.lines().enumerate() {
        if line.trim().is_empty() || line.starts_with('#') {
            continue;
        }
        let cols: Vec<&str> = line.split('\t').collect();
        if cols.len() < 3 {
            return Err(format!("THEOREMS.tsv line {}: expected at least 3 columns", n + 1));
        }
        out.push(TheoremEntry {
            identifier: cols[0].trim().to_string(),
            anchor: cols[1].trim().to_string(),
            quote: cols[2].trim().to_string(),
            statement: cols.get(3).map(|s| s.trim().to_string()).filter(|s| !s.is_empty()),
        });
    }
    Ok(out)
}

pub fn parse_manifest(text: &str) -> Vec<String> {
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(String::from)
        .collect()
}

/// Checks labelled sources in order on one shared scope.
pub fn check_sources<'a>(files: impl IntoIterator<Item = (&'a str, &'a str)>) -> (GlobalScope, Report) {
    let mut scope = GlobalScope::new();
    let mut report = Report::new();
    for (label, src) in files {
        report.extend(check_source(&mut scope, label, src));
    }
    (scope, report)
}

/// Reads `MANIFEST` in `dir` and returns `(file name, contents)` pairs.
pub fn read_manifest(dir: &Path) -> io::Result<Vec<(String, String)>> {
    let manifest = fs::read_to_string(dir.join("MANIFEST"))?;
    parse_manifest(&manifest)
        .into_iter()
        .map(|f| {
            let src = fs::read_to_string(dir.join(&f))?;
            Ok((f, src))
        })
        .collect()
}

pub fn check_entry(scope: &GlobalScope, entry: &TheoremEntry) -> Result<(), CorpusError> {
    let id = &entry.identifier;
    let Some(found) = scope.get(id) else {
        return Err(CorpusError::MissingTheorem(id.clone()));
    };
    let Some(stmt) = &entry.statement else {
        return Ok(());
    };
    let mismatch = |detail: String| CorpusError::StatementShapeMismatch {
        identifier: id.clone(),
        detail,
    };
    let surface = parse_term(stmt).map_err(|e| mismatch(e.to_string()))?;
    let expected = resolve_term(&|x| scope.contains(x), &surface).map_err(|e| mismatch(e.to_string()))?;
    match types_equal(scope, &Context::new(), &found.ty_term, &expected) {
        Ok(true) => Ok(()),
        Ok(false) => Err(mismatch(format!(
            "checked type is `{}`",
            crate::print::render(&found.ty_term, &[])
        ))),
        Err(e) => Err(mismatch(e.to_string())),
    }
}

/// One report line per theorem-table entry, named by identifier and anchor.
pub fn verify_corpus(scope: &GlobalScope, map: &[TheoremEntry]) -> Report {
    let mut report = Report::new();
    for entry in map {
        let label = format!("{} [{}]", entry.identifier, entry.anchor);
        match check_entry(scope, entry) {
            Ok(()) => report.ok(label, None),
            Err(e) => report.fail(label, e, None),
        }
    }
    report
}

/// Checks the whole corpus in `dir` and then its theorem table.
pub fn run_corpus(dir: &Path) -> io::Result<(GlobalScope, Report)> {
    let files = read_manifest(dir)?;
    let (scope, mut report) = check_sources(files.iter().map(|(f, s)| (f.as_str(), s.as_str())));
    let map = parse_theorem_map(&fs::read_to_string(dir.join("THEOREMS.tsv"))?)
        .map_err(|e| io::Error::new(io::ErrorKind::InvalidData, e))?;
    report.extend(verify_corpus(&scope, &map));
    Ok((scope, report))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn missing_and_mismatched_entries() {
        let (scope, r) = check_sources([("a.tt", "postulate A : U0\npostulate a : A")]);
        assert!(r.pass);
        let entry = |id: &str, st: Option<&str>| TheoremEntry {
            identifier: id.into(),
            anchor: "x".into(),
            quote: "q".into(),
            statement: st.map(String::from),
        };
        assert_eq!(check_entry(&scope, &entry("a", Some("A"))), Ok(()));
        assert_eq!(
            check_entry(&scope, &entry("nope", None)),
            Err(CorpusError::MissingTheorem("nope".into()))
        );
        assert!(matches!(
            check_entry(&scope, &entry("A", Some("U1 -> U1"))),
            Err(CorpusError::StatementShapeMismatch { .. })
        ));
    }

    #[test]
    fn theorem_map_columns() {
        let m = parse_theorem_map("# header\nisContr\tDef\t\"unique\"\t(A : U1) -> U1\nsing\tDef\tq\n").unwrap();
        assert_eq!(m.len(), 2);
        assert_eq!(m[0].statement.as_deref(), Some("(A : U1) -> U1"));
        assert_eq!(m[1].statement, None);
    }
}
