//! Per-declaration check results and a driver that checks source files in
//! order, continuing past failures.

use std::time::Instant;

use serde::Serialize;

use crate::kernel::{check_declaration, GlobalScope};
use crate::surface::{parse_program, resolve_decl, SurfaceError};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Ok,
    Error,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Entry {
    pub name: String,
    pub status: Status,
    pub error: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<f64>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct Report {
    pub declarations: Vec<Entry>,
    pub pass: bool,
}

impl Report {
    pub fn new() -> Report {
        Report {
            declarations: Vec::new(),
            pass: true,
        }
    }

    pub fn ok(&mut self, name: impl Into<String>, elapsed_ms: Option<f64>) {
        self.declarations.push(Entry {
            name: name.into(),
            status: Status::Ok,
            error: None,
            elapsed_ms,
        });
    }

    pub fn fail(&mut self, name: impl Into<String>, error: impl ToString, elapsed_ms: Option<f64>) {
        self.pass = false;
        self.declarations.push(Entry {
            name: name.into(),
            status: Status::Error,
            error: Some(error.to_string()),
            elapsed_ms,
        });
    }

    pub fn extend(&mut self, other: Report) {
        self.pass &= other.pass;
        self.declarations.extend(other.declarations);
    }

    pub fn failures(&self) -> impl Iterator<Item = &Entry> {
        self.declarations.iter().filter(|e| e.status == Status::Error)
    }

    pub fn without_timing(mut self) -> Report {
        for e in &mut self.declarations {
            e.elapsed_ms = None;
        }
        self
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for e in &self.declarations {
            match &e.error {
                None => out.push_str(&format!("ok    {}\n", e.name)),
                Some(msg) => out.push_str(&format!("FAIL  {}: {}\n", e.name, msg)),
            }
        }
        let failed = self.failures().count();
        out.push_str(&format!(
            "{} checked, {} failed\n",
            self.declarations.len(),
            failed
        ));
        out
    }
}

// The browser build has no clock, so timings are left out there.
#[cfg(not(target_arch = "wasm32"))]
fn now() -> Option<Instant> {
    Some(Instant::now())
}

#[cfg(target_arch = "wasm32")]
fn now() -> Option<Instant> {
    None
}

fn millis(start: Option<Instant>) -> Option<f64> {
    start.map(|s| s.elapsed().as_secs_f64() * 1000.0)
}

/// Checks one source file on top of `scope`. A declaration that fails is
/// reported and left out of the scope, so its dependents fail as well.
/// A parse error is reported under the file's label.
pub fn check_source(scope: &mut GlobalScope, label: &str, src: &str) -> Report {
    let mut report = Report::new();
    let decls = match parse_program(src) {
        Ok(d) => d,
        Err(e) => {
            report.fail(label, e, None);
            return report;
        }
    };
    for d in &decls {
        let start = now();
        let resolved = {
            let s: &GlobalScope = scope;
            resolve_decl(&|x| s.contains(x), d)
        };
        let result = resolved.and_then(|core| {
            check_declaration(scope, &core).map_err(|error| SurfaceError::Kernel {
                name: d.name.clone(),
                error,
            })
        });
        match result {
            Ok(_) => report.ok(&d.name, millis(start)),
            Err(SurfaceError::Kernel { error, .. }) => report.fail(&d.name, error, millis(start)),
            Err(e) => report.fail(&d.name, e, millis(start)),
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn failures_do_not_stop_the_run() {
        let mut scope = GlobalScope::new();
        let r = check_source(
            &mut scope,
            "t.tt",
            "def bad : U0 := U0\npostulate A : U0\ndef uses_bad : U1 := bad",
        );
        assert!(!r.pass);
        let names: Vec<_> = r.failures().map(|e| e.name.as_str()).collect();
        assert_eq!(names, ["bad", "uses_bad"]);
        assert!(scope.contains("A"));
    }

    #[test]
    fn json_shape() {
        let mut r = Report::new();
        r.ok("a", Some(1.0));
        r.fail("b", "boom", None);
        let v: serde_json::Value = serde_json::from_str(&r.without_timing().to_json()).unwrap();
        assert_eq!(v["pass"], false);
        assert_eq!(v["declarations"][0]["status"], "ok");
        assert_eq!(v["declarations"][0]["error"], serde_json::Value::Null);
        assert_eq!(v["declarations"][1]["error"], "boom");
    }

    #[test]
    fn parse_errors_are_reported_by_file() {
        let r = check_source(&mut GlobalScope::new(), "f.tt", "def x :=");
        assert_eq!(r.declarations[0].name, "f.tt");
        assert!(!r.pass);
    }
}
