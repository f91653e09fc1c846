//! Browser bindings: check a program, normalize a definition, and compare
//! interval expressions. The prelude is bundled and checked first.

use utk_core::corpus::check_sources;
use utk_core::kernel::{normalize_at, GlobalScope};
use utk_core::model::dm::{dm_eq, parse_dm, MAX_GENERATORS};
use utk_core::print::pretty_print;
use utk_core::report::{check_source, Report};
use utk_core::syntax::{Context, Term};
use wasm_bindgen::prelude::*;

const PRELUDE: &str = include_str!("../../../corpus/prelude.tt");

fn run(source: &str) -> (GlobalScope, Report) {
    check_sources([("prelude.tt", PRELUDE), ("input", source)])
}

/// Checks `source` after the prelude. Returns one line per declaration of
/// the input.
pub fn check_text(source: &str) -> String {
    let (mut scope, _) = check_sources([("prelude.tt", PRELUDE)]);
    check_source(&mut scope, "input", source).to_text()
}

pub fn normalize_text(source: &str, name: &str) -> Result<String, String> {
    let (scope, report) = run(source);
    let entry = scope.get(name).ok_or_else(|| match report.failures().next() {
        Some(e) => format!("{}: {}", e.name, e.error.as_deref().unwrap_or("")),
        None => format!("no declaration named `{name}`"),
    })?;
    let term = entry.body_term.clone().unwrap_or_else(|| Term::constant(name));
    let nf = normalize_at(&scope, &Context::new(), &term, &entry.ty_term).map_err(|e| e.to_string())?;
    pretty_print(&nf, &[]).map_err(|e| e.to_string())
}

/// Decides whether two interval expressions over `i j k l` are equal in the
/// free De Morgan algebra, and shows both normal forms.
pub fn dm_compare(lhs: &str, rhs: &str) -> Result<String, String> {
    let x = parse_dm(lhs, MAX_GENERATORS)?;
    let y = parse_dm(rhs, MAX_GENERATORS)?;
    let same = dm_eq(&x, &y).map_err(|e| e.to_string())?;
    Ok(format!("{x}  {}  {y}", if same { "=" } else { "≠" }))
}

#[wasm_bindgen(js_name = checkProgram)]
pub fn check_program(source: &str) -> String {
    check_text(source)
}

#[wasm_bindgen(js_name = normalizeDefinition)]
pub fn normalize_definition(source: &str, name: &str) -> Result<String, JsError> {
    normalize_text(source, name).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = dmEqual)]
pub fn dm_equal(lhs: &str, rhs: &str) -> Result<String, JsError> {
    dm_compare(lhs, rhs).map_err(|e| JsError::new(&e))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prelude_definitions_normalize() {
        assert_eq!(normalize_text("", "coerce_refl").unwrap(), "\\A a -> a");
    }

    #[test]
    fn user_definitions_see_the_prelude() {
        let src = "def twice : (A : U0) -> (A -> A) -> A -> A := \\A f x -> f (f x)\n\
                   def k : (A : U0) -> A -> A := \\A -> twice A (\\y -> y)";
        assert_eq!(normalize_text(src, "k").unwrap(), "\\A x -> x");
        let out = check_text(src);
        assert!(out.starts_with("ok    twice\nok    k\n"), "{out}");
    }

    #[test]
    fn page_sample_checks() {
        let page = include_str!("../www/index.html");
        let start = page.find("<textarea id=\"src\">").unwrap() + "<textarea id=\"src\">".len();
        let sample = &page[start..start + page[start..].find("</textarea>").unwrap()];
        let out = check_text(&sample.replace("&amp;", "&"));
        assert!(!out.contains("FAIL"), "{out}");
    }

    #[test]
    fn errors_are_reported() {
        assert!(check_text("def bad : U0 := U0").contains("FAIL  bad"));
        assert!(normalize_text("", "nothing").is_err());
    }

    #[test]
    fn interval_expressions() {
        assert_eq!(dm_compare("~(i & j)", "~i | ~j").unwrap(), "~j|~i  =  ~j|~i");
        assert!(dm_compare("i & ~i", "0").unwrap().contains('≠'));
        assert!(dm_compare("i &", "0").is_err());
    }
}
