//! Pretty printer producing surface syntax that the parser accepts.

use std::collections::HashSet;
use std::fmt::Write;

use crate::syntax::{validate, Declaration, Name, Term};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("malformed term: free variable beyond the {0} supplied names")]
pub struct MalformedTerm(pub usize);

/// Prints `term` under the given binder names (outermost first).
pub fn pretty_print(term: &Term, names: &[String]) -> Result<String, MalformedTerm> {
    if !validate(term, names.len()) {
        return Err(MalformedTerm(names.len()));
    }
    Ok(render(term, names))
}

/// Prints without validating; free variables show up as `#i`.
pub fn render(term: &Term, names: &[String]) -> String {
    let mut p = Printer {
        names: names.to_vec(),
        out: String::new(),
    };
    p.term(term, Prec::Top);
    p.out
}

/// Prints a closed declaration in source form.
pub fn pretty_decl(decl: &Declaration) -> Result<String, MalformedTerm> {
    let ty = pretty_print(&decl.ty, &[])?;
    Ok(match &decl.body {
        None => format!("postulate {} : {}", decl.name, ty),
        Some(b) => {
            let kw = if decl.opaque { "opaque def" } else { "def" };
            format!("{kw} {} : {}\n  := {}", decl.name, ty, pretty_print(b, &[])?)
        }
    })
}

#[derive(Clone, Copy, PartialEq, PartialOrd)]
enum Prec {
    Top,
    Arrow,
    App,
    Atom,
}

struct Printer {
    names: Vec<String>,
    out: String,
}

fn occurs(term: &Term, index: usize) -> bool {
    term.occurs_free(index)
}

fn mentions(term: &Term, name: &str) -> bool {
    let mut cs = Vec::new();
    term.constants(&mut cs);
    cs.iter().any(|c| &**c == name)
}

impl Printer {
    fn fresh(&self, hint: &Name, body: &Term, used: bool) -> String {
        let base = match hint.as_str() {
            "_" if used => "x",
            "_" => return "_".into(),
            s => s,
        };
        let taken: HashSet<&str> = self.names.iter().map(String::as_str).collect();
        let clash = |s: &str| taken.contains(s) || mentions(body, s) || is_keyword(s);
        if !clash(base) {
            return base.to_string();
        }
        (1..)
            .map(|k| format!("{base}{k}"))
            .find(|s| !clash(s))
            .expect("fresh name")
    }

    fn bind(&mut self, hint: &Name, body: &Term) -> String {
        let name = self.fresh(hint, body, occurs(body, 0));
        self.names.push(name.clone());
        name
    }

    fn var(&mut self, i: usize) {
        match self.names.len().checked_sub(i + 1) {
            Some(k) => {
                let n = self.names[k].clone();
                self.out.push_str(&n);
            }
            None => {
                let _ = write!(self.out, "#{i}");
            }
        }
    }

    fn paren<F: FnOnce(&mut Self)>(&mut self, need: bool, f: F) {
        if need {
            self.out.push('(');
        }
        f(self);
        if need {
            self.out.push(')');
        }
    }

    fn term(&mut self, t: &Term, prec: Prec) {
        match t {
            Term::Var(i) => self.var(*i),
            Term::Universe(l) => {
                let _ = write!(self.out, "{l}");
            }
            Term::Unit => self.out.push('1'),
            Term::Star => self.out.push('*'),
            Term::Hole(_) => self.out.push('_'),
            Term::Constant(c) => self.out.push_str(c),
            Term::Lambda(..) => self.paren(prec > Prec::Top, |p| {
                p.out.push('\\');
                let mut cur = t;
                let mut bound = 0;
                while let Term::Lambda(n, body) = cur {
                    let name = p.bind(n, body);
                    if bound > 0 {
                        p.out.push(' ');
                    }
                    p.out.push_str(&name);
                    bound += 1;
                    cur = body;
                }
                p.out.push_str(" -> ");
                p.term(cur, Prec::Top);
                p.names.truncate(p.names.len() - bound);
            }),
            Term::Pi(n, a, b) | Term::Sigma(n, a, b) => {
                let arrow = if matches!(t, Term::Pi(..)) { "->" } else { "*" };
                self.paren(prec > Prec::Arrow, |p| {
                    p.out.push('(');
                    let name = p.fresh(n, b, occurs(b, 0));
                    p.out.push_str(&name);
                    p.out.push_str(" : ");
                    p.term(a, Prec::Top);
                    let _ = write!(p.out, ") {arrow} ");
                    p.names.push(name);
                    p.term(b, Prec::Arrow);
                    p.names.pop();
                })
            }
            Term::Apply(f, a) => self.paren(prec > Prec::App, |p| {
                p.term(f, Prec::App);
                p.out.push(' ');
                p.term(a, Prec::Atom);
            }),
            Term::Fst(x) => self.keyword_app(prec, "fst", &[x]),
            Term::Snd(x) => self.keyword_app(prec, "snd", &[x]),
            Term::Refl(x) => self.keyword_app(prec, "refl", &[x]),
            Term::Id(a, x, y) => self.keyword_app(prec, "Id", &[a, x, y]),
            Term::Pair(a, b) => {
                self.out.push('(');
                self.term(a, Prec::Top);
                self.out.push_str(", ");
                self.term(b, Prec::Top);
                self.out.push(')');
            }
            Term::Annot(x, ty) => {
                self.out.push('(');
                self.term(x, Prec::Top);
                self.out.push_str(" : ");
                self.term(ty, Prec::Top);
                self.out.push(')');
            }
            Term::J(j) => self.paren(prec > Prec::App, |p| {
                p.out.push_str("J (\\");
                let [nx, ny, np] = &j.names;
                let depth = p.names.len();
                // binder hints for the motive are freshened against its body
                let x = p.fresh_used(nx, &j.motive);
                p.names.push(x.clone());
                let y = p.fresh_used(ny, &j.motive);
                p.names.push(y.clone());
                let pp = p.fresh_used(np, &j.motive);
                p.names.push(pp.clone());
                let _ = write!(p.out, "{x} {y} {pp} -> ");
                p.term(&j.motive, Prec::Top);
                p.names.truncate(depth);
                p.out.push_str(") (\\");
                let b = p.bind(&j.base_name, &j.base);
                let _ = write!(p.out, "{b} -> ");
                p.term(&j.base, Prec::Top);
                p.names.truncate(depth);
                p.out.push_str(") ");
                p.term(&j.lhs, Prec::Atom);
                p.out.push(' ');
                p.term(&j.rhs, Prec::Atom);
                p.out.push(' ');
                p.term(&j.proof, Prec::Atom);
            }),
        }
    }

    fn fresh_used(&self, hint: &Name, body: &Term) -> String {
        // never print `_` inside J binders: the binder count is fixed
        let hint = if hint.as_str() == "_" { Name::new("x") } else { hint.clone() };
        self.fresh(&hint, body, true)
    }

    fn keyword_app(&mut self, prec: Prec, kw: &str, args: &[&std::sync::Arc<Term>]) {
        self.paren(prec > Prec::App, |p| {
            p.out.push_str(kw);
            for a in args {
                p.out.push(' ');
                p.term(a, Prec::Atom);
            }
        })
    }
}

pub fn is_keyword(s: &str) -> bool {
    matches!(
        s,
        "def" | "postulate" | "opaque" | "fst" | "snd" | "Id" | "refl" | "J"
    ) || (s.starts_with('U') && s.len() > 1 && s[1..].chars().all(|c| c.is_ascii_digit()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::Term;

    #[test]
    fn identity_lambda() {
        let t = Term::Lambda(Name::anon(), std::sync::Arc::new(Term::var(0)));
        assert_eq!(pretty_print(&t, &[]).unwrap(), "\\x -> x");
    }

    #[test]
    fn arrows_and_products() {
        let pi = Term::Pi(
            Name::anon(),
            Term::universe(0).into(),
            Term::universe(0).into(),
        );
        assert_eq!(pretty_print(&pi, &[]).unwrap(), "(_ : U0) -> U0");
        let sg = Term::Sigma(Name::anon(), Term::Unit.into(), Term::Unit.into());
        assert_eq!(pretty_print(&sg, &[]).unwrap(), "(_ : 1) * 1");
    }

    #[test]
    fn malformed_is_rejected() {
        assert_eq!(pretty_print(&Term::var(2), &["a".into()]), Err(MalformedTerm(1)));
    }

    #[test]
    fn shadowing_is_renamed() {
        // \x -> \x -> (outer x)
        let t = Term::lam("x", Term::lam("x", Term::var(1)));
        assert_eq!(pretty_print(&t, &[]).unwrap(), "\\x x1 -> x");
    }
}
