//! Name resolution from surface terms to core terms.
//!
//! Placeholders become `Term::Hole`s; the kernel fills them in from the
//! expected type while checking the declaration.

use std::sync::Arc;

use super::{SurfaceDecl, SurfaceError, SurfaceTerm as S};
use crate::kernel::{check_declaration, GlobalScope};
use crate::syntax::{Declaration, JTerm, Level, Name, Term};

type Result<T> = std::result::Result<T, SurfaceError>;

struct Resolver<'a> {
    is_global: &'a dyn Fn(&str) -> bool,
    locals: Vec<String>,
    holes: usize,
}

impl Resolver<'_> {
    fn lookup(&self, name: &str) -> Option<usize> {
        self.locals.iter().rev().position(|n| n == name)
    }

    fn under<T>(&mut self, names: &[String], f: impl FnOnce(&mut Self) -> T) -> T {
        let n = self.locals.len();
        self.locals.extend(names.iter().cloned());
        let out = f(self);
        self.locals.truncate(n);
        out
    }

    fn term(&mut self, t: &S) -> Result<Term> {
        Ok(match t {
            S::Var(x, pos) => match self.lookup(x) {
                Some(i) => Term::Var(i),
                None if (self.is_global)(x) => Term::Constant(Arc::from(x.as_str())),
                None => {
                    return Err(SurfaceError::UnboundIdentifier {
                        pos: *pos,
                        name: x.clone(),
                    })
                }
            },
            S::Universe(n, pos) => match Level::new(*n) {
                Some(l) => Term::Universe(l),
                None => return Err(SurfaceError::UniverseOutOfRange { pos: *pos, level: *n }),
            },
            S::Pi(names, a, b) | S::Sigma(names, a, b) => {
                let a = self.term(a)?;
                let b = self.under(names, |r| r.term(b))?;
                let sigma = matches!(t, S::Sigma(..));
                names.iter().enumerate().rev().fold(b, |body, (k, n)| {
                    let dom = Arc::new(a.shift(k, 0));
                    if sigma {
                        Term::Sigma(Name::new(n), dom, Arc::new(body))
                    } else {
                        Term::Pi(Name::new(n), dom, Arc::new(body))
                    }
                })
            }
            S::Arrow(a, b) => Term::arrow(self.term(a)?, self.term(b)?),
            S::Lambda(names, body) => {
                let body = self.under(names, |r| r.term(body))?;
                names
                    .iter()
                    .rev()
                    .fold(body, |b, n| Term::Lambda(Name::new(n), Arc::new(b)))
            }
            S::Pair(a, b) => Term::pair(self.term(a)?, self.term(b)?),
            S::Fst(a) => Term::fst(self.term(a)?),
            S::Snd(a) => Term::snd(self.term(a)?),
            S::Unit => Term::Unit,
            S::Star => Term::Star,
            S::Id(a, x, y) => Term::id(self.term(a)?, self.term(x)?, self.term(y)?),
            S::Refl(a) => Term::refl(self.term(a)?),
            S::Apply(f, a) => Term::app(self.term(f)?, self.term(a)?),
            S::Annot(a, ty) => Term::annot(self.term(a)?, self.term(ty)?),
            S::Hole(_) => {
                self.holes += 1;
                Term::Hole(self.holes)
            }
            S::J(args) => {
                let [motive, base, lhs, rhs, proof] = &**args;
                let (names, motive) = self.binding(motive, ["x", "y", "p"])?;
                let ([base_name], base) = self.binding(base, ["x"])?;
                Term::J(Box::new(JTerm {
                    names,
                    motive,
                    base_name,
                    base,
                    lhs: self.term(lhs)?,
                    rhs: self.term(rhs)?,
                    proof: self.term(proof)?,
                }))
            }
        })
    }

    /// Turns a function argument of J into a body under `N` binders: a
    /// syntactic lambda gives up its first `N` binders, anything else is
    /// applied to the bound variables.
    fn binding<const N: usize>(&mut self, t: &S, default: [&str; N]) -> Result<([Name; N], Term)> {
        if let S::Lambda(names, body) = t {
            if names.len() >= N {
                let rest = &names[N..];
                let inner = if rest.is_empty() {
                    (**body).clone()
                } else {
                    S::Lambda(rest.to_vec(), body.clone())
                };
                let term = self.under(&names[..N], |r| r.term(&inner))?;
                return Ok((std::array::from_fn(|i| Name::new(&names[i])), term));
            }
        }
        let f = self.term(t)?.shift(N, 0);
        let term = (0..N).rev().fold(f, |acc, i| Term::app(acc, Term::Var(i)));
        Ok((default.map(Name::new), term))
    }
}

/// Resolves a closed surface term. `is_global` decides which free names are
/// constants.
pub fn resolve_term(is_global: &dyn Fn(&str) -> bool, t: &S) -> Result<Term> {
    let mut r = Resolver {
        is_global,
        locals: Vec::new(),
        holes: 0,
    };
    r.term(t)
}

/// Resolves one declaration. The result may still contain placeholders.
pub fn resolve_decl(is_global: &dyn Fn(&str) -> bool, d: &SurfaceDecl) -> Result<Declaration> {
    let mut r = Resolver {
        is_global,
        locals: Vec::new(),
        holes: 0,
    };
    let ty = r.term(&d.ty)?;
    let body = d.body.as_ref().map(|b| r.term(b)).transpose()?;
    Ok(Declaration {
        name: Arc::from(d.name.as_str()),
        ty,
        body,
        opaque: d.opaque,
    })
}

/// Elaborates declarations on top of an existing scope, checking each one
/// so that placeholders are solved. The scope is extended as a side effect.
pub fn elaborate_into(scope: &mut GlobalScope, decls: &[SurfaceDecl]) -> Result<Vec<Declaration>> {
    let mut out = Vec::with_capacity(decls.len());
    for d in decls {
        let core = {
            let s: &GlobalScope = scope;
            resolve_decl(&|x| s.contains(x), d)?
        };
        let done = check_declaration(scope, &core).map_err(|error| SurfaceError::Kernel {
            name: d.name.clone(),
            error,
        })?;
        out.push(done);
    }
    Ok(out)
}

pub fn elaborate(decls: &[SurfaceDecl]) -> Result<Vec<Declaration>> {
    elaborate_into(&mut GlobalScope::new(), decls)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surface::parse_program;

    #[test]
    fn identity_becomes_nested_lambdas() {
        let d = elaborate(&parse_program("def id : (A : U0) -> A -> A := \\A a -> a").unwrap()).unwrap();
        assert_eq!(d[0].body, Some(Term::lam("A", Term::lam("a", Term::var(0)))));
        assert_eq!(
            d[0].ty,
            Term::pi("A", Term::universe(0), Term::arrow(Term::var(0), Term::var(0)))
        );
    }

    #[test]
    fn unbound_identifier() {
        let e = elaborate(&parse_program("def x : U0 := foo").unwrap()).unwrap_err();
        assert!(matches!(e, SurfaceError::UnboundIdentifier { ref name, .. } if name == "foo"));
    }

    #[test]
    fn binder_groups_shift_their_type() {
        let d = elaborate(&parse_program("postulate f : (A B : U0) (x : A) -> B").unwrap()).unwrap();
        let expected = Term::pi(
            "A",
            Term::universe(0),
            Term::pi("B", Term::universe(0), Term::pi("x", Term::var(1), Term::var(1))),
        );
        assert_eq!(d[0].ty, expected);
    }

    #[test]
    fn placeholder_solved_from_expected_type() {
        let src = "postulate A : U0\npostulate a : A\ndef r : Id A a a := _\ndef u : 1 := _";
        let d = elaborate(&parse_program(src).unwrap()).unwrap();
        assert_eq!(d[2].body, Some(Term::refl(Term::constant("a"))));
        assert_eq!(d[3].body, Some(Term::Star));
    }

    #[test]
    fn unsolvable_placeholder() {
        let src = "postulate A : U0\ndef r : A := _";
        let e = elaborate(&parse_program(src).unwrap()).unwrap_err();
        assert!(matches!(
            e,
            SurfaceError::Kernel {
                error: crate::kernel::KernelError::UnsolvablePlaceholder(_),
                ..
            }
        ));
    }

    #[test]
    fn j_with_non_lambda_motive() {
        let src = "postulate A : U0\n\
                   postulate M : (x y : A) -> Id A x y -> U0\n\
                   postulate m : (x : A) -> M x x (refl x)\n\
                   postulate a : A\n\
                   def t : M a a (refl a) := J M m a a (refl a)";
        elaborate(&parse_program(src).unwrap()).unwrap();
    }
}
