//! Core term language shared by the kernel, the elaborator and the corpus.
//!
//! Variables are de Bruijn indices. Binder names are kept only as printing
//! hints and never participate in equality, so two terms are
//! alpha-equivalent exactly when they are `==`.

use std::fmt;
use std::sync::Arc;

/// Largest universe index the kernel accepts.
pub const MAX_LEVEL: u32 = 4;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Level(u32);

impl Level {
    pub const ZERO: Level = Level(0);

    pub fn new(index: u32) -> Option<Level> {
        (index <= MAX_LEVEL).then_some(Level(index))
    }

    pub fn index(self) -> u32 {
        self.0
    }

    pub fn succ(self) -> Option<Level> {
        Level::new(self.0 + 1)
    }

    pub fn max(self, other: Level) -> Level {
        Level(self.0.max(other.0))
    }
}

impl fmt::Display for Level {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "U{}", self.0)
    }
}

/// A binder's printing hint. All names compare equal.
#[derive(Clone, Debug)]
pub struct Name(pub Arc<str>);

impl Name {
    pub fn new(s: &str) -> Name {
        Name(Arc::from(s))
    }

    pub fn anon() -> Name {
        Name::new("_")
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl PartialEq for Name {
    fn eq(&self, _: &Name) -> bool {
        true
    }
}

impl Eq for Name {}

/// Names of global constants. Unlike binder hints these are significant.
pub type Ident = Arc<str>;

pub type Rc<T> = Arc<T>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Term {
    Var(usize),
    Universe(Level),
    Pi(Name, Rc<Term>, Rc<Term>),
    Lambda(Name, Rc<Term>),
    Apply(Rc<Term>, Rc<Term>),
    Sigma(Name, Rc<Term>, Rc<Term>),
    Pair(Rc<Term>, Rc<Term>),
    Fst(Rc<Term>),
    Snd(Rc<Term>),
    Unit,
    Star,
    Id(Rc<Term>, Rc<Term>, Rc<Term>),
    Refl(Rc<Term>),
    J(Box<JTerm>),
    Constant(Ident),
    Annot(Rc<Term>, Rc<Term>),
    /// Elaborator placeholder; never survives elaboration.
    Hole(usize),
}

/// `J motive base lhs rhs proof`. The motive binds `x y p` (p innermost),
/// the base binds `x`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JTerm {
    pub names: [Name; 3],
    pub motive: Term,
    pub base_name: Name,
    pub base: Term,
    pub lhs: Term,
    pub rhs: Term,
    pub proof: Term,
}

impl Term {
    pub fn var(i: usize) -> Term {
        Term::Var(i)
    }

    pub fn universe(i: u32) -> Term {
        Term::Universe(Level::new(i).expect("level within MAX_LEVEL"))
    }

    pub fn pi(name: &str, dom: Term, cod: Term) -> Term {
        Term::Pi(Name::new(name), Arc::new(dom), Arc::new(cod))
    }

    pub fn arrow(dom: Term, cod: Term) -> Term {
        Term::Pi(Name::anon(), Arc::new(dom), Arc::new(cod.shift(1, 0)))
    }

    pub fn lam(name: &str, body: Term) -> Term {
        Term::Lambda(Name::new(name), Arc::new(body))
    }

    pub fn app(f: Term, a: Term) -> Term {
        Term::Apply(Arc::new(f), Arc::new(a))
    }

    pub fn sigma(name: &str, a: Term, b: Term) -> Term {
        Term::Sigma(Name::new(name), Arc::new(a), Arc::new(b))
    }

    pub fn pair(a: Term, b: Term) -> Term {
        Term::Pair(Arc::new(a), Arc::new(b))
    }

    pub fn fst(t: Term) -> Term {
        Term::Fst(Arc::new(t))
    }

    pub fn snd(t: Term) -> Term {
        Term::Snd(Arc::new(t))
    }

    pub fn id(ty: Term, lhs: Term, rhs: Term) -> Term {
        Term::Id(Arc::new(ty), Arc::new(lhs), Arc::new(rhs))
    }

    pub fn refl(t: Term) -> Term {
        Term::Refl(Arc::new(t))
    }

    pub fn constant(name: &str) -> Term {
        Term::Constant(Arc::from(name))
    }

    pub fn annot(t: Term, ty: Term) -> Term {
        Term::Annot(Arc::new(t), Arc::new(ty))
    }

    /// Adds `by` to every free index at or above `cutoff`.
    pub fn shift(&self, by: usize, cutoff: usize) -> Term {
        self.map_vars(cutoff, &|i, depth| {
            if i >= depth {
                Term::Var(i + by)
            } else {
                Term::Var(i)
            }
        })
    }

    fn map_vars(&self, depth: usize, f: &dyn Fn(usize, usize) -> Term) -> Term {
        let go = |t: &Rc<Term>, d: usize| Arc::new(t.map_vars(d, f));
        match self {
            Term::Var(i) => f(*i, depth),
            Term::Universe(_) | Term::Unit | Term::Star | Term::Constant(_) | Term::Hole(_) => {
                self.clone()
            }
            Term::Pi(n, a, b) => Term::Pi(n.clone(), go(a, depth), go(b, depth + 1)),
            Term::Lambda(n, b) => Term::Lambda(n.clone(), go(b, depth + 1)),
            Term::Apply(g, a) => Term::Apply(go(g, depth), go(a, depth)),
            Term::Sigma(n, a, b) => Term::Sigma(n.clone(), go(a, depth), go(b, depth + 1)),
            Term::Pair(a, b) => Term::Pair(go(a, depth), go(b, depth)),
            Term::Fst(t) => Term::Fst(go(t, depth)),
            Term::Snd(t) => Term::Snd(go(t, depth)),
            Term::Id(a, x, y) => Term::Id(go(a, depth), go(x, depth), go(y, depth)),
            Term::Refl(t) => Term::Refl(go(t, depth)),
            Term::J(j) => Term::J(Box::new(JTerm {
                names: j.names.clone(),
                motive: j.motive.map_vars(depth + 3, f),
                base_name: j.base_name.clone(),
                base: j.base.map_vars(depth + 1, f),
                lhs: j.lhs.map_vars(depth, f),
                rhs: j.rhs.map_vars(depth, f),
                proof: j.proof.map_vars(depth, f),
            })),
            Term::Annot(t, ty) => Term::Annot(go(t, depth), go(ty, depth)),
        }
    }

    /// Replaces every `Hole(id)` for which `solve` answers. Solutions are
    /// given relative to the binding depth at the hole.
    pub fn fill_holes(&self, solve: &dyn Fn(usize) -> Option<Term>) -> Term {
        self.rewrite(&|t| match t {
            Term::Hole(id) => solve(*id),
            _ => None,
        })
    }

    fn rewrite(&self, f: &dyn Fn(&Term) -> Option<Term>) -> Term {
        if let Some(t) = f(self) {
            return t;
        }
        let go = |t: &Rc<Term>| Arc::new(t.rewrite(f));
        match self {
            Term::Var(_)
            | Term::Universe(_)
            | Term::Unit
            | Term::Star
            | Term::Constant(_)
            | Term::Hole(_) => self.clone(),
            Term::Pi(n, a, b) => Term::Pi(n.clone(), go(a), go(b)),
            Term::Lambda(n, b) => Term::Lambda(n.clone(), go(b)),
            Term::Apply(g, a) => Term::Apply(go(g), go(a)),
            Term::Sigma(n, a, b) => Term::Sigma(n.clone(), go(a), go(b)),
            Term::Pair(a, b) => Term::Pair(go(a), go(b)),
            Term::Fst(t) => Term::Fst(go(t)),
            Term::Snd(t) => Term::Snd(go(t)),
            Term::Id(a, x, y) => Term::Id(go(a), go(x), go(y)),
            Term::Refl(t) => Term::Refl(go(t)),
            Term::J(j) => Term::J(Box::new(JTerm {
                names: j.names.clone(),
                motive: j.motive.rewrite(f),
                base_name: j.base_name.clone(),
                base: j.base.rewrite(f),
                lhs: j.lhs.rewrite(f),
                rhs: j.rhs.rewrite(f),
                proof: j.proof.rewrite(f),
            })),
            Term::Annot(t, ty) => Term::Annot(go(t), go(ty)),
        }
    }

    /// Every constant referenced anywhere in the term.
    pub fn constants(&self, out: &mut Vec<Ident>) {
        self.visit(&mut |t| {
            if let Term::Constant(c) = t {
                out.push(c.clone());
            }
        });
    }

    /// Whether de Bruijn index `index` occurs free.
    pub fn occurs_free(&self, index: usize) -> bool {
        match self {
            Term::Var(i) => *i == index,
            Term::Universe(_) | Term::Unit | Term::Star | Term::Constant(_) | Term::Hole(_) => false,
            Term::Pi(_, a, b) | Term::Sigma(_, a, b) => a.occurs_free(index) || b.occurs_free(index + 1),
            Term::Lambda(_, b) => b.occurs_free(index + 1),
            Term::Apply(a, b) | Term::Pair(a, b) | Term::Annot(a, b) => {
                a.occurs_free(index) || b.occurs_free(index)
            }
            Term::Fst(t) | Term::Snd(t) | Term::Refl(t) => t.occurs_free(index),
            Term::Id(a, x, y) => a.occurs_free(index) || x.occurs_free(index) || y.occurs_free(index),
            Term::J(j) => {
                j.motive.occurs_free(index + 3)
                    || j.base.occurs_free(index + 1)
                    || j.lhs.occurs_free(index)
                    || j.rhs.occurs_free(index)
                    || j.proof.occurs_free(index)
            }
        }
    }

    pub fn has_holes(&self) -> bool {
        let mut found = false;
        self.visit(&mut |t| {
            if matches!(t, Term::Hole(_)) {
                found = true;
            }
        });
        found
    }

    fn visit(&self, f: &mut dyn FnMut(&Term)) {
        f(self);
        match self {
            Term::Var(_)
            | Term::Universe(_)
            | Term::Unit
            | Term::Star
            | Term::Constant(_)
            | Term::Hole(_) => {}
            Term::Pi(_, a, b) | Term::Sigma(_, a, b) | Term::Apply(a, b) | Term::Pair(a, b) => {
                a.visit(f);
                b.visit(f);
            }
            Term::Annot(a, b) => {
                a.visit(f);
                b.visit(f);
            }
            Term::Lambda(_, b) | Term::Fst(b) | Term::Snd(b) | Term::Refl(b) => b.visit(f),
            Term::Id(a, x, y) => {
                a.visit(f);
                x.visit(f);
                y.visit(f);
            }
            Term::J(j) => {
                j.motive.visit(f);
                j.base.visit(f);
                j.lhs.visit(f);
                j.rhs.visit(f);
                j.proof.visit(f);
            }
        }
    }

    /// Number of nodes, used for sizing reports.
    pub fn size(&self) -> usize {
        let mut n = 0;
        self.visit(&mut |_| n += 1);
        n
    }
}

/// True iff every variable is bound, given `depth` enclosing binders.
/// Holes are rejected.
pub fn validate(term: &Term, depth: usize) -> bool {
    match term {
        Term::Var(i) => *i < depth,
        Term::Universe(_) | Term::Unit | Term::Star | Term::Constant(_) => true,
        Term::Hole(_) => false,
        Term::Pi(_, a, b) | Term::Sigma(_, a, b) => validate(a, depth) && validate(b, depth + 1),
        Term::Lambda(_, b) => validate(b, depth + 1),
        Term::Apply(a, b) | Term::Pair(a, b) | Term::Annot(a, b) => {
            validate(a, depth) && validate(b, depth)
        }
        Term::Fst(t) | Term::Snd(t) | Term::Refl(t) => validate(t, depth),
        Term::Id(a, x, y) => validate(a, depth) && validate(x, depth) && validate(y, depth),
        Term::J(j) => {
            validate(&j.motive, depth + 3)
                && validate(&j.base, depth + 1)
                && validate(&j.lhs, depth)
                && validate(&j.rhs, depth)
                && validate(&j.proof, depth)
        }
    }
}

#[derive(Clone, Debug, Default)]
pub struct Context {
    pub entries: Vec<(Name, Term)>,
}

impl Context {
    pub fn new() -> Context {
        Context::default()
    }

    pub fn push(mut self, name: &str, ty: Term) -> Context {
        self.entries.push((Name::new(name), ty));
        self
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Binder names, innermost last.
    pub fn names(&self) -> Vec<String> {
        self.entries.iter().map(|(n, _)| n.as_str().to_string()).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Declaration {
    pub name: Ident,
    pub ty: Term,
    /// `None` for postulates.
    pub body: Option<Term>,
    /// Opaque definitions are checked but never unfold.
    pub opaque: bool,
}

impl Declaration {
    pub fn is_postulate(&self) -> bool {
        self.body.is_none()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validate_examples() {
        assert!(validate(&Term::var(0), 1));
        assert!(!validate(&Term::var(0), 0));
        assert!(validate(&Term::lam("x", Term::var(0)), 0));
        assert!(!validate(&Term::lam("x", Term::var(1)), 0));
        assert!(!validate(&Term::Hole(0), 3));
    }

    #[test]
    fn names_do_not_affect_equality() {
        assert_eq!(Term::lam("x", Term::var(0)), Term::lam("y", Term::var(0)));
        assert_ne!(Term::constant("a"), Term::constant("b"));
    }

    #[test]
    fn shift_respects_binders() {
        let t = Term::lam("x", Term::app(Term::var(0), Term::var(1)));
        assert_eq!(t.shift(2, 0), Term::lam("x", Term::app(Term::var(0), Term::var(3))));
    }

    #[test]
    fn level_bounds() {
        assert!(Level::new(MAX_LEVEL).is_some());
        assert!(Level::new(MAX_LEVEL + 1).is_none());
        assert_eq!(Level::new(MAX_LEVEL).unwrap().succ(), None);
    }
}
