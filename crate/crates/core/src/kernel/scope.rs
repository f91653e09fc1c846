use indexmap::IndexMap;

use super::eval::eval;
use super::value::{Env, Value};
use crate::syntax::{Ident, Term};

#[derive(Clone, Debug)]
pub struct ScopeEntry {
    pub ty_term: Term,
    pub ty: Value,
    pub body_term: Option<Term>,
    pub body: Option<Value>,
    pub opaque: bool,
}

impl ScopeEntry {
    pub fn is_postulate(&self) -> bool {
        self.body_term.is_none()
    }
}

/// Checked global declarations in dependency order.
#[derive(Clone, Debug, Default)]
pub struct GlobalScope {
    entries: IndexMap<Ident, ScopeEntry>,
}

impl GlobalScope {
    pub fn new() -> GlobalScope {
        GlobalScope::default()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, name: &str) -> Option<&ScopeEntry> {
        self.entries.get(name)
    }

    pub fn contains(&self, name: &str) -> bool {
        self.entries.contains_key(name)
    }

    pub fn names(&self) -> impl Iterator<Item = &Ident> {
        self.entries.keys()
    }

    pub fn entries(&self) -> impl Iterator<Item = (&Ident, &ScopeEntry)> {
        self.entries.iter()
    }

    /// Value a constant evaluates to: its body when transparent, otherwise
    /// a neutral head.
    pub fn unfold(&self, name: &Ident) -> Value {
        match self.entries.get(name) {
            Some(ScopeEntry {
                body: Some(v),
                opaque: false,
                ..
            }) => v.clone(),
            _ => Value::constant(name.clone()),
        }
    }

    /// Adds an already-checked declaration. Callers go through the checker;
    /// this performs no type checking.
    pub(crate) fn insert_checked(&mut self, name: Ident, ty: Term, body: Option<Term>, opaque: bool) {
        let ty_v = eval(self, &Env::new(), &ty);
        let body_v = body.as_ref().map(|b| eval(self, &Env::new(), b));
        self.entries.insert(
            name,
            ScopeEntry {
                ty_term: ty,
                ty: ty_v,
                body_term: body,
                body: body_v,
                opaque,
            },
        );
    }

    /// Drops a declaration and everything after it.
    pub fn truncate_at(&mut self, name: &str) {
        if let Some(i) = self.entries.get_index_of(name) {
            self.entries.truncate(i);
        }
    }
}
