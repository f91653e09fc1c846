//! Semantic domain for normalization by evaluation.

use std::sync::Arc;

use crate::syntax::{Ident, Level, Name, Term};

/// Persistent environment, innermost binding first.
#[derive(Clone, Debug, Default)]
pub struct Env(Option<Arc<EnvNode>>);

#[derive(Debug)]
pub struct EnvNode {
    value: Value,
    next: Env,
    len: usize,
}

impl Env {
    pub fn new() -> Env {
        Env(None)
    }

    pub fn len(&self) -> usize {
        self.0.as_ref().map_or(0, |n| n.len)
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_none()
    }

    pub fn push(&self, value: Value) -> Env {
        let len = self.len() + 1;
        Env(Some(Arc::new(EnvNode {
            value,
            next: self.clone(),
            len,
        })))
    }

    pub fn lookup(&self, index: usize) -> Option<&Value> {
        let mut cur = self;
        let mut i = index;
        loop {
            let node = cur.0.as_ref()?;
            if i == 0 {
                return Some(&node.value);
            }
            i -= 1;
            cur = &node.next;
        }
    }

    pub fn tail(&self) -> Env {
        self.0.as_ref().map_or(Env(None), |n| n.next.clone())
    }

    /// Environment of fresh variables `0..depth`.
    pub fn identity(depth: usize) -> Env {
        (0..depth).fold(Env::new(), |env, lvl| env.push(Value::var(lvl)))
    }
}

#[derive(Clone, Debug)]
pub struct Closure {
    pub env: Env,
    pub body: Arc<Term>,
}

/// A closure binding several variables at once (the J motive).
#[derive(Clone, Debug)]
pub struct Closure3 {
    pub env: Env,
    pub body: Arc<Term>,
}

#[derive(Clone, Debug)]
pub enum Head {
    /// De Bruijn level.
    Var(usize),
    /// Postulate or opaque definition.
    Const(Ident),
}

#[derive(Clone, Debug)]
pub enum Elim {
    Apply(Value),
    Fst,
    Snd,
    J(Arc<JElim>),
}

#[derive(Clone, Debug)]
pub struct JElim {
    pub names: [Name; 3],
    pub motive: Closure3,
    pub base_name: Name,
    pub base: Closure,
    pub lhs: Value,
    pub rhs: Value,
}

#[derive(Clone, Debug)]
pub struct Neutral {
    pub head: Head,
    pub spine: Vec<Elim>,
}

#[derive(Clone, Debug)]
pub enum Value {
    Universe(Level),
    Pi(Name, Arc<Value>, Closure),
    Lambda(Name, Closure),
    Sigma(Name, Arc<Value>, Closure),
    Pair(Arc<Value>, Arc<Value>),
    Unit,
    Star,
    Id(Arc<Value>, Arc<Value>, Arc<Value>),
    Refl(Arc<Value>),
    Neutral(Arc<Neutral>),
}

impl Value {
    pub fn var(level: usize) -> Value {
        Value::Neutral(Arc::new(Neutral {
            head: Head::Var(level),
            spine: Vec::new(),
        }))
    }

    pub fn constant(name: Ident) -> Value {
        Value::Neutral(Arc::new(Neutral {
            head: Head::Const(name),
            spine: Vec::new(),
        }))
    }
}
