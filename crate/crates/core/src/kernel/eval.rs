//! Evaluation of core terms into values.

use std::sync::Arc;

use super::scope::GlobalScope;
use super::value::{Closure, Closure3, Elim, Env, JElim, Neutral, Value};
use crate::syntax::Term;

pub fn eval(scope: &GlobalScope, env: &Env, term: &Term) -> Value {
    match term {
        Term::Var(i) => env
            .lookup(*i)
            .cloned()
            .unwrap_or_else(|| panic!("unbound index {i} at depth {}", env.len())),
        Term::Universe(l) => Value::Universe(*l),
        Term::Pi(n, a, b) => Value::Pi(
            n.clone(),
            Arc::new(eval(scope, env, a)),
            Closure {
                env: env.clone(),
                body: b.clone(),
            },
        ),
        Term::Lambda(n, b) => Value::Lambda(
            n.clone(),
            Closure {
                env: env.clone(),
                body: b.clone(),
            },
        ),
        Term::Apply(f, a) => apply(scope, eval(scope, env, f), eval(scope, env, a)),
        Term::Sigma(n, a, b) => Value::Sigma(
            n.clone(),
            Arc::new(eval(scope, env, a)),
            Closure {
                env: env.clone(),
                body: b.clone(),
            },
        ),
        Term::Pair(a, b) => Value::Pair(Arc::new(eval(scope, env, a)), Arc::new(eval(scope, env, b))),
        Term::Fst(t) => fst(eval(scope, env, t)),
        Term::Snd(t) => snd(eval(scope, env, t)),
        Term::Unit => Value::Unit,
        Term::Star => Value::Star,
        Term::Id(a, x, y) => Value::Id(
            Arc::new(eval(scope, env, a)),
            Arc::new(eval(scope, env, x)),
            Arc::new(eval(scope, env, y)),
        ),
        Term::Refl(t) => Value::Refl(Arc::new(eval(scope, env, t))),
        Term::J(j) => {
            let elim = JElim {
                names: j.names.clone(),
                motive: Closure3 {
                    env: env.clone(),
                    body: Arc::new(j.motive.clone()),
                },
                base_name: j.base_name.clone(),
                base: Closure {
                    env: env.clone(),
                    body: Arc::new(j.base.clone()),
                },
                lhs: eval(scope, env, &j.lhs),
                rhs: eval(scope, env, &j.rhs),
            };
            elim_j(scope, Arc::new(elim), eval(scope, env, &j.proof))
        }
        Term::Constant(name) => scope.unfold(name),
        Term::Annot(t, _) => eval(scope, env, t),
        Term::Hole(id) => panic!("unsolved placeholder #{id} reached evaluation"),
    }
}

pub fn inst(scope: &GlobalScope, clo: &Closure, arg: Value) -> Value {
    eval(scope, &clo.env.push(arg), &clo.body)
}

pub fn inst3(scope: &GlobalScope, clo: &Closure3, x: Value, y: Value, p: Value) -> Value {
    eval(scope, &clo.env.push(x).push(y).push(p), &clo.body)
}

fn push_elim(n: &Neutral, e: Elim) -> Value {
    let mut spine = n.spine.clone();
    spine.push(e);
    Value::Neutral(Arc::new(Neutral {
        head: n.head.clone(),
        spine,
    }))
}

pub fn apply(scope: &GlobalScope, f: Value, arg: Value) -> Value {
    match f {
        Value::Lambda(_, clo) => inst(scope, &clo, arg),
        Value::Neutral(n) => push_elim(&n, Elim::Apply(arg)),
        other => panic!("apply on non-function {other:?}"),
    }
}

pub fn fst(v: Value) -> Value {
    match v {
        Value::Pair(a, _) => (*a).clone(),
        Value::Neutral(n) => push_elim(&n, Elim::Fst),
        other => panic!("fst on non-pair {other:?}"),
    }
}

pub fn snd(v: Value) -> Value {
    match v {
        Value::Pair(_, b) => (*b).clone(),
        Value::Neutral(n) => push_elim(&n, Elim::Snd),
        other => panic!("snd on non-pair {other:?}"),
    }
}

pub fn elim_j(scope: &GlobalScope, j: Arc<JElim>, proof: Value) -> Value {
    match proof {
        Value::Refl(_) => inst(scope, &j.base, j.lhs.clone()),
        Value::Neutral(n) => push_elim(&n, Elim::J(j)),
        other => panic!("J on non-path {other:?}"),
    }
}

/// Re-applies a spine to a value.
pub fn apply_elim(scope: &GlobalScope, v: Value, e: &Elim) -> Value {
    match e {
        Elim::Apply(a) => apply(scope, v, a.clone()),
        Elim::Fst => fst(v),
        Elim::Snd => snd(v),
        Elim::J(j) => elim_j(scope, j.clone(), v),
    }
}
