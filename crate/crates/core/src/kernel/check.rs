//! Bidirectional checking, typed conversion and eta-long read-back.

use std::collections::HashMap;
use std::sync::Arc;

use super::error::KernelError;
use super::eval::{apply, apply_elim, eval, fst, inst, inst3, snd};
use super::scope::GlobalScope;
use super::value::{Closure, Closure3, Elim, Env, Head, Neutral, Value};
use crate::print::render;
use crate::syntax::{Context, JTerm, Level, Term};

type Result<T> = std::result::Result<T, KernelError>;

/// Local checking state: one entry per bound variable, indexed by level.
pub struct Cx<'s> {
    scope: &'s GlobalScope,
    env: Env,
    types: Vec<Value>,
    names: Vec<String>,
    pub(crate) holes: HashMap<usize, Term>,
}

impl<'s> Cx<'s> {
    pub fn new(scope: &'s GlobalScope) -> Cx<'s> {
        Cx {
            scope,
            env: Env::new(),
            types: Vec::new(),
            names: Vec::new(),
            holes: HashMap::new(),
        }
    }

    pub fn from_context(scope: &'s GlobalScope, ctx: &Context) -> Result<Cx<'s>> {
        let mut cx = Cx::new(scope);
        for (name, ty) in &ctx.entries {
            if !crate::syntax::validate(ty, cx.depth()) {
                return Err(KernelError::MalformedTerm(render(ty, &cx.names)));
            }
            cx.infer_universe(ty)?;
            let v = cx.eval(ty);
            cx.push(name.as_str(), v);
        }
        Ok(cx)
    }

    pub fn depth(&self) -> usize {
        self.types.len()
    }

    pub fn eval(&self, t: &Term) -> Value {
        eval(self.scope, &self.env, t)
    }

    fn push(&mut self, name: &str, ty: Value) -> Value {
        let v = Value::var(self.depth());
        self.env = self.env.push(v.clone());
        self.types.push(ty);
        self.names.push(name.to_string());
        v
    }

    fn pop(&mut self) {
        self.types.pop();
        self.names.pop();
        self.env = self.env.tail();
    }

    fn pop_n(&mut self, n: usize) {
        for _ in 0..n {
            self.pop();
        }
    }

    fn inst(&self, clo: &Closure, v: Value) -> Value {
        inst(self.scope, clo, v)
    }

    fn motive(&self, body: &Term) -> Closure3 {
        Closure3 {
            env: self.env.clone(),
            body: Arc::new(body.clone()),
        }
    }

    fn show(&self, t: &Term) -> String {
        render(t, &self.names)
    }

    fn show_ty(&mut self, v: &Value) -> String {
        let t = self.quote_ty(v);
        self.show(&t)
    }

    // ---------------------------------------------------------------- quote

    pub fn quote(&mut self, ty: &Value, v: &Value) -> Term {
        match ty {
            Value::Pi(pn, a, b) => {
                let name = match v {
                    Value::Lambda(n, _) => n.clone(),
                    _ => pn.clone(),
                };
                let x = self.push(name.as_str(), (**a).clone());
                let cod = self.inst(b, x.clone());
                let body_v = apply(self.scope, v.clone(), x);
                let body = self.quote(&cod, &body_v);
                self.pop();
                Term::Lambda(name, Arc::new(body))
            }
            Value::Sigma(_, a, b) => {
                let x = fst(v.clone());
                let y = snd(v.clone());
                let bt = self.inst(b, x.clone());
                Term::pair(self.quote(a, &x), self.quote(&bt, &y))
            }
            Value::Unit => Term::Star,
            Value::Universe(_) => self.quote_ty(v),
            Value::Id(a, _, _) => match v {
                Value::Refl(x) => Term::refl(self.quote(a, x)),
                _ => self.quote_untyped(v),
            },
            _ => self.quote_untyped(v),
        }
    }

    fn quote_untyped(&mut self, v: &Value) -> Term {
        match v {
            Value::Neutral(n) => self.quote_ne(n).0,
            Value::Universe(_)
            | Value::Pi(..)
            | Value::Sigma(..)
            | Value::Unit
            | Value::Id(..) => self.quote_ty(v),
            Value::Star => Term::Star,
            Value::Refl(x) => {
                // only reached for ill-typed inputs; keep something printable
                let t = self.quote_untyped(x);
                Term::refl(t)
            }
            Value::Pair(a, b) => Term::pair(self.quote_untyped(a), self.quote_untyped(b)),
            Value::Lambda(n, clo) => {
                let x = self.push(n.as_str(), Value::Unit);
                let body = self.inst(clo, x);
                let t = self.quote_untyped(&body);
                self.pop();
                Term::Lambda(n.clone(), Arc::new(t))
            }
        }
    }

    pub fn quote_ty(&mut self, v: &Value) -> Term {
        match v {
            Value::Universe(l) => Term::Universe(*l),
            Value::Pi(n, a, b) | Value::Sigma(n, a, b) => {
                let at = self.quote_ty(a);
                let x = self.push(n.as_str(), (**a).clone());
                let bv = self.inst(b, x);
                let bt = self.quote_ty(&bv);
                self.pop();
                if matches!(v, Value::Pi(..)) {
                    Term::Pi(n.clone(), Arc::new(at), Arc::new(bt))
                } else {
                    Term::Sigma(n.clone(), Arc::new(at), Arc::new(bt))
                }
            }
            Value::Unit => Term::Unit,
            Value::Id(a, x, y) => {
                let at = self.quote_ty(a);
                Term::id(at, self.quote(a, x), self.quote(a, y))
            }
            Value::Neutral(n) => self.quote_ne(n).0,
            other => self.quote_untyped(other),
        }
    }

    fn head_type(&self, head: &Head) -> (Term, Value) {
        match head {
            Head::Var(l) => (Term::Var(self.depth() - 1 - l), self.types[*l].clone()),
            Head::Const(c) => {
                let ty = self
                    .scope
                    .get(c)
                    .map(|e| e.ty.clone())
                    .unwrap_or_else(|| panic!("neutral constant `{c}` not in scope"));
                (Term::Constant(c.clone()), ty)
            }
        }
    }

    fn quote_ne(&mut self, n: &Neutral) -> (Term, Value) {
        let (mut term, mut ty) = self.head_type(&n.head);
        let mut cur = Value::Neutral(Arc::new(Neutral {
            head: n.head.clone(),
            spine: Vec::new(),
        }));
        for e in &n.spine {
            match (e, &ty) {
                (Elim::Apply(a), Value::Pi(_, dom, cod)) => {
                    let at = self.quote(dom, a);
                    term = Term::app(term, at);
                    ty = self.inst(cod, a.clone());
                }
                (Elim::Fst, Value::Sigma(_, a, _)) => {
                    term = Term::fst(term);
                    ty = (**a).clone();
                }
                (Elim::Snd, Value::Sigma(_, _, b)) => {
                    term = Term::snd(term);
                    ty = self.inst(b, fst(cur.clone()));
                }
                (Elim::J(j), Value::Id(a, _, _)) => {
                    let a = (**a).clone();
                    let x = self.push(j.names[0].as_str(), a.clone());
                    let y = self.push(j.names[1].as_str(), a.clone());
                    let pty = Value::Id(Arc::new(a.clone()), Arc::new(x), Arc::new(y));
                    let p = self.push(j.names[2].as_str(), pty);
                    let (x, y) = (Value::var(self.depth() - 3), Value::var(self.depth() - 2));
                    let m = inst3(self.scope, &j.motive, x, y, p);
                    let motive = self.quote_ty(&m);
                    self.pop_n(3);
                    let x = self.push(j.base_name.as_str(), a.clone());
                    let bty = inst3(
                        self.scope,
                        &j.motive,
                        x.clone(),
                        x.clone(),
                        Value::Refl(Arc::new(x.clone())),
                    );
                    let bv = self.inst(&j.base, x);
                    let base = self.quote(&bty, &bv);
                    self.pop();
                    let lhs = self.quote(&a, &j.lhs);
                    let rhs = self.quote(&a, &j.rhs);
                    term = Term::J(Box::new(JTerm {
                        names: j.names.clone(),
                        motive,
                        base_name: j.base_name.clone(),
                        base,
                        lhs,
                        rhs,
                        proof: term,
                    }));
                    ty = inst3(self.scope, &j.motive, j.lhs.clone(), j.rhs.clone(), cur.clone());
                }
                (e, t) => panic!("ill-typed neutral: {e:?} against {t:?}"),
            }
            cur = apply_elim(self.scope, cur, e);
        }
        (term, ty)
    }

    // ----------------------------------------------------------- conversion

    pub fn conv(&mut self, ty: &Value, a: &Value, b: &Value) -> bool {
        match ty {
            Value::Pi(n, dom, cod) => {
                let x = self.push(n.as_str(), (**dom).clone());
                let c = self.inst(cod, x.clone());
                let fa = apply(self.scope, a.clone(), x.clone());
                let fb = apply(self.scope, b.clone(), x);
                let r = self.conv(&c, &fa, &fb);
                self.pop();
                r
            }
            Value::Sigma(_, da, cod) => {
                let (a1, b1) = (fst(a.clone()), fst(b.clone()));
                if !self.conv(da, &a1, &b1) {
                    return false;
                }
                let c = self.inst(cod, a1);
                self.conv(&c, &snd(a.clone()), &snd(b.clone()))
            }
            Value::Unit => true,
            Value::Universe(_) => self.conv_ty(a, b),
            Value::Id(t, _, _) => match (a, b) {
                (Value::Refl(x), Value::Refl(y)) => self.conv(t, x, y),
                (Value::Neutral(x), Value::Neutral(y)) => self.conv_ne(x, y).is_some(),
                _ => false,
            },
            _ => match (a, b) {
                (Value::Neutral(x), Value::Neutral(y)) => self.conv_ne(x, y).is_some(),
                _ => false,
            },
        }
    }

    pub fn conv_ty(&mut self, a: &Value, b: &Value) -> bool {
        match (a, b) {
            (Value::Universe(i), Value::Universe(j)) => i == j,
            (Value::Unit, Value::Unit) => true,
            (Value::Pi(n, a1, b1), Value::Pi(_, a2, b2))
            | (Value::Sigma(n, a1, b1), Value::Sigma(_, a2, b2))
                if matches!(a, Value::Pi(..)) == matches!(b, Value::Pi(..)) =>
            {
                if !self.conv_ty(a1, a2) {
                    return false;
                }
                let x = self.push(n.as_str(), (**a1).clone());
                let (c1, c2) = (self.inst(b1, x.clone()), self.inst(b2, x));
                let r = self.conv_ty(&c1, &c2);
                self.pop();
                r
            }
            (Value::Id(t1, x1, y1), Value::Id(t2, x2, y2)) => {
                self.conv_ty(t1, t2) && self.conv(t1, x1, x2) && self.conv(t1, y1, y2)
            }
            (Value::Neutral(x), Value::Neutral(y)) => self.conv_ne(x, y).is_some(),
            _ => false,
        }
    }

    /// Compares two neutral values, returning their common type.
    fn conv_ne(&mut self, n1: &Neutral, n2: &Neutral) -> Option<Value> {
        let same_head = match (&n1.head, &n2.head) {
            (Head::Var(a), Head::Var(b)) => a == b,
            (Head::Const(a), Head::Const(b)) => a == b,
            _ => false,
        };
        if !same_head || n1.spine.len() != n2.spine.len() {
            return None;
        }
        let (_, mut ty) = self.head_type(&n1.head);
        let mut cur = Value::Neutral(Arc::new(Neutral {
            head: n1.head.clone(),
            spine: Vec::new(),
        }));
        for (e1, e2) in n1.spine.iter().zip(&n2.spine) {
            let next = match (e1, e2, &ty) {
                (Elim::Apply(a1), Elim::Apply(a2), Value::Pi(_, dom, cod)) => {
                    if !self.conv(dom, a1, a2) {
                        return None;
                    }
                    self.inst(cod, a1.clone())
                }
                (Elim::Fst, Elim::Fst, Value::Sigma(_, a, _)) => (**a).clone(),
                (Elim::Snd, Elim::Snd, Value::Sigma(_, _, b)) => self.inst(b, fst(cur.clone())),
                (Elim::J(j1), Elim::J(j2), Value::Id(a, _, _)) => {
                    let a = (**a).clone();
                    let x = self.push("x", a.clone());
                    let y = self.push("y", a.clone());
                    let p = self.push("p", Value::Id(Arc::new(a.clone()), Arc::new(x.clone()), Arc::new(y.clone())));
                    let m1 = inst3(self.scope, &j1.motive, x.clone(), y.clone(), p.clone());
                    let m2 = inst3(self.scope, &j2.motive, x, y, p);
                    let ok = self.conv_ty(&m1, &m2);
                    self.pop_n(3);
                    if !ok {
                        return None;
                    }
                    let x = self.push("x", a.clone());
                    let refl = Value::Refl(Arc::new(x.clone()));
                    let bty = inst3(self.scope, &j1.motive, x.clone(), x.clone(), refl);
                    let (b1, b2) = (self.inst(&j1.base, x.clone()), self.inst(&j2.base, x));
                    let ok = self.conv(&bty, &b1, &b2);
                    self.pop();
                    if !ok || !self.conv(&a, &j1.lhs, &j2.lhs) || !self.conv(&a, &j1.rhs, &j2.rhs) {
                        return None;
                    }
                    inst3(self.scope, &j1.motive, j1.lhs.clone(), j1.rhs.clone(), cur.clone())
                }
                _ => return None,
            };
            ty = next;
            cur = apply_elim(self.scope, cur, e1);
        }
        Some(ty)
    }

    /// Cumulative subtyping: universes grow, Pi is covariant in its codomain.
    pub fn sub_ty(&mut self, a: &Value, b: &Value) -> bool {
        match (a, b) {
            (Value::Universe(i), Value::Universe(j)) => i <= j,
            (Value::Pi(n, a1, b1), Value::Pi(_, a2, b2)) => {
                if !self.conv_ty(a1, a2) {
                    return false;
                }
                let x = self.push(n.as_str(), (**a1).clone());
                let (c1, c2) = (self.inst(b1, x.clone()), self.inst(b2, x));
                let r = self.sub_ty(&c1, &c2);
                self.pop();
                r
            }
            (Value::Sigma(n, a1, b1), Value::Sigma(_, a2, b2)) => {
                if !self.sub_ty(a1, a2) {
                    return false;
                }
                let x = self.push(n.as_str(), (**a1).clone());
                let (c1, c2) = (self.inst(b1, x.clone()), self.inst(b2, x));
                let r = self.sub_ty(&c1, &c2);
                self.pop();
                r
            }
            _ => self.conv_ty(a, b),
        }
    }

    // ------------------------------------------------------------- checking

    pub fn infer_universe(&mut self, t: &Term) -> Result<Level> {
        match self.infer(t)? {
            Value::Universe(l) => Ok(l),
            _ => Err(KernelError::NotAType(self.show(t))),
        }
    }

    pub fn check(&mut self, t: &Term, ty: &Value) -> Result<()> {
        match (t, ty) {
            (Term::Lambda(n, body), Value::Pi(_, a, b)) => {
                let x = self.push(n.as_str(), (**a).clone());
                let cod = self.inst(b, x);
                let r = self.check(body, &cod);
                self.pop();
                r
            }
            (Term::Lambda(..), _) => Err(self.wrong_shape(t, ty, "a function type")),
            (Term::Pair(a, b), Value::Sigma(_, da, cod)) => {
                self.check(a, da)?;
                let av = self.eval(a);
                let bt = self.inst(cod, av);
                self.check(b, &bt)
            }
            (Term::Pair(..), _) => Err(self.wrong_shape(t, ty, "a pair type")),
            (Term::Refl(x), Value::Id(a, l, r)) => {
                self.check(x, a)?;
                let xv = self.eval(x);
                if self.conv(a, &xv, l) && self.conv(a, &xv, r) {
                    Ok(())
                } else {
                    let found = Value::Id(a.clone(), Arc::new(xv.clone()), Arc::new(xv));
                    Err(self.mismatch(t, ty, &found))
                }
            }
            (Term::Hole(id), _) => {
                let sol = self
                    .solve_hole(ty)
                    .ok_or_else(|| KernelError::UnsolvablePlaceholder(self.show_ty(ty)))?;
                self.holes.insert(*id, sol);
                Ok(())
            }
            _ => {
                let found = self.infer(t)?;
                if self.sub_ty(&found, ty) {
                    Ok(())
                } else {
                    Err(self.mismatch(t, ty, &found))
                }
            }
        }
    }

    /// Placeholders are solved only when the expected type has exactly one
    /// canonical inhabitant visible from its shape.
    fn solve_hole(&mut self, ty: &Value) -> Option<Term> {
        match ty {
            Value::Unit => Some(Term::Star),
            Value::Id(a, l, r) => {
                if self.conv(a, l, r) {
                    Some(Term::refl(self.quote(a, l)))
                } else {
                    None
                }
            }
            Value::Sigma(_, a, b) => {
                let first = self.solve_hole(a)?;
                let fv = self.eval(&first);
                let bt = self.inst(b, fv);
                let second = self.solve_hole(&bt)?;
                Some(Term::pair(first, second))
            }
            _ => None,
        }
    }

    fn mismatch(&mut self, t: &Term, expected: &Value, found: &Value) -> KernelError {
        KernelError::TypeMismatch {
            term: self.show(t),
            expected: self.show_ty(expected),
            found: self.show_ty(found),
        }
    }

    fn wrong_shape(&mut self, t: &Term, ty: &Value, expected: &'static str) -> KernelError {
        KernelError::WrongShape {
            term: self.show(t),
            ty: self.show_ty(ty),
            expected,
        }
    }

    pub fn infer(&mut self, t: &Term) -> Result<Value> {
        match t {
            Term::Var(i) => {
                if *i >= self.depth() {
                    return Err(KernelError::MalformedTerm(format!("unbound index {i}")));
                }
                Ok(self.types[self.depth() - 1 - i].clone())
            }
            Term::Universe(l) => l.succ().map(Value::Universe).ok_or(KernelError::UniverseOverflow),
            Term::Pi(n, a, b) | Term::Sigma(n, a, b) => {
                let la = self.infer_universe(a)?;
                let av = self.eval(a);
                self.push(n.as_str(), av);
                let lb = self.infer_universe(b);
                self.pop();
                Ok(Value::Universe(la.max(lb?)))
            }
            Term::Lambda(..) | Term::Pair(..) | Term::Hole(_) => {
                Err(KernelError::NoInferableType(self.show(t)))
            }
            Term::Apply(f, a) => {
                let fty = self.infer(f)?;
                match &fty {
                    Value::Pi(_, dom, cod) => {
                        self.check(a, dom)?;
                        let av = self.eval(a);
                        Ok(self.inst(cod, av))
                    }
                    _ => Err(self.wrong_shape(f, &fty, "a function type")),
                }
            }
            Term::Fst(p) | Term::Snd(p) => {
                let pty = self.infer(p)?;
                match &pty {
                    Value::Sigma(_, a, b) => {
                        if matches!(t, Term::Fst(_)) {
                            Ok((**a).clone())
                        } else {
                            let pv = self.eval(p);
                            Ok(self.inst(b, fst(pv)))
                        }
                    }
                    _ => Err(self.wrong_shape(p, &pty, "a pair type")),
                }
            }
            Term::Unit => Ok(Value::Universe(Level::ZERO)),
            Term::Star => Ok(Value::Unit),
            Term::Id(a, x, y) => {
                let l = self.infer_universe(a)?;
                let av = self.eval(a);
                self.check(x, &av)?;
                self.check(y, &av)?;
                Ok(Value::Universe(l))
            }
            Term::Refl(x) => {
                let a = self.infer(x)?;
                let xv = Arc::new(self.eval(x));
                Ok(Value::Id(Arc::new(a), xv.clone(), xv))
            }
            Term::J(j) => self.infer_j(j),
            Term::Constant(c) => self
                .scope
                .get(c)
                .map(|e| e.ty.clone())
                .ok_or_else(|| KernelError::UnboundConstant(c.to_string())),
            Term::Annot(x, ty) => {
                self.infer_universe(ty)?;
                let tv = self.eval(ty);
                self.check(x, &tv)?;
                Ok(tv)
            }
        }
    }

    fn infer_j(&mut self, j: &JTerm) -> Result<Value> {
        // the carrier comes from the proof when it synthesises, else from lhs
        let proof_ty = match self.infer(&j.proof) {
            Ok(ty) => Some(ty),
            Err(KernelError::NoInferableType(_)) => None,
            Err(e) => return Err(e),
        };
        let carrier = match &proof_ty {
            Some(Value::Id(a, _, _)) => (**a).clone(),
            Some(other) => {
                let other = other.clone();
                return Err(self.wrong_shape(&j.proof, &other, "an identity type"));
            }
            None => self.infer(&j.lhs)?,
        };
        self.check(&j.lhs, &carrier)?;
        self.check(&j.rhs, &carrier)?;
        let (lv, rv) = (self.eval(&j.lhs), self.eval(&j.rhs));
        let expected = Value::Id(Arc::new(carrier.clone()), Arc::new(lv.clone()), Arc::new(rv.clone()));
        match proof_ty {
            Some(found) => {
                if !self.conv_ty(&found, &expected) {
                    return Err(self.mismatch(&j.proof, &expected, &found));
                }
            }
            None => self.check(&j.proof, &expected)?,
        }

        let x = self.push(j.names[0].as_str(), carrier.clone());
        let y = self.push(j.names[1].as_str(), carrier.clone());
        self.push(
            j.names[2].as_str(),
            Value::Id(Arc::new(carrier.clone()), Arc::new(x), Arc::new(y)),
        );
        let r = self.infer_universe(&j.motive);
        self.pop_n(3);
        r?;

        let motive = self.motive(&j.motive);
        let x = self.push(j.base_name.as_str(), carrier);
        let bty = inst3(self.scope, &motive, x.clone(), x.clone(), Value::Refl(Arc::new(x)));
        let r = self.check(&j.base, &bty);
        self.pop();
        r?;

        let pv = self.eval(&j.proof);
        Ok(inst3(self.scope, &motive, lv, rv, pv))
    }
}
