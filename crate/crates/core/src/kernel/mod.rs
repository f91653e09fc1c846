//! Bidirectional type checker for the core language. Definitional equality
//! is decided by normalization by evaluation with eta for Pi, Sigma and
//! Unit.

mod check;
mod error;
mod eval;
mod scope;
mod value;

pub use check::Cx;
pub use error::{DeclError, KernelError};
pub use scope::{GlobalScope, ScopeEntry};
pub use value::Value;

use crate::syntax::{validate, Context, Declaration, Term};

type Result<T> = std::result::Result<T, KernelError>;

fn scoped(term: &Term, ctx: &Context) -> Result<()> {
    if validate(term, ctx.len()) {
        Ok(())
    } else {
        Err(KernelError::MalformedTerm(crate::print::render(term, &ctx.names())))
    }
}

/// Eta-long beta normal form of a term whose type can be inferred.
pub fn normalize(scope: &GlobalScope, ctx: &Context, term: &Term) -> Result<Term> {
    scoped(term, ctx)?;
    let mut cx = Cx::from_context(scope, ctx)?;
    let ty = cx.infer(term)?;
    let v = cx.eval(term);
    Ok(cx.quote(&ty, &v))
}

/// Normal form of `term` read back at the given type.
pub fn normalize_at(scope: &GlobalScope, ctx: &Context, term: &Term, ty: &Term) -> Result<Term> {
    scoped(term, ctx)?;
    scoped(ty, ctx)?;
    let mut cx = Cx::from_context(scope, ctx)?;
    cx.infer_universe(ty)?;
    let tv = cx.eval(ty);
    cx.check(term, &tv)?;
    let v = cx.eval(term);
    Ok(cx.quote(&tv, &v))
}

/// Definitional equality of `t` and `u` at `ty`.
pub fn convertible(scope: &GlobalScope, ctx: &Context, t: &Term, u: &Term, ty: &Term) -> Result<bool> {
    scoped(t, ctx)?;
    scoped(u, ctx)?;
    scoped(ty, ctx)?;
    let mut cx = Cx::from_context(scope, ctx)?;
    let tv = cx.eval(ty);
    let (a, b) = (cx.eval(t), cx.eval(u));
    Ok(cx.conv(&tv, &a, &b))
}

/// Definitional equality of two types, each checked to be a type first.
pub fn types_equal(scope: &GlobalScope, ctx: &Context, a: &Term, b: &Term) -> Result<bool> {
    scoped(a, ctx)?;
    scoped(b, ctx)?;
    let mut cx = Cx::from_context(scope, ctx)?;
    cx.infer_universe(a)?;
    cx.infer_universe(b)?;
    let (va, vb) = (cx.eval(a), cx.eval(b));
    Ok(cx.conv_ty(&va, &vb))
}

pub fn infer(scope: &GlobalScope, ctx: &Context, term: &Term) -> Result<Term> {
    scoped(term, ctx)?;
    let mut cx = Cx::from_context(scope, ctx)?;
    let ty = cx.infer(term)?;
    Ok(cx.quote_ty(&ty))
}

pub fn check(scope: &GlobalScope, ctx: &Context, term: &Term, ty: &Term) -> Result<()> {
    scoped(term, ctx)?;
    scoped(ty, ctx)?;
    let mut cx = Cx::from_context(scope, ctx)?;
    cx.infer_universe(ty)?;
    let tv = cx.eval(ty);
    cx.check(term, &tv)
}

/// Checks one declaration and extends the scope with it. Placeholders in
/// the declaration are solved and the completed declaration is returned.
pub fn check_declaration(scope: &mut GlobalScope, decl: &Declaration) -> Result<Declaration> {
    if scope.contains(&decl.name) {
        return Err(KernelError::DuplicateName(decl.name.to_string()));
    }
    let (ty, body) = {
        let mut cx = Cx::new(scope);
        cx.infer_universe(&decl.ty)?;
        let ty = fill(&decl.ty, &mut cx)?;
        let tv = cx.eval(&ty);
        let body = match &decl.body {
            Some(b) => {
                cx.check(b, &tv)?;
                Some(fill(b, &mut cx)?)
            }
            None => None,
        };
        (ty, body)
    };
    scope.insert_checked(decl.name.clone(), ty.clone(), body.clone(), decl.opaque);
    Ok(Declaration {
        name: decl.name.clone(),
        ty,
        body,
        opaque: decl.opaque,
    })
}

fn fill(t: &Term, cx: &mut Cx<'_>) -> Result<Term> {
    if !t.has_holes() {
        return Ok(t.clone());
    }
    let filled = t.fill_holes(&|id| cx.holes.get(&id).cloned());
    if filled.has_holes() {
        return Err(KernelError::UnsolvablePlaceholder(crate::print::render(t, &[])));
    }
    Ok(filled)
}

/// Checks declarations in order, stopping at the first failure.
pub fn check_program(decls: &[Declaration]) -> std::result::Result<GlobalScope, DeclError> {
    let mut scope = GlobalScope::new();
    extend_program(&mut scope, decls)?;
    Ok(scope)
}

pub fn extend_program(scope: &mut GlobalScope, decls: &[Declaration]) -> std::result::Result<(), DeclError> {
    for d in decls {
        check_declaration(scope, d).map_err(|error| DeclError {
            name: d.name.to_string(),
            error,
        })?;
    }
    Ok(())
}

#[cfg(test)]
mod tests;
