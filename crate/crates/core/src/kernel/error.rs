use thiserror::Error;

use crate::syntax::MAX_LEVEL;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum KernelError {
    #[error("malformed term: {0}")]
    MalformedTerm(String),
    #[error("cannot infer a type for `{0}`; it needs an annotation")]
    NoInferableType(String),
    #[error("unbound constant `{0}`")]
    UnboundConstant(String),
    #[error("universe level exceeds U{}", MAX_LEVEL)]
    UniverseOverflow,
    #[error("type mismatch in `{term}`\n  expected: {expected}\n  found:    {found}")]
    TypeMismatch {
        term: String,
        expected: String,
        found: String,
    },
    #[error("`{term}` has type `{ty}`, expected {expected}")]
    WrongShape {
        term: String,
        ty: String,
        expected: &'static str,
    },
    #[error("`{0}` is not a type")]
    NotAType(String),
    #[error("cannot solve placeholder against `{0}`")]
    UnsolvablePlaceholder(String),
    #[error("duplicate declaration `{0}`")]
    DuplicateName(String),
}

/// A failure while checking a named declaration.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("in `{name}`: {error}")]
pub struct DeclError {
    pub name: String,
    pub error: KernelError,
}
