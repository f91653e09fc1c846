//! Surface syntax: named terms, a parser for `.tt` files, and the elaborator
//! to core terms.

mod elab;
mod lexer;
mod parser;

pub use elab::{elaborate, elaborate_into, resolve_decl, resolve_term};
pub use parser::{parse_program, parse_term};

use std::fmt;

use thiserror::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub struct Pos {
    pub line: usize,
    pub col: usize,
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SurfaceError {
    #[error("{pos}: syntax error: {msg}")]
    Syntax { pos: Pos, msg: String },
    #[error("{pos}: duplicate declaration `{name}`")]
    DuplicateName { pos: Pos, name: String },
    #[error("{pos}: unbound identifier `{name}`")]
    UnboundIdentifier { pos: Pos, name: String },
    #[error("{pos}: universe U{level} is out of range")]
    UniverseOutOfRange { pos: Pos, level: u32 },
    #[error("in `{name}`: {error}")]
    Kernel {
        name: String,
        error: crate::kernel::KernelError,
    },
}

impl SurfaceError {
    pub(crate) fn syntax(pos: Pos, msg: impl Into<String>) -> SurfaceError {
        SurfaceError::Syntax { pos, msg: msg.into() }
    }
}

/// Named terms as written in source files.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SurfaceTerm {
    Var(String, Pos),
    Universe(u32, Pos),
    /// A binder group `(x y : A) -> B`; `A` is in the outer scope.
    Pi(Vec<String>, Box<SurfaceTerm>, Box<SurfaceTerm>),
    Arrow(Box<SurfaceTerm>, Box<SurfaceTerm>),
    Lambda(Vec<String>, Box<SurfaceTerm>),
    Sigma(Vec<String>, Box<SurfaceTerm>, Box<SurfaceTerm>),
    Pair(Box<SurfaceTerm>, Box<SurfaceTerm>),
    Fst(Box<SurfaceTerm>),
    Snd(Box<SurfaceTerm>),
    Unit,
    Star,
    Id(Box<SurfaceTerm>, Box<SurfaceTerm>, Box<SurfaceTerm>),
    Refl(Box<SurfaceTerm>),
    /// Motive, base, left endpoint, right endpoint, proof.
    J(Box<[SurfaceTerm; 5]>),
    Apply(Box<SurfaceTerm>, Box<SurfaceTerm>),
    Annot(Box<SurfaceTerm>, Box<SurfaceTerm>),
    Hole(Pos),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SurfaceDecl {
    pub name: String,
    pub pos: Pos,
    pub ty: SurfaceTerm,
    pub body: Option<SurfaceTerm>,
    pub opaque: bool,
}
