//! Finite, dimension-truncated cubical-sets model.

pub mod cof;
pub mod comp;
pub mod construct;
pub mod cube;
pub mod cset;
pub mod dm;
pub mod fixtures;
pub mod selftest;

use thiserror::Error;

/// Largest context whose objects are enumerated by the exhaustive checks.
pub const MAX_DIM: usize = 2;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("dimension contexts differ: {0} vs {1}")]
    ContextMismatch(usize, usize),
    #[error("element {0} is not in the object")]
    NotInObject(String),
    #[error("{0}")]
    Fixture(String),
}
