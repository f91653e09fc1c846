//! A small dependent type theory kernel with a proof corpus decomposing the
//! univalence axiom, and a finite cubical-sets model that checks the
//! semantic side of the decomposition by exhaustive enumeration.

pub mod corpus;
pub mod kernel;
pub mod model;
pub mod print;
pub mod report;
pub mod surface;
pub mod syntax;
