//! Exact quantum set theory over the projection lattice of a
//! finite-dimensional rational inner-product space.

pub mod classical;
pub mod commutator;
pub mod corpus;
pub mod env;
pub mod error;
pub mod eval;
pub mod formula;
pub mod generate;
pub mod harness;
pub mod lattice;
pub mod linalg;
pub mod universe;

pub use env::Environment;
pub use error::{Error, Result};
pub use eval::{eval, Evaluator, SemanticsMode};
pub use formula::{parse, print, Formula, Term};
pub use lattice::{Classification, Conditional, LogicContext, Projection};
pub use universe::{HFSet, QSet, QUniverse};

/// Largest ambient dimension accepted anywhere in the crate.
pub const MAX_DIMENSION: usize = 8;
