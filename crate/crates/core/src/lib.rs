//! Finite inverse semigroups with zero, their filter groupoids, coverages,
//! completions, and non-commutative Stone duality, checked exactly.

pub mod cli;
pub mod completion;
pub mod coverage;
pub mod duality;
pub mod elemset;
pub mod error;
pub mod filters;
pub mod gen;
pub mod groupoid;
pub mod morphism;
pub mod semigroup;
pub mod topology;
pub mod universal;

pub use elemset::ElemSet;
pub use error::{Error, Result};
pub use semigroup::{ElementId, InvSemigroup};
