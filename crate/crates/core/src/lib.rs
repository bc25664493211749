//! Motivic and topological zeta functions of the space monomial curve
//! attached to a plane-branch semigroup.

pub mod algebra;
pub mod error;
pub mod ff_oracle;
pub mod flatness;
pub mod invariants;
pub mod jets;
pub mod motivic;
pub mod rational;
pub mod semigroup;
pub mod topological;

pub use error::{Error, Result};
pub use semigroup::{GeneratorTuple, SemigroupData};
