//! Graded-commutative polynomial algebra on jet coordinates.

pub mod derivation;
pub mod generator;
pub mod multi_index;
pub mod poly;
pub mod universe;

pub use derivation::Derivation;
pub use generator::{FieldId, Generator, Jet, Parity};
pub use multi_index::{Dir, MultiIndex};
pub use poly::{rat, ratio, GradedPoly, Monomial, Rational};
pub use universe::{FieldInfo, Universe};
