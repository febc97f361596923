//! Exact symbolic calculus on the variational bicomplex of a jet space with
//! even and odd (ghost) fields.

pub mod brst;
pub mod checks;
pub mod error;
pub mod forms;
pub mod frontend;
pub mod kernel;
pub mod random;
pub mod symmetry;
pub mod variational;

pub use error::{Error, Result};
pub use forms::{Contraction, Covector, Form};
pub use kernel::*;
pub use symmetry::SuperSymmetry;
pub use variational::Lagrangian;
