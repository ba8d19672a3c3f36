//! Real-positivity calculus in finite-dimensional complex Banach algebras.

pub mod algebra;
pub mod catalog;
pub mod error;
pub mod gallery;
pub mod geometry;
pub mod ideals;
pub mod io;
pub mod linalg;
pub mod mideals;
pub mod plot;
pub mod roots;
pub mod sample;
pub mod states;
pub mod tol;

pub use algebra::{build_algebra, Algebra, Element, MultTable, NormKind, OpDomain};
pub use error::{Error, Result};
pub use tol::Tolerances;
