//! Deformations of complete simplicial toric varieties.
//!
//! For a complete simplicial fan this crate computes the multigraded pieces of
//! `H^1(X, T_X)` and `H^2(X, T_X)`, the cup product between first-order
//! deformations, and certificates that the product does not vanish.

pub mod agreement;
pub mod certificate;
pub mod cochain;
pub mod cup;
pub mod degree_scan;
pub mod derivation;
pub mod error;
pub mod fan;
pub mod fixtures;
pub mod fuzz;
pub mod graded;
pub mod linalg;
pub mod oracle;
pub mod polyhedron;
pub mod support;

pub use error::{Error, Result};
pub use fan::{Cone, DegreeVector, Fan, LatticeVector, ValidationReport};
