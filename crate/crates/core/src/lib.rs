//! Width parameters of dual graphs of closed 3-manifold triangulations, and
//! executable genus certificates built from canonical handle decompositions.

pub mod bounds;
pub mod census;
mod dsu;
pub mod dual;
pub mod handles;
pub mod inequalities;
pub mod perm;
pub mod solvers;
pub mod tri;

pub use perm::Perm4;
pub use tri::{Triangulation, TriError};
