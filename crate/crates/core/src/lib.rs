//! Exact finite-N laboratory for supersymmetric fermion lattice models.

pub mod algebra;
pub mod dicke;
pub mod error;
pub mod lattice;
pub mod experiment;
pub mod limits;

pub use error::{Error, Result};
