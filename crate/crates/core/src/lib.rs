//! Exact analysis of one-dimensional substitutions.
//!
//! The crate classifies substitutions as Pisot and homological Pisot,
//! computes the first rational Čech cohomology of their tiling spaces from a
//! complex of letter and transition edges, computes coincidence rank for constant-length
//! substitutions, fits exact patch-counting functionals, evaluates cylinder
//! measures in ℚ(λ), and builds triple covers with coincidence rank three.

pub mod algebra;
pub mod catalog;
pub mod coincidence;
pub mod cover;
pub mod cohomology;
pub mod error;
pub mod matrix;
pub mod measure;
pub mod rational;
pub mod regularity;
pub mod substitution;

pub use error::{Error, Result};
pub use matrix::IntegerMatrix;
pub use substitution::{LetterId, Substitution, Word};
