//! Matrix elements of m-body boson operators between multi-species coherent
//! states, an exact Fock-space oracle for them, and the two-dimensional
//! vibron model as the worked application.
//!
//! Module map:
//! - [`algebra`]: boson operator polynomials and normal ordering.
//! - [`coherent`]: the general coherent-state matrix element engine.
//! - [`fock`]: occupation-number bases, sparse matrices, diagonalization,
//!   and the brute-force oracle.
//! - [`vibron`]: the U(3) model in its SO(3) dynamical symmetry, exact
//!   spectra and coherent-state estimates.
//! - [`check`]: seeded random engine-vs-oracle comparisons.

pub mod algebra;
pub mod check;
pub mod coherent;
mod error;
pub mod fock;
pub mod vibron;

pub use error::{Error, Result};
