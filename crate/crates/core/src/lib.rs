//! Discrete Clifford analysis on the lattice `hZ^n`.

pub mod chebyshev;
pub mod clifford;
pub mod error;
pub mod lattice;
pub mod momentum;
pub mod opcalc;
pub mod report;
pub mod sample;
pub mod verify;

pub use clifford::{Blade, Multivector, Scalar, Signature};
pub use error::{Error, Result};
