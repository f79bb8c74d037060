//! Numerical renormalization laboratory for real quadratic maps `x^2 + c`.
//!
//! The crate is organised bottom-up: [`realdyn`] holds the interval dynamics,
//! [`nest`] the principal nest and its cascades, [`renorm`] the tower of
//! renormalizations, [`cgeom`] the slit-plane geometry and [`verify`] the
//! empirical checks built on top of all of them.

pub mod cgeom;
pub mod error;
pub mod nest;
pub mod realdyn;
pub mod renorm;
pub mod verify;

pub use error::{Error, Result};
pub use num_complex::Complex64;
