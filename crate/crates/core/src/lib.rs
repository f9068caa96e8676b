//! Finite CMV matrices, rational interpolation in the space of two-dimensional
//! vector-polynomials, and the mixed inverse spectral problem (MISP).
//!
//! The crate is organized bottom-up:
//!
//! * [`poly`]: complex polynomial arithmetic, the Szegő `*`-involution,
//!   evaluation, and an Aberth–Ehrlich root finder;
//! * [`vecpoly`]: the graded space of two-component vector-polynomials and
//!   its height calculus;
//! * [`cmv`]: Verblunsky parameters, Szegő systems, CMV matrix assembly,
//!   spectra, eigenvectors, and Weyl data;
//! * [`interp`]: the linear interpolation problem for vector-polynomials,
//!   its minimal and second generators, and the two-generator solution family;
//! * [`misp`]: reduction of the mixed inverse spectral problem to rational
//!   interpolation, the constrained solve, and parameter recovery.

pub mod cmv;
pub mod interp;
pub mod json;
mod linalg;
pub mod misp;
pub mod poly;
pub mod vecpoly;

mod error;

pub use error::Error;
pub use num_complex::Complex64;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
