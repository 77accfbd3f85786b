//! Spherical harmonic analysis on a one-parameter family of hyperbolic-type
//! spaces, indexed by a half-integer parameter rho that may be negative.
//!
//! The classical real hyperbolic plane sits at rho = 1/2; super-symmetric
//! relatives with odd (anticommuting) directions push rho to zero and below,
//! where the Plancherel density develops zeros and the Fourier inversion
//! formula picks up discrete residue corrections. This crate computes the
//! whole pipeline numerically:
//!
//! - spherical functions and their derivative jets ([`spherical`]),
//! - the c-function and Plancherel density ([`spherical`]),
//! - the spherical transform, wave packets, residue terms, and the
//!   residue-corrected inversion identity at the origin ([`transforms`]),
//! - exact Grassmann algebra and Berezin integration backing the super
//!   side of the story ([`grassmann`]),
//! - truncated-Taylor (jet) arithmetic for the derivative bookkeeping
//!   ([`jets`]),
//! - the supporting special functions and deterministic quadrature
//!   ([`specfun`], [`quadrature`]).
//!
//! Everything is double precision, single threaded, and reproducible bit for
//! bit: no randomness, fixed summation orders, no caches keyed on global
//! state. Numerical failure modes (pole hits, series and quadrature budgets)
//! are reported through [`error::Error`]; programmer errors (violated
//! preconditions) panic.

pub mod error;
pub mod grassmann;
pub mod jets;
pub mod quadrature;
pub mod specfun;
pub mod spherical;
pub mod transforms;
pub mod verify;

pub use error::{Error, Result};
