//! Computational toolkit for Piatetski-Shapiro sequences `⌊n^α⌋`.
//!
//! The crate is organised bottom-up:
//!
//! - [`arith`]: certified interval arithmetic, exact floors of `n^α`.
//! - [`ps`]: windows of the sequence, membership, progressions.
//! - [`linear`]: the equation `y = ax + b` inside the sequence.
//! - [`cf`] and [`system`]: continued fractions and the twisted
//!   approximation systems.
//! - [`equidist`]: discrepancy, Weyl sums and derivative checks.
//! - [`measure`]: interval-set measures and counting experiments.
//! - [`cli`]: the `pslab` command line front end.

pub mod arith;
mod error;

pub use arith::{CertifiedValue, Exponent, NamedConstant, PrecisionPolicy, Truth};
pub use error::{Error, Result};
pub mod primes;
pub mod ps;
pub mod linear;
pub mod cf;
pub mod system;
pub mod equidist;
pub mod measure;
pub mod cli;
