//! Frobenius fields of reductions of genus-2 Jacobians.
//!
//! The crate counts points on hyperelliptic curves `y^2 = f(x)` modulo
//! primes, assembles the Frobenius characteristic polynomial, classifies the
//! reduction (ordinary, simple) and identifies the quartic CM field it
//! generates. Around that census sit the tools used to bound how often a
//! fixed field can occur: an exact square sieve evaluator, quadratic
//! character sums, finite symplectic group statistics and the sieve exponent
//! balancer.

pub mod asymptotics;
pub mod census;
pub mod curve;
pub mod error;
pub mod frobenius;
pub mod gsp;
pub mod numth;
pub mod sieve;

pub use error::{Error, Result};
