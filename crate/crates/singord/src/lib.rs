//! Exact invariants of plane curve and function singularities, the
//! zero-dimensional schemes they define, interpolation orders of those
//! schemes, and constructive realization of prescribed singular points.
//!
//! Everything is computed over the rationals or one quadratic extension;
//! no floating point enters a decision.

pub mod bounds;
pub mod cluster;
pub mod cohomology;
pub mod colength;
pub mod corpus;
pub mod error;
pub mod jet;
pub mod linalg;
pub mod numfield;
pub mod par;
pub mod poly;
pub mod puiseux;
pub mod realizer;
pub mod resultant;
pub mod rng;
pub mod scalar;
pub mod schemes;
pub mod upoly;

pub use error::{Error, Result};
pub use poly::MultiPoly;
pub use scalar::ExactScalar;

/// Jet order ceiling for colength certification, overridable through
/// `SINGORD_JET_CEILING`.
pub fn jet_ceiling() -> usize {
    std::env::var("SINGORD_JET_CEILING").ok().and_then(|v| v.parse().ok()).filter(|&n: &usize| n >= 4).unwrap_or(64)
}
