//! Randomized Gröbner basis computation.
//!
//! The engine computes a minimal Gröbner basis of a polynomial ideal by
//! Clarkson-style biased random sampling over a violator space whose
//! primitive query is a leading-monomial divisibility test, validated
//! against a built-in Buchberger oracle. A pluggable predictor supplies
//! the sample-size parameter `k` (an estimate of the minimal basis
//! cardinality) and the degree bound `m` used to construct the sampling
//! universe.

pub mod buchberger;
pub mod error;
pub mod gb_violator;
pub mod pipeline;
pub mod poly;
pub mod predictor;
pub mod universe;
pub mod violator;

pub use error::{Error, Result};
