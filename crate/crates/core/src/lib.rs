//! Exact arithmetic for the cuspidal class group of the modular curve X1(N).
//!
//! Modular units are written as products of Siegel functions `E_g^(N)`. The
//! crate builds an explicit basis of the units with divisors supported on the
//! cusps over infinity, then computes the order and invariant factors of the
//! quotient of degree-zero cuspidal divisors by their divisors. The order is
//! obtained twice: once as a lattice index and once from a closed product of
//! generalized Bernoulli numbers, and the two must agree.
//!
//! Linear algebra in [`zlinalg`] is generic over the scalar type; the rest of
//! the crate works with the aliases below.

pub mod basis;
pub mod bernoulli;
pub mod classgroup;
pub mod corpus;
mod error;
pub mod numtheory;
pub mod qexpansion;
pub mod siegel;
pub mod zlinalg;

pub use error::{Error, Result};

/// Arbitrary precision integer used throughout the pipeline.
pub type Int = num_bigint::BigInt;
/// Exact rational number.
pub type Rational = num_rational::BigRational;
/// Dense integer matrix.
pub type IntMatrix = zlinalg::Matrix<Int>;
/// Dense rational matrix.
pub type RatMatrix = zlinalg::Matrix<Rational>;
