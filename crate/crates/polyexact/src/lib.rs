//! Exact rational computations over polytopes and knapsack lattices.
//!
//! - [`integrate`]: integrals of polynomials over polytopes through powers of linear
//!   forms, products of affine functions, and Handelman decompositions.
//! - [`optimize`]: bounds on the maximum of a polynomial from `∫ f^k` or `Σ f^k`.
//! - [`knapsack`]: top coefficients of the denumerant quasi-polynomial as step
//!   polynomials.
//! - [`dancing_links`]: exact cover for set-partition systems.
//!
//! Every result is an exact rational. The arithmetic core (series, linear algebra,
//! LP) is generic over [`scalar::Ring`] and [`scalar::Scalar`]; the aliases below fix
//! the scalar used by the exact pipelines.

pub mod error;
pub mod exact_arith;
pub mod linalg;
pub mod scalar;
pub mod polynomial;
pub mod lp;
pub mod polyhedra;
pub mod integrate;
pub mod handelman;
pub mod optimize;
pub mod knapsack;
pub mod dancing_links;

pub use error::{Error, Result};

/// Exact rational scalar.
pub type Q = num_rational::BigRational;
/// Arbitrary-precision integer.
pub type Z = num_bigint::BigInt;
/// Sparse polynomial with exact rational coefficients.
pub type Poly = polynomial::SparsePolynomial<Q>;
