//! Exact-arithmetic engine for the algebra of brackets and bi-brackets
//! (generating series of multiple divisor sums), their quasi-shuffle and
//! partition-relation double-shuffle structure, formal iterated integrals
//! with the Goncharov coproduct, regularized multiple Eisenstein series,
//! and exact linear-relation discovery between truncated q-series.
//!
//! Layering, bottom up:
//! - [`exact`]: rationals, Bernoulli numbers, Eulerian polynomials and the
//!   coefficient tables everything else consumes.
//! - [`qseries`]: truncated formal power series over ℚ, the derivation
//!   q·d/dq, numeric evaluation at |q| < 1 and the cusp form Δ.
//! - [`brackets`]: multiple divisor sums, brackets `[s1,...,sl]`,
//!   bi-brackets and normalized Eisenstein series.
//! - [`words`]: the word algebras (stuffle, shuffle, the bracket products),
//!   the partition involution and the evaluation homomorphism into q-series.
//! - [`iterint`]: formal iterated integrals, the Goncharov coproduct and
//!   shuffle/stuffle word regularization.
//! - [`mes`]: numerics — multiple zeta values, multitangent functions,
//!   lattice sums, Fourier expansions, regularized multiple Eisenstein
//!   series and the q→1 limit map.
//! - [`relations`]: exact nullspace computation over ℚ and relation
//!   discovery among families of q-series.

pub mod brackets;
pub mod checks;
mod error;
pub mod exact;
pub mod iterint;
pub mod mes;
pub mod qseries;
pub mod relations;
pub mod words;

pub use error::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
