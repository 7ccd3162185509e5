//! Gosper summability of rational multiples of hypergeometric terms.
//!
//! The crate is layered bottom-up:
//!
//! - [`algebra`]: exact rationals, polynomials and rational functions in `k`.
//! - [`gosper`]: Gosper representations, the Gosper equation and its
//!   parametrized variant, telescoping certificates.
//! - [`bounds`]: degree bounds for polynomial multipliers and denominator
//!   candidates for rational ones.
//! - [`forge`]: derives new convergent series with exact right-hand sides
//!   from a known base identity.
//! - [`verify`]: exact telescoping checks, certified numeric evaluation and
//!   super-congruence checks modulo prime powers.

pub mod algebra;
pub mod bounds;
pub mod forge;
pub mod gosper;
pub mod verify;
