//! Exact arithmetic kernel: rationals, dense univariate polynomials in `k`,
//! rational functions, and the polynomial subroutines the summation code
//! relies on (shift, gcd, squarefree decomposition, rational roots,
//! resultants and dispersion sets).

mod poly;
mod ratfunc;
mod rational;
mod resultant;
mod roots;

pub use poly::Poly;
pub use ratfunc::RatFunc;
pub use rational::{format_rational, int, parse_rational, rat, Rational};
pub use resultant::{dispersion_set, interpolate, resultant, ShiftDomain};
pub use roots::{
    atomic_factors, integer_roots, rational_roots, squarefree_decompose, SquarefreeDecomposition,
};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("division by the zero polynomial")]
    DivisionByZero,
    #[error("polynomial division is not exact")]
    InexactDivision,
    #[error("rational function has a pole at k = {0}")]
    Pole(Rational),
    #[error("zero denominator in rational function")]
    ZeroDenominator,
}
