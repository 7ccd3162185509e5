//! Gosper representations of hypergeometric terms and the Gosper equation
//! `a(k) x(k+1) - b(k-1) x(k) = c(k)`, including a parametrized variant with
//! unknown polynomial coefficients on the right-hand side.

mod linsolve;
mod rep;
mod solve;
mod term;

pub use rep::{gosper_representation, GosperRep};
pub use solve::{
    decide_summable, solve_gosper, solve_parametrized, x_degree_candidates, Certificate,
    ParamSolution,
};
pub use term::HyperTerm;

use thiserror::Error;

use crate::algebra::AlgebraError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GosperError {
    #[error("the zero ratio is not a hypergeometric term ratio")]
    ZeroRatio,
    #[error("ratio is not reduced: numerator and denominator share a factor at shift 0")]
    NotReduced,
    #[error("gcd(a(k), b(k+h)) != 1 for h in {0:?}")]
    ShiftCondition(Vec<i64>),
    #[error("representation polynomials must be nonzero")]
    ZeroPolynomial,
    #[error("invalid hypergeometric term: {0}")]
    InvalidTerm(String),
    #[error("index {k} precedes the start index {start}")]
    BeforeStart { k: i64, start: i64 },
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}
