//! Checks for forged identities: exact telescoping, certified numeric
//! evaluation of partial sums, and congruences of truncated sums modulo
//! prime powers.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::algebra::{RatFunc, Rational};
use crate::forge::{ratio_asymptotics, ForgeError, ForgedIdentity};
use crate::gosper::HyperTerm;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VerifyError {
    #[error("{p} divides the denominator of the summand at k = {k}")]
    PrimeInDenominator { p: u64, k: i64 },
    #[error("summation bound {n} is before the start {start}")]
    BeforeStart { n: i64, start: i64 },
    #[error(transparent)]
    Forge(#[from] ForgeError),
}

pub fn check_telescoping(identity: &ForgedIdentity) -> bool {
    identity.telescopes()
}

/// `arctan(1/x) * scale`, truncating each term; returns the value and the
/// number of terms, each contributing at most one unit of error.
fn arctan_inv(x: u64, scale: &BigInt) -> (BigInt, u64) {
    let x2 = BigInt::from(x * x);
    let mut power = scale / BigInt::from(x);
    let mut sum = BigInt::zero();
    let mut n = 0u64;
    while !power.is_zero() {
        let term = &power / BigInt::from(2 * n + 1);
        if n.is_multiple_of(2) {
            sum += term;
        } else {
            sum -= term;
        }
        power /= &x2;
        n += 1;
    }
    (sum, n + 1)
}

/// Machin's `pi = 16 arctan(1/5) - 4 arctan(1/239)` in fixed point. Each
/// truncated term and the alternating tail contribute at most one unit, so
/// the error is below `20 (n1 + n2 + 2)` units of `10^-(digits+guard)`.
fn machin(digits: u32, guard: u32) -> (Rational, Rational) {
    let scale = BigInt::from(10).pow(digits + guard);
    let (a, n1) = arctan_inv(5, &scale);
    let (b, n2) = arctan_inv(239, &scale);
    let value = Rational::new(16 * a - 4 * b, scale.clone());
    let err = Rational::new(BigInt::from(20 * (n1 + n2 + 2)), scale);
    (value, err)
}

/// A rational within `10^-digits` of pi.
pub fn pi_approx(digits: u32) -> Rational {
    assert!(digits >= 1, "digits must be positive");
    let (value, err) = machin(digits, 8);
    assert!(err < Rational::new(BigInt::one(), BigInt::from(10).pow(digits)));
    value
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrecisionContext {
    pub digits: u32,
    pub pi: Rational,
}

impl PrecisionContext {
    pub fn new(digits: u32) -> Self {
        PrecisionContext {
            digits,
            pi: pi_approx(digits),
        }
    }

    /// `10^(2 - digits)`, the slack allowed for the constants.
    pub fn tolerance(&self) -> Rational {
        Rational::new(BigInt::from(100), BigInt::from(10).pow(self.digits))
    }
}

/// Bound on `|sum_{k > n} s_k|` for the summand `s_k = M(k) t^_k` of an
/// identity, from the asymptotics `s_{k+1}/s_k = rho (1 + alpha/k + ...)`:
/// `2 |s_{n+1}| / (1 - |rho|)` when `|rho| < 1`, `|s_{n+1}|` for alternating
/// terms with `alpha < 0`, and `2 (n+1) |s_{n+1}| / (-alpha - 1)` when
/// `rho = 1` and `alpha < -1`. `None` when none of these apply.
pub fn tail_bound(identity: &ForgedIdentity, n: i64) -> Result<Option<Rational>, VerifyError> {
    let ratio = identity.kernel.ratio();
    let zero = Rational::zero();
    if identity.multiplier.is_zero() {
        return Ok(Some(zero));
    }
    let Some((rho, alpha)) = ratio_asymptotics(ratio) else {
        return Ok(None);
    };
    let alpha =
        alpha + Rational::from_integer(identity.multiplier.degree_at_infinity().unwrap().into());
    let next = identity.summand(n + 1)?.abs();
    let one = Rational::one();
    let two = Rational::from_integer(2.into());
    let bound = if rho.abs() < one {
        Some(&two * next / (&one - rho.abs()))
    } else if rho == -&one && alpha < zero {
        Some(next)
    } else if rho == one && alpha < -&one {
        Some(two * Rational::from_integer((n + 1).into()) * next / (-alpha - one))
    } else {
        None
    };
    Ok(bound)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NumericReport {
    pub n: i64,
    pub partial_sum: Rational,
    pub target: Rational,
    pub abs_error: Rational,
    pub tail_bound: Option<Rational>,
    pub pass: bool,
}

/// Exact partial sum `sum_{k=start}^{n}` against the right-hand side
/// evaluated with `ctx`; passes when the error is below the tail bound plus
/// `10^(2 - digits)`.
pub fn numeric_verify(
    identity: &ForgedIdentity,
    n: i64,
    ctx: &PrecisionContext,
) -> Result<NumericReport, VerifyError> {
    if n < identity.start {
        return Err(VerifyError::BeforeStart {
            n,
            start: identity.start,
        });
    }
    let values = identity
        .kernel
        .values(identity.start, n)
        .map_err(ForgeError::from)?;
    let mut partial_sum = Rational::zero();
    for (k, t) in (identity.start..=n).zip(values) {
        if !t.is_zero() {
            partial_sum += identity.multiplier.eval_int(k).map_err(ForgeError::from)? * t;
        }
    }
    let target = identity.rhs.eval(&ctx.pi);
    let abs_error = (&partial_sum - &target).abs();
    let tail = tail_bound(identity, n)?;
    let pass = tail
        .as_ref()
        .is_some_and(|b| abs_error < b + ctx.tolerance());
    Ok(NumericReport {
        n,
        partial_sum,
        target,
        abs_error,
        tail_bound: tail,
        pass,
    })
}

/// `v_p(x)`; `None` for zero.
pub fn p_adic_valuation(x: &Rational, p: u64) -> Option<i64> {
    if x.is_zero() {
        return None;
    }
    let p = BigInt::from(p);
    let count = |n: &BigInt| {
        let mut n = n.abs();
        let mut v = 0i64;
        loop {
            let (q, r) = n.div_rem(&p);
            if !r.is_zero() {
                return v;
            }
            n = q;
            v += 1;
        }
    };
    Some(count(x.numer()) - count(x.denom()))
}

/// `(-1/p) = (-1)^((p-1)/2)`.
pub fn legendre_minus_one(p: u64) -> i64 {
    if ((p - 1) / 2).is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// `coeff * p^p_power * [(-1/p)] * [base^(p-1)]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TargetTerm {
    pub coeff: Rational,
    pub p_power: u32,
    pub legendre: bool,
    pub base_power: Option<i64>,
}

/// A sum of [`TargetTerm`]s, evaluated at a prime.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CongruenceTarget {
    pub terms: Vec<TargetTerm>,
}

impl CongruenceTarget {
    pub fn eval(&self, p: u64) -> Rational {
        self.terms
            .iter()
            .map(|t| {
                let mut v = &t.coeff * Rational::from_integer(BigInt::from(p).pow(t.p_power));
                if t.legendre {
                    v *= Rational::from_integer(legendre_minus_one(p).into());
                }
                if let Some(base) = t.base_power {
                    v *= Rational::from_integer(BigInt::from(base).pow((p - 1) as u32));
                }
                v
            })
            .sum()
    }
}

/// `sum_{k=start}^{(p-1)/2} multiplier(k) t_k` and whether it agrees with
/// `target(p)` modulo `p^mod_power`.
pub fn congruence_check(
    term: &HyperTerm,
    multiplier: &RatFunc,
    p: u64,
    mod_power: i64,
    target: &CongruenceTarget,
) -> Result<bool, VerifyError> {
    let s = truncated_sum(term, multiplier, p, (p as i64 - 1) / 2)?;
    let diff = s - target.eval(p);
    Ok(p_adic_valuation(&diff, p).is_none_or(|v| v >= mod_power))
}

/// `sum_{k=start}^{end} multiplier(k) t_k`, rejecting summands whose
/// denominators are divisible by `p`.
pub fn truncated_sum(
    term: &HyperTerm,
    multiplier: &RatFunc,
    p: u64,
    end: i64,
) -> Result<Rational, VerifyError> {
    let values = term.values(term.start(), end).map_err(ForgeError::from)?;
    let bp = BigInt::from(p);
    let mut s = Rational::zero();
    for (k, t) in (term.start()..=end).zip(values) {
        let v = multiplier.eval_int(k).map_err(ForgeError::from)? * t;
        if v.denom().is_multiple_of(&bp) {
            return Err(VerifyError::PrimeInDenominator { p, k });
        }
        s += v;
    }
    Ok(s)
}

/// `binom(p-1, (p-1)/2) = (-1)^((p-1)/2) 4^(p-1) (mod p^3)`, for primes
/// `p > 3`.
pub fn morley_fixture(p: u64) -> bool {
    assert!(p > 3, "Morley's congruence needs p > 3");
    let h = (p - 1) / 2;
    let mut binom = BigInt::one();
    for i in 0..h {
        binom = binom * BigInt::from(p - 1 - i) / BigInt::from(i + 1);
    }
    let rhs = BigInt::from(legendre_minus_one(p)) * BigInt::from(4).pow((p - 1) as u32);
    (binom - rhs).is_multiple_of(&BigInt::from(p).pow(3))
}

/// The polynomial part of an identity's telescoping relation, for
/// diagnostics: `base_coeff c(k) + multiplier(k)`.
pub fn telescoped_summand(identity: &ForgedIdentity) -> RatFunc {
    &RatFunc::from_poly(identity.c.scale(&identity.base_coeff)) + &identity.multiplier
}
