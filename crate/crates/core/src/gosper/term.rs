use num_traits::Zero;

use super::GosperError;
use crate::algebra::{integer_roots, RatFunc, Rational};

/// A hypergeometric term, given by its consecutive ratio `t(k+1)/t(k)`, a
/// start index and the exact value at the start.
///
/// The ratio has no zero and no pole at any integer `k >= start`, so every
/// value from the start on is finite and nonzero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HyperTerm {
    ratio: RatFunc,
    start: i64,
    initial: Rational,
    label: String,
}

impl HyperTerm {
    pub fn new(
        ratio: RatFunc,
        start: i64,
        initial: Rational,
        label: impl Into<String>,
    ) -> Result<Self, GosperError> {
        if ratio.is_zero() {
            return Err(GosperError::ZeroRatio);
        }
        if initial.is_zero() {
            return Err(GosperError::InvalidTerm(format!(
                "value at the start index {start} is zero"
            )));
        }
        if let Some(r) = integer_roots(ratio.num()).into_iter().find(|&r| r >= start) {
            return Err(GosperError::InvalidTerm(format!(
                "ratio vanishes at k = {r} >= start {start}"
            )));
        }
        if let Some(r) = integer_roots(ratio.den()).into_iter().find(|&r| r >= start) {
            return Err(GosperError::InvalidTerm(format!(
                "ratio has a pole at k = {r} >= start {start}"
            )));
        }
        Ok(HyperTerm {
            ratio,
            start,
            initial,
            label: label.into(),
        })
    }

    pub fn ratio(&self) -> &RatFunc {
        &self.ratio
    }

    pub fn start(&self) -> i64 {
        self.start
    }

    pub fn initial(&self) -> &Rational {
        &self.initial
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// Same term, every value multiplied by `c != 0`.
    pub fn scaled(&self, c: &Rational) -> Result<HyperTerm, GosperError> {
        HyperTerm::new(
            self.ratio.clone(),
            self.start,
            &self.initial * c,
            self.label.clone(),
        )
    }

    /// `t(k)` by multiplying ratio values up from the start index.
    pub fn eval(&self, k: i64) -> Result<Rational, GosperError> {
        if k < self.start {
            return Err(GosperError::BeforeStart {
                k,
                start: self.start,
            });
        }
        let mut v = self.initial.clone();
        for j in self.start..k {
            v *= self.ratio.eval_int(j)?;
        }
        Ok(v)
    }

    /// `[t(from), ..., t(to)]`, computed incrementally.
    pub fn values(&self, from: i64, to: i64) -> Result<Vec<Rational>, GosperError> {
        if to < from {
            return Ok(Vec::new());
        }
        let mut v = self.eval(from)?;
        let mut out = Vec::with_capacity((to - from + 1) as usize);
        out.push(v.clone());
        for j in from..to {
            v *= self.ratio.eval_int(j)?;
            out.push(v.clone());
        }
        Ok(out)
    }
}
