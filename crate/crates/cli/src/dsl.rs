//! The term language.
//!
//! ```text
//! expr   := factor (('*' | '/') factor)*
//! factor := atom ['^' int]
//! atom   := 'binom(' lin ',' lin ')' | 'rising(' rat ')' | 'fact(' lin ')'
//!         | '(' rat ')^k' | int '^k' | 'k' | int
//!         | '(' polynomial ')' | '(' expr ')'
//! ```
//!
//! `lin` is `alpha*k + beta` with integer `alpha` and rational `beta`.
//! `rising(a)` is the Pochhammer symbol `(a)_k` and `fact(lin)` is `lin!`.

use std::fmt;

use hypersum_core::algebra::{format_rational, Poly, RatFunc, Rational};
use hypersum_core::gosper::HyperTerm;
use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::expr::{parse_poly, parse_ratfunc};
use crate::lex::{Cursor, ParseError};

/// `alpha k + beta`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lin {
    pub alpha: i64,
    pub beta: Rational,
}

impl Lin {
    pub fn new(alpha: i64, beta: Rational) -> Self {
        Lin { alpha, beta }
    }

    fn poly(&self) -> Poly {
        Poly::linear(Rational::from_integer(self.alpha.into()), self.beta.clone())
    }

    fn at(&self, k: i64) -> Rational {
        Rational::from_integer((self.alpha * k).into()) + &self.beta
    }
}

impl fmt::Display for Lin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.poly())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Factor {
    Binom(Lin, Lin),
    Poly(Poly),
    Geom(Rational),
    Rising(Rational),
    Fact(Lin),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TermSpec {
    pub factors: Vec<(Factor, i32)>,
    pub start: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TermError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("{0}")]
    Value(String),
    #[error(transparent)]
    Term(#[from] hypersum_core::gosper::GosperError),
}

fn int(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

/// `(A(k+1) + B)! / (A k + B)!`.
fn factorial_ratio(l: &Lin) -> RatFunc {
    let base = l.poly();
    let mut num = Poly::one();
    let mut den = Poly::one();
    if l.alpha >= 0 {
        for j in 1..=l.alpha {
            num = &num * &(&base + &Poly::constant(int(j)));
        }
    } else {
        for j in 0..-l.alpha {
            den = &den * &(&base + &Poly::constant(int(-j)));
        }
    }
    RatFunc::new(num, den).expect("nonzero")
}

fn factorial(n: &Rational) -> Result<BigInt, TermError> {
    let v = n
        .is_integer()
        .then(|| n.to_integer())
        .filter(|v| !v.is_negative())
        .and_then(|v| v.to_u64())
        .ok_or_else(|| {
            TermError::Value(format!("factorial of {} is undefined", format_rational(n)))
        })?;
    Ok((1..=v).fold(BigInt::one(), |acc, i| acc * BigInt::from(i)))
}

impl Factor {
    /// `f(k+1)/f(k)`.
    pub fn ratio(&self) -> RatFunc {
        match self {
            Factor::Binom(n, m) => {
                let rest = Lin::new(n.alpha - m.alpha, &n.beta - &m.beta);
                let r = (&factorial_ratio(n) / &factorial_ratio(m)).expect("nonzero");
                (&r / &factorial_ratio(&rest)).expect("nonzero")
            }
            Factor::Poly(p) => RatFunc::new(p.shift_int(1), p.clone()).expect("nonzero poly"),
            Factor::Geom(r) => RatFunc::constant(r.clone()),
            Factor::Rising(a) => RatFunc::from_poly(Poly::linear(Rational::one(), a.clone())),
            Factor::Fact(l) => factorial_ratio(l),
        }
    }

    /// `f(k)` at an integer.
    pub fn value(&self, k: i64) -> Result<Rational, TermError> {
        Ok(match self {
            Factor::Binom(n, m) => {
                let (nv, mv) = (n.at(k), m.at(k));
                let rest = &nv - &mv;
                Rational::from_integer(factorial(&nv)?)
                    / Rational::from_integer(factorial(&mv)? * factorial(&rest)?)
            }
            Factor::Poly(p) => p.eval_int(k),
            Factor::Geom(r) => pow(r, k)?,
            Factor::Rising(a) => {
                if k < 0 {
                    return Err(TermError::Value("rising factorial at negative k".into()));
                }
                (0..k).map(|j| a + int(j)).product()
            }
            Factor::Fact(l) => Rational::from_integer(factorial(&l.at(k))?),
        })
    }
}

fn pow(r: &Rational, e: i64) -> Result<Rational, TermError> {
    if e < 0 && r.is_zero() {
        return Err(TermError::Value("zero to a negative power".into()));
    }
    let mag = (0..e.unsigned_abs()).fold(Rational::one(), |acc, _| acc * r);
    Ok(if e < 0 { mag.recip() } else { mag })
}

impl TermSpec {
    pub fn ratio(&self) -> RatFunc {
        self.factors.iter().fold(RatFunc::one(), |acc, (f, e)| {
            let r = f.ratio();
            let (n, d) = r.into_parts();
            let r = if *e > 0 {
                RatFunc::new(n.pow(*e as u32), d.pow(*e as u32))
            } else {
                RatFunc::new(d.pow(e.unsigned_abs()), n.pow(e.unsigned_abs()))
            }
            .expect("nonzero");
            &acc * &r
        })
    }

    pub fn value(&self, k: i64) -> Result<Rational, TermError> {
        let mut v = Rational::one();
        for (f, e) in &self.factors {
            let x = f.value(k)?;
            v *= pow(&x, *e as i64)?;
        }
        Ok(v)
    }

    pub fn to_term(&self) -> Result<HyperTerm, TermError> {
        let initial = self.value(self.start)?;
        Ok(HyperTerm::new(
            self.ratio(),
            self.start,
            initial,
            self.to_string(),
        )?)
    }
}

fn geom_text(r: &Rational) -> String {
    format!("({})^k", format_rational(r))
}

impl fmt::Display for Factor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Factor::Binom(n, m) => write!(f, "binom({n}, {m})"),
            Factor::Poly(p) if *p == Poly::k() => write!(f, "k"),
            Factor::Poly(p) => write!(f, "({p})"),
            Factor::Geom(r) => write!(f, "{}", geom_text(r)),
            Factor::Rising(a) => write!(f, "rising({})", format_rational(a)),
            Factor::Fact(l) => write!(f, "fact({l})"),
        }
    }
}

impl fmt::Display for TermSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return write!(f, "1");
        }
        for (i, (fac, e)) in self.factors.iter().enumerate() {
            match (i, *e > 0) {
                (0, true) => {}
                (0, false) => write!(f, "1 / ")?,
                (_, true) => write!(f, " * ")?,
                (_, false) => write!(f, " / ")?,
            }
            let m = e.unsigned_abs();
            match (fac, m) {
                (_, 1) => write!(f, "{fac}")?,
                (Factor::Geom(_), _) => write!(f, "({fac})^{m}")?,
                _ => write!(f, "{fac}^{m}")?,
            }
        }
        Ok(())
    }
}

pub fn parse_term(input: &str, start: i64) -> Result<TermSpec, TermError> {
    let mut c = Cursor::new(input);
    if c.at_end() {
        return Err(c.err("empty term").into());
    }
    let factors = expr(&mut c)?;
    c.finish()?;
    let factors = factors
        .into_iter()
        .filter(|(f, _)| !matches!(f, Factor::Poly(p) if p.is_one()))
        .collect();
    Ok(TermSpec { factors, start })
}

type Factors = Vec<(Factor, i32)>;

fn expr(c: &mut Cursor) -> Result<Factors, ParseError> {
    let mut out = factor(c)?;
    loop {
        if c.eat('*') {
            out.extend(factor(c)?);
        } else if c.eat('/') {
            out.extend(factor(c)?.into_iter().map(|(f, e)| (f, -e)));
        } else {
            return Ok(out);
        }
    }
}

fn factor(c: &mut Cursor) -> Result<Factors, ParseError> {
    let mut fs = atom(c)?;
    if c.rest().starts_with("^k") {
        return Err(c.err("`^k` needs a numeric base"));
    }
    if c.eat('^') {
        let e = c.uint()? as i32;
        if e == 0 {
            return Err(c.err("exponent must be nonzero"));
        }
        for (_, x) in fs.iter_mut() {
            *x *= e;
        }
    }
    Ok(fs)
}

fn lin(c: &mut Cursor, text: &str) -> Result<Lin, ParseError> {
    let p = parse_poly(text).map_err(|e| c.err(e.msg))?;
    if p.degree().unwrap_or(0) > 1 {
        return Err(c.err("expected a linear form"));
    }
    let a = p.coeff(1);
    if !a.is_integer() {
        return Err(c.err("the coefficient of k must be an integer"));
    }
    Ok(Lin::new(
        a.to_integer()
            .to_i64()
            .ok_or_else(|| c.err("coefficient too large"))?,
        p.coeff(0),
    ))
}

fn call_args<'a>(c: &mut Cursor<'a>) -> Result<&'a str, ParseError> {
    c.expect('(')?;
    c.balanced()
}

fn split_comma(s: &str) -> Option<(&str, &str)> {
    let mut depth = 0;
    for (i, ch) in s.char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' if depth == 0 => return Some((&s[..i], &s[i + 1..])),
            _ => {}
        }
    }
    None
}

fn geom_or_poly(c: &mut Cursor, p: Poly) -> Result<Factor, ParseError> {
    if c.eat_str("^k") {
        if !p.is_constant() || p.is_zero() {
            return Err(c.err("the base of `^k` must be a nonzero number"));
        }
        return Ok(Factor::Geom(p.coeff(0)));
    }
    if p.is_zero() {
        return Err(c.err("zero factor"));
    }
    Ok(Factor::Poly(p))
}

fn atom(c: &mut Cursor) -> Result<Factors, ParseError> {
    if c.eat_str("binom") {
        let args = call_args(c)?;
        let (n, m) = split_comma(args).ok_or_else(|| c.err("binom needs two arguments"))?;
        return Ok(vec![(Factor::Binom(lin(c, n)?, lin(c, m)?), 1)]);
    }
    if c.eat_str("rising") {
        let args = call_args(c)?;
        let r = parse_ratfunc(args).map_err(|e| c.err(e.msg))?;
        if !r.num().is_constant() || !r.den().is_constant() {
            return Err(c.err("rising needs a number"));
        }
        return Ok(vec![(
            Factor::Rising(r.num().coeff(0) / r.den().coeff(0)),
            1,
        )]);
    }
    if c.eat_str("fact") {
        let args = call_args(c)?;
        return Ok(vec![(Factor::Fact(lin(c, args)?), 1)]);
    }
    if c.eat('(') {
        let inner = c.balanced()?;
        if let Ok(p) = parse_poly(inner) {
            return Ok(vec![(geom_or_poly(c, p)?, 1)]);
        }
        let mut sub = Cursor::new(inner);
        let fs = expr(&mut sub).and_then(|fs| sub.finish().map(|_| fs));
        return fs.map_err(|e| ParseError {
            input: c.src.to_string(),
            pos: c.pos - inner.len() - 1 + e.pos,
            msg: e.msg,
        });
    }
    if c.eat('k') {
        return Ok(vec![(Factor::Poly(Poly::k()), 1)]);
    }
    match c.digits() {
        Some(d) => {
            let p = Poly::constant(d.parse::<BigInt>().map(Rational::from_integer).unwrap());
            Ok(vec![(geom_or_poly(c, p)?, 1)])
        }
        None => Err(c.err("expected a factor")),
    }
}
