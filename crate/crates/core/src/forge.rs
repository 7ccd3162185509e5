//! New convergent series from a known one.
//!
//! Given `sum_{k >= k0} t_k = C` with Gosper representation `(a, b, c)`, let
//! `t^_k = t_k / c(k)`. For a candidate denominator `q`, the parametrized
//! Gosper equation is solved for `p` of increasing degree so that
//! `(c(k) + p(k)/q(k)) t^_k = g(k+1) - g(k)` with `g = G t^`. Summing gives
//! `sum_{k >= k1} p(k)/q(k) t^_k = lim g - g(k1) - sum_{k >= k1} t_k`.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use thiserror::Error;

use crate::algebra::{
    format_rational, integer_roots, parse_rational, AlgebraError, Poly, RatFunc, Rational,
};
use crate::bounds::{candidate_denominators, degree_report};
use crate::gosper::{gosper_representation, solve_parametrized, GosperError, GosperRep, HyperTerm};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ForgeError {
    #[error("the base series does not converge")]
    Divergent,
    #[error("c vanishes at k = {0}; shift the start of the base series first")]
    KernelStart(i64),
    #[error("no identity for this denominator")]
    NoIdentity,
    #[error("limit of g(k) is undetermined")]
    UndeterminedLimit,
    #[error("forged identity failed the telescoping check")]
    Unsound,
    #[error(transparent)]
    Gosper(#[from] GosperError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

/// Named constants a right-hand side may use, in display order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Constant {
    PiSq,
    One,
    InvPi,
}

impl Constant {
    pub const ALL: [Constant; 3] = [Constant::PiSq, Constant::One, Constant::InvPi];

    fn pi_power(self) -> i32 {
        match self {
            Constant::PiSq => 2,
            Constant::One => 0,
            Constant::InvPi => -1,
        }
    }

    fn from_pi_power(e: i32) -> Option<Self> {
        Constant::ALL.into_iter().find(|c| c.pi_power() == e)
    }

    /// Value given an approximation of pi.
    pub fn eval(self, pi: &Rational) -> Rational {
        match self {
            Constant::PiSq => pi * pi,
            Constant::One => Rational::one(),
            Constant::InvPi => pi.recip(),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Constant::PiSq => "PI_SQ",
            Constant::One => "ONE",
            Constant::InvPi => "INV_PI",
        }
    }
}

/// A rational linear combination of `pi^2`, `1` and `1/pi`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct ConstantExpr {
    terms: BTreeMap<Constant, Rational>,
}

impl ConstantExpr {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn term(c: Constant, coeff: Rational) -> Self {
        let mut e = Self::zero();
        e.add_term(c, coeff);
        e
    }

    pub fn rational(r: Rational) -> Self {
        Self::term(Constant::One, r)
    }

    pub fn add_term(&mut self, c: Constant, coeff: Rational) {
        let v = self.terms.entry(c).or_insert_with(Rational::zero);
        *v += coeff;
        if v.is_zero() {
            self.terms.remove(&c);
        }
    }

    pub fn coeff(&self, c: Constant) -> Rational {
        self.terms.get(&c).cloned().unwrap_or_else(Rational::zero)
    }

    /// Nonzero terms in display order.
    pub fn terms(&self) -> impl Iterator<Item = (Constant, &Rational)> {
        self.terms.iter().map(|(c, r)| (*c, r))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn scale(&self, s: &Rational) -> Self {
        let mut out = Self::zero();
        for (c, r) in self.terms() {
            out.add_term(c, r * s);
        }
        out
    }

    pub fn eval(&self, pi: &Rational) -> Rational {
        self.terms().map(|(c, r)| r * c.eval(pi)).sum()
    }
}

impl std::ops::Add for &ConstantExpr {
    type Output = ConstantExpr;
    fn add(self, rhs: &ConstantExpr) -> ConstantExpr {
        let mut out = self.clone();
        for (c, r) in rhs.terms() {
            out.add_term(c, r.clone());
        }
        out
    }
}

impl std::ops::Sub for &ConstantExpr {
    type Output = ConstantExpr;
    fn sub(self, rhs: &ConstantExpr) -> ConstantExpr {
        self + &rhs.scale(&-Rational::one())
    }
}

fn fmt_term(c: Constant, r: &Rational) -> String {
    let (n, d) = (r.numer(), r.denom());
    let one = BigInt::one();
    match c {
        Constant::One => format_rational(r),
        Constant::PiSq => match (n == &one, d == &one) {
            (true, true) => "pi^2".into(),
            (true, false) => format!("pi^2/{d}"),
            (false, true) => format!("{n}*pi^2"),
            (false, false) => format!("{n}*pi^2/{d}"),
        },
        Constant::InvPi => {
            if d == &one {
                format!("{n}/pi")
            } else {
                format!("{n}/({d}*pi)")
            }
        }
    }
}

impl fmt::Display for ConstantExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (c, r)) in self.terms().enumerate() {
            match (i, r.is_negative()) {
                (0, true) => write!(f, "-{}", fmt_term(c, &-r))?,
                (0, false) => write!(f, "{}", fmt_term(c, r))?,
                (_, true) => write!(f, " - {}", fmt_term(c, &-r))?,
                (_, false) => write!(f, " + {}", fmt_term(c, r))?,
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("cannot parse constant at byte {pos}: {msg}")]
pub struct ConstantParseError {
    pub pos: usize,
    pub msg: String,
}

/// Parses sums of monomials in `pi`, e.g. `8 - 16/pi`, `pi^2/6`,
/// `(pi^2 - 8)/2` is not accepted but `pi^2/2 - 4` is.
impl FromStr for ConstantExpr {
    type Err = ConstantParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut p = ConstParser {
            s: s.as_bytes(),
            pos: 0,
        };
        let e = p.sum()?;
        p.ws();
        if p.pos != p.s.len() {
            return Err(p.err("unexpected input"));
        }
        Ok(e)
    }
}

struct ConstParser<'a> {
    s: &'a [u8],
    pos: usize,
}

impl ConstParser<'_> {
    fn err(&self, msg: &str) -> ConstantParseError {
        ConstantParseError {
            pos: self.pos,
            msg: msg.into(),
        }
    }

    fn ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.ws();
        self.s.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn sum(&mut self) -> Result<ConstantExpr, ConstantParseError> {
        let mut out = ConstantExpr::zero();
        let mut sign = Rational::one();
        if self.eat(b'-') {
            sign = -sign;
        } else {
            self.eat(b'+');
        }
        loop {
            let (r, e) = self.product()?;
            let c =
                Constant::from_pi_power(e).ok_or_else(|| self.err("unsupported power of pi"))?;
            out.add_term(c, r * &sign);
            if self.eat(b'+') {
                sign = Rational::one();
            } else if self.eat(b'-') {
                sign = -Rational::one();
            } else {
                return Ok(out);
            }
        }
    }

    fn product(&mut self) -> Result<(Rational, i32), ConstantParseError> {
        let (mut r, mut e) = self.factor()?;
        loop {
            if self.eat(b'*') {
                let (r2, e2) = self.factor()?;
                r *= r2;
                e += e2;
            } else if self.eat(b'/') {
                let (r2, e2) = self.factor()?;
                if r2.is_zero() {
                    return Err(self.err("division by zero"));
                }
                r /= r2;
                e -= e2;
            } else {
                return Ok((r, e));
            }
        }
    }

    fn factor(&mut self) -> Result<(Rational, i32), ConstantParseError> {
        if self.eat(b'(') {
            let v = self.product()?;
            if !self.eat(b')') {
                return Err(self.err("expected ')'"));
            }
            return Ok(v);
        }
        self.ws();
        let start = self.pos;
        if self.s[start..].starts_with(b"pi") {
            self.pos += 2;
            if self.eat(b'^') {
                let n = self.integer()?;
                let e = n.to_i32().ok_or_else(|| self.err("exponent too large"))?;
                return Ok((Rational::one(), e));
            }
            return Ok((Rational::one(), 1));
        }
        Ok((Rational::from_integer(self.integer()?), 0))
    }

    fn integer(&mut self) -> Result<BigInt, ConstantParseError> {
        self.ws();
        let start = self.pos;
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected a number or pi"));
        }
        let text = std::str::from_utf8(&self.s[start..self.pos]).unwrap();
        Ok(parse_rational(text).unwrap().to_integer())
    }
}

/// `sum_{k >= term.start} term_k = sum`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BaseIdentity {
    pub term: HyperTerm,
    pub sum: ConstantExpr,
}

/// `sum_{k >= start} multiplier(k) kernel_k = rhs`, certified by
/// `base_coeff c(k) + multiplier(k) = G(k+1) a(k)/b(k) - G(k)` where `a/b` is
/// the kernel ratio.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ForgedIdentity {
    pub base_label: String,
    pub kernel: HyperTerm,
    /// The polynomial `c` with `t_k = c(k) kernel_k`.
    pub c: Poly,
    pub base_coeff: Rational,
    pub multiplier: RatFunc,
    pub start: i64,
    pub rhs: ConstantExpr,
    /// `G`, with `g(k) = G(k) kernel_k`.
    pub certificate: RatFunc,
    pub faster_convergence: bool,
    /// The candidate denominator and the degree bound that produced this.
    pub q: Poly,
    pub m: usize,
}

impl ForgedIdentity {
    /// Exact check of the certificate as an identity of rational functions.
    pub fn telescopes(&self) -> bool {
        let lhs = &RatFunc::from_poly(self.c.scale(&self.base_coeff)) + &self.multiplier;
        let g = &self.certificate;
        let rhs = &(&g.shift_int(1) * self.kernel.ratio()) - g;
        lhs == rhs
    }

    /// `multiplier(k) kernel_k`.
    pub fn summand(&self, k: i64) -> Result<Rational, ForgeError> {
        Ok(self.multiplier.eval_int(k)? * self.kernel.eval(k)?)
    }

    /// Numerator and denominator of the multiplier as coprime integer
    /// polynomials with positive leading coefficients, and the scalar `s`
    /// with `multiplier = s * num/den`.
    pub fn multiplier_parts(&self) -> (Rational, Poly, Poly) {
        let n = self.multiplier.num().primitive_part();
        let d = self.multiplier.den().primitive_part();
        if n.is_zero() {
            return (Rational::zero(), n, d);
        }
        let s = self.multiplier.num().lc() / n.lc() / (self.multiplier.den().lc() / d.lc());
        (s, n, d)
    }
}

/// Leading behaviour of a ratio `r(k) = rho (1 + alpha/k + O(1/k^2))`.
/// `None` when `r` grows at infinity; `rho = 0` when it decays.
pub fn ratio_asymptotics(ratio: &RatFunc) -> Option<(Rational, Rational)> {
    let (n, d) = (ratio.num(), ratio.den());
    let (dn, dd) = (n.degree()?, d.degree()?);
    if dn > dd {
        return None;
    }
    if dn < dd {
        return Some((Rational::zero(), Rational::zero()));
    }
    let next = |p: &Poly, top: usize| {
        if top == 0 {
            Rational::zero()
        } else {
            p.coeff(top - 1) / p.coeff(top)
        }
    };
    Some((n.lc() / d.lc(), next(n, dn) - next(d, dd)))
}

/// Convergence of `sum t_k` from the ratio alone: `|rho| < 1`, or
/// `rho = 1` with `alpha < -1`, or `rho = -1` with `alpha < 0`.
pub fn series_converges(ratio: &RatFunc) -> bool {
    let Some((rho, alpha)) = ratio_asymptotics(ratio) else {
        return false;
    };
    let one = Rational::one();
    if rho.abs() < one {
        true
    } else if rho == one {
        alpha < -one
    } else if rho == -one {
        alpha.is_negative()
    } else {
        false
    }
}

/// `t^ = t / c` with `c` the integer primitive form of the representation's
/// `c`, and the representation `(a, b, c)` with that `c`.
pub fn prepare_kernel(base: &BaseIdentity) -> Result<(HyperTerm, GosperRep), ForgeError> {
    let rep = gosper_representation(base.term.ratio())?;
    let c = rep.c().primitive_part();
    let k0 = base.term.start();
    let c0 = c.eval_int(k0);
    if c0.is_zero() {
        return Err(ForgeError::KernelStart(k0));
    }
    let kernel = HyperTerm::new(
        rep.kernel_ratio(),
        k0,
        base.term.initial() / c0,
        format!("{} / c", base.term.label()),
    )?;
    let rep = GosperRep::new(rep.a().clone(), rep.b().clone(), c)?;
    Ok((kernel, rep))
}

/// Representation of `a(k) q(k) / (b(k) q(k+1))`.
pub fn rep_for_candidate(rep: &GosperRep, q: &Poly) -> Result<GosperRep, ForgeError> {
    let ratio = RatFunc::new(rep.a() * q, rep.b() * &q.shift_int(1))?;
    Ok(gosper_representation(&ratio)?)
}

/// First index `k1 >= k0` past every integer root `>= k0` of `q` and of the
/// given denominators.
pub fn adjust_start(q: &Poly, denominators: &[Poly], k0: i64) -> i64 {
    std::iter::once(q)
        .chain(denominators)
        .filter(|p| !p.is_zero())
        .flat_map(integer_roots)
        .filter(|&r| r >= k0)
        .fold(k0 - 1, i64::max)
        + 1
}

/// `lim_{k -> oo} G(k) t^_k` when the ratio asymptotics decide it (it is then
/// zero); `None` when undetermined.
pub fn limit_of_g(g: &RatFunc, kernel_ratio: &RatFunc) -> Option<ConstantExpr> {
    if g.is_zero() {
        return Some(ConstantExpr::zero());
    }
    let (rho, alpha) = ratio_asymptotics(kernel_ratio)?;
    let one = Rational::one();
    if rho.abs() < one {
        return Some(ConstantExpr::zero());
    }
    if rho.abs() > one {
        return None;
    }
    let e = Rational::from_integer(g.degree_at_infinity()?.into()) + alpha;
    e.is_negative().then(ConstantExpr::zero)
}

/// One identity for the denominator `q`, or why there is none.
pub fn forge_identity(
    base: &BaseIdentity,
    q: &Poly,
    m_max: Option<usize>,
) -> Result<ForgedIdentity, ForgeError> {
    if !series_converges(base.term.ratio()) {
        return Err(ForgeError::Divergent);
    }
    let (kernel, rep) = prepare_kernel(base)?;
    forge_with_kernel(base, &kernel, &rep, q, m_max)
}

fn forge_with_kernel(
    base: &BaseIdentity,
    kernel: &HyperTerm,
    rep: &GosperRep,
    q: &Poly,
    m_max: Option<usize>,
) -> Result<ForgedIdentity, ForgeError> {
    assert!(!q.is_zero(), "q must be nonzero");
    let cand = rep_for_candidate(rep, q)?;
    let (a, b, cc) = (cand.a(), cand.b(), cand.c());
    let report = degree_report(&cand);
    let lo = report.lower_bound.unwrap_or(0).max(0) as usize;
    let hi = m_max.unwrap_or(report.upper_b.max(0) as usize).max(lo);
    let c = rep.c();
    let cq = c * q;
    let fixed = cc * &cq;
    let (m, sol) = (lo..=hi)
        .find_map(|m| solve_parametrized(a, b, &fixed, cc, m).map(|s| (m, s)))
        .ok_or(ForgeError::NoIdentity)?;
    let p = sol.p();
    if (&cq + &p).is_zero() || p.is_zero() {
        return Err(ForgeError::NoIdentity);
    }
    let big_g = RatFunc::new(&b.shift_int(-1) * &sol.x, cc * q)?;
    let k0 = kernel.start();
    let k1 = adjust_start(q, &[big_g.den().clone()], k0);
    let limit = limit_of_g(&big_g, kernel.ratio()).ok_or(ForgeError::UndeterminedLimit)?;
    let g_k1 = big_g.eval_int(k1)? * kernel.eval(k1)?;
    let head: Rational = base.term.values(k0, k1 - 1)?.into_iter().sum();
    let rhs = &(&limit - &base.sum) + &ConstantExpr::rational(head - g_k1);

    let raw = RatFunc::new(p, q.clone())?;
    let n = raw.num().primitive_part();
    let d = raw.den().primitive_part();
    let lambda = raw.num().lc() / n.lc() / (raw.den().lc() / d.lc());
    let inv = lambda.recip();
    let faster = n.deg().unwrap() - d.deg().unwrap() < c.deg().unwrap_or(0);
    let id = ForgedIdentity {
        base_label: base.term.label().to_string(),
        kernel: kernel.clone(),
        c: c.clone(),
        base_coeff: inv.clone(),
        multiplier: raw.scale(&inv),
        start: k1,
        rhs: rhs.scale(&inv),
        certificate: big_g.scale(&inv),
        faster_convergence: faster,
        q: q.clone(),
        m,
    };
    if !id.telescopes() {
        return Err(ForgeError::Unsound);
    }
    Ok(id)
}

/// Every identity obtained from the denominator candidates of total degree
/// at most `max_total_degree` and shifts up to `max_shift`, in candidate
/// order, keeping the first identity for each multiplier.
pub fn derive_family(
    base: &BaseIdentity,
    max_total_degree: usize,
    max_shift: usize,
) -> Result<Vec<ForgedIdentity>, ForgeError> {
    if !series_converges(base.term.ratio()) {
        return Err(ForgeError::Divergent);
    }
    let (kernel, rep) = prepare_kernel(base)?;
    let cands = candidate_denominators(&rep, max_total_degree, max_shift);
    let found: Vec<Option<ForgedIdentity>> = cands
        .par_iter()
        .map(|cand| forge_with_kernel(base, &kernel, &rep, &cand.q, None).ok())
        .collect();
    let mut out: Vec<ForgedIdentity> = Vec::new();
    for id in found.into_iter().flatten() {
        if !out.iter().any(|o| o.multiplier == id.multiplier) {
            out.push(id);
        }
    }
    Ok(out)
}
