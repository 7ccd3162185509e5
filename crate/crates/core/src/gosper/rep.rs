use super::GosperError;
use crate::algebra::{dispersion_set, Poly, RatFunc, ShiftDomain};

/// `t(k+1)/t(k) = a(k)/b(k) * c(k+1)/c(k)` with `gcd(a(k), b(k+h)) = 1` for
/// every integer `h >= 0`.
///
/// [`gosper_representation`] returns `b` and `c` monic with the scalar unit
/// carried by `a`. [`GosperRep::new`] accepts any units, since `a` and `b`
/// only ever enter through `a/b`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GosperRep {
    a: Poly,
    b: Poly,
    c: Poly,
}

impl GosperRep {
    /// Validates nonzero parts and the shift-gcd condition.
    pub fn new(a: Poly, b: Poly, c: Poly) -> Result<Self, GosperError> {
        if a.is_zero() || b.is_zero() || c.is_zero() {
            return Err(GosperError::ZeroPolynomial);
        }
        let bad = dispersion_set(&a, &b, ShiftDomain::NonNegative);
        if !bad.is_empty() {
            return Err(GosperError::ShiftCondition(bad.into_iter().collect()));
        }
        Ok(GosperRep { a, b, c })
    }

    pub fn a(&self) -> &Poly {
        &self.a
    }

    pub fn b(&self) -> &Poly {
        &self.b
    }

    pub fn c(&self) -> &Poly {
        &self.c
    }

    /// `a/b`, the ratio of the term divided by `c`.
    pub fn kernel_ratio(&self) -> RatFunc {
        RatFunc::new(self.a.clone(), self.b.clone()).expect("b nonzero")
    }

    /// `a/b * c(k+1)/c(k)`.
    pub fn ratio(&self) -> RatFunc {
        RatFunc::new(&self.a * &self.c.shift_int(1), &self.b * &self.c).expect("b and c nonzero")
    }

    /// Same triple up to units: `c` proportional and `a/b` equal.
    pub fn equivalent(&self, other: &GosperRep) -> bool {
        self.c.monic() == other.c.monic()
            && self.a.monic() == other.a.monic()
            && self.b.monic() == other.b.monic()
            && self.kernel_ratio() == other.kernel_ratio()
    }
}

/// Gosper-Petkovsek normal form of a nonzero ratio.
///
/// Starting from the reduced ratio `a/b` and `c = 1`, every `h >= 0` with
/// `s = gcd(a(k), b(k+h)) != 1` (increasing `h`) moves `s` out:
/// `a <- a/s`, `b <- b/s(k-h)`, `c <- c * s(k-1) ... s(k-h)`.
pub fn gosper_representation(ratio: &RatFunc) -> Result<GosperRep, GosperError> {
    if ratio.is_zero() {
        return Err(GosperError::ZeroRatio);
    }
    let unit = ratio.num().lc() / ratio.den().lc();
    let mut a = ratio.num().monic();
    let mut b = ratio.den().monic();
    let mut c = Poly::one();
    loop {
        let shifts = dispersion_set(&a, &b, ShiftDomain::NonNegative);
        if shifts.is_empty() {
            break;
        }
        for h in shifts {
            if h == 0 {
                return Err(GosperError::NotReduced);
            }
            let s = a.gcd(&b.shift_int(h));
            if s.is_one() {
                continue;
            }
            a = a.exact_div(&s)?;
            b = b.exact_div(&s.shift_int(-h))?;
            for i in 1..=h {
                c = &c * &s.shift_int(-i);
            }
        }
    }
    let rep = GosperRep {
        a: a.scale(&unit),
        b,
        c: c.monic(),
    };
    assert!(
        dispersion_set(&rep.a, &rep.b, ShiftDomain::NonNegative).is_empty(),
        "representation violates the shift condition"
    );
    assert_eq!(
        &rep.ratio(),
        ratio,
        "representation does not reproduce the ratio"
    );
    Ok(rep)
}
