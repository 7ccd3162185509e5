//! Rational functions of `k` written as ordinary expressions, e.g.
//! `(4k+1)/(2(k+1)(2k-1))` or `-1/2*k^2 + 3`.

use hypersum_core::algebra::{parse_rational, Poly, RatFunc};

use crate::lex::{Cursor, ParseError};

pub fn parse_ratfunc(s: &str) -> Result<RatFunc, ParseError> {
    let mut c = Cursor::new(s);
    let r = sum(&mut c)?;
    c.finish()?;
    Ok(r)
}

pub fn parse_poly(s: &str) -> Result<Poly, ParseError> {
    let r = parse_ratfunc(s)?;
    if !r.is_polynomial() {
        return Err(Cursor::new(s).err("expected a polynomial"));
    }
    let (num, den) = r.into_parts();
    Ok(num.scale(&den.lc().recip()))
}

fn sum(c: &mut Cursor) -> Result<RatFunc, ParseError> {
    let mut neg = c.eat('-');
    if !neg {
        c.eat('+');
    }
    let mut acc = RatFunc::zero();
    loop {
        let t = product(c)?;
        acc = if neg { &acc - &t } else { &acc + &t };
        if c.eat('+') {
            neg = false;
        } else if c.eat('-') {
            neg = true;
        } else {
            return Ok(acc);
        }
    }
}

fn starts_atom(c: &mut Cursor) -> bool {
    matches!(c.peek(), Some('(' | 'k' | '0'..='9'))
}

fn product(c: &mut Cursor) -> Result<RatFunc, ParseError> {
    let mut acc = power(c)?;
    loop {
        if c.eat('*') {
            acc = &acc * &power(c)?;
        } else if c.eat('/') {
            let d = power(c)?;
            acc = (&acc / &d).map_err(|_| c.err("division by zero"))?;
        } else if starts_atom(c) {
            acc = &acc * &power(c)?;
        } else {
            return Ok(acc);
        }
    }
}

fn power(c: &mut Cursor) -> Result<RatFunc, ParseError> {
    let base = atom(c)?;
    if !c.eat('^') {
        return Ok(base);
    }
    let e = c.uint()?;
    let (n, d) = base.into_parts();
    Ok(RatFunc::new(n.pow(e), d.pow(e)).expect("nonzero denominator"))
}

fn atom(c: &mut Cursor) -> Result<RatFunc, ParseError> {
    if c.eat('(') {
        let r = sum(c)?;
        c.expect(')')?;
        return Ok(r);
    }
    if c.eat('k') {
        return Ok(RatFunc::from_poly(Poly::k()));
    }
    match c.digits() {
        Some(d) => Ok(RatFunc::constant(parse_rational(d).unwrap())),
        None => Err(c.err("expected a number, `k` or `(`")),
    }
}
