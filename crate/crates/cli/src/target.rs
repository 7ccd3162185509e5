//! Congruence right-hand sides in `p`, e.g. `p*L`, `-p*L + p*8^(p-1)` or
//! `p^2 - p*L`, where `L` is the symbol `(-1/p)`.

use hypersum_core::algebra::{format_rational, parse_rational, Rational};
use hypersum_core::verify::{CongruenceTarget, TargetTerm};
use num_traits::{One, Signed};

use crate::lex::{Cursor, ParseError};

pub fn parse_target(s: &str) -> Result<CongruenceTarget, ParseError> {
    let mut c = Cursor::new(s);
    let mut terms = Vec::new();
    let mut neg = c.eat('-');
    if !neg {
        c.eat('+');
    }
    loop {
        let mut t = term(&mut c)?;
        if neg {
            t.coeff = -t.coeff;
        }
        terms.push(t);
        if c.eat('+') {
            neg = false;
        } else if c.eat('-') {
            neg = true;
        } else {
            break;
        }
    }
    c.finish()?;
    Ok(CongruenceTarget { terms })
}

fn term(c: &mut Cursor) -> Result<TargetTerm, ParseError> {
    let mut t = TargetTerm {
        coeff: Rational::one(),
        p_power: 0,
        legendre: false,
        base_power: None,
    };
    loop {
        if c.eat('p') {
            t.p_power += if c.eat('^') { c.uint()? } else { 1 };
        } else if c.eat('L') {
            if t.legendre {
                return Err(c.err("`L` may appear once per term"));
            }
            t.legendre = true;
        } else if let Some(d) = c.digits() {
            let n = parse_rational(d).unwrap();
            if c.eat_str("^(p-1)") || c.eat_str("^(p - 1)") {
                if t.base_power.is_some() {
                    return Err(c.err("one power base per term"));
                }
                let b = n
                    .to_integer()
                    .try_into()
                    .map_err(|_| c.err("base too large"))?;
                t.base_power = Some(b);
            } else if c.eat('/') {
                let d = c.digits().ok_or_else(|| c.err("expected a denominator"))?;
                t.coeff *= n / parse_rational(d).unwrap();
            } else {
                t.coeff *= n;
            }
        } else {
            return Err(c.err("expected `p`, `L` or a number"));
        }
        if !c.eat('*') {
            return Ok(t);
        }
    }
}

pub fn render_target(t: &CongruenceTarget) -> String {
    let mut out = String::new();
    for (i, term) in t.terms.iter().enumerate() {
        let neg = term.coeff.is_negative();
        match (i, neg) {
            (0, true) => out.push('-'),
            (0, false) => {}
            (_, true) => out.push_str(" - "),
            (_, false) => out.push_str(" + "),
        }
        let mut parts = Vec::new();
        let c = term.coeff.abs();
        if !c.is_one() {
            parts.push(format_rational(&c));
        }
        match term.p_power {
            0 => {}
            1 => parts.push("p".into()),
            e => parts.push(format!("p^{e}")),
        }
        if term.legendre {
            parts.push("L".into());
        }
        if let Some(b) = term.base_power {
            parts.push(format!("{b}^(p-1)"));
        }
        if parts.is_empty() {
            parts.push("1".into());
        }
        out.push_str(&parts.join("*"));
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}
