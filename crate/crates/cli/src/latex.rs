use hypersum_core::algebra::{atomic_factors, Poly, RatFunc, Rational};
use hypersum_core::forge::{Constant, ConstantExpr};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::dsl::{Factor, Lin, TermSpec};

fn frac(n: &str, d: &str) -> String {
    format!("\\frac{{{n}}}{{{d}}}")
}

fn rational(r: &Rational) -> String {
    if r.is_integer() {
        r.to_integer().to_string()
    } else if r.is_negative() {
        format!(
            "-{}",
            frac(&(-r.numer()).to_string(), &r.denom().to_string())
        )
    } else {
        frac(&r.numer().to_string(), &r.denom().to_string())
    }
}

fn exponent(e: u32) -> String {
    match e {
        1 => String::new(),
        2..=9 => format!("^{e}"),
        _ => format!("^{{{e}}}"),
    }
}

/// `4k^2-k+1` style, highest degree first.
pub fn poly_latex(p: &Poly) -> String {
    if p.is_zero() {
        return "0".into();
    }
    let mut out = String::new();
    for i in (0..=p.degree().unwrap()).rev() {
        let c = p.coeff(i);
        if c.is_zero() {
            continue;
        }
        let neg = c.is_negative();
        if neg {
            out.push('-');
        } else if !out.is_empty() {
            out.push('+');
        }
        let a = c.abs();
        let mon = match i {
            0 => String::new(),
            1 => "k".into(),
            2..=9 => format!("k^{i}"),
            _ => format!("k^{{{i}}}"),
        };
        if !a.is_one() || i == 0 {
            out.push_str(&rational(&a));
        }
        out.push_str(&mon);
    }
    out
}

fn poly_factor(p: &Poly, e: u32) -> String {
    if *p == Poly::k() {
        format!("k{}", exponent(e))
    } else {
        format!("({}){}", poly_latex(p), exponent(e))
    }
}

fn lin(l: &Lin) -> String {
    poly_latex(&Poly::linear(
        Rational::from_integer(l.alpha.into()),
        l.beta.clone(),
    ))
}

fn factor(f: &Factor, e: u32) -> String {
    match f {
        Factor::Binom(n, m) => format!("\\binom{{{}}}{{{}}}{}", lin(n), lin(m), exponent(e)),
        Factor::Poly(p) => poly_factor(p, e),
        Factor::Geom(r) => {
            let k = if e == 1 {
                "k".to_string()
            } else {
                format!("{{{e}k}}")
            };
            if r.is_integer() && r.is_positive() {
                format!("{}^{k}", r.to_integer())
            } else if r.is_integer() {
                format!("({})^{k}", r.to_integer())
            } else {
                format!("\\left({}\\right)^{k}", rational(r))
            }
        }
        Factor::Rising(a) => format!("\\left({}\\right)_k{}", rational(a), exponent(e)),
        Factor::Fact(l) if l.alpha == 1 && l.beta.is_zero() => format!("k!{}", exponent(e)),
        Factor::Fact(l) => format!("({})!{}", lin(l), exponent(e)),
    }
}

/// Integer factors of a polynomial with integer coefficients: the sign and
/// the primitive atoms, linear ones by ascending root, then the rest.
fn factor_poly(p: &Poly) -> (Rational, Vec<(Poly, usize)>) {
    if p.is_constant() {
        return (p.coeff(0), Vec::new());
    }
    let mut atoms: Vec<(Poly, usize)> = atomic_factors(p)
        .into_iter()
        .map(|(f, m)| (f.primitive_part(), m))
        .collect();
    atoms.sort_by(|(x, _), (y, _)| match (x.degree(), y.degree()) {
        (Some(1), Some(1)) => (-x.coeff(0) / x.coeff(1)).cmp(&(-y.coeff(0) / y.coeff(1))),
        (Some(1), _) => std::cmp::Ordering::Less,
        (_, Some(1)) => std::cmp::Ordering::Greater,
        _ => x.canonical_cmp(y),
    });
    let prod_lc: Rational = atoms
        .iter()
        .map(|(f, m)| (0..*m).fold(Rational::one(), |acc, _| acc * f.lc()))
        .product();
    (p.lc() / prod_lc, atoms)
}

fn join_factors(atoms: &[(Poly, usize)]) -> String {
    atoms
        .iter()
        .map(|(f, m)| poly_factor(f, *m as u32))
        .collect()
}

/// Splits a term into numerator and denominator LaTeX pieces.
fn fraction_parts(multiplier: &RatFunc, kernel: &TermSpec) -> (Rational, String, String) {
    let n = multiplier.num().primitive_part();
    let d = multiplier.den().primitive_part();
    let scale = multiplier.num().lc() / n.lc() / (multiplier.den().lc() / d.lc());
    let (un, fn_) = factor_poly(&n);
    let (ud, fd) = factor_poly(&d);
    let mut num = join_factors(&fn_);
    let mut den = join_factors(&fd);
    for (f, e) in &kernel.factors {
        let s = factor(f, e.unsigned_abs());
        if *e > 0 {
            num.push_str(&s);
        } else {
            den.push_str(&s);
        }
    }
    (scale * un / ud, num, den)
}

pub fn constant_latex(e: &ConstantExpr) -> String {
    if e.is_zero() {
        return "0".into();
    }
    let mut out = String::new();
    for (i, (c, r)) in e.terms().enumerate() {
        let neg = r.is_negative();
        match (i, neg) {
            (0, true) => out.push('-'),
            (0, false) => {}
            (_, true) => out.push_str(" - "),
            (_, false) => out.push_str(" + "),
        }
        let a = r.abs();
        let (n, d) = (a.numer().clone(), a.denom().clone());
        let one = BigInt::one();
        let coeff = |x: &BigInt| {
            if *x == one {
                String::new()
            } else {
                x.to_string()
            }
        };
        let s = match c {
            Constant::One => rational(&a),
            Constant::PiSq if d == one => format!("{}\\pi^2", coeff(&n)),
            Constant::PiSq => frac(&format!("{}\\pi^2", coeff(&n)), &d.to_string()),
            Constant::InvPi => frac(&n.to_string(), &format!("{}\\pi", coeff(&d))),
        };
        out.push_str(&s);
    }
    out
}

/// `\sum_{k=start}^\infty multiplier(k) kernel_k = rhs`.
pub fn sum_latex(
    multiplier: &RatFunc,
    kernel: &TermSpec,
    start: i64,
    rhs: &ConstantExpr,
) -> String {
    if multiplier.is_zero() {
        return "0 = 0".into();
    }
    let (scale, num, den) = fraction_parts(multiplier, kernel);
    let sign = if scale.is_negative() { "-" } else { "" };
    let scale = scale.abs();
    let mut num = if scale.numer().is_one() {
        num
    } else {
        format!("{}{num}", scale.numer())
    };
    let den = if scale.denom().is_one() {
        den
    } else {
        format!("{}{den}", scale.denom())
    };
    if num.is_empty() {
        num = "1".into();
    }
    let body = if den.is_empty() {
        num
    } else {
        frac(&num, &den)
    };
    format!(
        "\\sum_{{k={start}}}^\\infty {sign}{body} = {}",
        constant_latex(rhs)
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dsl::parse_term;
    use hypersum_core::algebra::{int, rat};

    fn p(c: &[i64]) -> Poly {
        Poly::from_i64(c)
    }

    #[test]
    fn sun_display() {
        let kernel = parse_term("binom(2k,k)^3 / (-64)^k", 0).unwrap();
        let m = RatFunc::new(p(&[0, -1, 4]), p(&[-1, 2]).pow(2)).unwrap();
        let rhs = ConstantExpr::term(Constant::InvPi, int(-1));
        assert_eq!(
            sum_latex(&m, &kernel, 0, &rhs),
            "\\sum_{k=0}^\\infty \\frac{k(4k-1)\\binom{2k}{k}^3}{(2k-1)^2(-64)^k} = -\\frac{1}{\\pi}"
        );
    }

    #[test]
    fn constants() {
        let e = &ConstantExpr::rational(int(8)) + &ConstantExpr::term(Constant::InvPi, int(-16));
        assert_eq!(constant_latex(&e), "8 - \\frac{16}{\\pi}");
        let z =
            &ConstantExpr::term(Constant::PiSq, rat(-1, 16)) + &ConstantExpr::rational(rat(5, 8));
        assert_eq!(constant_latex(&z), "-\\frac{\\pi^2}{16} + \\frac{5}{8}");
        assert_eq!(
            constant_latex(&ConstantExpr::term(Constant::InvPi, rat(1, 2))),
            "\\frac{1}{2\\pi}"
        );
    }

    #[test]
    fn start_and_zero() {
        let kernel = parse_term("1 / (k^3 * binom(2k,k)^3)", 1).unwrap();
        let m = RatFunc::new(p(&[2, -8, 7]), p(&[-1, 1]).pow(2)).unwrap();
        let s = sum_latex(&m, &kernel, 2, &ConstantExpr::zero());
        assert!(
            s.starts_with("\\sum_{k=2}^\\infty \\frac{(7k^2-8k+2)}{(k-1)^2k^3\\binom{2k}{k}^3}"),
            "{s}"
        );
        assert_eq!(
            sum_latex(&RatFunc::zero(), &kernel, 0, &ConstantExpr::zero()),
            "0 = 0"
        );
    }

    #[test]
    fn polynomials() {
        assert_eq!(poly_latex(&p(&[1, -1, 4])), "4k^2-k+1");
        assert_eq!(
            poly_latex(&p(&[0, 0, 0, 0, 0, 0, 0, 0, 0, 0, -1])),
            "-k^{10}"
        );
    }
}
