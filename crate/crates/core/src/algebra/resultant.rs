use std::collections::BTreeSet;

use num_traits::{One, Zero};

use super::{integer_roots, Poly, Rational};

/// Which integer shifts a dispersion computation ranges over.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ShiftDomain {
    NonNegative,
    All,
}

/// Resultant of `f` and `g` by the Euclidean recurrence
/// `res(f, g) = lc(f)^(deg g - deg r) * res(f, g mod f)`.
pub fn resultant(f: &Poly, g: &Poly) -> Rational {
    let (mut f, mut g) = (f.clone(), g.clone());
    let mut acc = Rational::one();
    loop {
        if f.is_zero() || g.is_zero() {
            return Rational::zero();
        }
        let m = f.degree().unwrap();
        let n = g.degree().unwrap();
        if m == 0 {
            return acc * pow(&f.lc(), n);
        }
        if n == 0 {
            return acc * pow(&g.lc(), m);
        }
        if m > n {
            // res(f, g) = (-1)^(mn) res(g, f)
            if (m * n) % 2 == 1 {
                acc = -acc;
            }
            std::mem::swap(&mut f, &mut g);
            continue;
        }
        let r = g.rem(&f).expect("f nonzero");
        if r.is_zero() {
            return Rational::zero();
        }
        let s = r.degree().unwrap();
        acc *= pow(&f.lc(), n - s);
        g = r;
    }
}

fn pow(x: &Rational, e: usize) -> Rational {
    (0..e).fold(Rational::one(), |acc, _| acc * x)
}

/// Newton interpolation through `(xs[i], ys[i])`; the nodes must be distinct.
pub fn interpolate(xs: &[Rational], ys: &[Rational]) -> Poly {
    assert_eq!(xs.len(), ys.len());
    let n = xs.len();
    let mut dd = ys.to_vec();
    for j in 1..n {
        for i in (j..n).rev() {
            dd[i] = (&dd[i] - &dd[i - 1]) / (&xs[i] - &xs[i - j]);
        }
    }
    let mut out = Poly::zero();
    for i in (0..n).rev() {
        out = &(&out * &Poly::linear(Rational::one(), -xs[i].clone()))
            + &Poly::constant(dd[i].clone());
    }
    out
}

/// `{h in domain : gcd(a(k), b(k+h)) != 1}`.
///
/// Builds `R(h) = res_k(a(k), b(k+h))` by evaluation at `deg a * deg b + 1`
/// integer points and exact interpolation, takes its integer roots, and keeps
/// those where the gcd is confirmed nontrivial.
pub fn dispersion_set(a: &Poly, b: &Poly, domain: ShiftDomain) -> BTreeSet<i64> {
    assert!(
        !a.is_zero() && !b.is_zero(),
        "dispersion of zero polynomial"
    );
    let mut out = BTreeSet::new();
    let (Some(da), Some(db)) = (a.degree(), b.degree()) else {
        return out;
    };
    if da == 0 || db == 0 {
        return out;
    }
    let npts = da * db + 1;
    let xs: Vec<Rational> = (0..npts as i64)
        .map(|h| Rational::from_integer(h.into()))
        .collect();
    let ys: Vec<Rational> = xs.iter().map(|h| resultant(a, &b.shift(h))).collect();
    let res = interpolate(&xs, &ys);
    debug_assert!(!res.is_zero(), "resultant in h vanishes identically");
    for h in integer_roots(&res) {
        if domain == ShiftDomain::NonNegative && h < 0 {
            continue;
        }
        if !a.gcd(&b.shift_int(h)).is_one() {
            out.insert(h);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::int;

    fn p(c: &[i64]) -> Poly {
        Poly::from_i64(c)
    }

    #[test]
    fn resultant_of_linear_forms() {
        // res(k - 1, k - 3) = (1 - 3) = -2
        assert_eq!(resultant(&p(&[-1, 1]), &p(&[-3, 1])), int(-2));
        assert_eq!(resultant(&p(&[-1, 1]), &p(&[-1, 1])), int(0));
        // res(k^2 + 1, k) = 1
        assert_eq!(resultant(&p(&[1, 0, 1]), &p(&[0, 1])), int(1));
    }

    #[test]
    fn resultant_matches_product_over_roots() {
        // f = (k-1)(k-2), g = k+3: res = g(1) g(2) = 4 * 5
        let f = p(&[2, -3, 1]);
        let g = p(&[3, 1]);
        assert_eq!(resultant(&f, &g), int(20));
        // res(g, f) = (-1)^(1*2) res(f, g)
        assert_eq!(resultant(&g, &f), int(20));
    }

    #[test]
    fn interpolation_recovers_polynomial() {
        let f = p(&[3, -1, 0, 2]);
        let xs: Vec<_> = (0..5).map(int).collect();
        let ys: Vec<_> = xs.iter().map(|x| f.eval(x)).collect();
        assert_eq!(interpolate(&xs, &ys), f);
    }

    #[test]
    fn dispersion_examples() {
        let a = p(&[1, 1]).pow(2);
        let b = p(&[2, 1]) * p(&[3, 1]);
        assert!(dispersion_set(&a, &b, ShiftDomain::NonNegative).is_empty());
        assert_eq!(
            dispersion_set(&a, &b, ShiftDomain::All),
            BTreeSet::from([-2, -1])
        );
        assert!(dispersion_set(&Poly::one(), &Poly::one(), ShiftDomain::All).is_empty());
    }

    #[test]
    fn dispersion_matches_gcd_brute_force() {
        let a = p(&[1, 1]).pow(2);
        let b = p(&[2, 1]) * p(&[3, 1]);
        let brute: BTreeSet<i64> = (-10..=10)
            .filter(|&h| !a.gcd(&b.shift_int(h)).is_one())
            .collect();
        assert_eq!(brute, dispersion_set(&a, &b, ShiftDomain::All));
    }
}
