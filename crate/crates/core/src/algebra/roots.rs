use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{Poly, Rational};

/// `p = unit * prod(factor^multiplicity)`, factors monic, squarefree and
/// pairwise coprime, listed by increasing multiplicity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SquarefreeDecomposition {
    pub unit: Rational,
    pub factors: Vec<(Poly, usize)>,
}

impl SquarefreeDecomposition {
    pub fn expand(&self) -> Poly {
        self.factors
            .iter()
            .fold(Poly::constant(self.unit.clone()), |acc, (f, m)| {
                &acc * &f.pow(*m as u32)
            })
    }
}

/// Yun's algorithm. Panics on the zero polynomial.
pub fn squarefree_decompose(p: &Poly) -> SquarefreeDecomposition {
    assert!(!p.is_zero(), "squarefree decomposition of zero");
    let unit = p.lc();
    let f = p.monic();
    let mut factors = Vec::new();
    if f.is_constant() {
        return SquarefreeDecomposition { unit, factors };
    }
    let df = f.derivative();
    let a0 = f.gcd(&df);
    let mut b = f.exact_div(&a0).expect("gcd divides");
    let c = df.exact_div(&a0).expect("gcd divides");
    let mut d = &c - &b.derivative();
    let mut i = 1;
    while !b.is_constant() {
        let a = b.gcd(&d);
        let next_b = b.exact_div(&a).expect("gcd divides");
        let next_c = d.exact_div(&a).expect("gcd divides");
        d = &next_c - &next_b.derivative();
        b = next_b;
        if !a.is_constant() {
            factors.push((a, i));
        }
        i += 1;
    }
    SquarefreeDecomposition { unit, factors }
}

/// Integer associate of `p` with coprime coefficients.
fn cleared(p: &Poly) -> Vec<BigInt> {
    p.primitive_part()
        .integer_coeffs()
        .expect("primitive part is integral")
}

fn divisors(n: &BigInt) -> Vec<BigInt> {
    let n = n.abs();
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = BigInt::one();
    while &d * &d <= n {
        if (&n % &d).is_zero() {
            let q = &n / &d;
            if q != d {
                large.push(q);
            }
            small.push(d.clone());
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

/// Splits off `k^j`: returns `(j, coefficients of p / k^j)`.
fn strip_zero_roots(c: &[BigInt]) -> (usize, &[BigInt]) {
    let j = c.iter().take_while(|x| x.is_zero()).count();
    (j, &c[j..])
}

/// All rational roots of `p`, ascending and without repetition, via the
/// rational root theorem on the cleared integer polynomial.
pub fn rational_roots(p: &Poly) -> Vec<Rational> {
    assert!(!p.is_zero(), "rational roots of zero");
    if p.is_constant() {
        return Vec::new();
    }
    let c = cleared(p);
    let (zeros, rest) = strip_zero_roots(&c);
    let mut roots = Vec::new();
    if zeros > 0 {
        roots.push(Rational::zero());
    }
    if rest.len() > 1 {
        let reduced = Poly::new(rest.iter().cloned().map(Rational::from_integer).collect());
        let nums = divisors(&rest[0]);
        let dens = divisors(rest.last().unwrap());
        for e in &dens {
            for d in &nums {
                for s in [d.clone(), -d.clone()] {
                    if !s.gcd(e).is_one() {
                        continue;
                    }
                    let r = Rational::new(s, e.clone());
                    if reduced.eval(&r).is_zero() {
                        roots.push(r);
                    }
                }
            }
        }
    }
    roots.sort();
    roots.dedup();
    roots
}

/// Integer `B` with every complex root of `c_0 + ... + c_n k^n` of modulus
/// below `B`: `2 max |c_{n-i}/c_n|^(1/i)`, rounded up.
fn fujiwara_bound(c: &[BigInt]) -> BigInt {
    let n = c.len() - 1;
    let lead = c[n].abs();
    let mut m = BigInt::zero();
    for i in 1..=n {
        let mut r = c[n - i].abs().div_ceil(&lead);
        if i == n {
            r = r.div_ceil(&BigInt::from(2));
        }
        let mut root = r.nth_root(i as u32);
        if root.pow(i as u32) < r {
            root += 1;
        }
        m = m.max(root);
    }
    2 * m + 1
}

/// All integer roots of `p`, ascending.
pub fn integer_roots(p: &Poly) -> Vec<i64> {
    assert!(!p.is_zero(), "integer roots of zero");
    if p.is_constant() {
        return Vec::new();
    }
    let c = cleared(p);
    let (zeros, rest) = strip_zero_roots(&c);
    let mut roots = Vec::new();
    if zeros > 0 {
        roots.push(0);
    }
    if rest.len() > 1 {
        let bound = fujiwara_bound(rest);
        let reduced = Poly::new(rest.iter().cloned().map(Rational::from_integer).collect());
        let c0 = &rest[0];
        let candidates: Vec<BigInt> = match bound.to_i64() {
            Some(b) if b <= 1_000_000 => (1..=b)
                .map(BigInt::from)
                .filter(|h| (c0 % h).is_zero())
                .collect(),
            _ => divisors(c0),
        };
        for d in candidates {
            for s in [d.clone(), -d] {
                if reduced.eval(&Rational::from_integer(s.clone())).is_zero() {
                    roots.push(s.to_i64().expect("root fits in i64"));
                }
            }
        }
    }
    roots.sort_unstable();
    roots.dedup();
    roots
}

/// Splits `p` into monic "atoms": rational linear factors plus, per
/// squarefree layer, the leftover factor without rational roots (kept whole,
/// never factored further). Each atom carries its multiplicity in `p`.
pub fn atomic_factors(p: &Poly) -> Vec<(Poly, usize)> {
    let mut out = Vec::new();
    for (f, m) in squarefree_decompose(p).factors {
        let mut rest = f.clone();
        for r in rational_roots(&f) {
            let lin = Poly::linear(Rational::one(), -r);
            rest = rest.exact_div(&lin).expect("root gives a factor");
            out.push((lin, m));
        }
        if !rest.is_constant() {
            out.push((rest.monic(), m));
        }
    }
    out.sort_by(|a, b| a.0.canonical_cmp(&b.0).then(a.1.cmp(&b.1)));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{int, rat};

    fn p(c: &[i64]) -> Poly {
        Poly::from_i64(c)
    }

    #[test]
    fn squarefree_of_repeated_linear() {
        let f = p(&[1, 1]).pow(2) * p(&[2, 1]);
        let sf = squarefree_decompose(&f);
        assert_eq!(sf.unit, int(1));
        assert_eq!(sf.factors, vec![(p(&[2, 1]), 1), (p(&[1, 1]), 2)]);
        assert_eq!(sf.expand(), f);
    }

    #[test]
    fn squarefree_carries_unit() {
        let f = p(&[-1, 2]).pow(4);
        let sf = squarefree_decompose(&f);
        assert_eq!(sf.unit, int(16));
        assert_eq!(sf.factors, vec![(Poly::linear(int(1), rat(-1, 2)), 4)]);
    }

    #[test]
    fn squarefree_of_telescoping_numerator() {
        // 16k^3 - 4k^2 - 2k + 1 is squarefree with no rational roots (checked
        // independently with a CAS); the decomposition is a single layer.
        let f = p(&[1, -2, -4, 16]);
        let sf = squarefree_decompose(&f);
        assert_eq!(sf.unit, int(16));
        assert_eq!(sf.factors, vec![(f.monic(), 1)]);
        assert_eq!(sf.expand(), f);
        assert!(rational_roots(&f).is_empty());
        assert!(f.gcd(&f.derivative()).is_one());
    }

    #[test]
    fn rational_roots_examples() {
        let f = p(&[1, 2]) * p(&[-1, 2]).pow(2);
        assert_eq!(rational_roots(&f), vec![rat(-1, 2), rat(1, 2)]);
        assert!(rational_roots(&p(&[1, 0, 1])).is_empty());
        let g = p(&[1, 4]) * p(&[5, 4]);
        assert_eq!(rational_roots(&g), vec![rat(-5, 4), rat(-1, 4)]);
        assert_eq!(rational_roots(&p(&[0, 0, 3])), vec![int(0)]);
    }

    #[test]
    fn integer_roots_examples() {
        let f = p(&[0, 1]) * p(&[-7, 1]) * p(&[3, 1]) * p(&[1, 2]);
        assert_eq!(integer_roots(&f), vec![-3, 0, 7]);
        assert!(integer_roots(&p(&[5])).is_empty());
    }

    #[test]
    fn atoms_split_linear_and_keep_irreducible_rest() {
        let f = p(&[1, 0, 1]) * p(&[-1, 2]).pow(3);
        let atoms = atomic_factors(&f);
        assert_eq!(
            atoms,
            vec![(Poly::linear(int(1), rat(-1, 2)), 3), (p(&[1, 0, 1]), 1)]
        );
    }
}
