use std::collections::BTreeSet;

use num_traits::{Signed, ToPrimitive, Zero};

use super::linsolve::solve_linear;
use super::{gosper_representation, GosperError, GosperRep};
use crate::algebra::{Poly, RatFunc, Rational};

/// Antidifference multiplier: `z(k) = R(k) t(k)` satisfies
/// `z(k+1) - z(k) = t(k)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Certificate {
    pub multiplier: RatFunc,
    /// The polynomial solution of the Gosper equation it came from.
    pub x: Poly,
}

impl Certificate {
    /// `R(k+1) * ratio(k) - R(k) == 1`, exactly.
    pub fn verify(&self, ratio: &RatFunc) -> bool {
        let lhs = &(&self.multiplier.shift_int(1) * ratio) - &self.multiplier;
        lhs == RatFunc::one()
    }
}

/// Solution of the parametrized Gosper equation: `x` and the values of the
/// right-hand side unknowns `a_0..a_m`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParamSolution {
    pub x: Poly,
    pub unknowns: Vec<Rational>,
}

impl ParamSolution {
    /// `a_0 + a_1 k + ... + a_m k^m`.
    pub fn p(&self) -> Poly {
        Poly::new(self.unknowns.clone())
    }
}

/// Candidate degrees for polynomial solutions `x` of
/// `a(k) x(k+1) - b(k-1) x(k) = rhs(k)` with `deg rhs = rhs_degree`.
///
/// With `u = a - b(k-1)`: if `deg u >= deg a` the only candidate is
/// `rhs_degree - deg u`; otherwise it is `rhs_degree - deg a + 1`, plus
/// `n0 = -lc(u)/lc(a)` when the pair is degenerated (`deg u = deg a - 1` and
/// `n0` a nonnegative integer). Candidates are clamped at zero.
pub fn x_degree_candidates(a: &Poly, b: &Poly, rhs_degree: i64) -> BTreeSet<usize> {
    let u = a - &b.shift_int(-1);
    let da = a.deg().expect("a nonzero");
    let clamp = |d: i64| d.max(0) as usize;
    let mut out = BTreeSet::new();
    match u.deg() {
        Some(du) if du >= da => {
            out.insert(clamp(rhs_degree - du));
        }
        du => {
            out.insert(clamp(rhs_degree - da + 1));
            if du == Some(da - 1) {
                if let Some(n0) = nonneg_integer(&(-u.lc() / a.lc())) {
                    out.insert(n0);
                }
            }
        }
    }
    out
}

fn nonneg_integer(r: &Rational) -> Option<usize> {
    if r.is_integer() && !r.is_negative() {
        r.to_integer().to_usize()
    } else {
        None
    }
}

/// One linear system over the coefficients of `x` (low to high) followed by
/// `a_0..a_m`:
/// `a(k) x(k+1) - b(k-1) x(k) - weight(k) (a_0 + ... + a_m k^m) = fixed(k)`.
fn build_and_solve(
    a: &Poly,
    b: &Poly,
    fixed: &Poly,
    weight: &Poly,
    m: usize,
) -> Option<super::linsolve::AffineSolution> {
    let rhs_degree = [fixed.deg(), weight.deg().map(|d| d + m as i64)]
        .into_iter()
        .flatten()
        .max()
        .unwrap_or(0);
    let dx = *x_degree_candidates(a, b, rhs_degree).iter().max().unwrap();
    let b_prev = b.shift_int(-1);
    let mut columns: Vec<Poly> = Vec::with_capacity(dx + m + 2);
    let k = Poly::k();
    let k1 = Poly::from_i64(&[1, 1]);
    let (mut kj, mut k1j) = (Poly::one(), Poly::one());
    for _ in 0..=dx {
        columns.push(&(a * &k1j) - &(&b_prev * &kj));
        kj = &kj * &k;
        k1j = &k1j * &k1;
    }
    let mut ki = Poly::one();
    for _ in 0..=m {
        columns.push(-(weight * &ki));
        ki = &ki * &k;
    }
    let nrows = columns
        .iter()
        .chain(std::iter::once(fixed))
        .filter_map(Poly::degree)
        .max()
        .map_or(0, |d| d + 1);
    let rows = (0..nrows)
        .map(|i| columns.iter().map(|c| c.coeff(i)).collect())
        .collect();
    let rhs = (0..nrows).map(|i| fixed.coeff(i)).collect();
    solve_linear(rows, rhs, columns.len())
}

fn split(v: &[Rational], x_len: usize) -> ParamSolution {
    ParamSolution {
        x: Poly::new(v[..x_len].to_vec()),
        unknowns: v[x_len..].to_vec(),
    }
}

/// Solves `A(k) x(k+1) - B(k-1) x(k) = fixed(k) + weight(k) (a_0 + ... + a_m k^m)`
/// for a polynomial `x` and scalars `a_i`.
///
/// Inhomogeneous case: the reduced-row-echelon solution with all free
/// variables zero. Homogeneous case (`fixed = 0`): the first free variable,
/// in column order, whose kernel vector has a nonzero `a`-block is set to one;
/// `None` when no nonzero `a`-block exists.
pub fn solve_parametrized(
    a: &Poly,
    b: &Poly,
    fixed: &Poly,
    weight: &Poly,
    m: usize,
) -> Option<ParamSolution> {
    assert!(!a.is_zero() && !b.is_zero(), "A and B must be nonzero");
    let sol = build_and_solve(a, b, fixed, weight, m)?;
    let x_len = sol.particular.len() - (m + 1);
    if !fixed.is_zero() {
        return Some(split(&sol.particular, x_len));
    }
    sol.kernel
        .iter()
        .find(|v| v[x_len..].iter().any(|c| !c.is_zero()))
        .map(|v| split(v, x_len))
}

/// Decides summability for a Gosper representation: `Some` with the
/// certificate `R = b(k-1) x(k) / c(k)` when the Gosper equation has a
/// polynomial solution, `None` otherwise.
pub fn solve_gosper(rep: &GosperRep) -> Option<Certificate> {
    let sol = build_and_solve(rep.a(), rep.b(), rep.c(), &Poly::zero(), 0)?;
    let x_len = sol.particular.len() - 1;
    let x = Poly::new(sol.particular[..x_len].to_vec());
    let multiplier = RatFunc::new(&rep.b().shift_int(-1) * &x, rep.c().clone()).expect("c nonzero");
    Some(Certificate { multiplier, x })
}

/// Representation followed by [`solve_gosper`].
pub fn decide_summable(ratio: &RatFunc) -> Result<Option<Certificate>, GosperError> {
    Ok(solve_gosper(&gosper_representation(ratio)?))
}
