//! Degree bounds for polynomial multipliers `p` making `p(k) t(k)` Gosper
//! summable, and denominator candidates `q` for rational multipliers `p/q`.
//!
//! For a representation `(a, b, c)` let `u = a - b(k-1)` and
//! `d = max(deg u, deg a - 1)`. The pair is *degenerated* when
//! `deg u = deg a - 1` and `-lc(u)/lc(a)` is a nonnegative integer. A
//! multiplier of degree at most `B` always exists, where `B = d + 1` if the
//! pair is degenerated or `deg u < deg a - 1`, and `B = d` otherwise. When
//! `c = 1` and `deg u = max(deg a, deg b)`, every multiplier has degree at
//! least `max(deg a, deg b)`.

use num_traits::Signed;

use crate::algebra::{atomic_factors, dispersion_set, Poly, ShiftDomain};
use crate::gosper::{solve_parametrized, GosperRep};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundReport {
    pub u: Poly,
    pub d: i64,
    pub degenerated: bool,
    /// `gcd(a(k), b(k+h)) = 1` for every integer `h`, negative ones included.
    pub shift_free: bool,
    pub upper_b: i64,
    /// The sharper bound `d`, available when the pair is shift-free.
    pub shift_free_bound: Option<i64>,
    pub lower_bound: Option<i64>,
    pub lower_bound_applicable: bool,
}

pub fn is_degenerated(a: &Poly, u: &Poly) -> bool {
    let da = a.deg().expect("a nonzero");
    if u.deg() != Some(da - 1) {
        return false;
    }
    let r = -u.lc() / a.lc();
    r.is_integer() && !r.is_negative()
}

fn lower_bound_hypotheses(rep: &GosperRep, u: &Poly) -> Option<i64> {
    let top = rep.a().deg().max(rep.b().deg())?;
    (rep.c().is_constant() && u.deg() == Some(top)).then_some(top)
}

pub fn degree_report(rep: &GosperRep) -> BoundReport {
    let a = rep.a();
    let u = a - &rep.b().shift_int(-1);
    let da = a.deg().expect("a nonzero");
    let d = u.deg().map_or(da - 1, |du| du.max(da - 1));
    let degenerated = is_degenerated(a, &u);
    let upper_b = if degenerated || u.deg() < Some(da - 1) {
        d + 1
    } else {
        d
    };
    let shift_free = dispersion_set(a, rep.b(), ShiftDomain::All).is_empty();
    let lower_bound = lower_bound_hypotheses(rep, &u);
    BoundReport {
        u,
        d,
        degenerated,
        shift_free,
        upper_b,
        shift_free_bound: shift_free.then_some(d),
        lower_bound,
        lower_bound_applicable: lower_bound.is_some(),
    }
}

/// A nonzero polynomial `p` of least degree with `p(k) t(k)` summable,
/// normalized to coprime integer coefficients with positive leading
/// coefficient. Searches degrees `0..=B`.
pub fn minimal_multiplier(rep: &GosperRep) -> Option<Poly> {
    let report = degree_report(rep);
    (0..=report.upper_b.max(0) as usize).find_map(|m| {
        solve_parametrized(rep.a(), rep.b(), &Poly::zero(), rep.c(), m)
            .map(|s| s.p().primitive_part())
    })
}

/// Test oracle for the lower bound: `false` only if the hypotheses
/// (`c = 1`, `deg u = max(deg a, deg b)`) hold and `deg p` is below
/// `max(deg a, deg b)`. Vacuously `true` otherwise.
pub fn lower_bound_check(rep: &GosperRep, p: &Poly) -> bool {
    let u = rep.a() - &rep.b().shift_int(-1);
    match lower_bound_hypotheses(rep, &u) {
        Some(bound) => p.deg().is_some_and(|dp| dp >= bound),
        None => true,
    }
}

/// Where a denominator factor was found.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FactorOrigin {
    /// A factor of `a(k-1-h)`.
    AShift,
    /// A factor of `b(k+h)`.
    BShift,
    /// A factor of `c(k)`.
    C,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FactorSource {
    pub origin: FactorOrigin,
    pub shift: i64,
    pub factor: Poly,
    pub multiplicity: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DenominatorCandidate {
    pub q: Poly,
    pub provenance: Vec<FactorSource>,
}

struct Atom {
    factor: Poly,
    cap: usize,
    origin: FactorOrigin,
    shift: i64,
}

/// Products of atomic factors of `a(k-1-h)` and `b(k+h)` for
/// `0 <= h <= max_shift`, and of `c(k)`, each atom repeated at most one more
/// time than its largest multiplicity in a source, of total degree between 1
/// and `max_total_degree`. Ordered by degree, then coefficients.
///
/// Factors are integer primitive with positive leading coefficient, so
/// e.g. `(2k-1)^2` rather than `(k-1/2)^2`.
pub fn candidate_denominators(
    rep: &GosperRep,
    max_total_degree: usize,
    max_shift: usize,
) -> Vec<DenominatorCandidate> {
    let mut sources = Vec::new();
    for h in 0..=max_shift as i64 {
        sources.push((FactorOrigin::AShift, h, rep.a().shift_int(-1 - h)));
        sources.push((FactorOrigin::BShift, h, rep.b().shift_int(h)));
    }
    sources.push((FactorOrigin::C, 0, rep.c().clone()));

    let mut atoms: Vec<Atom> = Vec::new();
    for (origin, shift, poly) in sources {
        if poly.is_constant() {
            continue;
        }
        for (f, mult) in atomic_factors(&poly) {
            let factor = f.primitive_part();
            match atoms.iter_mut().find(|a| a.factor == factor) {
                Some(a) => a.cap = a.cap.max(mult + 1),
                None => atoms.push(Atom {
                    factor,
                    cap: mult + 1,
                    origin,
                    shift,
                }),
            }
        }
    }
    atoms.sort_by(|x, y| x.factor.canonical_cmp(&y.factor));

    let mut out: Vec<DenominatorCandidate> = Vec::new();
    let mut exps = vec![0usize; atoms.len()];
    enumerate(&atoms, 0, 0, max_total_degree, &mut exps, &mut out);
    out.sort_by(|x, y| x.q.canonical_cmp(&y.q));
    out.dedup_by(|x, y| x.q == y.q);
    out
}

fn enumerate(
    atoms: &[Atom],
    i: usize,
    degree: usize,
    max_degree: usize,
    exps: &mut Vec<usize>,
    out: &mut Vec<DenominatorCandidate>,
) {
    if i == atoms.len() {
        if degree == 0 {
            return;
        }
        let mut q = Poly::one();
        let mut provenance = Vec::new();
        for (atom, &e) in atoms.iter().zip(exps.iter()) {
            if e == 0 {
                continue;
            }
            q = &q * &atom.factor.pow(e as u32);
            provenance.push(FactorSource {
                origin: atom.origin,
                shift: atom.shift,
                factor: atom.factor.clone(),
                multiplicity: e,
            });
        }
        out.push(DenominatorCandidate { q, provenance });
        return;
    }
    let df = atoms[i].factor.degree().unwrap();
    for e in 0..=atoms[i].cap {
        if degree + e * df > max_degree {
            break;
        }
        exps[i] = e;
        enumerate(atoms, i + 1, degree + e * df, max_degree, exps, out);
    }
    exps[i] = 0;
}

/// Which hypotheses of the divisibility theorem hold for `q` against a
/// representation. When all three hold and `p(k) t(k) / q(k)` is summable,
/// `q` divides `p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DenConditions {
    /// `gcd(q(k), a(k-1-h)) = gcd(q(k), b(k+h)) = 1` for all `h >= 0`.
    pub shift_coprime_ab: bool,
    /// `gcd(q(k), c(k)) = 1`.
    pub coprime_c: bool,
    /// `gcd(q(k), q(k+1+h)) = 1` for all `h >= 0`.
    pub self_shift_coprime: bool,
}

impl DenConditions {
    pub fn all(&self) -> bool {
        self.shift_coprime_ab && self.coprime_c && self.self_shift_coprime
    }
}

pub fn theorem_den_conditions(q: &Poly, rep: &GosperRep) -> DenConditions {
    assert!(!q.is_zero(), "q must be nonzero");
    let with_a = dispersion_set(q, rep.a(), ShiftDomain::All)
        .into_iter()
        .all(|h| h >= 0);
    let with_b = dispersion_set(q, rep.b(), ShiftDomain::NonNegative).is_empty();
    let self_shift = dispersion_set(q, q, ShiftDomain::All)
        .into_iter()
        .all(|h| h <= 0);
    DenConditions {
        shift_coprime_ab: with_a && with_b,
        coprime_c: q.is_coprime(rep.c()),
        self_shift_coprime: self_shift,
    }
}
