//! The `hypersum` subcommands. Reports go to a string so they can be tested
//! without spawning a process.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use hypersum_core::algebra::{format_rational, Poly, Rational};
use hypersum_core::bounds::{degree_report, minimal_multiplier, BoundReport};
use hypersum_core::forge::{
    derive_family, forge_identity, BaseIdentity, ConstantExpr, ForgeError, ForgedIdentity,
};
use hypersum_core::gosper::{gosper_representation, solve_gosper, GosperRep};
use hypersum_core::verify::{
    check_telescoping, congruence_check, numeric_verify, PrecisionContext, VerifyError,
};
use num_traits::ToPrimitive;
use serde_json::{json, Value};

use crate::catalog::{
    kernel_spec, Catalog, CatalogEntry, CongruenceSummary, NumericSummary, Verification,
};
use crate::dsl::{parse_term, TermSpec};
use crate::expr::{parse_poly, parse_ratfunc};
use crate::target::{parse_target, render_target};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

const GRAMMAR: &str = "\
term grammar:
  expr   := factor (('*' | '/') factor)*
  factor := atom ['^' int]
  atom   := binom(lin, lin) | rising(rat) | fact(lin) | (rat)^k | int^k
          | polynomial in k | int | '(' expr ')'
  lin    := int*k + rat, e.g. 2k, 2k+1, k-1/2
example: \"(4k+1) * binom(2k,k)^3 / (-64)^k\"
";

#[derive(Parser)]
#[command(
    name = "hypersum",
    version,
    about = "Gosper summability and series identities"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Args)]
struct TermArgs {
    /// Hypergeometric term, e.g. "binom(2k,k)^3/(-64)^k".
    #[arg(allow_hyphen_values = true)]
    term: String,
    /// First summation index.
    #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
    start: i64,
    /// Machine-readable output.
    #[arg(long)]
    json: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Gosper representation (a, b, c) of the term ratio.
    Repr(TermArgs),
    /// Degree bounds for the Gosper equation.
    Bounds(TermArgs),
    /// Decide Gosper summability and print the certificate.
    Summable(TermArgs),
    /// Derive identities from a convergent series with known sum.
    Forge {
        #[command(flatten)]
        t: TermArgs,
        /// Sum of the series over {1, 1/pi, pi^2}, e.g. "2/pi".
        #[arg(long, allow_hyphen_values = true)]
        sum: String,
        /// Largest total degree of a denominator candidate.
        #[arg(long, default_value_t = 3)]
        maxdeg: usize,
        /// Largest shift applied to factors of a and b.
        #[arg(long, default_value_t = 0)]
        max_shift: usize,
        /// Forge a single identity for this denominator.
        #[arg(long, allow_hyphen_values = true)]
        q: Option<String>,
        /// Last index of the numeric partial sum.
        #[arg(long, default_value_t = 200)]
        n: i64,
        /// Decimal digits for the right-hand side.
        #[arg(long, default_value_t = 30)]
        digits: u32,
        /// Write the verified identities to this catalog.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Re-check every entry of a catalog.
    Verify {
        catalog: PathBuf,
        #[arg(long, default_value_t = 200)]
        n: i64,
        #[arg(long, default_value_t = 30)]
        digits: u32,
        #[arg(long)]
        json: bool,
    },
    /// Check a truncated-sum congruence over a range of primes.
    Congruence {
        #[command(flatten)]
        t: TermArgs,
        /// Rational function multiplying the term.
        #[arg(long, default_value = "1", allow_hyphen_values = true)]
        multiplier: String,
        /// Right-hand side in p, e.g. "p*L" with L = (-1/p).
        #[arg(long, allow_hyphen_values = true)]
        target: String,
        /// Inclusive prime range a..b.
        #[arg(long, default_value = "5..97")]
        primes: String,
        /// Congruence modulo p^power.
        #[arg(long, default_value_t = 3)]
        power: i64,
    },
}

struct Usage(String);

impl<E: std::fmt::Display> From<E> for Usage {
    fn from(e: E) -> Self {
        Usage(e.to_string())
    }
}

struct Report {
    ok: bool,
    text: String,
    json: Value,
}

/// Runs one invocation and returns the exit status with everything that
/// would be printed.
pub fn run<I, T>(args: I) -> (i32, String)
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            return (code, e.render().to_string());
        }
    };
    let json = match &cli.cmd {
        Command::Repr(t) | Command::Bounds(t) | Command::Summable(t) => t.json,
        Command::Forge { t, .. } | Command::Congruence { t, .. } => t.json,
        Command::Verify { json, .. } => *json,
    };
    match dispatch(cli.cmd) {
        Ok(r) => {
            let code = if r.ok { EXIT_OK } else { EXIT_FAILED };
            let out = if json {
                serde_json::to_string_pretty(&r.json).expect("report serializes") + "\n"
            } else {
                r.text
            };
            (code, out)
        }
        Err(Usage(msg)) => (EXIT_USAGE, format!("error: {msg}\n\n{GRAMMAR}")),
    }
}

fn dispatch(cmd: Command) -> Result<Report, Usage> {
    match cmd {
        Command::Repr(t) => repr(&t),
        Command::Bounds(t) => bounds(&t),
        Command::Summable(t) => summable(&t),
        Command::Forge {
            t,
            sum,
            maxdeg,
            max_shift,
            q,
            n,
            digits,
            out,
        } => forge(&t, &sum, maxdeg, max_shift, q.as_deref(), n, digits, out),
        Command::Verify {
            catalog, n, digits, ..
        } => verify(&catalog, n, digits),
        Command::Congruence {
            t,
            multiplier,
            target,
            primes,
            power,
        } => congruence(&t, &multiplier, &target, &primes, power),
    }
}

fn term_rep(t: &TermArgs) -> Result<(TermSpec, GosperRep), Usage> {
    let spec = parse_term(&t.term, t.start)?;
    let rep = gosper_representation(&spec.ratio())?;
    Ok((spec, rep))
}

fn repr(t: &TermArgs) -> Result<Report, Usage> {
    let (spec, rep) = term_rep(t)?;
    let text = format!(
        "term: {spec}\nratio: {}\na: {}\nb: {}\nc: {}\n",
        spec.ratio(),
        rep.a(),
        rep.b(),
        rep.c()
    );
    let json = json!({
        "term": spec.to_string(),
        "ratio": spec.ratio().to_string(),
        "a": rep.a().to_string(),
        "b": rep.b().to_string(),
        "c": rep.c().to_string(),
    });
    Ok(Report {
        ok: true,
        text,
        json,
    })
}

fn opt(v: Option<i64>) -> String {
    v.map_or("none".into(), |v| v.to_string())
}

fn bound_json(r: &BoundReport) -> Value {
    json!({
        "u": r.u.to_string(),
        "d": r.d,
        "degenerated": r.degenerated,
        "shift_free": r.shift_free,
        "upper_b": r.upper_b,
        "shift_free_bound": r.shift_free_bound,
        "lower_bound": r.lower_bound,
        "lower_bound_applicable": r.lower_bound_applicable,
    })
}

fn bounds(t: &TermArgs) -> Result<Report, Usage> {
    let (_, rep) = term_rep(t)?;
    let r = degree_report(&rep);
    let minimal = minimal_multiplier(&rep);
    let mut text = String::new();
    writeln!(text, "u: {}", r.u).unwrap();
    writeln!(text, "d: {}", r.d).unwrap();
    writeln!(text, "degenerated: {}", r.degenerated).unwrap();
    writeln!(text, "shift_free: {}", r.shift_free).unwrap();
    writeln!(text, "B: {}", r.upper_b).unwrap();
    writeln!(text, "shift_free_bound: {}", opt(r.shift_free_bound)).unwrap();
    writeln!(text, "lower_bound: {}", opt(r.lower_bound)).unwrap();
    writeln!(text, "lower_bound_applicable: {}", r.lower_bound_applicable).unwrap();
    writeln!(
        text,
        "minimal_multiplier: {}",
        minimal.as_ref().map_or("none".into(), Poly::to_string)
    )
    .unwrap();
    let mut json = bound_json(&r);
    json["minimal_multiplier"] = json!(minimal.map(|p| p.to_string()));
    Ok(Report {
        ok: true,
        text,
        json,
    })
}

fn summable(t: &TermArgs) -> Result<Report, Usage> {
    let (_, rep) = term_rep(t)?;
    let cert = solve_gosper(&rep);
    let (text, json) = match &cert {
        Some(c) => (
            format!("summable: yes\nx: {}\ncertificate: {}\n", c.x, c.multiplier),
            json!({"summable": true, "x": c.x.to_string(), "certificate": c.multiplier.to_string()}),
        ),
        None => ("summable: no\n".into(), json!({"summable": false})),
    };
    Ok(Report {
        ok: true,
        text,
        json,
    })
}

fn multiplier_text(id: &ForgedIdentity) -> String {
    let (scale, num, den) = id.multiplier_parts();
    let mut s = if scale == Rational::from_integer(1.into()) {
        String::new()
    } else {
        format!("{}*", format_rational(&scale))
    };
    write!(s, "({num})").unwrap();
    if den != Poly::one() {
        write!(s, "/({den})").unwrap();
    }
    s
}

/// Scientific notation with four significant digits.
pub fn sci(r: &Rational) -> String {
    format!("{:.3e}", r.to_f64().unwrap_or(f64::INFINITY))
}

fn check_identity(
    id: &ForgedIdentity,
    n: i64,
    ctx: &PrecisionContext,
) -> (bool, Option<NumericSummary>) {
    let telescoping = check_telescoping(id);
    let numeric = numeric_verify(id, n.max(id.start), ctx)
        .ok()
        .map(|r| NumericSummary {
            n: r.n,
            digits: ctx.digits,
            pass: r.pass,
            abs_error: sci(&r.abs_error),
        });
    (telescoping, numeric)
}

fn identity_json(id: &ForgedIdentity, v: &Verification, latex: &str) -> Value {
    json!({
        "q": id.q.to_string(),
        "m": id.m,
        "multiplier": id.multiplier.to_string(),
        "start": id.start,
        "rhs": id.rhs.to_string(),
        "base_coeff": format_rational(&id.base_coeff),
        "certificate": id.certificate.to_string(),
        "faster_convergence": id.faster_convergence,
        "latex": latex,
        "telescoping": v.telescoping,
        "numeric": v.numeric.as_ref().map(|n| json!({
            "n": n.n, "digits": n.digits, "pass": n.pass, "abs_error": n.abs_error,
        })),
    })
}

#[allow(clippy::too_many_arguments)]
fn forge(
    t: &TermArgs,
    sum: &str,
    maxdeg: usize,
    max_shift: usize,
    q: Option<&str>,
    n: i64,
    digits: u32,
    out: Option<PathBuf>,
) -> Result<Report, Usage> {
    let spec = parse_term(&t.term, t.start)?;
    let sum: ConstantExpr = sum.parse()?;
    let base = BaseIdentity {
        term: spec.to_term()?,
        sum: sum.clone(),
    };
    let ids = match q {
        Some(q) => match forge_identity(&base, &parse_poly(q)?, None) {
            Ok(id) => vec![id],
            Err(
                e @ (ForgeError::NoIdentity | ForgeError::UndeterminedLimit | ForgeError::Unsound),
            ) => {
                return Ok(Report {
                    ok: false,
                    text: format!("no identity: {e}\n"),
                    json: json!({"base": spec.to_string(), "error": e.to_string(), "identities": []}),
                })
            }
            Err(e) => return Err(e.into()),
        },
        None => derive_family(&base, maxdeg, max_shift)?,
    };
    let ctx = PrecisionContext::new(digits);
    let mut entries = vec![CatalogEntry::base("base", spec.clone(), sum.clone())];
    let mut text = format!("base: {spec} = {sum}\nidentities: {}\n", ids.len());
    let mut rows = Vec::new();
    let mut all_ok = true;
    for (i, id) in ids.into_iter().enumerate() {
        let (telescoping, numeric) = check_identity(&id, n, &ctx);
        let ok = telescoping && numeric.as_ref().is_some_and(|r| r.pass);
        all_ok &= ok;
        let v = Verification {
            telescoping,
            numeric,
            congruences: Vec::new(),
        };
        let entry = CatalogEntry::forged(
            format!("identity-{}", i + 1),
            spec.clone(),
            sum.clone(),
            id,
            v,
        );
        let id = entry.identity.as_ref().unwrap();
        writeln!(
            text,
            "\n[{}] sum_{{k>={}}} {} * {} = {}",
            entry.id,
            id.start,
            multiplier_text(id),
            kernel_spec(&entry.base, &id.c),
            id.rhs
        )
        .unwrap();
        writeln!(
            text,
            "  q: {}  m: {}  faster: {}",
            id.q, id.m, id.faster_convergence
        )
        .unwrap();
        writeln!(text, "  certificate: {}", id.certificate).unwrap();
        let num = entry.verification.numeric.as_ref();
        writeln!(
            text,
            "  telescoping: {}  numeric: {}",
            if telescoping { "pass" } else { "FAIL" },
            num.map_or("FAIL (no tail bound)".into(), |r| format!(
                "{} (N={}, error {})",
                if r.pass { "pass" } else { "FAIL" },
                r.n,
                r.abs_error
            ))
        )
        .unwrap();
        writeln!(text, "  latex: {}", entry.latex).unwrap();
        rows.push(identity_json(id, &entry.verification, &entry.latex));
        if ok {
            entries.push(entry);
        }
    }
    if let Some(path) = out {
        Catalog { entries }.save(&path)?;
        writeln!(text, "\nwrote {}", path.display()).unwrap();
    }
    let json = json!({
        "base": spec.to_string(),
        "start": spec.start,
        "sum": sum.to_string(),
        "identities": rows,
        "all_verified": all_ok,
    });
    Ok(Report {
        ok: all_ok,
        text,
        json,
    })
}

fn verify(path: &std::path::Path, n: i64, digits: u32) -> Result<Report, Usage> {
    let catalog = Catalog::load(path)?;
    let ctx = PrecisionContext::new(digits);
    let mut text = String::new();
    let mut rows = Vec::new();
    let mut all_ok = true;
    for e in &catalog.entries {
        let Some(id) = &e.identity else {
            writeln!(text, "{}: base series, nothing to check", e.id).unwrap();
            rows.push(json!({"id": e.id, "base": true}));
            continue;
        };
        let (telescoping, numeric) = check_identity(id, n, &ctx);
        let numeric_ok = numeric.as_ref().is_some_and(|r| r.pass);
        let latex_ok = crate::catalog::emit_latex(e) == e.latex;
        let ok = telescoping && numeric_ok && latex_ok;
        all_ok &= ok;
        let status = |b: bool| if b { "pass" } else { "FAIL" };
        writeln!(
            text,
            "{}: telescoping {}, numeric {}, latex {}",
            e.id,
            status(telescoping),
            numeric.as_ref().map_or("FAIL".into(), |r| format!(
                "{} ({})",
                status(r.pass),
                r.abs_error
            )),
            status(latex_ok)
        )
        .unwrap();
        rows.push(json!({
            "id": e.id,
            "telescoping": telescoping,
            "numeric_pass": numeric_ok,
            "numeric_error": numeric.map(|r| r.abs_error),
            "latex": latex_ok,
        }));
    }
    writeln!(
        text,
        "{} entries, {}",
        catalog.entries.len(),
        if all_ok { "all verified" } else { "FAILURES" }
    )
    .unwrap();
    Ok(Report {
        ok: all_ok,
        text,
        json: json!({"entries": rows, "all_verified": all_ok}),
    })
}

/// Primes in the inclusive range written `a..b`.
pub fn parse_prime_range(s: &str) -> Result<Vec<u64>, String> {
    let (a, b) = s
        .split_once("..")
        .ok_or_else(|| format!("prime range `{s}` is not of the form a..b"))?;
    let parse = |x: &str| {
        x.trim()
            .parse::<u64>()
            .map_err(|_| format!("bad bound `{x}` in prime range"))
    };
    let (a, b) = (parse(a)?, parse(b)?);
    Ok((a..=b).filter(|&n| is_prime(n)).collect())
}

fn is_prime(n: u64) -> bool {
    n >= 2
        && (2..)
            .take_while(|d| d * d <= n)
            .all(|d| !n.is_multiple_of(d))
}

fn congruence(
    t: &TermArgs,
    multiplier: &str,
    target: &str,
    primes: &str,
    power: i64,
) -> Result<Report, Usage> {
    let spec = parse_term(&t.term, t.start)?;
    let term = spec.to_term()?;
    let mult = parse_ratfunc(multiplier)?;
    let tgt = parse_target(target)?;
    let primes = parse_prime_range(primes)?;
    if primes.is_empty() {
        return Err(Usage("the prime range contains no primes".into()));
    }
    let mut text = format!(
        "sum_{{k={}}}^{{(p-1)/2}} ({}) * {} = {} (mod p^{})\n",
        spec.start,
        mult,
        spec,
        render_target(&tgt),
        power
    );
    let mut rows = Vec::new();
    let mut failed = Vec::new();
    for &p in &primes {
        let (pass, note) = match congruence_check(&term, &mult, p, power, &tgt) {
            Ok(b) => (b, None),
            Err(VerifyError::PrimeInDenominator { k, .. }) => {
                (false, Some(format!("p divides a denominator at k = {k}")))
            }
            Err(e) => (false, Some(e.to_string())),
        };
        if !pass {
            failed.push(p);
            writeln!(
                text,
                "p = {p}: FAIL{}",
                note.as_ref().map_or(String::new(), |n| format!(" ({n})"))
            )
            .unwrap();
        }
        rows.push(json!({"p": p, "pass": pass, "note": note}));
    }
    let ok = failed.is_empty();
    writeln!(
        text,
        "{} of {} primes in {}..{} pass",
        primes.len() - failed.len(),
        primes.len(),
        primes[0],
        primes[primes.len() - 1]
    )
    .unwrap();
    let summary = CongruenceSummary {
        multiplier: mult.to_string(),
        target: render_target(&tgt),
        primes: (primes[0], primes[primes.len() - 1]),
        power,
        pass: ok,
    };
    let json = json!({
        "term": spec.to_string(),
        "multiplier": summary.multiplier,
        "target": summary.target,
        "primes": [summary.primes.0, summary.primes.1],
        "power": power,
        "results": rows,
        "pass": ok,
    });
    Ok(Report { ok, text, json })
}
