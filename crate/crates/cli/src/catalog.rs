//! Identity catalogs as versioned JSON with exact `p/q` strings.

use std::collections::BTreeMap;
use std::path::Path;

use hypersum_core::algebra::{format_rational, parse_rational, Poly, RatFunc, Rational};
use hypersum_core::forge::{prepare_kernel, BaseIdentity, Constant, ConstantExpr, ForgedIdentity};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::dsl::{parse_term, TermSpec};
use crate::latex::sum_latex;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum CatalogError {
    #[error("cannot access catalog: {0}")]
    Io(#[from] std::io::Error),
    #[error("malformed catalog: {0}")]
    Json(#[from] serde_json::Error),
    #[error("catalog schema version {found}, expected {SCHEMA_VERSION}")]
    Schema { found: u32 },
    #[error("entry `{id}`: {msg}")]
    Record { id: String, msg: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NumericSummary {
    pub n: i64,
    pub digits: u32,
    pub pass: bool,
    pub abs_error: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CongruenceSummary {
    pub multiplier: String,
    pub target: String,
    pub primes: (u64, u64),
    pub power: i64,
    pub pass: bool,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verification {
    pub telescoping: bool,
    pub numeric: Option<NumericSummary>,
    #[serde(default)]
    pub congruences: Vec<CongruenceSummary>,
}

/// A known series, or an identity forged from it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CatalogEntry {
    pub id: String,
    pub base: TermSpec,
    pub base_sum: ConstantExpr,
    pub identity: Option<ForgedIdentity>,
    pub latex: String,
    pub verification: Verification,
    /// Set on load when the stored certificate does not verify.
    pub flagged: bool,
}

impl CatalogEntry {
    pub fn base(id: impl Into<String>, base: TermSpec, sum: ConstantExpr) -> Self {
        let mut e = CatalogEntry {
            id: id.into(),
            base,
            base_sum: sum,
            identity: None,
            latex: String::new(),
            verification: Verification::default(),
            flagged: false,
        };
        e.latex = emit_latex(&e);
        e
    }

    pub fn forged(
        id: impl Into<String>,
        base: TermSpec,
        sum: ConstantExpr,
        identity: ForgedIdentity,
        verification: Verification,
    ) -> Self {
        let mut e = CatalogEntry {
            id: id.into(),
            base,
            base_sum: sum,
            identity: Some(identity),
            latex: String::new(),
            verification,
            flagged: false,
        };
        e.latex = emit_latex(&e);
        e
    }
}

/// The term divided by `c`: a matching polynomial factor is removed,
/// otherwise `c` is appended to the denominator.
pub fn kernel_spec(base: &TermSpec, c: &Poly) -> TermSpec {
    use crate::dsl::Factor;
    let mut spec = base.clone();
    if c.is_constant() {
        return spec;
    }
    if let Some(i) = spec
        .factors
        .iter()
        .position(|(f, e)| *e == 1 && matches!(f, Factor::Poly(p) if p == c))
    {
        spec.factors.remove(i);
    } else {
        spec.factors.push((Factor::Poly(c.clone()), -1));
    }
    spec
}

pub fn emit_latex(entry: &CatalogEntry) -> String {
    match &entry.identity {
        Some(id) => sum_latex(
            &id.multiplier,
            &kernel_spec(&entry.base, &id.c),
            id.start,
            &id.rhs,
        ),
        None => sum_latex(
            &RatFunc::one(),
            &entry.base,
            entry.base.start,
            &entry.base_sum,
        ),
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Catalog {
    pub entries: Vec<CatalogEntry>,
}

#[derive(Serialize, Deserialize)]
struct CatalogFile {
    schema_version: u32,
    entries: Vec<EntryRecord>,
}

#[derive(Serialize, Deserialize)]
struct EntryRecord {
    id: String,
    base_term: String,
    base_start: i64,
    base_sum: BTreeMap<String, String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    identity: Option<IdentityRecord>,
    latex: String,
    verification: Verification,
}

#[derive(Serialize, Deserialize)]
struct RatFuncRecord {
    num: Vec<String>,
    den: Vec<String>,
}

#[derive(Serialize, Deserialize)]
struct IdentityRecord {
    q: Vec<String>,
    m: usize,
    c: Vec<String>,
    base_coeff: String,
    multiplier: RatFuncRecord,
    start: i64,
    rhs: BTreeMap<String, String>,
    certificate: RatFuncRecord,
    faster_convergence: bool,
}

fn poly_rec(p: &Poly) -> Vec<String> {
    p.coeffs().iter().map(format_rational).collect()
}

fn ratfunc_rec(r: &RatFunc) -> RatFuncRecord {
    RatFuncRecord {
        num: poly_rec(r.num()),
        den: poly_rec(r.den()),
    }
}

fn const_rec(e: &ConstantExpr) -> BTreeMap<String, String> {
    e.terms()
        .map(|(c, r)| (c.name().to_string(), format_rational(r)))
        .collect()
}

struct Reader<'a> {
    id: &'a str,
}

impl Reader<'_> {
    fn err(&self, msg: impl Into<String>) -> CatalogError {
        CatalogError::Record {
            id: self.id.to_string(),
            msg: msg.into(),
        }
    }

    fn rational(&self, s: &str) -> Result<Rational, CatalogError> {
        parse_rational(s).ok_or_else(|| self.err(format!("bad rational `{s}`")))
    }

    fn poly(&self, v: &[String]) -> Result<Poly, CatalogError> {
        Ok(Poly::new(
            v.iter()
                .map(|s| self.rational(s))
                .collect::<Result<_, _>>()?,
        ))
    }

    fn ratfunc(&self, r: &RatFuncRecord) -> Result<RatFunc, CatalogError> {
        RatFunc::new(self.poly(&r.num)?, self.poly(&r.den)?).map_err(|e| self.err(e.to_string()))
    }

    fn constant(&self, m: &BTreeMap<String, String>) -> Result<ConstantExpr, CatalogError> {
        let mut e = ConstantExpr::zero();
        for (name, v) in m {
            let c = Constant::ALL
                .into_iter()
                .find(|c| c.name() == name)
                .ok_or_else(|| self.err(format!("unknown constant `{name}`")))?;
            e.add_term(c, self.rational(v)?);
        }
        Ok(e)
    }
}

impl Catalog {
    pub fn to_json(&self) -> String {
        let entries = self
            .entries
            .iter()
            .map(|e| EntryRecord {
                id: e.id.clone(),
                base_term: e.base.to_string(),
                base_start: e.base.start,
                base_sum: const_rec(&e.base_sum),
                identity: e.identity.as_ref().map(|id| IdentityRecord {
                    q: poly_rec(&id.q),
                    m: id.m,
                    c: poly_rec(&id.c),
                    base_coeff: format_rational(&id.base_coeff),
                    multiplier: ratfunc_rec(&id.multiplier),
                    start: id.start,
                    rhs: const_rec(&id.rhs),
                    certificate: ratfunc_rec(&id.certificate),
                    faster_convergence: id.faster_convergence,
                }),
                latex: e.latex.clone(),
                verification: e.verification.clone(),
            })
            .collect();
        let file = CatalogFile {
            schema_version: SCHEMA_VERSION,
            entries,
        };
        serde_json::to_string_pretty(&file).expect("catalog serializes") + "\n"
    }

    pub fn from_json(text: &str) -> Result<Catalog, CatalogError> {
        let value: serde_json::Value = serde_json::from_str(text)?;
        let found = value
            .get("schema_version")
            .and_then(|v| v.as_u64())
            .unwrap_or(0) as u32;
        if found != SCHEMA_VERSION {
            return Err(CatalogError::Schema { found });
        }
        let file: CatalogFile = serde_json::from_value(value)?;
        let mut entries = Vec::with_capacity(file.entries.len());
        for rec in file.entries {
            if entries.iter().any(|e: &CatalogEntry| e.id == rec.id) {
                return Err(CatalogError::Record {
                    id: rec.id,
                    msg: "duplicate id".into(),
                });
            }
            entries.push(read_entry(rec)?);
        }
        Ok(Catalog { entries })
    }

    pub fn load(path: &Path) -> Result<Catalog, CatalogError> {
        Catalog::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn save(&self, path: &Path) -> Result<(), CatalogError> {
        std::fs::write(path, self.to_json())?;
        Ok(())
    }
}

fn read_entry(rec: EntryRecord) -> Result<CatalogEntry, CatalogError> {
    let r = Reader { id: &rec.id };
    let base = parse_term(&rec.base_term, rec.base_start).map_err(|e| r.err(e.to_string()))?;
    let base_sum = r.constant(&rec.base_sum)?;
    let mut flagged = false;
    let identity = match &rec.identity {
        None => None,
        Some(idr) => {
            let term = base.to_term().map_err(|e| r.err(e.to_string()))?;
            let label = term.label().to_string();
            let (kernel, _) = prepare_kernel(&BaseIdentity {
                term,
                sum: base_sum.clone(),
            })
            .map_err(|e| r.err(e.to_string()))?;
            let id = ForgedIdentity {
                base_label: label,
                kernel,
                c: r.poly(&idr.c)?,
                base_coeff: r.rational(&idr.base_coeff)?,
                multiplier: r.ratfunc(&idr.multiplier)?,
                start: idr.start,
                rhs: r.constant(&idr.rhs)?,
                certificate: r.ratfunc(&idr.certificate)?,
                faster_convergence: idr.faster_convergence,
                q: r.poly(&idr.q)?,
                m: idr.m,
            };
            flagged = !id.telescopes();
            Some(id)
        }
    };
    Ok(CatalogEntry {
        id: rec.id,
        base,
        base_sum,
        identity,
        latex: rec.latex,
        verification: rec.verification,
        flagged,
    })
}
