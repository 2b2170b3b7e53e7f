//! JSON data files: series extensions and residual polynomials.
//!
//! Series file (one per series):
//! `{ "series": "A"|"B", "entries": [ { "k": int, "poly_r": [[exp, "p/q"], ...] } ] }`
//!
//! Residual file:
//! `{ "residuals": [ { "i": int, "terms": [ { "coef": "p/q" | [[ellPower, "p/q"], ...],
//!    "offsets": [int, ...] } ] } ] }`
//!
//! Both loaders merge into the built-ins behind a consistency gate: entries
//! overlapping the built-in range must match them exactly.

use num_bigint::BigInt;
use num_traits::Zero;
use serde_json::Value;
use thiserror::Error;

use crate::hilb::{builtin_tables, SeriesDataTable, SeriesName};
use crate::multipoint::{builtin_residuals, ResidualPoly, ResidualRegistry, ResidualTerm};
use crate::symbol::Symbol;
use crate::{Poly, Rat};

/// Largest singularity index for which the residual theory is established.
pub const MAX_RESIDUAL_INDEX: usize = 6;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum DataError {
    #[error("malformed data: {0}")]
    Malformed(String),
    #[error("data conflicts with built-in values: {0}")]
    Conflict(String),
    #[error("homogeneity violation: {0}")]
    Homogeneity(String),
    #[error(
        "residual index {0} out of range: the identity between k-fold \
             residuals and Thom polynomials is only established for i <= 6"
    )]
    IndexOutOfRange(usize),
}

/// Parse `p/q` or `p` with arbitrary-precision integers; `q` must be
/// nonzero.
pub fn parse_rational(s: &str) -> Result<Rat, DataError> {
    let bad = || DataError::Malformed(format!("invalid rational '{}'", s));
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s.trim(), "1"),
    };
    let n: BigInt = num.parse().map_err(|_| bad())?;
    let d: BigInt = den.parse().map_err(|_| bad())?;
    if d.is_zero() {
        return Err(bad());
    }
    Ok(Rat::new(n, d))
}

fn as_object<'v>(
    v: &'v Value,
    what: &str,
) -> Result<&'v serde_json::Map<String, Value>, DataError> {
    v.as_object()
        .ok_or_else(|| DataError::Malformed(format!("{} must be an object", what)))
}

fn as_array<'v>(v: &'v Value, what: &str) -> Result<&'v Vec<Value>, DataError> {
    v.as_array()
        .ok_or_else(|| DataError::Malformed(format!("{} must be an array", what)))
}

fn as_u64(v: &Value, what: &str) -> Result<u64, DataError> {
    v.as_u64()
        .ok_or_else(|| DataError::Malformed(format!("{} must be a non-negative integer", what)))
}

/// Parse a polynomial in one symbol given as `[[exp, "p/q"], ...]`.
fn parse_poly_in(sym: Symbol, v: &Value, what: &str) -> Result<Poly, DataError> {
    let arr = as_array(v, what)?;
    let mut p = Poly::zero();
    for pair in arr {
        let pv = as_array(pair, "polynomial term")?;
        if pv.len() != 2 {
            return Err(DataError::Malformed(format!(
                "{}: term must be [exponent, coefficient]",
                what
            )));
        }
        let e = as_u64(&pv[0], "exponent")? as u32;
        let c = parse_rational(
            pv[1]
                .as_str()
                .ok_or_else(|| DataError::Malformed("coefficient must be a string".into()))?,
        )?;
        p = p + Poly::var(sym).pow(e).scale(&c);
    }
    Ok(p)
}

/// Parse a single series file and merge it over the built-in table.
///
/// Entries with `k <= 7` (and the forced `k = 0, 1` values) must agree with
/// the built-ins exactly.
pub fn load_series_file(content: &str) -> Result<SeriesDataTable, DataError> {
    let v: Value = serde_json::from_str(content)
        .map_err(|e| DataError::Malformed(format!("invalid JSON: {}", e)))?;
    let obj = as_object(&v, "series file")?;
    let name = match obj.get("series").and_then(|s| s.as_str()) {
        Some("A") => SeriesName::A,
        Some("B") => SeriesName::B,
        _ => {
            return Err(DataError::Malformed(
                "\"series\" must be \"A\" or \"B\"".into(),
            ))
        }
    };
    let mut table = SeriesDataTable::builtin(name);
    let entries = as_array(
        obj.get("entries")
            .ok_or_else(|| DataError::Malformed("missing \"entries\"".into()))?,
        "entries",
    )?;
    for e in entries {
        let eo = as_object(e, "entry")?;
        let k = as_u64(
            eo.get("k")
                .ok_or_else(|| DataError::Malformed("entry missing \"k\"".into()))?,
            "k",
        )? as usize;
        let p = parse_poly_in(
            Symbol::R,
            eo.get("poly_r")
                .ok_or_else(|| DataError::Malformed("entry missing \"poly_r\"".into()))?,
            "poly_r",
        )?;
        match table.entry(k) {
            Some(builtin) if *builtin != p => {
                return Err(DataError::Conflict(format!(
                    "series {} entry k={} does not match the built-in value",
                    name.as_str(),
                    k
                )));
            }
            _ => table.set_entry(k, p),
        }
    }
    Ok(table)
}

/// Load any number of series files over the built-ins; at most one file per
/// series name.
pub fn load_series_files(
    contents: &[String],
) -> Result<(SeriesDataTable, SeriesDataTable), DataError> {
    let (mut a, mut b) = builtin_tables();
    let mut seen_a = false;
    let mut seen_b = false;
    for c in contents {
        let t = load_series_file(c)?;
        match t.name {
            SeriesName::A => {
                if seen_a {
                    return Err(DataError::Conflict("two files supply series A".into()));
                }
                seen_a = true;
                a = t;
            }
            SeriesName::B => {
                if seen_b {
                    return Err(DataError::Conflict("two files supply series B".into()));
                }
                seen_b = true;
                b = t;
            }
        }
    }
    Ok((a, b))
}

/// Parse a residual data file and merge it over the built-in registry.
///
/// Validation: `i <= 6`; each term has exactly `i` offset factors summing
/// to 0; entries with `i <= 2` must equal the built-ins.
pub fn load_residuals_file(content: &str) -> Result<ResidualRegistry, DataError> {
    let v: Value = serde_json::from_str(content)
        .map_err(|e| DataError::Malformed(format!("invalid JSON: {}", e)))?;
    let obj = as_object(&v, "residual file")?;
    let list = as_array(
        obj.get("residuals")
            .ok_or_else(|| DataError::Malformed("missing \"residuals\"".into()))?,
        "residuals",
    )?;
    let builtins = builtin_residuals();
    let mut reg = builtins.clone();
    for entry in list {
        let eo = as_object(entry, "residual entry")?;
        let i = as_u64(
            eo.get("i")
                .ok_or_else(|| DataError::Malformed("entry missing \"i\"".into()))?,
            "i",
        )? as usize;
        if i > MAX_RESIDUAL_INDEX {
            return Err(DataError::IndexOutOfRange(i));
        }
        let terms_v = as_array(
            eo.get("terms")
                .ok_or_else(|| DataError::Malformed("entry missing \"terms\"".into()))?,
            "terms",
        )?;
        let mut terms = Vec::with_capacity(terms_v.len());
        for t in terms_v {
            let to = as_object(t, "term")?;
            let coef = match to.get("coef") {
                Some(Value::String(s)) => Poly::constant(parse_rational(s)?),
                Some(arr @ Value::Array(_)) => parse_poly_in(Symbol::Ell, arr, "coef")?,
                _ => {
                    return Err(DataError::Malformed(
                        "term \"coef\" must be a rational string or an [exp, coeff] list".into(),
                    ))
                }
            };
            let offsets_v = as_array(
                to.get("offsets")
                    .ok_or_else(|| DataError::Malformed("term missing \"offsets\"".into()))?,
                "offsets",
            )?;
            let offsets: Vec<i64> = offsets_v
                .iter()
                .map(|o| {
                    o.as_i64()
                        .ok_or_else(|| DataError::Malformed("offset must be an integer".into()))
                })
                .collect::<Result<_, _>>()?;
            if offsets.len() != i {
                return Err(DataError::Homogeneity(format!(
                    "residual i={}: term has {} Chern factors, expected {}",
                    i,
                    offsets.len(),
                    i
                )));
            }
            let sum: i64 = offsets.iter().sum();
            if sum != 0 {
                return Err(DataError::Homogeneity(format!(
                    "residual i={}: offsets {:?} sum to {}, expected 0",
                    i, offsets, sum
                )));
            }
            terms.push(ResidualTerm { coef, offsets });
        }
        let rp = ResidualPoly { index: i, terms };
        if let Some(builtin) = builtins.get(i) {
            if builtin.normalized() != rp.normalized() {
                return Err(DataError::Conflict(format!(
                    "residual i={} does not match the built-in polynomial",
                    i
                )));
            }
        }
        reg.insert(rp);
    }
    Ok(reg)
}
