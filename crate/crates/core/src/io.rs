//! Canonical text forms: rationals as `"num/den"`, JSON documents with a
//! `"schema": 1` field, CSV tables.

use num::{BigInt, BigRational, One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use serde_json::{json, Value};

use crate::catalog::{Catalog, ClassId};
use crate::error::{HallError, Result};

pub const SCHEMA_VERSION: u32 = 1;

/// Always `num/den` with `den > 0` and `gcd = 1`, including integers (`3/1`).
pub fn format_rational(q: &BigRational) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

pub fn parse_rational(s: &str) -> Result<BigRational> {
    let bad = || HallError::InvalidLf(format!("not a rational: {s:?}"));
    let (n, d) = match s.trim().split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s.trim(), "1"),
    };
    let n: BigInt = n.parse().map_err(|_| bad())?;
    let d: BigInt = d.parse().map_err(|_| bad())?;
    if d.is_zero() {
        return Err(bad());
    }
    Ok(BigRational::new(n, d))
}

pub fn rational_from_int(n: u64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// `base^exp` for a possibly negative exponent.
pub fn rational_pow(base: u64, exp: i64) -> BigRational {
    let b = rational_from_int(base);
    let mut out = BigRational::one();
    for _ in 0..exp.unsigned_abs() {
        out *= &b;
    }
    if exp < 0 {
        out.recip()
    } else {
        out
    }
}

pub fn abs_diff(a: &BigRational, b: &BigRational) -> BigRational {
    (a - b).abs()
}

/// Serde adapter for a single rational stored as a string.
pub mod rational_string {
    use super::*;

    pub fn serialize<S: Serializer>(q: &BigRational, s: S) -> std::result::Result<S::Ok, S::Error> {
        format_rational(q).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<BigRational, D::Error> {
        let text = String::deserialize(d)?;
        parse_rational(&text).map_err(serde::de::Error::custom)
    }
}

/// Adds the schema version to a payload object. Keys serialize sorted.
pub fn with_schema(mut payload: Value) -> Value {
    match payload.as_object_mut() {
        Some(obj) => {
            obj.insert("schema".into(), json!(SCHEMA_VERSION));
            payload
        }
        None => json!({ "schema": SCHEMA_VERSION, "data": payload }),
    }
}

pub fn to_pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json values serialize");
    s.push('\n');
    s
}

/// Catalog export: `{schema, quiver, modulus, bound, classes: [{id, dim_vector, aut_order, indecomposable}]}`.
pub fn catalog_json(cat: &Catalog) -> Result<Value> {
    let classes = cat
        .ids()
        .map(|id| {
            Ok(json!({
                "id": id.0,
                "dim_vector": cat.dims(id)?,
                "aut_order": cat.aut_order(id)?,
                "indecomposable": cat.entry(id)?.indecomposable,
            }))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(with_schema(json!({
        "quiver": serde_json::from_str::<Value>(&cat.quiver().to_json())?,
        "modulus": cat.modulus(),
        "bound": cat.bound(),
        "classes": classes,
    })))
}

pub fn catalog_pretty(cat: &Catalog) -> Result<String> {
    let mut out = format!(
        "catalog: {} classes, p = {}, bound {:?}\n",
        cat.len(),
        cat.modulus(),
        cat.bound()
    );
    for id in cat.ids() {
        let e = cat.entry(id)?;
        out.push_str(&format!(
            "{:>5}  dims {:?}  |Aut| = {}{}\n",
            ClassId::to_string(&id),
            cat.dims(id)?,
            cat.aut_order(id)?,
            if e.indecomposable { "  indecomposable" } else { "" }
        ));
    }
    Ok(out)
}

/// Minimal CSV quoting: fields containing a comma or quote are quoted.
pub fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}
