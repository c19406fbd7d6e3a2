//! Surface files (JSON, `"schema": 1`).
//!
//! ```json
//! {
//!   "schema": 1,
//!   "name": "Hirzebruch surface F2",
//!   "rank": 2,
//!   "gram": [[0, 1], [1, -2]],
//!   "canonical": [-4, -2],
//!   "curves": [
//!     {"name": "f", "coords": [1, 0], "effective": true},
//!     {"name": "s", "coords": [0, 1], "effective": true}
//!   ],
//!   "ample_reference": [3, 1]
//! }
//! ```
//!
//! Integers may be JSON numbers or decimal strings (for values beyond `i64`);
//! `ample_reference` entries may also be rational strings `"a/b"`.
//! `effective` defaults to `true`.

use std::path::Path;

use num::bigint::BigInt;
use serde_json::{json, Map, Value};

use crate::divisor::DivisorClass;
use crate::error::{Error, Result};
use crate::lattice::GramMatrix;
use crate::rational::{parse_rational, render, Rational};
use crate::surface::{Curve, SurfaceModel};

pub const SCHEMA_VERSION: u64 = 1;

fn invalid(path: impl Into<String>, message: impl Into<String>) -> Error {
    Error::Validation {
        path: path.into(),
        message: message.into(),
    }
}

fn field<'a>(obj: &'a Map<String, Value>, key: &str, path: &str) -> Result<&'a Value> {
    obj.get(key)
        .ok_or_else(|| invalid(join(path, key), "missing field"))
}

fn join(path: &str, key: &str) -> String {
    if path.is_empty() {
        key.to_string()
    } else {
        format!("{path}.{key}")
    }
}

fn as_integer(v: &Value, path: &str) -> Result<BigInt> {
    match v {
        Value::Number(n) => n
            .as_i64()
            .map(BigInt::from)
            .ok_or_else(|| invalid(path, format!("expected an integer, found {n}"))),
        Value::String(s) => s
            .trim()
            .parse()
            .map_err(|_| invalid(path, format!("expected an integer, found \"{s}\""))),
        other => Err(invalid(path, format!("expected an integer, found {other}"))),
    }
}

fn as_rational(v: &Value, path: &str) -> Result<Rational> {
    match v {
        Value::String(s) => parse_rational(s)
            .map_err(|_| invalid(path, format!("expected a rational, found \"{s}\""))),
        other => as_integer(other, path).map(Rational::from_integer),
    }
}

fn as_array<'a>(v: &'a Value, path: &str) -> Result<&'a Vec<Value>> {
    v.as_array()
        .ok_or_else(|| invalid(path, "expected an array"))
}

fn integer_vector(v: &Value, path: &str) -> Result<Vec<BigInt>> {
    as_array(v, path)?
        .iter()
        .enumerate()
        .map(|(i, x)| as_integer(x, &format!("{path}[{i}]")))
        .collect()
}

/// Parses and validates a surface file's text.
pub fn parse_surface_str(text: &str) -> Result<SurfaceModel> {
    let root: Value = serde_json::from_str(text)
        .map_err(|e| Error::Parse(format!("line {}, column {}: {e}", e.line(), e.column())))?;
    let obj = root
        .as_object()
        .ok_or_else(|| invalid("$", "expected a JSON object"))?;
    if let Some(v) = obj.get("schema") {
        if v.as_u64() != Some(SCHEMA_VERSION) {
            return Err(invalid(
                "schema",
                format!("unsupported schema {v}, expected {SCHEMA_VERSION}"),
            ));
        }
    }
    let name = field(obj, "name", "")?
        .as_str()
        .ok_or_else(|| invalid("name", "expected a string"))?
        .to_string();
    let rank = field(obj, "rank", "")?
        .as_u64()
        .ok_or_else(|| invalid("rank", "expected a nonnegative integer"))? as usize;
    let rows = as_array(field(obj, "gram", "")?, "gram")?;
    if rows.len() != rank {
        return Err(invalid(
            "gram",
            format!("expected {rank} rows, found {}", rows.len()),
        ));
    }
    let mut entries = Vec::with_capacity(rank);
    for (i, row) in rows.iter().enumerate() {
        let path = format!("gram[{i}]");
        let row = integer_vector(row, &path)?;
        if row.len() != rank {
            return Err(invalid(
                path,
                format!("expected {rank} entries, found {}", row.len()),
            ));
        }
        entries.push(row);
    }
    let lattice = GramMatrix::new(entries).map_err(|e| invalid("gram", e.to_string()))?;
    let canonical = integer_vector(field(obj, "canonical", "")?, "canonical")?;
    let mut curves = Vec::new();
    for (i, c) in as_array(field(obj, "curves", "")?, "curves")?
        .iter()
        .enumerate()
    {
        let path = format!("curves[{i}]");
        let co = c
            .as_object()
            .ok_or_else(|| invalid(&path, "expected an object"))?;
        let cname = field(co, "name", &path)?
            .as_str()
            .ok_or_else(|| invalid(join(&path, "name"), "expected a string"))?
            .to_string();
        let coords = integer_vector(field(co, "coords", &path)?, &join(&path, "coords"))?;
        let effective = match co.get("effective") {
            None => true,
            Some(v) => v
                .as_bool()
                .ok_or_else(|| invalid(join(&path, "effective"), "expected a boolean"))?,
        };
        curves.push(Curve {
            name: cname,
            coords,
            effective,
        });
    }
    let ample_reference = match obj.get("ample_reference") {
        None | Some(Value::Null) => None,
        Some(v) => {
            let coords = as_array(v, "ample_reference")?
                .iter()
                .enumerate()
                .map(|(i, x)| as_rational(x, &format!("ample_reference[{i}]")))
                .collect::<Result<Vec<_>>>()?;
            Some(DivisorClass::new(coords))
        }
    };
    SurfaceModel::new(name, lattice, canonical, curves, ample_reference)
}

pub fn parse_surface(path: &Path) -> Result<SurfaceModel> {
    let text =
        std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    parse_surface_str(&text).map_err(|e| match e {
        Error::Parse(m) => Error::Parse(format!("{}: {m}", path.display())),
        other => other,
    })
}

fn json_int(n: &BigInt) -> Value {
    match i64::try_from(n) {
        Ok(v) => json!(v),
        Err(_) => json!(n.to_string()),
    }
}

fn json_rational(q: &Rational) -> Value {
    if q.is_integer() {
        json_int(&q.to_integer())
    } else {
        json!(render(q))
    }
}

/// Serializes a model back to the surface-file format.
pub fn render_surface(model: &SurfaceModel) -> String {
    let mut obj = Map::new();
    obj.insert("schema".into(), json!(SCHEMA_VERSION));
    obj.insert("name".into(), json!(model.name()));
    obj.insert("rank".into(), json!(model.rank()));
    let gram: Vec<Value> = model
        .lattice()
        .rows()
        .iter()
        .map(|r| Value::Array(r.iter().map(json_int).collect()))
        .collect();
    obj.insert("gram".into(), Value::Array(gram));
    obj.insert(
        "canonical".into(),
        Value::Array(model.canonical_coords().iter().map(json_int).collect()),
    );
    let curves: Vec<Value> = model
        .curves()
        .iter()
        .map(|c| {
            json!({
                "name": c.name,
                "coords": c.coords.iter().map(json_int).collect::<Vec<_>>(),
                "effective": c.effective,
            })
        })
        .collect();
    obj.insert("curves".into(), Value::Array(curves));
    if let Some(h) = model.ample_reference() {
        obj.insert(
            "ample_reference".into(),
            Value::Array(h.coords().iter().map(json_rational).collect()),
        );
    }
    serde_json::to_string_pretty(&Value::Object(obj)).expect("JSON values always serialize")
}
