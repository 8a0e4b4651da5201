//! Text and JSON specifications of fields and towers.
//!
//! A field is either a preset string (`Q`, `cyclotomic:n`, `maxreal:n`,
//! `cyclic_subfield:p:d`) or an object `{"modulus": n, "fixing_subgroup": [..]}`.
//! The `degree` key written by the serializer is accepted and checked.

use serde::Deserialize;
use serde_json::Value;

use crate::field::AbelianField;
use crate::tower::Tower;
use crate::{Error, Result};

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct FieldObject {
    modulus: u64,
    #[serde(default)]
    fixing_subgroup: Vec<u64>,
    #[serde(default)]
    degree: Option<u64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct TowerObject {
    #[serde(default)]
    base: Option<Value>,
    middle: Value,
    top: Value,
}

fn json_error(e: serde_json::Error) -> Error {
    Error::Parse(format!("{e} (line {}, column {})", e.line(), e.column()))
}

fn number(s: &str, what: &str) -> Result<u64> {
    s.trim()
        .parse()
        .map_err(|_| Error::Parse(format!("expected an integer for {what}, got {s:?}")))
}

pub fn parse_preset(s: &str) -> Result<AbelianField> {
    let parts: Vec<&str> = s.trim().split(':').collect();
    match parts.as_slice() {
        ["Q"] | ["rational"] => Ok(AbelianField::rational()),
        ["cyclotomic", n] => Ok(AbelianField::cyclotomic(positive(number(n, "n")?)?)),
        ["maxreal", n] => Ok(AbelianField::max_real(positive(number(n, "n")?)?)),
        ["cyclic_subfield", p, d] => AbelianField::cyclic_subfield(number(p, "p")?, number(d, "d")?),
        _ => Err(Error::Parse(format!("unknown field preset {s:?}"))),
    }
}

fn positive(n: u64) -> Result<u64> {
    if n == 0 {
        return Err(Error::InvalidParameter("modulus must be positive".into()));
    }
    Ok(n)
}

fn field_from_value(v: Value) -> Result<AbelianField> {
    match v {
        Value::String(s) => parse_preset(&s),
        Value::Object(_) => {
            let obj: FieldObject = serde_json::from_value(v).map_err(|e| Error::Parse(e.to_string()))?;
            let f = AbelianField::from_fixing_residues(obj.modulus, &obj.fixing_subgroup)?;
            if let Some(d) = obj.degree {
                if d != f.degree() {
                    return Err(Error::Parse(format!("declared degree {d} but the field has degree {}", f.degree())));
                }
            }
            Ok(f)
        }
        other => Err(Error::Parse(format!("expected a preset string or an object, got {other}"))),
    }
}

/// A field from a preset string or a JSON document.
pub fn parse_field(s: &str) -> Result<AbelianField> {
    let t = s.trim_start();
    if t.starts_with('{') || t.starts_with('"') {
        field_from_value(serde_json::from_str(s).map_err(json_error)?)
    } else {
        parse_preset(s)
    }
}

/// A tower from a JSON document `{"base": .., "middle": .., "top": ..}`; `base` defaults to `Q`.
pub fn parse_tower(s: &str) -> Result<Tower> {
    let obj: TowerObject = serde_json::from_str(s).map_err(json_error)?;
    let base = match obj.base {
        None => AbelianField::rational(),
        Some(v) => field_from_value(v)?,
    };
    Tower::new(base, field_from_value(obj.middle)?, field_from_value(obj.top)?)
}

/// A tower from three field specs.
pub fn tower_from_parts(base: &str, middle: &str, top: &str) -> Result<Tower> {
    Tower::new(parse_field(base)?, parse_field(middle)?, parse_field(top)?)
}
