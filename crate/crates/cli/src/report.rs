use serde::Serialize;
use serde_json::{json, Value};

pub const SCHEMA: &str = "1";

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Outcome {
    Positive,
    Negative,
    /// Some batch items failed; the payload carries their errors.
    Error,
}

impl Outcome {
    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Outcome::Positive
        } else {
            Outcome::Negative
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Outcome::Positive => "positive",
            Outcome::Negative => "negative",
            Outcome::Error => "error",
        }
    }
}

pub struct Report {
    pub outcome: Outcome,
    pub result: Value,
}

impl Report {
    pub fn new(outcome: Outcome, result: impl Serialize) -> Self {
        Report { outcome, result: serde_json::to_value(result).expect("reports serialize") }
    }

    pub fn positive(result: impl Serialize) -> Self {
        Self::new(Outcome::Positive, result)
    }

    pub fn envelope(&self, command: &str) -> Value {
        json!({
            "schema": SCHEMA,
            "command": command,
            "outcome": self.outcome.label(),
            "result": self.result,
        })
    }
}

pub fn error_envelope(command: &str, kind: &str, message: &str) -> Value {
    json!({
        "schema": SCHEMA,
        "command": command,
        "outcome": "error",
        "error": { "kind": kind, "message": message },
    })
}

/// Indented `key: value` rendering of a JSON payload.
pub fn render_text(v: &Value) -> String {
    let mut out = String::new();
    write_value(&mut out, v, 0);
    out
}

fn scalar(v: &Value) -> Option<String> {
    match v {
        Value::Null => Some("null".into()),
        Value::Bool(b) => Some(b.to_string()),
        Value::Number(n) => Some(n.to_string()),
        Value::String(s) => Some(s.clone()),
        Value::Array(a) if a.iter().all(|x| !x.is_object() && !x.is_array()) => {
            Some(format!("[{}]", a.iter().filter_map(scalar).collect::<Vec<_>>().join(", ")))
        }
        _ => None,
    }
}

fn write_value(out: &mut String, v: &Value, depth: usize) {
    let pad = "  ".repeat(depth);
    match v {
        Value::Object(map) => {
            for (k, x) in map {
                match scalar(x) {
                    Some(s) => out.push_str(&format!("{pad}{k}: {s}\n")),
                    None => {
                        out.push_str(&format!("{pad}{k}:\n"));
                        write_value(out, x, depth + 1);
                    }
                }
            }
        }
        Value::Array(items) => {
            for x in items {
                match scalar(x) {
                    Some(s) => out.push_str(&format!("{pad}- {s}\n")),
                    None => {
                        out.push_str(&format!("{pad}-\n"));
                        write_value(out, x, depth + 1);
                    }
                }
            }
        }
        other => out.push_str(&format!("{pad}{}\n", scalar(other).unwrap_or_default())),
    }
}
