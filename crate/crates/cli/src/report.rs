use std::fmt::Write;

use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

pub const SCHEMA: u32 = 1;

#[derive(Serialize)]
pub struct InputInfo {
    pub source: String,
    pub digest: String,
}

/// The digested part of a report: identical inputs give identical bytes.
#[derive(Serialize)]
struct Body<'a> {
    schema: u32,
    command: &'a str,
    input: &'a InputInfo,
    data: &'a Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    verdict: Option<&'a str>,
}

#[derive(Serialize)]
pub struct Report {
    pub schema: u32,
    pub command: String,
    pub input: InputInfo,
    pub data: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub verdict: Option<String>,
    pub digest: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing: Option<Timing>,
}

#[derive(Serialize)]
pub struct Timing {
    pub elapsed_ms: f64,
}

pub fn sha256(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

impl Report {
    pub fn new(command: String, input: InputInfo, data: Value, verdict: Option<String>) -> Self {
        let body = Body { schema: SCHEMA, command: &command, input: &input, data: &data, verdict: verdict.as_deref() };
        let digest = sha256(serde_json::to_string(&body).expect("serializable").as_bytes());
        Report { schema: SCHEMA, command, input, data, verdict, digest, timing: None }
    }
}

/// Indented `key: value` rendering of a JSON value.
pub fn render_text(v: &Value) -> String {
    let mut out = String::new();
    walk(v, 0, &mut out);
    out
}

fn scalar(v: &Value) -> Option<String> {
    match v {
        Value::Null => Some("none".into()),
        Value::Bool(b) => Some(b.to_string()),
        Value::Number(n) => Some(n.to_string()),
        Value::String(s) => Some(s.clone()),
        Value::Array(a) if a.is_empty() => Some("[]".into()),
        Value::Array(a) if a.iter().all(|x| matches!(x, Value::String(_) | Value::Number(_) | Value::Bool(_))) => {
            Some(format!("[{}]", a.iter().map(|x| scalar(x).unwrap_or_default()).collect::<Vec<_>>().join(", ")))
        }
        Value::Object(o) if o.is_empty() => Some("{}".into()),
        _ => None,
    }
}

fn walk(v: &Value, indent: usize, out: &mut String) {
    let pad = "  ".repeat(indent);
    match v {
        Value::Object(o) => {
            for (k, x) in o {
                match scalar(x) {
                    Some(s) => {
                        let _ = writeln!(out, "{pad}{k}: {s}");
                    }
                    None => {
                        let _ = writeln!(out, "{pad}{k}:");
                        walk(x, indent + 1, out);
                    }
                }
            }
        }
        Value::Array(a) => {
            for x in a {
                match scalar(x) {
                    Some(s) => {
                        let _ = writeln!(out, "{pad}- {s}");
                    }
                    None => {
                        let _ = writeln!(out, "{pad}-");
                        walk(x, indent + 1, out);
                    }
                }
            }
        }
        _ => {
            let _ = writeln!(out, "{pad}{}", scalar(v).unwrap_or_default());
        }
    }
}
