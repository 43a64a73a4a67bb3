//! Report assembly and serialization. Maps are `serde_json::Map`, which is
//! ordered by key, so identical jobs produce byte-identical output.

use anyhow::Result;
use bianchi_core::traces::Q;
use num_complex::Complex64;
use serde_json::{json, Map, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Enumeration,
    ClosedForm,
    Numeric,
}

impl Method {
    fn as_str(self) -> &'static str {
        match self {
            Method::Enumeration => "enumeration",
            Method::ClosedForm => "closed-form",
            Method::Numeric => "numeric",
        }
    }
}

#[derive(Debug, Clone)]
pub struct Report {
    fields: Map<String, Value>,
}

impl Report {
    pub fn new(inputs: Value, method: Method) -> Self {
        let mut fields = Map::new();
        fields.insert("inputs".into(), inputs);
        fields.insert("method".into(), method.as_str().into());
        fields.insert("warnings".into(), Value::Array(Vec::new()));
        Report { fields }
    }

    pub fn set(&mut self, key: &str, v: impl Into<Value>) -> &mut Self {
        self.fields.insert(key.into(), v.into());
        self
    }

    pub fn warn(&mut self, msg: impl Into<String>) -> &mut Self {
        if let Some(Value::Array(w)) = self.fields.get_mut("warnings") {
            w.push(Value::String(msg.into()));
        }
        self
    }

    pub fn cross_check(&mut self, formula_value: impl Into<Value>, agrees: bool) -> &mut Self {
        self.set("cross_check", json!({ "formula_value": formula_value.into(), "agrees": agrees }))
    }

    pub fn into_value(self) -> Value {
        Value::Object(self.fields)
    }
}

/// "p/q", or "p" for integers.
pub fn rational(q: Q) -> Value {
    Value::String(q.to_string())
}

pub fn complex(z: Complex64, eps: f64) -> Value {
    json!({ "re": z.re, "im": z.im, "eps": eps })
}

pub fn render(v: &Value, format: Format) -> Result<String> {
    match format {
        Format::Json => Ok(serde_json::to_string_pretty(v)? + "\n"),
        Format::Csv => {
            let mut rows = Vec::new();
            flatten("", v, &mut rows);
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(["key", "value"])?;
            for (k, v) in rows {
                w.write_record([k, v])?;
            }
            Ok(String::from_utf8(w.into_inner()?)?)
        }
    }
}

/// Leaf values keyed by their dotted path; arrays use the index as a key.
fn flatten(prefix: &str, v: &Value, out: &mut Vec<(String, String)>) {
    let join = |k: &str| if prefix.is_empty() { k.to_string() } else { format!("{prefix}.{k}") };
    match v {
        Value::Object(m) => m.iter().for_each(|(k, x)| flatten(&join(k), x, out)),
        Value::Array(a) if !a.is_empty() => {
            a.iter().enumerate().for_each(|(i, x)| flatten(&join(&i.to_string()), x, out))
        }
        Value::Array(_) => out.push((prefix.to_string(), String::new())),
        Value::String(s) => out.push((prefix.to_string(), s.clone())),
        other => out.push((prefix.to_string(), other.to_string())),
    }
}
