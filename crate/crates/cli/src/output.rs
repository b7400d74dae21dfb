//! Text and JSON rendering of command results.
//!
//! Every JSON report carries the keys `degrees`, `invariant_factors`,
//! `generators` and `caveats`, plus `command`, `status` and any
//! command-specific keys. Keys are sorted, so output is byte-stable.

use dgorder::{Q, Z};
use serde_json::{json, Map, Value};

#[derive(Debug, Default)]
pub struct Report {
    pub command: &'static str,
    pub lines: Vec<String>,
    pub degrees: Vec<Value>,
    pub invariant_factors: Vec<Value>,
    pub generators: Vec<Value>,
    pub caveats: Vec<String>,
    pub extra: Map<String, Value>,
    /// Name of the first failing axiom or check.
    pub failure: Option<String>,
}

impl Report {
    pub fn new(command: &'static str) -> Self {
        Report {
            command,
            ..Report::default()
        }
    }

    pub fn line(&mut self, s: impl Into<String>) {
        self.lines.push(s.into());
    }

    pub fn fail(&mut self, what: &str) {
        if self.failure.is_none() {
            self.failure = Some(what.to_string());
        }
    }

    pub fn set(&mut self, key: &str, value: Value) {
        self.extra.insert(key.to_string(), value);
    }

    pub fn to_json(&self) -> Value {
        let mut obj = self.extra.clone();
        obj.insert("command".into(), json!(self.command));
        obj.insert("degrees".into(), Value::Array(self.degrees.clone()));
        obj.insert("invariant_factors".into(), Value::Array(self.invariant_factors.clone()));
        obj.insert("generators".into(), Value::Array(self.generators.clone()));
        obj.insert("caveats".into(), json!(self.caveats));
        obj.insert(
            "status".into(),
            json!(if self.failure.is_some() { "fail" } else { "pass" }),
        );
        obj.insert("failure".into(), json!(self.failure));
        Value::Object(obj)
    }

    pub fn render(&self, as_json: bool) -> String {
        if as_json {
            let mut s = serde_json::to_string_pretty(&self.to_json()).expect("serializable");
            s.push('\n');
            return s;
        }
        let mut out = String::new();
        for l in &self.lines {
            out.push_str(l);
            out.push('\n');
        }
        for c in &self.caveats {
            out.push_str(&format!("caveat: {c}\n"));
        }
        if let Some(f) = &self.failure {
            out.push_str(&format!("verification failed: {f}\n"));
        }
        out
    }
}

/// Rationals as strings ("1/2"), so values round-trip exactly.
pub fn vector(v: &[Q]) -> Value {
    Value::Array(v.iter().map(|x| json!(x.to_string())).collect())
}

/// Integers as JSON numbers when they fit in u64, else as strings.
pub fn integer(z: &Z) -> Value {
    match u64::try_from(z) {
        Ok(n) => json!(n),
        Err(_) => json!(z.to_string()),
    }
}
