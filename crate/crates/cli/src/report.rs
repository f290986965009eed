use std::collections::BTreeMap;

use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

#[derive(Debug, Clone, Serialize)]
pub struct InputInfo {
    /// `file` or `builtin`.
    pub kind: &'static str,
    pub name: String,
    pub sha256: String,
}

impl InputInfo {
    pub fn new(kind: &'static str, name: &str, bytes: &[u8]) -> Self {
        Self {
            kind,
            name: name.to_string(),
            sha256: hex::encode(Sha256::digest(bytes)),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Verdict {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub command: String,
    pub input: InputInfo,
    pub seeds: Vec<u64>,
    pub tolerances: BTreeMap<String, f64>,
    pub results: BTreeMap<String, Value>,
    pub verdicts: Vec<Verdict>,
    pub pass: bool,
}

impl RunReport {
    pub fn new(command: &str, input: InputInfo) -> Self {
        Self {
            command: command.to_string(),
            input,
            seeds: Vec::new(),
            tolerances: BTreeMap::new(),
            results: BTreeMap::new(),
            verdicts: Vec::new(),
            pass: true,
        }
    }

    pub fn result(&mut self, key: &str, value: Value) -> &mut Self {
        self.results.insert(key.to_string(), value);
        self
    }

    pub fn tolerance(&mut self, key: &str, value: f64) -> &mut Self {
        self.tolerances.insert(key.to_string(), value);
        self
    }

    pub fn verdict(&mut self, name: &str, pass: bool, detail: impl Into<String>) -> &mut Self {
        self.pass &= pass;
        self.verdicts.push(Verdict {
            name: name.to_string(),
            pass,
            detail: detail.into(),
        });
        self
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_plain(&self) -> String {
        let mut out = format!("{}  ({} {})\n", self.command, self.input.kind, self.input.name);
        out.push_str(&format!("  sha256     {}\n", self.input.sha256));
        if !self.seeds.is_empty() {
            out.push_str(&format!("  seeds      {:?}\n", self.seeds));
        }
        for (k, v) in &self.tolerances {
            out.push_str(&format!("  tol {k:<6} {v:e}\n"));
        }
        let width = self.results.keys().map(String::len).max().unwrap_or(0);
        for (k, v) in &self.results {
            out.push_str(&format!("  {k:<width$}  {}\n", plain_value(v)));
        }
        for v in &self.verdicts {
            let tag = if v.pass { "PASS" } else { "FAIL" };
            out.push_str(&format!("[{tag}] {}: {}\n", v.name, v.detail));
        }
        out
    }
}

fn plain_value(v: &Value) -> String {
    match v {
        Value::Object(m) if m.contains_key("value") && m.contains_key("method") => {
            let mut s = format!("{} ({})", plain_value(&m["value"]), m["method"].as_str().unwrap_or("?"));
            if let Some(se) = m.get("std_error").and_then(Value::as_f64) {
                s.push_str(&format!(" ± {se:e}"));
            }
            s
        }
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

/// A numeric result with its provenance: `exact`, `enumerated` or `monte_carlo`.
pub fn tagged(value: impl Serialize, method: &str) -> Value {
    json!({"value": value, "method": method})
}
