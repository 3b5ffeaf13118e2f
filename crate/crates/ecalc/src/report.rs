//! Verification reports: named checks, numeric residuals, free-form data.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub detail: String,
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq)]
pub struct Report {
    pub command: String,
    pub inputs_digest: String,
    pub checks: Vec<Check>,
    pub residuals: BTreeMap<String, f64>,
    pub data: serde_json::Value,
    /// Human-readable lines (tables, summaries) for the text rendering.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
    pub status: i32,
}

/// sha256 over the length-prefixed inputs.
pub fn digest(inputs: &[String]) -> String {
    let mut h = Sha256::new();
    for s in inputs {
        h.update((s.len() as u64).to_le_bytes());
        h.update(s.as_bytes());
    }
    hex::encode(h.finalize())
}

impl Report {
    pub fn new(command: &str, inputs: &[String]) -> Self {
        Report {
            command: command.into(),
            inputs_digest: digest(inputs),
            checks: Vec::new(),
            residuals: BTreeMap::new(),
            data: serde_json::Value::Null,
            notes: Vec::new(),
            status: EXIT_PASS,
        }
    }

    pub fn check(&mut self, name: &str, pass: bool, detail: impl Into<String>) -> bool {
        self.checks.push(Check { name: name.into(), pass, detail: detail.into() });
        if !pass {
            self.status = EXIT_FAIL;
        }
        pass
    }

    /// Non-finite values are clamped so the JSON stays parseable.
    pub fn residual(&mut self, name: &str, v: f64) {
        let v = if v.is_finite() { v } else { f64::MAX };
        self.residuals.insert(name.into(), v);
    }

    pub fn note(&mut self, line: impl Into<String>) {
        self.notes.push(line.into());
    }

    pub fn passed(&self) -> bool {
        self.status == EXIT_PASS
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let verdict = if self.passed() { "PASS" } else { "FAIL" };
        let _ = writeln!(s, "ecalc {}: {verdict}", self.command);
        let _ = writeln!(s, "inputs sha256 {}", self.inputs_digest);
        for n in &self.notes {
            let _ = writeln!(s, "{n}");
        }
        let width = self.checks.iter().map(|c| c.name.len()).max().unwrap_or(0);
        for c in &self.checks {
            let mark = if c.pass { "ok  " } else { "FAIL" };
            let _ = write!(s, "  [{mark}] {:width$}", c.name);
            if !c.detail.is_empty() {
                let _ = write!(s, "  {}", c.detail);
            }
            s.push('\n');
        }
        if !self.residuals.is_empty() {
            let _ = writeln!(s, "residuals:");
            for (k, v) in &self.residuals {
                let _ = writeln!(s, "  {k:width$}  {v:.3e}");
            }
        }
        s
    }
}
