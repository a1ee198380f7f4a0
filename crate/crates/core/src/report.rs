//! Named check results shared by every battery.

use std::fmt;

use serde::{Deserialize, Serialize};
use serde_json::Value;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckStatus {
    Pass,
    Fail,
    /// Sampled evidence only; never a certificate either way.
    Inconclusive,
}

impl fmt::Display for CheckStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CheckStatus::Pass => "pass",
            CheckStatus::Fail => "fail",
            CheckStatus::Inconclusive => "inconclusive",
        })
    }
}

/// One named check. Invariant: `status == Fail` implies `witness.is_some()`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckEntry {
    pub name: String,
    pub status: CheckStatus,
    pub residual: f64,
    pub tol: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
    /// Status a scenario expects; `None` outside scenario runs.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub expected: Option<CheckStatus>,
}

impl CheckEntry {
    pub fn pass(name: impl Into<String>, residual: f64, tol: f64) -> Self {
        Self::with_status(name, CheckStatus::Pass, residual, tol, None)
    }

    pub fn fail(name: impl Into<String>, residual: f64, tol: f64, witness: Value) -> Self {
        Self::with_status(name, CheckStatus::Fail, residual, tol, Some(witness))
    }

    pub fn inconclusive(name: impl Into<String>, residual: f64, tol: f64) -> Self {
        Self::with_status(name, CheckStatus::Inconclusive, residual, tol, None)
    }

    /// Pass iff `ok`; on failure the witness is built lazily.
    pub fn judge(name: impl Into<String>, ok: bool, residual: f64, tol: f64, witness: impl FnOnce() -> Value) -> Self {
        if ok {
            Self::pass(name, residual, tol)
        } else {
            Self::fail(name, residual, tol, witness())
        }
    }

    fn with_status(name: impl Into<String>, status: CheckStatus, residual: f64, tol: f64, witness: Option<Value>) -> Self {
        Self { name: name.into(), status, residual, tol, witness, note: None, expected: None }
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }

    pub fn expecting(mut self, status: CheckStatus) -> Self {
        self.expected = Some(status);
        self
    }

    pub fn is_pass(&self) -> bool {
        self.status == CheckStatus::Pass
    }

    pub fn is_fail(&self) -> bool {
        self.status == CheckStatus::Fail
    }

    /// `true` unless a scenario expectation is set and differs from the status.
    pub fn meets_expectation(&self) -> bool {
        self.expected.is_none_or(|e| e == self.status)
    }

    /// `name: status (residual …, tol …)` with expectation and note suffixes.
    pub fn text_line(&self) -> String {
        let mut line = format!("{}: {}", self.name, self.status);
        match self.expected {
            Some(e) if e == self.status && e != CheckStatus::Pass => line.push_str(" (expected)"),
            Some(e) if e != self.status => line.push_str(&format!(" (UNEXPECTED, wanted {e})")),
            _ => {}
        }
        line.push_str(&format!(" [residual {:.3e}, tol {:.1e}]", self.residual, self.tol));
        if let Some(n) = &self.note {
            line.push_str(&format!(" {n}"));
        }
        line
    }
}

/// Ordered list of checks.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub checks: Vec<CheckEntry>,
}

impl CheckReport {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, e: CheckEntry) {
        self.checks.push(e);
    }

    pub fn extend(&mut self, other: CheckReport) {
        self.checks.extend(other.checks);
    }

    pub fn get(&self, name: &str) -> Option<&CheckEntry> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(CheckEntry::is_pass)
    }

    pub fn any_fail(&self) -> bool {
        self.checks.iter().any(CheckEntry::is_fail)
    }

    pub fn meets_expectations(&self) -> bool {
        self.checks.iter().all(CheckEntry::meets_expectation)
    }

    /// Prefixes every check name with `prefix.`.
    pub fn prefixed(mut self, prefix: &str) -> Self {
        for c in &mut self.checks {
            c.name = format!("{prefix}.{}", c.name);
        }
        self
    }

    pub fn to_text(&self) -> String {
        self.checks.iter().map(|c| c.text_line() + "\n").collect()
    }
}

impl FromIterator<CheckEntry> for CheckReport {
    fn from_iter<I: IntoIterator<Item = CheckEntry>>(iter: I) -> Self {
        Self { checks: iter.into_iter().collect() }
    }
}
