//! Verification reports: a fixed-width table and a JSON document with one
//! object per check.

use std::fmt::Write as _;
use std::io;
use std::path::Path;

use jcs_core::suite::Check;
use jcs_core::Complex64;
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ComplexValue {
    pub re: f64,
    pub im: f64,
}

impl From<Complex64> for ComplexValue {
    fn from(z: Complex64) -> Self {
        ComplexValue { re: z.re, im: z.im }
    }
}

/// One row of the report. Non-finite numbers serialize as `null`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Entry {
    pub check_id: String,
    pub identity: String,
    pub target: ComplexValue,
    pub computed: ComplexValue,
    pub abs_error: f64,
    pub tolerance: f64,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub failure: Option<String>,
}

impl From<&Check> for Entry {
    fn from(c: &Check) -> Self {
        Entry {
            check_id: c.id.clone(),
            identity: c.identity.clone(),
            target: c.target.into(),
            computed: c.computed.into(),
            abs_error: c.abs_error,
            tolerance: c.tolerance,
            passed: c.passed,
            failure: c.failure.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Summary {
    pub total: usize,
    pub passed: usize,
    pub wall_time_seconds: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub entries: Vec<Entry>,
    pub summary: Summary,
}

/// Overall outcome, ordered by severity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Outcome {
    Passed,
    CheckFailed,
    NumericalFailure,
}

impl Report {
    pub fn new(checks: &[Check], wall_time_seconds: f64) -> Self {
        let entries: Vec<Entry> = checks.iter().map(Entry::from).collect();
        let passed = entries.iter().filter(|e| e.passed).count();
        Report { summary: Summary { total: entries.len(), passed, wall_time_seconds }, entries }
    }

    pub fn outcome(&self) -> Outcome {
        if self.entries.iter().any(|e| e.failure.is_some()) {
            Outcome::NumericalFailure
        } else if self.summary.passed < self.summary.total {
            Outcome::CheckFailed
        } else {
            Outcome::Passed
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_table(&self) -> String {
        let w = self.entries.iter().map(|e| e.check_id.chars().count()).max().unwrap_or(8).max(8);
        let mut s = String::new();
        let _ = writeln!(s, "{:<6} {:<w$} {:>11} {:>11}  identity", "status", "check", "abs_error", "tolerance");
        for e in &self.entries {
            let status = if e.passed { "PASS" } else { "FAIL" };
            let _ = writeln!(
                s,
                "{status:<6} {:<w$} {:>11.3e} {:>11.3e}  {}",
                e.check_id, e.abs_error, e.tolerance, e.identity
            );
            if let Some(f) = &e.failure {
                let _ = writeln!(s, "{:<6} {:<w$} {f}", "", "");
            }
        }
        let _ = writeln!(
            s,
            "{} of {} checks passed in {:.2} s",
            self.summary.passed, self.summary.total, self.summary.wall_time_seconds
        );
        s
    }

    /// Writes `<out>.txt` and `<out>.json`.
    pub fn write(&self, out: &Path) -> io::Result<()> {
        std::fs::write(out.with_extension("txt"), self.to_table())?;
        std::fs::write(out.with_extension("json"), self.to_json())
    }
}
