//! Check results and their deterministic rendering.

use std::fmt::Write as _;

use serde::Serialize;

/// Witnesses kept per check. Failures beyond this are only counted.
pub const MAX_WITNESSES: usize = 16;

/// Witnesses buffered before sorting and truncating.
const WITNESS_BUFFER: usize = 4096;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    /// Cases examined (for conditional laws: cases whose premise held).
    pub cases: u64,
    pub failures: u64,
    /// Sorted, at most [`MAX_WITNESSES`].
    pub witnesses: Vec<String>,
    /// Informational checks are reported but do not affect the verdict.
    pub informational: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl Check {
    pub fn new(name: impl Into<String>) -> Self {
        Check {
            name: name.into(),
            cases: 0,
            failures: 0,
            witnesses: Vec::new(),
            informational: false,
            note: None,
        }
    }

    pub fn informational(mut self) -> Self {
        self.informational = true;
        self
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }

    /// Counts one case; on failure the witness closure is evaluated.
    pub fn record(&mut self, ok: bool, witness: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok {
            self.fail_with(witness());
        }
    }

    pub fn pass(&mut self) {
        self.cases += 1;
    }

    pub fn fail(&mut self, witness: impl Into<String>) {
        self.cases += 1;
        self.fail_with(witness.into());
    }

    fn fail_with(&mut self, witness: String) {
        self.failures += 1;
        if self.witnesses.len() < WITNESS_BUFFER {
            self.witnesses.push(witness);
        }
    }

    pub fn passed(&self) -> bool {
        self.failures == 0
    }

    /// Sorts and truncates the witness list.
    pub fn finish(mut self) -> Self {
        self.witnesses.sort();
        self.witnesses.dedup();
        self.witnesses.truncate(MAX_WITNESSES);
        self
    }
}

/// A titled list of checks plus free-form key/value lines.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct Report {
    pub title: String,
    pub info: Vec<(String, String)>,
    pub checks: Vec<Check>,
}

impl Report {
    pub fn new(title: impl Into<String>) -> Self {
        Report {
            title: title.into(),
            ..Default::default()
        }
    }

    pub fn info(&mut self, key: impl Into<String>, value: impl ToString) {
        self.info.push((key.into(), value.to_string()));
    }

    pub fn push(&mut self, check: Check) {
        self.checks.push(check.finish());
    }

    /// Appends another report's checks, prefixing their names.
    pub fn absorb(&mut self, prefix: &str, other: Report) {
        for (k, v) in other.info {
            self.info.push((format!("{prefix}.{k}"), v));
        }
        for mut c in other.checks {
            c.name = format!("{prefix}.{}", c.name);
            self.checks.push(c);
        }
    }

    /// Appends another report's info lines and checks unchanged.
    pub fn merge(&mut self, other: Report) {
        self.info.extend(other.info);
        self.checks.extend(other.checks);
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.informational || c.passed())
    }

    pub fn failed(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.informational && !c.passed())
    }

    pub fn render_text(&self) -> String {
        let mut out = String::new();
        writeln!(out, "report: {}", self.title).unwrap();
        for (k, v) in &self.info {
            writeln!(out, "{k}: {v}").unwrap();
        }
        for c in &self.checks {
            let status = match (c.passed(), c.informational) {
                (true, false) => "pass".to_string(),
                (true, true) => "pass (informational)".to_string(),
                (false, false) => format!("FAIL ({} failing)", c.failures),
                (false, true) => format!("fail (informational, {} failing)", c.failures),
            };
            writeln!(out, "check {}: {} ({} cases)", c.name, status, c.cases).unwrap();
            if let Some(note) = &c.note {
                writeln!(out, "  note: {note}").unwrap();
            }
            for w in &c.witnesses {
                writeln!(out, "  witness: {w}").unwrap();
            }
        }
        writeln!(out, "verdict: {}", if self.passed() { "pass" } else { "FAIL" }).unwrap();
        out
    }

    pub fn render_json(&self) -> String {
        let mut v = serde_json::to_value(self).expect("report serializes");
        v["passed"] = serde_json::Value::Bool(self.passed());
        let mut s = serde_json::to_string_pretty(&v).expect("report serializes");
        s.push('\n');
        s
    }
}
