//! Machine-readable run reports.
//!
//! A report is one JSON object: a schema tag, a header with everything that
//! varies between identical runs (timing, thread count), and a body that is
//! a pure function of the inputs.

use std::collections::BTreeMap;

use serde::Serialize;
use serde_json::Value;

pub const SCHEMA: &str = "entaudit.report/v1";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Verdict {
    Pass,
    Fail,
}

impl Verdict {
    pub fn from_pass(pass: bool) -> Self {
        if pass {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }

    pub fn is_pass(self) -> bool {
        self == Verdict::Pass
    }
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(if self.is_pass() { "PASS" } else { "FAIL" })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

impl Check {
    pub fn new(name: &str, pass: bool, detail: impl Into<String>) -> Self {
        Self { name: name.into(), pass, detail: detail.into() }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ReportHeader {
    pub tool_version: String,
    pub threads: usize,
    pub wall_time_ms: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ReportBody {
    pub command: String,
    pub inputs: BTreeMap<String, Value>,
    pub checks: Vec<Check>,
    pub verdict: Verdict,
    pub data: Value,
}

impl ReportBody {
    /// Verdict is PASS iff every check passes.
    pub fn new(command: &str, inputs: BTreeMap<String, Value>, checks: Vec<Check>, data: Value) -> Self {
        let verdict = Verdict::from_pass(checks.iter().all(|c| c.pass));
        Self { command: command.into(), inputs, checks, verdict, data }
    }

    pub fn to_text(&self) -> String {
        serde_json::to_string(self).expect("report body serializes")
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunReport {
    pub schema: &'static str,
    pub header: ReportHeader,
    pub body: ReportBody,
}

impl RunReport {
    pub fn new(body: ReportBody, wall_time_ms: f64) -> Self {
        Self {
            schema: SCHEMA,
            header: ReportHeader {
                tool_version: env!("CARGO_PKG_VERSION").into(),
                threads: rayon::current_num_threads(),
                wall_time_ms,
            },
            body,
        }
    }

    /// One line of JSON followed by a newline.
    pub fn to_text(&self) -> String {
        let mut s = serde_json::to_string(self).expect("report serializes");
        s.push('\n');
        s
    }

    /// Short human-readable account of the checks.
    pub fn summary(&self) -> String {
        let mut s = format!("{}\n", self.body.command);
        for c in &self.body.checks {
            s += &format!("  [{}] {}: {}\n", if c.pass { "ok" } else { "FAIL" }, c.name, c.detail);
        }
        s += &format!("{} ({:.1} ms, {} threads)\n", self.body.verdict, self.header.wall_time_ms, self.header.threads);
        s
    }
}
