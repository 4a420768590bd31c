//! Machine-readable check reports.
//!
//! Field order in the serialized JSON follows the declaration order below and
//! never depends on hash iteration, so identical runs give identical bytes.

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::eval::{CheckReport, Mode, Status};

pub const SCHEMA_VERSION: u32 = 1;
pub const TOOL_NAME: &str = "bihom";
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ReportDocument {
    pub schema_version: u32,
    pub tool: &'static str,
    pub version: &'static str,
    pub command: String,
    pub input_digest: String,
    pub status: Status,
    pub sections: Vec<Section>,
}

/// One identity set checked against one target. `transcription` is
/// `as_printed`, `corrected`, or `user` for identity files given on the
/// command line.
#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Section {
    pub title: String,
    pub target: String,
    pub identity_set: String,
    pub transcription: &'static str,
    pub mode: ModeRecord,
    pub status: Status,
    pub checks: Vec<CheckRecord>,
}

#[derive(Debug, Clone, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum ModeRecord {
    Exhaustive,
    Random { seed: u64, samples: u64 },
}

impl From<Mode> for ModeRecord {
    fn from(m: Mode) -> Self {
        match m {
            Mode::Exhaustive => ModeRecord::Exhaustive,
            Mode::Random { seed, samples } => ModeRecord::Random { seed, samples },
        }
    }
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct CheckRecord {
    pub identity: String,
    pub status: Status,
    pub tuples_checked: u64,
    pub failures: Vec<FailureRecord>,
}

/// `vars[i]` is bound to basis element `tuple[i]`; residual coordinates are
/// exact rationals written `p` or `p/q`.
#[derive(Debug, Clone, Serialize)]
pub struct FailureRecord {
    pub vars: Vec<String>,
    pub tuple: Vec<String>,
    pub residual: Vec<String>,
}

impl From<&CheckReport> for CheckRecord {
    fn from(r: &CheckReport) -> Self {
        CheckRecord {
            identity: r.identity.clone(),
            status: r.status,
            tuples_checked: r.tuples_checked,
            failures: r
                .failures
                .iter()
                .map(|f| FailureRecord {
                    vars: f.tuple.iter().map(|(v, _)| v.clone()).collect(),
                    tuple: f.tuple.iter().map(|(_, i)| format!("e{}", i + 1)).collect(),
                    residual: f.residual.iter().map(|s| s.to_string()).collect(),
                })
                .collect(),
        }
    }
}

fn overall(all_pass: bool) -> Status {
    if all_pass {
        Status::Pass
    } else {
        Status::Fail
    }
}

impl Section {
    pub fn new(title: &str, target: &str, identity_set: &str, transcription: &'static str, reports: &[CheckReport]) -> Self {
        let mode = reports.first().map(|r| r.mode).unwrap_or(Mode::Exhaustive);
        Section {
            title: title.to_string(),
            target: target.to_string(),
            identity_set: identity_set.to_string(),
            transcription,
            mode: mode.into(),
            status: overall(reports.iter().all(CheckReport::passed)),
            checks: reports.iter().map(CheckRecord::from).collect(),
        }
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

impl ReportDocument {
    pub fn new(command: &str, input_digest: String, sections: Vec<Section>) -> Self {
        ReportDocument {
            schema_version: SCHEMA_VERSION,
            tool: TOOL_NAME,
            version: TOOL_VERSION,
            command: command.to_string(),
            input_digest,
            status: overall(sections.iter().all(Section::passed)),
            sections,
        }
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// Plain-text rendering: one line per identity, indented failures.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for s in &self.sections {
            out.push_str(&format!(
                "== {} [{}] on {} ({})\n",
                s.title, s.identity_set, s.target, s.transcription
            ));
            for c in &s.checks {
                let tag = if c.status == Status::Pass { "PASS" } else { "FAIL" };
                out.push_str(&format!("{tag}  {}  ({} tuples)\n", c.identity, c.tuples_checked));
                for f in &c.failures {
                    let bind: Vec<String> = f.vars.iter().zip(&f.tuple).map(|(v, e)| format!("{v}={e}")).collect();
                    out.push_str(&format!("      {}: residual [{}]\n", bind.join(", "), f.residual.join(", ")));
                }
            }
        }
        out.push_str(&format!("overall: {}\n", if self.passed() { "PASS" } else { "FAIL" }));
        out
    }
}

/// `sha256:` digest over the inputs, each length-prefixed so that the
/// boundaries between them matter.
pub fn input_digest<'a>(inputs: impl IntoIterator<Item = &'a [u8]>) -> String {
    let mut h = Sha256::new();
    for i in inputs {
        h.update((i.len() as u64).to_le_bytes());
        h.update(i);
    }
    format!("sha256:{}", hex::encode(h.finalize()))
}
