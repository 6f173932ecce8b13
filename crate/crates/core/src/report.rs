//! Verification records shared by the bracket and Fourier sweeps.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Verified,
    Failed,
    /// Checked but not treated as a hard requirement.
    Informative,
}

/// One checked identity, serialized as
/// `{identity, params, genus, window, status, counterexample?}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckRecord {
    pub identity: String,
    pub params: Vec<i64>,
    pub genus: u32,
    pub window: i64,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub counterexample: Option<String>,
}

impl CheckRecord {
    pub fn new(
        identity: impl Into<String>,
        params: Vec<i64>,
        genus: u32,
        window: i64,
        ok: bool,
    ) -> CheckRecord {
        CheckRecord {
            identity: identity.into(),
            params,
            genus,
            window,
            status: if ok { Status::Verified } else { Status::Failed },
            counterexample: None,
        }
    }

    pub fn with_counterexample(mut self, text: Option<String>) -> CheckRecord {
        self.counterexample = text;
        self
    }

    pub fn passed(&self) -> bool {
        self.status != Status::Failed
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{identity} failed at params {params:?} (genus {genus}): {counterexample}")]
pub struct VerificationFailure {
    pub identity: String,
    pub params: Vec<i64>,
    pub genus: u32,
    pub counterexample: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub records: Vec<CheckRecord>,
}

impl Report {
    pub fn extend(&mut self, other: Report) {
        self.records.extend(other.records);
    }

    pub fn all_passed(&self) -> bool {
        self.records.iter().all(CheckRecord::passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckRecord> {
        self.records.iter().filter(|r| !r.passed())
    }

    pub fn first_failure(&self) -> Option<VerificationFailure> {
        self.failures().next().map(|r| VerificationFailure {
            identity: r.identity.clone(),
            params: r.params.clone(),
            genus: r.genus,
            counterexample: r.counterexample.clone().unwrap_or_default(),
        })
    }

    pub fn into_result(self) -> Result<Report, VerificationFailure> {
        match self.first_failure() {
            Some(f) => Err(f),
            None => Ok(self),
        }
    }

    /// Markdown table, one row per record.
    pub fn to_markdown(&self) -> String {
        let mut s = String::from(
            "| identity | params | genus | window | status |\n|---|---|---|---|---|\n",
        );
        for r in &self.records {
            s.push_str(&format!(
                "| {} | {:?} | {} | {} | {} |\n",
                r.identity, r.params, r.genus, r.window, r.status
            ));
        }
        s
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Verified => "verified",
            Status::Failed => "failed",
            Status::Informative => "informative",
        })
    }
}
