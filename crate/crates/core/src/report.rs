//! Machine-readable check reports.

use serde::{Deserialize, Serialize};
use serde_json::Value;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CheckStatus {
    Pass,
    Fail,
    /// Passed on a finite sample of an infinite set.
    Evidence,
    /// A proved statement the tool does not decide.
    TheoremLevel,
    /// A decision procedure gave up (depth or budget exhausted).
    Unknown,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub status: CheckStatus,
    pub details: Value,
}

impl Check {
    pub fn new(name: &str, status: CheckStatus, details: Value) -> Check {
        Check {
            name: name.to_string(),
            status,
            details,
        }
    }

    pub fn pass_if(name: &str, ok: bool, details: Value) -> Check {
        let status = if ok { CheckStatus::Pass } else { CheckStatus::Fail };
        Check::new(name, status, details)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SceneRef {
    pub name: String,
    pub digest: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub suite: String,
    pub scene: SceneRef,
    pub checks: Vec<Check>,
    pub seed: u64,
    pub version: String,
}

impl Report {
    pub fn any_fail(&self) -> bool {
        self.checks.iter().any(|c| c.status == CheckStatus::Fail)
    }

    pub fn any_unknown(&self) -> bool {
        self.checks.iter().any(|c| c.status == CheckStatus::Unknown)
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }
}
