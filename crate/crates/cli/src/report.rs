//! Machine-readable run reports.
//!
//! The `results` array is the deterministic part of a report: identical
//! config + seed produce identical bytes there, independent of the worker
//! count. Wall-clock timings are non-normative and live in their own
//! section.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TaskStatus {
    Passed,
    Failed,
    Inconclusive,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TaskResult {
    pub name: String,
    pub kind: String,
    pub status: TaskStatus,
    /// Task-specific payload: the full verdict, projection result, trace
    /// summary, witness payloads, and so on.
    pub detail: serde_json::Value,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunReport {
    pub artifact_version: String,
    pub seed: u64,
    pub config: serde_json::Value,
    pub results: Vec<TaskResult>,
    /// Number of inconclusive tasks (exit code stays zero).
    pub warnings: usize,
    /// Non-normative: excluded from the determinism contract.
    pub timings_ms: Vec<u128>,
}

impl RunReport {
    pub fn any_failed(&self) -> bool {
        self.results.iter().any(|r| r.status == TaskStatus::Failed)
    }
}
