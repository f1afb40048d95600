use std::time::Duration;

use serde::Serialize;
use symdiff::FieldSpec;

/// Everything needed to rerun an invocation.
#[derive(Debug, Clone, Serialize)]
pub struct RunManifest {
    pub command_line: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub field: Option<FieldSpec>,
    pub seed: u64,
    pub workers: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub budget: Option<String>,
    pub version: &'static str,
    /// Excluded from the result so reruns stay byte-identical.
    pub elapsed_ms: u128,
    pub outputs: Vec<String>,
}

impl RunManifest {
    pub fn new(field: Option<FieldSpec>, seed: u64, workers: usize, budget: Option<Duration>) -> Self {
        RunManifest {
            command_line: std::env::args().collect(),
            field,
            seed,
            workers,
            budget: budget.map(|b| humantime::format_duration(b).to_string()),
            version: env!("CARGO_PKG_VERSION"),
            elapsed_ms: 0,
            outputs: Vec::new(),
        }
    }
}

/// A result with its manifest.
#[derive(Debug, Serialize)]
pub struct Envelope<T: Serialize> {
    pub manifest: RunManifest,
    pub result: T,
}
