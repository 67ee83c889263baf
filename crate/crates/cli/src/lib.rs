//! Experiment configs, dispatch and JSON reports for the `coarse-lab` tool.

pub mod args;
pub mod commands;
pub mod config;
pub mod schema;

use std::time::Instant;

use schemars::JsonSchema;
use serde::{Deserialize, Serialize};
use serde_json::Value;

pub use commands::{execute, Outcome, COMMANDS};
pub use config::{ExperimentConfig, Params};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("configuration error: {0}")]
    Config(String),
    #[error("{0}")]
    Io(String),
    #[error(transparent)]
    Lib(#[from] coarse_lab::Error),
}

/// Exit status for a verdict failure.
pub const EXIT_VIOLATION: i32 = 1;
/// Exit status when the command could not run.
pub const EXIT_ERROR: i32 = 2;

#[derive(Clone, Debug, Serialize, Deserialize, JsonSchema)]
pub struct Verdict {
    pub ok: bool,
    pub summary: String,
}

/// One run: the exact config, the result payload and how it was judged.
#[derive(Clone, Debug, Serialize, Deserialize, JsonSchema)]
pub struct RunReport {
    pub command: String,
    pub config: ExperimentConfig,
    pub tool_version: String,
    pub duration_ms: u64,
    pub result: Value,
    pub verdict: Verdict,
}

impl RunReport {
    /// Pretty JSON with object keys sorted at every level.
    pub fn to_json(&self) -> Result<String, CliError> {
        let v = serde_json::to_value(self).map_err(|e| CliError::Io(e.to_string()))?;
        to_sorted_json(&v)
    }

    pub fn exit_code(&self) -> i32 {
        if self.verdict.ok {
            0
        } else {
            EXIT_VIOLATION
        }
    }
}

/// Runs `command` and wraps the outcome in a report.
pub fn run(command: &str, config: &ExperimentConfig) -> Result<(RunReport, Option<String>), CliError> {
    let start = Instant::now();
    let outcome = execute(command, config)?;
    let report = RunReport {
        command: command.to_string(),
        config: config.clone(),
        tool_version: env!("CARGO_PKG_VERSION").to_string(),
        duration_ms: start.elapsed().as_millis() as u64,
        result: outcome.result,
        verdict: Verdict {
            ok: outcome.ok,
            summary: outcome.summary,
        },
    };
    Ok((report, outcome.csv))
}

fn sort_keys(v: &Value) -> Value {
    match v {
        Value::Object(map) => {
            let mut keys: Vec<&String> = map.keys().collect();
            keys.sort();
            Value::Object(keys.into_iter().map(|k| (k.clone(), sort_keys(&map[k]))).collect())
        }
        Value::Array(items) => Value::Array(items.iter().map(sort_keys).collect()),
        other => other.clone(),
    }
}

pub fn to_sorted_json(v: &Value) -> Result<String, CliError> {
    let mut s = serde_json::to_string_pretty(&sort_keys(v)).map_err(|e| CliError::Io(e.to_string()))?;
    s.push('\n');
    Ok(s)
}
