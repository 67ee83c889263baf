//! JSON Schemas for configs, reports and per-command result payloads.

use coarse_lab::dimension::{CoverWitness, DimProfile, ExactClasses, WitnessVerdict};
use coarse_lab::functions::{ClassReport, OscTable};
use coarse_lab::hamming::IsometryVerdict;
use coarse_lab::metric::CoverRadius;
use coarse_lab::DistanceResult;
use schemars::{schema_for, Schema};

use crate::commands::{BallResult, EmbedResult, FsCheckResult, MergeResult, SoIndexResult};
use crate::{ExperimentConfig, RunReport};

/// Schema for the `result` payload of `command`.
pub fn result_schema(command: &str) -> Option<Schema> {
    Some(match command {
        "dist" => schema_for!(DistanceResult),
        "ball" | "ideal-ball" => schema_for!(BallResult),
        "cover-radius" => schema_for!(CoverRadius),
        "merge" => schema_for!(MergeResult),
        "embed" => schema_for!(EmbedResult),
        "verify-embed" => schema_for!(IsometryVerdict),
        "fs-check" => schema_for!(FsCheckResult),
        "cover-verify" => schema_for!(WitnessVerdict),
        "cover-greedy" => schema_for!(CoverWitness),
        "min-colors" => schema_for!(ExactClasses),
        "dim-profile" => schema_for!(DimProfile),
        "osc" => schema_for!(OscTable),
        "so-index" => schema_for!(SoIndexResult),
        "classify" => schema_for!(ClassReport),
        _ => return None,
    })
}

/// Every published schema as `(file name, pretty JSON)`.
pub fn all() -> Vec<(String, String)> {
    let mut out = vec![
        ("config.schema.json".to_string(), schema_for!(ExperimentConfig)),
        ("report.schema.json".to_string(), schema_for!(RunReport)),
    ];
    for cmd in crate::COMMANDS {
        let schema = result_schema(cmd).expect("every command has a result schema");
        out.push((format!("result-{cmd}.schema.json"), schema));
    }
    out.into_iter()
        .map(|(name, schema)| {
            let mut text = serde_json::to_string_pretty(&schema).expect("schemas serialize");
            text.push('\n');
            (name, text)
        })
        .collect()
}
