use std::path::{Path, PathBuf};

use coarse_lab::dimension::{CandidateRule, CoverWitness, RadiusRule};
use coarse_lab::functions::{FunctionSpec, Rational, Stage};
use coarse_lab::metric::{ElementLiteral, GeneratorSystem};
use coarse_lab::{Element, GeneratorSpec, GroupSpec, Window, WindowShape};
use schemars::JsonSchema;
use serde::{Deserialize, Serialize};

use crate::CliError;

/// Everything needed to reproduce one run.
#[derive(Clone, Debug, Serialize, Deserialize, JsonSchema)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub group: GroupSpec,
    pub generators: GeneratorSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub window: Option<WindowShape>,
    #[serde(default)]
    pub params: Params,
    /// Report destination; stdout when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<PathBuf>,
    #[serde(default)]
    pub seed: u64,
}

/// A bornologous stage as written in configs.
#[derive(Clone, Debug, Serialize, Deserialize, JsonSchema)]
#[serde(deny_unknown_fields)]
pub struct StageLiteral {
    pub n: u32,
    pub centers: Vec<ElementLiteral>,
}

/// Command parameters. Each command reads the fields it needs; flags on the
/// command line override values given here.
#[derive(Clone, Debug, Default, Serialize, Deserialize, JsonSchema)]
#[serde(deny_unknown_fields)]
pub struct Params {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub x: Option<ElementLiteral>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub y: Option<ElementLiteral>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_r: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cap: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub set: Option<Vec<ElementLiteral>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub centers: Option<Vec<ElementLiteral>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sequences: Option<Vec<Vec<ElementLiteral>>>,
    /// Sequence to select from in `embed`; the generators when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub source: Option<GeneratorSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target_len: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scan_limit: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub verify_support: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b_seq: Option<Vec<ElementLiteral>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<CoverWitness>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub candidates: Option<CandidateRule>,
    /// Explicit candidate sets; take precedence over `candidates`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub candidate_sets: Option<Vec<Vec<ElementLiteral>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r_list: Option<Vec<u32>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub d_rule: Option<RadiusRule>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub budget: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub function: Option<FunctionSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub margin: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_m: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stages: Option<Vec<StageLiteral>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub modulus_bound: Option<Rational>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<Rational>,
}

impl ExperimentConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Io(format!("reading {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::Config(e.to_string()))
    }

    pub fn system(&self) -> Result<GeneratorSystem, CliError> {
        Ok(self.generators.build(&self.group)?)
    }

    pub fn window(&self) -> Result<Window, CliError> {
        let shape = self
            .window
            .clone()
            .ok_or_else(|| CliError::Config("this command needs a `window`".into()))?;
        Ok(self.group.window(shape)?)
    }

    pub fn element(&self, lit: &ElementLiteral) -> Result<Element, CliError> {
        Ok(lit.resolve(&self.group)?)
    }

    pub fn elements(&self, lits: &[ElementLiteral]) -> Result<Vec<Element>, CliError> {
        lits.iter().map(|l| self.element(l)).collect()
    }

    pub fn stages(&self) -> Result<Option<Vec<Stage>>, CliError> {
        self.params
            .stages
            .as_ref()
            .map(|list| {
                list.iter()
                    .map(|s| {
                        Ok(Stage {
                            n: s.n,
                            centers: self.elements(&s.centers)?,
                        })
                    })
                    .collect()
            })
            .transpose()
    }
}

/// Unwraps a required parameter.
pub fn need<T: Clone>(value: &Option<T>, name: &str) -> Result<T, CliError> {
    value
        .clone()
        .ok_or_else(|| CliError::Config(format!("missing parameter `{name}`")))
}
