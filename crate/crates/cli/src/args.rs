use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use coarse_lab::dimension::{CandidateRule, CoverWitness, RadiusRule};
use coarse_lab::functions::{FunctionSpec, Rational};
use coarse_lab::metric::ElementLiteral;
use serde::de::DeserializeOwned;

use crate::config::{ExperimentConfig, Params};
use crate::{run, CliError, EXIT_ERROR};

#[derive(Debug, Parser)]
#[command(name = "coarse-lab", version, about = "Word metrics, Hamming embeddings and covering witnesses on abelian groups")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Common {
    /// Experiment config (JSON).
    #[arg(long)]
    pub config: PathBuf,
    /// Write the report here instead of stdout.
    #[arg(long)]
    pub output: Option<PathBuf>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Cap on enumerated ball sizes.
    #[arg(long)]
    pub cap: Option<usize>,
}

fn json<T: DeserializeOwned>(s: &str) -> Result<T, String> {
    serde_json::from_str(s).map_err(|e| e.to_string())
}

fn element(s: &str) -> Result<ElementLiteral, String> {
    json(s)
}

/// A flag value given as a JSON document.
#[derive(Clone, Debug)]
pub struct Json<T>(pub T);

fn json_arg<T: DeserializeOwned>(s: &str) -> Result<Json<T>, String> {
    json(s).map(Json)
}

fn elements(s: &str) -> Result<Json<Vec<ElementLiteral>>, String> {
    json_arg(s)
}

fn rational(s: &str) -> Result<Rational, String> {
    s.parse().map_err(|e: coarse_lab::Error| e.to_string())
}

/// `singletons`, `balls[:radius]`, `bricks[:side[:stride]]` or a JSON rule.
fn candidate_rule(s: &str) -> Result<CandidateRule, String> {
    if s.trim_start().starts_with('{') {
        return json(s);
    }
    let mut parts = s.split(':');
    let name = parts.next().unwrap_or_default();
    let mut num = || -> Result<Option<u32>, String> {
        parts.next().map(|p| p.parse::<u32>().map_err(|e| format!("{p:?}: {e}"))).transpose()
    };
    match name {
        "singletons" => Ok(CandidateRule::Singletons),
        "balls" => Ok(CandidateRule::Balls { radius: num()? }),
        "bricks" | "intervals" => {
            let side = num()?;
            Ok(CandidateRule::Bricks { side, stride: num()? })
        }
        other => Err(format!("unknown candidate rule {other:?}")),
    }
}

/// A family name such as `parity`, or a JSON function spec.
fn function_spec(s: &str) -> Result<FunctionSpec, String> {
    if s.trim_start().starts_with('{') {
        return json(s);
    }
    json(&serde_json::json!({ "family": s }).to_string())
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Word distance between two elements.
    Dist {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_parser = element)]
        x: Option<ElementLiteral>,
        #[arg(long, value_parser = element)]
        y: Option<ElementLiteral>,
        #[arg(long)]
        max_r: Option<u32>,
    },
    /// The ball x + A_n.
    Ball {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_parser = element)]
        x: Option<ElementLiteral>,
        #[arg(long)]
        n: Option<u32>,
    },
    /// The set F + A_n.
    IdealBall {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_parser = elements)]
        centers: Option<Json<Vec<ElementLiteral>>>,
        #[arg(long)]
        n: Option<u32>,
    },
    /// Least n with S inside F + A_n for some F of at most k points.
    CoverRadius {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_parser = elements)]
        set: Option<Json<Vec<ElementLiteral>>>,
        #[arg(long)]
        k: Option<usize>,
        #[arg(long)]
        max_r: Option<u32>,
    },
    /// Interleave several sequences round-robin.
    Merge {
        #[command(flatten)]
        common: Common,
        /// JSON list of element lists.
        #[arg(long, value_parser = json_arg::<Vec<Vec<ElementLiteral>>>)]
        sequences: Option<Json<Vec<Vec<ElementLiteral>>>>,
    },
    /// Select a subsequence embedding the Hamming space.
    Embed {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        target_len: Option<usize>,
        #[arg(long)]
        scan_limit: Option<usize>,
        #[arg(long)]
        verify_support: Option<usize>,
        #[arg(long)]
        max_r: Option<u32>,
    },
    /// Check that subset sums of a sequence are isometric to the Hamming space.
    VerifyEmbed {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_parser = elements)]
        b_seq: Option<Json<Vec<ElementLiteral>>>,
        #[arg(long)]
        verify_support: Option<usize>,
        #[arg(long)]
        max_r: Option<u32>,
    },
    /// Distinct subset sums and the signed-sum condition.
    FsCheck {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_parser = elements)]
        b_seq: Option<Json<Vec<ElementLiteral>>>,
    },
    /// Validate a covering witness read from a JSON file.
    CoverVerify {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        witness: Option<PathBuf>,
    },
    /// Greedy covering witness.
    CoverGreedy {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        r: Option<u32>,
        #[arg(long, value_parser = candidate_rule)]
        candidates: Option<CandidateRule>,
        #[arg(long)]
        max_r: Option<u32>,
    },
    /// Exact minimum number of classes.
    MinColors {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        r: Option<u32>,
        #[arg(long, value_parser = candidate_rule)]
        candidates: Option<CandidateRule>,
        #[arg(long)]
        budget: Option<u64>,
        #[arg(long)]
        max_r: Option<u32>,
    },
    /// Class counts across scales.
    DimProfile {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_delimiter = ',')]
        r_list: Option<Vec<u32>>,
        #[arg(long, value_parser = candidate_rule)]
        candidates: Option<CandidateRule>,
        /// D(r) = d_slope * r + d_offset.
        #[arg(long)]
        d_slope: Option<u32>,
        #[arg(long)]
        d_offset: Option<u32>,
        #[arg(long)]
        budget: Option<u64>,
        /// Also write the profile table as CSV.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Oscillation of a function over radius-r balls.
    Osc {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_parser = function_spec)]
        function: Option<FunctionSpec>,
        #[arg(long)]
        r: Option<u32>,
        #[arg(long)]
        margin: Option<u32>,
    },
    /// Eventual-constancy index of a binary function.
    SoIndex {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_parser = function_spec)]
        function: Option<FunctionSpec>,
        #[arg(long)]
        r: Option<u32>,
        #[arg(long)]
        max_m: Option<u32>,
    },
    /// Staged evidence for the four function classes.
    Classify {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_parser = function_spec)]
        function: Option<FunctionSpec>,
        #[arg(long, value_delimiter = ',')]
        r_list: Option<Vec<u32>>,
        #[arg(long, value_parser = rational)]
        modulus_bound: Option<Rational>,
        #[arg(long, value_parser = rational)]
        epsilon: Option<Rational>,
        #[arg(long)]
        max_m: Option<u32>,
    },
}

fn set<T>(slot: &mut Option<T>, value: Option<T>) {
    if value.is_some() {
        *slot = value;
    }
}

fn set_json<T>(slot: &mut Option<T>, value: Option<Json<T>>) {
    set(slot, value.map(|j| j.0));
}

/// Everything a command line resolves to.
pub struct Invocation {
    pub command: &'static str,
    pub config: ExperimentConfig,
    pub csv: Option<PathBuf>,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Dist { .. } => "dist",
            Command::Ball { .. } => "ball",
            Command::IdealBall { .. } => "ideal-ball",
            Command::CoverRadius { .. } => "cover-radius",
            Command::Merge { .. } => "merge",
            Command::Embed { .. } => "embed",
            Command::VerifyEmbed { .. } => "verify-embed",
            Command::FsCheck { .. } => "fs-check",
            Command::CoverVerify { .. } => "cover-verify",
            Command::CoverGreedy { .. } => "cover-greedy",
            Command::MinColors { .. } => "min-colors",
            Command::DimProfile { .. } => "dim-profile",
            Command::Osc { .. } => "osc",
            Command::SoIndex { .. } => "so-index",
            Command::Classify { .. } => "classify",
        }
    }

    fn common(&self) -> &Common {
        match self {
            Command::Dist { common, .. }
            | Command::Ball { common, .. }
            | Command::IdealBall { common, .. }
            | Command::CoverRadius { common, .. }
            | Command::Merge { common, .. }
            | Command::Embed { common, .. }
            | Command::VerifyEmbed { common, .. }
            | Command::FsCheck { common, .. }
            | Command::CoverVerify { common, .. }
            | Command::CoverGreedy { common, .. }
            | Command::MinColors { common, .. }
            | Command::DimProfile { common, .. }
            | Command::Osc { common, .. }
            | Command::SoIndex { common, .. }
            | Command::Classify { common, .. } => common,
        }
    }

    /// Loads the config and folds the flags into it.
    pub fn resolve(self) -> Result<Invocation, CliError> {
        let name = self.name();
        let common = self.common();
        let mut config = ExperimentConfig::load(&common.config)?;
        set(&mut config.output, common.output.clone());
        if let Some(seed) = common.seed {
            config.seed = seed;
        }
        let p: &mut Params = &mut config.params;
        set(&mut p.cap, common.cap);
        let mut csv = None;
        match self {
            Command::Dist { x, y, max_r, .. } => {
                set(&mut p.x, x);
                set(&mut p.y, y);
                set(&mut p.max_r, max_r);
            }
            Command::Ball { x, n, .. } => {
                set(&mut p.x, x);
                set(&mut p.n, n);
            }
            Command::IdealBall { centers, n, .. } => {
                set_json(&mut p.centers, centers);
                set(&mut p.n, n);
            }
            Command::CoverRadius { set: s, k, max_r, .. } => {
                set_json(&mut p.set, s);
                set(&mut p.k, k);
                set(&mut p.max_r, max_r);
            }
            Command::Merge { sequences, .. } => set_json(&mut p.sequences, sequences),
            Command::Embed { target_len, scan_limit, verify_support, max_r, .. } => {
                set(&mut p.target_len, target_len);
                set(&mut p.scan_limit, scan_limit);
                set(&mut p.verify_support, verify_support);
                set(&mut p.max_r, max_r);
            }
            Command::VerifyEmbed { b_seq, verify_support, max_r, .. } => {
                set_json(&mut p.b_seq, b_seq);
                set(&mut p.verify_support, verify_support);
                set(&mut p.max_r, max_r);
            }
            Command::FsCheck { b_seq, .. } => set_json(&mut p.b_seq, b_seq),
            Command::CoverVerify { witness, .. } => {
                if let Some(path) = witness {
                    let text = std::fs::read_to_string(&path)
                        .map_err(|e| CliError::Io(format!("reading {}: {e}", path.display())))?;
                    let w: CoverWitness = serde_json::from_str(&text).map_err(|e| CliError::Config(e.to_string()))?;
                    p.witness = Some(w);
                }
            }
            Command::CoverGreedy { r, candidates, max_r, .. } => {
                set(&mut p.r, r);
                set(&mut p.candidates, candidates);
                set(&mut p.max_r, max_r);
            }
            Command::MinColors { r, candidates, budget, max_r, .. } => {
                set(&mut p.r, r);
                set(&mut p.candidates, candidates);
                set(&mut p.budget, budget);
                set(&mut p.max_r, max_r);
            }
            Command::DimProfile { r_list, candidates, d_slope, d_offset, budget, csv: path, .. } => {
                set(&mut p.r_list, r_list);
                set(&mut p.candidates, candidates);
                set(&mut p.budget, budget);
                if d_slope.is_some() || d_offset.is_some() {
                    let base = p.d_rule.unwrap_or(RadiusRule { slope: 1, offset: 0 });
                    p.d_rule = Some(RadiusRule {
                        slope: d_slope.unwrap_or(base.slope),
                        offset: d_offset.unwrap_or(base.offset),
                    });
                }
                csv = path;
            }
            Command::Osc { function, r, margin, .. } => {
                set(&mut p.function, function);
                set(&mut p.r, r);
                set(&mut p.margin, margin);
            }
            Command::SoIndex { function, r, max_m, .. } => {
                set(&mut p.function, function);
                set(&mut p.r, r);
                set(&mut p.max_m, max_m);
            }
            Command::Classify { function, r_list, modulus_bound, epsilon, max_m, .. } => {
                set(&mut p.function, function);
                set(&mut p.r_list, r_list);
                set(&mut p.modulus_bound, modulus_bound);
                set(&mut p.epsilon, epsilon);
                set(&mut p.max_m, max_m);
            }
        }
        Ok(Invocation { command: name, config, csv })
    }
}

fn write_file(path: &std::path::Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|e| CliError::Io(format!("writing {}: {e}", path.display())))
}

fn invoke(cli: Cli, stdout: &mut dyn Write) -> Result<i32, CliError> {
    let inv = cli.command.resolve()?;
    let (report, csv) = run(inv.command, &inv.config)?;
    let text = report.to_json()?;
    match &inv.config.output {
        Some(path) => write_file(path, &text)?,
        None => stdout.write_all(text.as_bytes()).map_err(|e| CliError::Io(e.to_string()))?,
    }
    if let (Some(path), Some(table)) = (inv.csv, csv) {
        write_file(&path, &table)?;
    }
    Ok(report.exit_code())
}

/// Parses `argv`, runs the command and returns the process exit status.
pub fn main_with(argv: impl IntoIterator<Item = std::ffi::OsString>, stdout: &mut dyn Write) -> i32 {
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_ERROR } else { 0 };
        }
    };
    match invoke(cli, stdout) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_ERROR
        }
    }
}
