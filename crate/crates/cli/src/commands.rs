use coarse_lab::dimension::{dim_profile, exact_min_classes, greedy_cover, verify_witness, RadiusRule};
use coarse_lab::functions::{
    classify, default_stages, eventual_constancy_index, oscillation, ClassifyOptions, WindowFunction,
};
use coarse_lab::hamming::{
    fs_strict_check, greedy_select, signed_sum_condition_check, verify_isometric_embedding, EmbeddingCertificate,
    FsStrictness, IsometryVerdict, SignedSumReport,
};
use coarse_lab::metric::{merge_sequences, DEFAULT_BALL_CAP};
use coarse_lab::{Element, GeneratorSystem, Window};
use schemars::JsonSchema;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::config::{need, ExperimentConfig};
use crate::CliError;

pub const COMMANDS: [&str; 15] = [
    "dist",
    "ball",
    "ideal-ball",
    "cover-radius",
    "merge",
    "embed",
    "verify-embed",
    "fs-check",
    "cover-verify",
    "cover-greedy",
    "min-colors",
    "dim-profile",
    "osc",
    "so-index",
    "classify",
];

const DEFAULT_MAX_R: u32 = 32;
const DEFAULT_BUDGET: u64 = 1_000_000;
const DEFAULT_MAX_M: u32 = 64;

#[derive(Clone, Debug, Serialize, Deserialize, JsonSchema)]
pub struct BallResult {
    pub size: usize,
    /// Sorted.
    pub elements: Vec<Element>,
}

impl BallResult {
    fn new(set: std::collections::BTreeSet<Element>) -> Self {
        BallResult {
            size: set.len(),
            elements: set.into_iter().collect(),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, JsonSchema)]
pub struct MergeResult {
    pub merged: Vec<Element>,
}

#[derive(Clone, Debug, Serialize, Deserialize, JsonSchema)]
pub struct EmbedResult {
    pub certificate: EmbeddingCertificate,
    /// Present when `verify_support` was given.
    pub isometry: Option<IsometryVerdict>,
}

#[derive(Clone, Debug, Serialize, Deserialize, JsonSchema)]
pub struct FsCheckResult {
    pub fs_strict: FsStrictness,
    pub signed_sums: SignedSumReport,
}

#[derive(Clone, Debug, Serialize, Deserialize, JsonSchema)]
pub struct SoIndexResult {
    pub r: u32,
    pub m: Option<u32>,
}

/// What a command produced.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub result: Value,
    /// False when the command ran and found a violation.
    pub ok: bool,
    pub summary: String,
    /// Tabular form, for commands that have one.
    pub csv: Option<String>,
}

impl Outcome {
    fn new(result: impl Serialize, ok: bool, summary: String) -> Result<Self, CliError> {
        Ok(Outcome {
            result: serde_json::to_value(result).map_err(|e| CliError::Io(e.to_string()))?,
            ok,
            summary,
            csv: None,
        })
    }
}

pub fn execute(command: &str, cfg: &ExperimentConfig) -> Result<Outcome, CliError> {
    let p = &cfg.params;
    let sys = cfg.system()?;
    let cap = p.cap.unwrap_or(DEFAULT_BALL_CAP);
    let max_r = p.max_r.unwrap_or(DEFAULT_MAX_R);
    match command {
        "dist" => {
            let x = cfg.element(&need(&p.x, "x")?)?;
            let y = cfg.element(&need(&p.y, "y")?)?;
            let d = sys.word_distance(&x, &y, max_r)?;
            Outcome::new(d, true, format!("d(x, y) = {d}"))
        }
        "ball" => {
            let x = cfg.element(&need(&p.x, "x")?)?;
            let n = need(&p.n, "n")?;
            let ball = sys.ball(&x, n, cap)?;
            let summary = format!("|x + A_{n}| = {}", ball.len());
            Outcome::new(BallResult::new(ball), true, summary)
        }
        "ideal-ball" => {
            let centers = cfg.elements(&need(&p.centers, "centers")?)?;
            let n = need(&p.n, "n")?;
            let ball = sys.ideal_ball(&centers, n, cap)?;
            let summary = format!("|F + A_{n}| = {}", ball.len());
            Outcome::new(BallResult::new(ball), true, summary)
        }
        "cover-radius" => {
            let set = cfg.elements(&need(&p.set, "set")?)?;
            let k = p.k.unwrap_or(1);
            let c = sys.cover_radius(&set, k, max_r, cap)?;
            let summary = format!("radius {} with {} centers", c.radius, c.centers.len());
            Outcome::new(c, true, summary)
        }
        "merge" => {
            let seqs: Vec<Vec<Element>> = need(&p.sequences, "sequences")?
                .iter()
                .map(|s| cfg.elements(s))
                .collect::<Result<_, _>>()?;
            let merged = merge_sequences(&seqs);
            let summary = format!("{} terms", merged.len());
            Outcome::new(MergeResult { merged }, true, summary)
        }
        "embed" => embed(cfg, &sys),
        "verify-embed" => {
            let b = cfg.elements(&need(&p.b_seq, "b_seq")?)?;
            let support = p.verify_support.unwrap_or(b.len());
            let verdict = verify_isometric_embedding(&b, &sys, support, p.max_r.unwrap_or(support as u32))?;
            let ok = verdict.is_verified();
            let summary = format!("{} pairs checked, verified = {ok}", verdict.pairs_checked);
            Outcome::new(verdict, ok, summary)
        }
        "fs-check" => {
            let b = cfg.elements(&need(&p.b_seq, "b_seq")?)?;
            let fs = fs_strict_check(&b, sys.spec())?;
            let signed = signed_sum_condition_check(&b, &sys)?;
            let ok = fs.strict && signed.holds;
            let summary = format!("fs-strict = {}, signed sums = {}", fs.strict, signed.holds);
            Outcome::new(FsCheckResult { fs_strict: fs, signed_sums: signed }, ok, summary)
        }
        "cover-verify" => {
            let w = cfg.window()?;
            let witness = need(&p.witness, "witness")?;
            let v = verify_witness(&w, &sys, &witness, cap)?;
            let summary = match &v.violation {
                None => format!("valid with {} classes", witness.class_count()),
                Some(viol) => format!("invalid: {viol:?}"),
            };
            let ok = v.valid;
            Outcome::new(v, ok, summary)
        }
        "cover-greedy" => {
            let w = cfg.window()?;
            let r = need(&p.r, "r")?;
            let cands = candidates(cfg, &w, &sys, cap)?;
            let wit = greedy_cover(&w, &sys, &cands, r, p.max_r.unwrap_or(64), cap)?;
            let summary = format!("{} classes, {} sets, D = {}", wit.class_count(), wit.set_count(), wit.d);
            Outcome::new(wit, true, summary)
        }
        "min-colors" => {
            let w = cfg.window()?;
            let r = need(&p.r, "r")?;
            let cands = candidates(cfg, &w, &sys, cap)?;
            let budget = p.budget.unwrap_or(DEFAULT_BUDGET);
            let e = exact_min_classes(&w, &sys, &cands, r, budget, p.max_r.unwrap_or(64), cap)?;
            let summary = format!("{} classes ({})", e.classes, if e.exact { "exact" } else { "upper bound" });
            Outcome::new(e, true, summary)
        }
        "dim-profile" => {
            let w = cfg.window()?;
            let rule = need(&p.candidates, "candidates")?;
            let r_list = need(&p.r_list, "r_list")?;
            let d_rule = p.d_rule.unwrap_or(RadiusRule { slope: 1, offset: 0 });
            let budget = p.budget.unwrap_or(DEFAULT_BUDGET);
            let profile = dim_profile(&w, &sys, &rule, &r_list, d_rule, budget, p.max_r.unwrap_or(64), cap)?;
            let csv = profile.to_csv();
            let mut out = Outcome::new(&profile, true, format!("{} scales", profile.rows.len()))?;
            out.csv = Some(csv);
            Ok(out)
        }
        "osc" => {
            let f = function(cfg)?;
            let r = need(&p.r, "r")?;
            let t = oscillation(&f, r, &sys, p.margin.unwrap_or(r), cap)?;
            let summary = format!("osc({r}) = {} over {} interior points", t.max, t.entries.len());
            Outcome::new(t, true, summary)
        }
        "so-index" => {
            let f = function(cfg)?;
            let r = need(&p.r, "r")?;
            let m = eventual_constancy_index(&f, r, &sys, p.max_m.unwrap_or(DEFAULT_MAX_M), cap)?;
            let summary = match m {
                Some(m) => format!("eventually constant off A_{m}"),
                None => "no eventual-constancy index in the window".to_string(),
            };
            Outcome::new(SoIndexResult { r, m }, true, summary)
        }
        "classify" => {
            let f = function(cfg)?;
            let r_list = need(&p.r_list, "r_list")?;
            let mut opts = ClassifyOptions::default();
            if let Some(b) = &p.modulus_bound {
                opts.modulus_bound = b.clone();
            }
            if let Some(e) = &p.epsilon {
                opts.epsilon = e.clone();
            }
            if let Some(m) = p.max_m {
                opts.max_m = m;
            }
            let stages = cfg.stages()?.unwrap_or_else(default_stages);
            let rep = classify(&f, &sys, &r_list, &stages, &opts, cap)?;
            let summary = format!(
                "macro-uniform: {}, slowly oscillating: {}",
                rep.macro_uniform.holds, rep.slowly_oscillating.holds
            );
            Outcome::new(rep, true, summary)
        }
        other => Err(CliError::Usage(format!("unknown command `{other}`"))),
    }
}

fn embed(cfg: &ExperimentConfig, sys: &GeneratorSystem) -> Result<Outcome, CliError> {
    let p = &cfg.params;
    let source = match &p.source {
        Some(s) => s.elements(&cfg.group)?,
        None => sys.generators().to_vec(),
    };
    let target = need(&p.target_len, "target_len")?;
    let mut cert = greedy_select(&source, sys, target, p.scan_limit.unwrap_or(usize::MAX))?;
    let mut isometry = None;
    if let Some(support) = p.verify_support {
        let verdict = verify_isometric_embedding(&cert.b_seq, sys, support, p.max_r.unwrap_or(support as u32))?;
        cert.record_isometry(&verdict);
        isometry = Some(verdict);
    }
    let ok = cert.verified;
    let summary = format!("selected {} terms at source indices {:?}, verified = {ok}", cert.b_seq.len(), cert.source_indices);
    Outcome::new(EmbedResult { certificate: cert, isometry }, ok, summary)
}

fn candidates(cfg: &ExperimentConfig, w: &Window, sys: &GeneratorSystem, cap: usize) -> Result<Vec<Vec<Element>>, CliError> {
    let p = &cfg.params;
    if let Some(sets) = &p.candidate_sets {
        return sets.iter().map(|s| cfg.elements(s)).collect();
    }
    Ok(need(&p.candidates, "candidates")?.build(w, sys, cap)?)
}

fn function(cfg: &ExperimentConfig) -> Result<WindowFunction, CliError> {
    let spec = need(&cfg.params.function, "function")?;
    Ok(WindowFunction::from_spec(cfg.window()?, &spec)?)
}
