//! Run configuration: a TOML file, overlaid by command-line flags.

use std::path::{Path, PathBuf};

use anyhow::{bail, Context};
use clap::Args;
use serde::{Deserialize, Serialize};

use dppr_core::baselines::{KatzConfig, KatzMode};
use dppr_core::dppr::SolverConfig;
use dppr_core::eval::{Method, MethodConfigs, Protocol, SweepAxis};
use dppr_core::generators::{BaParams, LfrParams};

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct InputConfig {
    /// Edge list file.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub edgelist: Option<PathBuf>,
    /// Bundled or `$DPPR_DATA_DIR` dataset name.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dataset: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ba: Option<BaParams>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lfr: Option<LfrParams>,
    /// `node community` file accompanying an external edge list.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub communities: Option<PathBuf>,
    /// Read edge list ids as dense 0-based indices.
    pub dense_ids: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OutputConfig {
    pub dir: PathBuf,
    /// Also write every scored pair to `scores.csv`.
    pub scores: bool,
}

impl Default for OutputConfig {
    fn default() -> Self {
        Self { dir: PathBuf::from("results"), scores: true }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub axis: SweepAxis,
    pub values: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub methods: Vec<Method>,
    pub input: InputConfig,
    pub solver: SolverConfig,
    pub katz: KatzConfig,
    pub protocol: Protocol,
    pub output: OutputConfig,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sweep: Option<SweepConfig>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            methods: Method::ALL.to_vec(),
            input: InputConfig::default(),
            solver: SolverConfig::default(),
            katz: KatzConfig::default(),
            protocol: Protocol::default(),
            output: OutputConfig::default(),
            sweep: None,
        }
    }
}

impl RunConfig {
    /// Parses a config file. Relative paths inside it are taken relative to
    /// the file's directory.
    pub fn load(path: &Path) -> anyhow::Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("cannot read config {}", path.display()))?;
        let mut cfg: RunConfig = toml::from_str(&text).with_context(|| format!("invalid config {}", path.display()))?;
        let base = path.parent().unwrap_or(Path::new(""));
        let rebase = |p: &mut PathBuf| {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        };
        if let Some(p) = cfg.input.edgelist.as_mut() {
            rebase(p);
        }
        if let Some(p) = cfg.input.communities.as_mut() {
            rebase(p);
        }
        rebase(&mut cfg.output.dir);
        Ok(cfg)
    }

    pub fn load_or_default(path: Option<&Path>) -> anyhow::Result<Self> {
        path.map_or_else(|| Ok(Self::default()), Self::load)
    }

    pub fn method_configs(&self) -> MethodConfigs {
        MethodConfigs { solver: self.solver, katz: self.katz }
    }

    /// Checks everything that can be checked before computing.
    pub fn validate(&self, need_input: bool) -> anyhow::Result<()> {
        if self.methods.is_empty() {
            bail!("methods: at least one method is required");
        }
        self.solver.validate().context("solver")?;
        self.katz.validate().context("katz")?;
        if !(self.protocol.fraction > 0.0 && self.protocol.fraction < 1.0) {
            bail!("protocol.fraction must lie in (0, 1), got {}", self.protocol.fraction);
        }
        if self.protocol.repeats == 0 {
            bail!("protocol.repeats must be at least 1");
        }
        if need_input {
            let i = &self.input;
            let sources = [i.edgelist.is_some(), i.dataset.is_some(), i.ba.is_some(), i.lfr.is_some()];
            match sources.iter().filter(|&&s| s).count() {
                1 => {}
                0 => bail!("input: one of edgelist, dataset, ba or lfr is required"),
                _ => bail!("input: edgelist, dataset, ba and lfr are mutually exclusive"),
            }
            for p in [&i.edgelist, &i.communities].into_iter().flatten() {
                if !p.is_file() {
                    bail!("input file {} does not exist", p.display());
                }
            }
            if let Some(ba) = &i.ba {
                ba.validate().context("input.ba")?;
            }
            if let Some(lfr) = &i.lfr {
                lfr.validate().context("input.lfr")?;
            }
        }
        if let Some(s) = &self.sweep {
            if s.values.is_empty() {
                bail!("sweep.values must not be empty");
            }
        }
        Ok(())
    }
}

/// Flags overriding the `[solver]` table.
#[derive(Debug, Clone, Default, Args)]
pub struct SolverArgs {
    /// Diffusion coefficient alpha.
    #[arg(long)]
    pub alpha: Option<f64>,
    /// PPR continuation probability beta.
    #[arg(long)]
    pub beta: Option<f64>,
    /// Score regularizer epsilon.
    #[arg(long)]
    pub epsilon: Option<f64>,
    #[arg(long)]
    pub ppr_tol: Option<f64>,
    #[arg(long)]
    pub ppr_max_iter: Option<usize>,
    #[arg(long)]
    pub cg_tol: Option<f64>,
    #[arg(long)]
    pub cg_max_iter: Option<usize>,
}

impl SolverArgs {
    pub fn apply(&self, s: &mut SolverConfig) {
        macro_rules! set {
            ($($f:ident),*) => { $( if let Some(v) = self.$f { s.$f = v; } )* };
        }
        set!(alpha, beta, epsilon, ppr_tol, ppr_max_iter, cg_tol);
        if let Some(v) = self.cg_max_iter {
            s.cg_max_iter = Some(v);
        }
    }
}

/// Flags overriding the `[katz]` table.
#[derive(Debug, Clone, Default, Args)]
pub struct KatzArgs {
    #[arg(long)]
    pub katz_damping: Option<f64>,
    #[arg(long)]
    pub katz_max_len: Option<usize>,
    /// `exact` or `truncated`.
    #[arg(long, value_parser = parse_katz_mode)]
    pub katz_mode: Option<KatzMode>,
}

fn parse_katz_mode(s: &str) -> Result<KatzMode, String> {
    match s {
        "exact" => Ok(KatzMode::Exact),
        "truncated" => Ok(KatzMode::Truncated),
        _ => Err(format!("expected exact or truncated, got {s:?}")),
    }
}

impl KatzArgs {
    pub fn apply(&self, k: &mut KatzConfig) {
        if let Some(v) = self.katz_damping {
            k.damping = v;
        }
        if let Some(v) = self.katz_max_len {
            k.max_len = v;
        }
        if let Some(v) = self.katz_mode {
            k.mode = v;
        }
    }
}

/// Flags overriding the protocol, methods and output tables.
#[derive(Debug, Clone, Default, Args)]
pub struct RunArgs {
    /// Holdout fraction.
    #[arg(long)]
    pub fraction: Option<f64>,
    #[arg(long)]
    pub repeats: Option<usize>,
    /// Base seed; repeat r uses seed + r.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Comma-separated list of dppr, cn, aa, katz.
    #[arg(long, value_delimiter = ',')]
    pub methods: Option<Vec<Method>>,
    /// Output directory.
    #[arg(long, short)]
    pub output: Option<PathBuf>,
    /// Edge list to use instead of the configured input.
    #[arg(long)]
    pub graph: Option<PathBuf>,
    /// Bundled dataset to use instead of the configured input.
    #[arg(long, conflicts_with = "graph")]
    pub dataset: Option<String>,
    /// Skip writing scores.csv.
    #[arg(long)]
    pub no_scores: bool,
}

impl RunArgs {
    pub fn apply(&self, cfg: &mut RunConfig) {
        if let Some(v) = self.fraction {
            cfg.protocol.fraction = v;
        }
        if let Some(v) = self.repeats {
            cfg.protocol.repeats = v;
        }
        if let Some(v) = self.seed {
            cfg.protocol.seed = v;
        }
        if let Some(v) = &self.methods {
            cfg.methods = v.clone();
        }
        if let Some(v) = &self.output {
            cfg.output.dir = v.clone();
        }
        if self.graph.is_some() || self.dataset.is_some() {
            cfg.input = InputConfig {
                edgelist: self.graph.clone(),
                dataset: self.dataset.clone(),
                dense_ids: cfg.input.dense_ids,
                ..InputConfig::default()
            };
        }
        if self.no_scores {
            cfg.output.scores = false;
        }
    }
}
