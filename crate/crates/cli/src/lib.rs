//! `dppr`: command-line front end for scoring, benchmarking and sweeps.

pub mod config;

use std::ffi::OsString;
use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{anyhow, Context};
use clap::{Parser, Subcommand};
use serde::Serialize;
use serde_json::json;

use dppr_core::cache::{self, DiskCache};
use dppr_core::datasets;
use dppr_core::diffusion::{diffuse_trace, DEFAULT_TIMES};
use dppr_core::dppr::{dppr_score_pairs_cached, PairScore};
use dppr_core::eval::{self, holdout_split, run_benchmark, summarize, sweep, sweep_table, GraphSource, MethodSummary};
use dppr_core::generators::{generate_ba, generate_lfr, mixing_fractions, parse_communities, BaParams, LfrParams};
use dppr_core::graph::{read_edgelist, ParseOptions};
use dppr_core::ppr::ppr_solve;
use dppr_core::report::{self, Block};
use dppr_core::{Error, Graph};

use config::{InputConfig, KatzArgs, RunArgs, RunConfig, SolverArgs, SweepConfig};

#[derive(Parser)]
#[command(name = "dppr", version, about = "Link prediction with diffusion distances between Personalized PageRank vectors")]
struct Cli {
    /// Worker threads (default: all cores). Results do not depend on it.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Print the resolved configuration as TOML and exit.
    #[arg(long, global = true)]
    show_config: bool,
    /// More logging (repeatable).
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    verbose: u8,
    #[command(subcommand)]
    command: Option<Command>,
}

#[derive(Subcommand)]
enum Command {
    /// Score one node pair.
    Score {
        /// Edge list file (or use --dataset).
        #[arg(long, required_unless_present = "dataset")]
        graph: Option<PathBuf>,
        #[arg(long, conflicts_with = "graph")]
        dataset: Option<String>,
        u: String,
        v: String,
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        dense_ids: bool,
        #[command(flatten)]
        solver: SolverArgs,
    },
    /// Dump the PPR vector of one node as CSV.
    Ppr {
        #[arg(long, required_unless_present = "dataset")]
        graph: Option<PathBuf>,
        #[arg(long, conflicts_with = "graph")]
        dataset: Option<String>,
        node: String,
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        dense_ids: bool,
        /// Output file (default: stdout).
        #[arg(long, short)]
        output: Option<PathBuf>,
        #[command(flatten)]
        solver: SolverArgs,
    },
    /// Run the holdout benchmark described by a config file.
    Benchmark {
        #[arg(long)]
        config: Option<PathBuf>,
        #[command(flatten)]
        run: RunArgs,
        #[command(flatten)]
        solver: SolverArgs,
        #[command(flatten)]
        katz: KatzArgs,
    },
    /// Run one benchmark per value of a generator or solver parameter.
    Sweep {
        #[arg(long)]
        config: Option<PathBuf>,
        /// ba_m, lfr_mu, alpha or beta.
        #[arg(long)]
        axis: Option<eval::SweepAxis>,
        /// Comma-separated axis values.
        #[arg(long, value_delimiter = ',')]
        values: Option<Vec<f64>>,
        #[command(flatten)]
        run: RunArgs,
        #[command(flatten)]
        solver: SolverArgs,
        #[command(flatten)]
        katz: KatzArgs,
    },
    /// Generate a synthetic network.
    Generate {
        #[command(subcommand)]
        kind: GenerateKind,
    },
    /// Write a holdout split: train edges, positive and negative pairs.
    Split {
        #[arg(long, required_unless_present = "dataset")]
        graph: Option<PathBuf>,
        #[arg(long, conflicts_with = "graph")]
        dataset: Option<String>,
        #[arg(long, default_value_t = 0.1)]
        fraction: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        dense_ids: bool,
        /// Output directory.
        #[arg(long, short)]
        output: PathBuf,
    },
    /// Heat diffusion of a unit mass placed on one node, as `t,node,value` CSV.
    Diffuse {
        #[arg(long, required_unless_present = "dataset")]
        graph: Option<PathBuf>,
        #[arg(long, conflicts_with = "graph")]
        dataset: Option<String>,
        /// Node holding the initial mass.
        #[arg(long)]
        source: String,
        /// Comma-separated, ascending snapshot times.
        #[arg(long, value_delimiter = ',')]
        times: Option<Vec<f64>>,
        #[arg(long, default_value_t = 1000)]
        steps_per_unit: usize,
        #[arg(long)]
        dense_ids: bool,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum GenerateKind {
    /// Barabási–Albert preferential attachment.
    Ba {
        #[arg(long, default_value_t = 500)]
        n: usize,
        #[arg(long, default_value_t = 2)]
        m: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, short)]
        output: PathBuf,
    },
    /// LFR benchmark graph with planted communities.
    Lfr {
        #[arg(long, default_value_t = 250)]
        n: usize,
        #[arg(long, default_value_t = 0.3)]
        mu: f64,
        #[arg(long, default_value_t = 3.0)]
        tau1: f64,
        #[arg(long, default_value_t = 1.5)]
        tau2: f64,
        #[arg(long, default_value_t = 5.0)]
        avg_degree: f64,
        #[arg(long, default_value_t = 20)]
        min_community: usize,
        #[arg(long)]
        max_degree: Option<usize>,
        #[arg(long)]
        max_community: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, short)]
        output: PathBuf,
        /// Community file (default: `<output>.communities`).
        #[arg(long)]
        communities: Option<PathBuf>,
    },
}

/// A failure and the exit code it maps to.
enum Failure {
    /// Bad invocation, config or input: exit 2.
    Usage(anyhow::Error),
    /// The computation itself failed: exit 1.
    Compute(anyhow::Error),
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Compute(e)
    }
}

fn usage(e: impl Into<anyhow::Error>) -> Failure {
    Failure::Usage(e.into())
}

/// Splits core errors into usage and computation failures.
fn classify(e: Error) -> Failure {
    match e {
        Error::Parse { .. }
        | Error::EmptyInput
        | Error::NodeOutOfRange { .. }
        | Error::UnknownLabel(_)
        | Error::InvalidParameter(_)
        | Error::SpectralGuard { .. }
        | Error::Io(_) => Failure::Usage(e.into()),
        _ => Failure::Compute(e.into()),
    }
}

type CmdResult = Result<ExitCode, Failure>;

/// Runs the command line given in `args` (program name first) and returns
/// the process exit code.
pub fn main_from<I, T>(args: I) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(e.exit_code().clamp(0, 255) as u8);
        }
    };
    let level = match cli.verbose {
        0 => "warn",
        1 => "info",
        _ => "debug",
    };
    let _ = env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).try_init();

    let outcome = match cli.jobs {
        None => run(cli),
        Some(0) => Err(usage(anyhow!("--jobs must be at least 1"))),
        Some(jobs) => match rayon::ThreadPoolBuilder::new().num_threads(jobs).build() {
            Ok(pool) => pool.install(|| run(cli)),
            Err(e) => Err(Failure::Compute(anyhow!("cannot start worker pool: {e}"))),
        },
    };
    match outcome {
        Ok(code) => code,
        Err(Failure::Usage(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
        Err(Failure::Compute(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: Cli) -> CmdResult {
    let show = cli.show_config;
    let Some(command) = cli.command else {
        if show {
            return show_config(&RunConfig::default());
        }
        return Err(usage(anyhow!("no subcommand given; see `dppr --help`")));
    };
    match command {
        Command::Score { graph, dataset, u, v, config, dense_ids, solver } => {
            let mut cfg = RunConfig::load_or_default(config.as_deref()).map_err(usage)?;
            solver.apply(&mut cfg.solver);
            if show {
                return show_config(&cfg);
            }
            cfg.solver.validate().map_err(classify)?;
            let g = load_graph(&single_input(graph, dataset, dense_ids))?;
            cmd_score(&g, &u, &v, &cfg)
        }
        Command::Ppr { graph, dataset, node, config, dense_ids, output, solver } => {
            let mut cfg = RunConfig::load_or_default(config.as_deref()).map_err(usage)?;
            solver.apply(&mut cfg.solver);
            if show {
                return show_config(&cfg);
            }
            cfg.solver.validate().map_err(classify)?;
            let input = single_input(graph, dataset, dense_ids);
            let g = load_graph(&input)?;
            cmd_ppr(&g, &node, &cfg, &input, output.as_deref())
        }
        Command::Benchmark { config, run, solver, katz } => {
            let mut cfg = RunConfig::load_or_default(config.as_deref()).map_err(usage)?;
            run.apply(&mut cfg);
            solver.apply(&mut cfg.solver);
            katz.apply(&mut cfg.katz);
            if show {
                return show_config(&cfg);
            }
            cfg.validate(true).map_err(usage)?;
            cmd_benchmark(&cfg)
        }
        Command::Sweep { config, axis, values, run, solver, katz } => {
            let mut cfg = RunConfig::load_or_default(config.as_deref()).map_err(usage)?;
            run.apply(&mut cfg);
            solver.apply(&mut cfg.solver);
            katz.apply(&mut cfg.katz);
            match (axis, values, cfg.sweep.as_mut()) {
                (Some(axis), Some(values), _) => cfg.sweep = Some(SweepConfig { axis, values }),
                (Some(axis), None, Some(s)) => s.axis = axis,
                (None, Some(values), Some(s)) => s.values = values,
                (None, None, Some(_)) => {}
                _ => return Err(usage(anyhow!("sweep needs an axis and values (flags or a [sweep] table)"))),
            }
            if show {
                return show_config(&cfg);
            }
            cfg.validate(true).map_err(usage)?;
            cmd_sweep(&cfg)
        }
        Command::Generate { kind } => {
            if show {
                return show_config(&RunConfig::default());
            }
            cmd_generate(kind)
        }
        Command::Split { graph, dataset, fraction, seed, dense_ids, output } => {
            let input = single_input(graph, dataset, dense_ids);
            let g = load_graph(&input)?;
            cmd_split(&g, &input, fraction, seed, &output)
        }
        Command::Diffuse { graph, dataset, source, times, steps_per_unit, dense_ids, output } => {
            let input = single_input(graph, dataset, dense_ids);
            let g = load_graph(&input)?;
            let times = times.unwrap_or_else(|| DEFAULT_TIMES.to_vec());
            cmd_diffuse(&g, &input, &source, &times, steps_per_unit, output.as_deref())
        }
    }
}

fn show_config(cfg: &RunConfig) -> CmdResult {
    let text = toml::to_string_pretty(cfg).context("cannot render config")?;
    print!("{text}");
    Ok(ExitCode::SUCCESS)
}

fn single_input(graph: Option<PathBuf>, dataset: Option<String>, dense_ids: bool) -> InputConfig {
    InputConfig { edgelist: graph, dataset, dense_ids, ..InputConfig::default() }
}

fn parse_options(input: &InputConfig) -> ParseOptions {
    ParseOptions { dense_ids: input.dense_ids, ..ParseOptions::default() }
}

fn load_graph(input: &InputConfig) -> Result<Graph, Failure> {
    if let Some(path) = &input.edgelist {
        if !path.is_file() {
            return Err(usage(anyhow!("input file {} does not exist", path.display())));
        }
        let parsed = read_edgelist(path, parse_options(input))
            .map_err(|e| usage(anyhow::Error::from(e).context(format!("cannot read {}", path.display()))))?;
        return Ok(parsed.graph);
    }
    if let Some(name) = &input.dataset {
        return match datasets::load(name).map_err(classify)? {
            Some(g) => Ok(g),
            None => Err(usage(anyhow!("unknown dataset {name:?}; `karate` is bundled, others are read from ${}", datasets::DATA_DIR_ENV))),
        };
    }
    Err(usage(anyhow!("no input graph given")))
}

fn graph_source(input: &InputConfig) -> Result<(GraphSource, Option<Graph>), Failure> {
    if let Some(p) = input.ba {
        return Ok((GraphSource::Ba(p), None));
    }
    if let Some(p) = input.lfr {
        return Ok((GraphSource::Lfr(p), None));
    }
    let g = load_graph(input)?;
    Ok((GraphSource::Fixed(g.clone()), Some(g)))
}

fn graph_info(g: &Graph) -> serde_json::Value {
    json!({
        "nodes": g.node_count(),
        "edges": g.edge_count(),
        "average_degree": g.average_degree(),
        "fingerprint": g.fingerprint(),
    })
}

fn node(g: &Graph, label: &str) -> Result<usize, Failure> {
    g.node_index(label).map_err(classify)
}

/// JSON sidecar recording how an output file was produced.
fn write_sidecar(path: &Path, command: &str, details: serde_json::Value) -> Result<(), Failure> {
    let meta = json!({
        "tool": "dppr",
        "version": env!("CARGO_PKG_VERSION"),
        "command": command,
        "file": path.file_name().map(|f| f.to_string_lossy().into_owned()),
        "details": details,
    });
    report::write_json(&report::sidecar_path(path), &meta).map_err(classify)
}

fn create(path: &Path) -> Result<BufWriter<File>, Failure> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).with_context(|| format!("cannot create {}", dir.display())).map_err(usage)?;
    }
    let f = File::create(path).with_context(|| format!("cannot create {}", path.display())).map_err(usage)?;
    Ok(BufWriter::new(f))
}

fn cmd_score(g: &Graph, u: &str, v: &str, cfg: &RunConfig) -> CmdResult {
    let (iu, iv) = (node(g, u)?, node(g, v)?);
    let disk = DiskCache::from_env();
    let score: PairScore = dppr_score_pairs_cached(g, &[(iu, iv)], &cfg.solver, disk.as_ref())
        .pop()
        .expect("one pair in, one result out")
        .map_err(classify)?;
    let line = json!({
        "u": u,
        "v": v,
        "distance": score.distance,
        "score": score.score,
        "solver": cfg.solver,
    });
    println!("{line}");
    Ok(ExitCode::SUCCESS)
}

fn cmd_ppr(g: &Graph, label: &str, cfg: &RunConfig, input: &InputConfig, output: Option<&Path>) -> CmdResult {
    let u = node(g, label)?;
    let ppr_cfg = cfg.solver.ppr();
    let disk = DiskCache::from_env();
    let key = cache::CacheKey::new(g, u, &ppr_cfg);
    let values = match disk.as_ref().and_then(|d| d.load(&key, g.node_count())) {
        Some(hit) => hit.values,
        None => {
            let s = ppr_solve(g, u, &ppr_cfg).map_err(classify)?;
            if let Some(d) = &disk {
                if let Err(e) = d.store(&key, &s.values) {
                    log::warn!("could not cache PPR vector: {e}");
                }
            }
            s.values
        }
    };
    match output {
        Some(path) => {
            let mut w = create(path)?;
            cache::write_csv(&mut w, g, &values).map_err(classify)?;
            w.flush().context("write failed")?;
            write_sidecar(path, "ppr", json!({ "input": input, "node": label, "ppr": ppr_cfg, "graph": graph_info(g) }))?;
        }
        None => cache::write_csv(io::stdout().lock(), g, &values).map_err(classify)?,
    }
    Ok(ExitCode::SUCCESS)
}

fn write_csv_file(path: &Path, f: impl FnOnce(&mut BufWriter<File>) -> dppr_core::Result<()>) -> Result<(), Failure> {
    let mut w = create(path)?;
    f(&mut w).map_err(classify)?;
    w.flush().with_context(|| format!("cannot write {}", path.display()))?;
    Ok(())
}

/// Writes results, timings and (optionally) scores, each with a sidecar.
fn write_tables(cfg: &RunConfig, command: &str, blocks: &[Block<'_>], details: &serde_json::Value) -> Result<(), Failure> {
    let dir = &cfg.output.dir;
    let results = dir.join("results.csv");
    write_csv_file(&results, |w| report::write_results(w, blocks))?;
    write_sidecar(&results, command, details.clone())?;
    let timings = dir.join("timings.csv");
    write_csv_file(&timings, |w| report::write_timings(w, blocks))?;
    write_sidecar(&timings, command, details.clone())?;
    if cfg.output.scores {
        let scores = dir.join("scores.csv");
        write_csv_file(&scores, |w| report::write_scores(w, blocks))?;
        write_sidecar(&scores, command, details.clone())?;
    }
    Ok(())
}

fn print_summary(title: &str, summary: &[MethodSummary]) {
    println!("{title}");
    println!("  {:<6} {:>8} {:>8} {:>5} {:>7} {:>12}", "method", "mean", "std", "ok", "failed", "ms/repeat");
    for s in summary {
        println!("  {:<6} {:>8.4} {:>8.4} {:>5} {:>7} {:>12.1}", s.method.name(), s.mean, s.std, s.succeeded, s.failed, s.mean_runtime_ms);
    }
}

fn cmd_benchmark(cfg: &RunConfig) -> CmdResult {
    let (source, fixed) = graph_source(&cfg.input)?;
    let communities = match (&cfg.input.communities, &fixed) {
        (Some(path), Some(g)) => {
            let text = fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display())).map_err(usage)?;
            let comm = parse_communities(&text, g).map_err(classify)?;
            let mix = mixing_fractions(g, &comm);
            Some(json!({ "file": path, "mean_mixing": mix.iter().sum::<f64>() / mix.len().max(1) as f64 }))
        }
        _ => None,
    };
    let disk = DiskCache::from_env();
    let start = Instant::now();
    let results = run_benchmark(&source, &cfg.methods, &cfg.protocol, &cfg.method_configs(), disk.as_ref()).map_err(classify)?;
    let wall_ms = start.elapsed().as_secs_f64() * 1e3;
    let summary = summarize(&results);

    let details = json!({
        "config": cfg,
        "split_seeds": (0..cfg.protocol.repeats).map(|r| cfg.protocol.split_seed(r)).collect::<Vec<_>>(),
        "graph": fixed.as_ref().map(graph_info),
    });
    let mut block = Block::plain(&results);
    if let Some(g) = &fixed {
        block = block.with_labels(g);
    }
    write_tables(cfg, "benchmark", &[block], &details)?;

    #[derive(Serialize)]
    struct RepeatEntry<'a> {
        method: &'a str,
        repeat: usize,
        seed: u64,
        aupr: Option<f64>,
        error: Option<&'a str>,
        runtime_ms: f64,
        config: &'a serde_json::Value,
    }
    let repeats: Vec<RepeatEntry> = results
        .iter()
        .map(|r| RepeatEntry {
            method: r.method.name(),
            repeat: r.repeat,
            seed: r.seed,
            aupr: r.aupr,
            error: r.error.as_deref(),
            runtime_ms: r.runtime_ms,
            config: &r.config,
        })
        .collect();
    let summary_json = json!({
        "config": cfg,
        "graph": fixed.as_ref().map(graph_info),
        "communities": communities,
        "summary": summary,
        "repeats": repeats,
        "wall_ms": wall_ms,
    });
    report::write_json(&cfg.output.dir.join("summary.json"), &summary_json).map_err(classify)?;

    print_summary(&format!("benchmark: {} repeats, holdout {}", cfg.protocol.repeats, cfg.protocol.fraction), &summary);
    println!("results written to {}", cfg.output.dir.display());
    let failed: usize = summary.iter().map(|s| s.failed).sum();
    if failed > 0 {
        eprintln!("error: {failed} method runs failed; see results.csv");
        return Ok(ExitCode::from(1));
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_sweep(cfg: &RunConfig) -> CmdResult {
    let spec = cfg.sweep.as_ref().expect("checked by caller");
    let (source, fixed) = graph_source(&cfg.input)?;
    let disk = DiskCache::from_env();
    let start = Instant::now();
    let cells =
        sweep(spec.axis, &spec.values, &source, &cfg.methods, &cfg.protocol, &cfg.method_configs(), disk.as_ref()).map_err(classify)?;
    let wall_ms = start.elapsed().as_secs_f64() * 1e3;

    let details = json!({
        "config": cfg,
        "split_seeds": (0..cfg.protocol.repeats).map(|r| cfg.protocol.split_seed(r)).collect::<Vec<_>>(),
        "graph": fixed.as_ref().map(graph_info),
    });
    let blocks: Vec<Block> = cells
        .iter()
        .map(|c| match &fixed {
            Some(g) => Block::cell(c).with_labels(g),
            None => Block::cell(c),
        })
        .collect();
    write_tables(cfg, "sweep", &blocks, &details)?;
    let rows = sweep_table(&cells);
    let table = cfg.output.dir.join("sweep.csv");
    write_csv_file(&table, |w| report::write_sweep_table(w, &rows))?;
    write_sidecar(&table, "sweep", details)?;

    let cell_json: Vec<serde_json::Value> =
        cells.iter().map(|c| json!({ "value": c.value, "summary": c.summary, "error": c.error })).collect();
    report::write_json(
        &cfg.output.dir.join("summary.json"),
        &json!({ "config": cfg, "graph": fixed.as_ref().map(graph_info), "cells": cell_json, "wall_ms": wall_ms }),
    )
    .map_err(classify)?;

    let mut failed = 0;
    for c in &cells {
        match &c.error {
            Some(e) => {
                println!("{} = {}: failed: {e}", spec.axis, c.value);
                failed += 1;
            }
            None => {
                print_summary(&format!("{} = {}", spec.axis, c.value), &c.summary);
                failed += c.summary.iter().map(|s| s.failed).sum::<usize>();
            }
        }
    }
    println!("results written to {}", cfg.output.dir.display());
    if failed > 0 {
        eprintln!("error: {failed} cells or method runs failed");
        return Ok(ExitCode::from(1));
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_generate(kind: GenerateKind) -> CmdResult {
    match kind {
        GenerateKind::Ba { n, m, seed, output } => {
            let params = BaParams { n, m, seed };
            let g = generate_ba(&params).map_err(classify)?;
            write_csv_file(&output, |w| g.write_edgelist(w))?;
            write_sidecar(&output, "generate ba", json!({ "params": params, "graph": graph_info(&g) }))?;
            println!("wrote {} ({} nodes, {} edges)", output.display(), g.node_count(), g.edge_count());
        }
        GenerateKind::Lfr { n, mu, tau1, tau2, avg_degree, min_community, max_degree, max_community, seed, output, communities } => {
            let params = LfrParams { n, tau1, tau2, mu, avg_degree, min_community, max_degree, max_community, seed };
            let out = generate_lfr(&params).map_err(classify)?;
            let comm_path = communities.unwrap_or_else(|| {
                let mut name = output.file_name().unwrap_or_default().to_os_string();
                name.push(".communities");
                output.with_file_name(name)
            });
            write_csv_file(&output, |w| out.graph.write_edgelist(w))?;
            write_csv_file(&comm_path, |w| out.write_communities(w))?;
            let mix = mixing_fractions(&out.graph, &out.communities);
            let details = json!({
                "params": params,
                "graph": graph_info(&out.graph),
                "communities": out.communities.iter().max().map_or(0, |c| c + 1),
                "mean_mixing": mix.iter().sum::<f64>() / mix.len().max(1) as f64,
            });
            write_sidecar(&output, "generate lfr", details.clone())?;
            write_sidecar(&comm_path, "generate lfr", details)?;
            println!(
                "wrote {} ({} nodes, {} edges) and {}",
                output.display(),
                out.graph.node_count(),
                out.graph.edge_count(),
                comm_path.display()
            );
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_split(g: &Graph, input: &InputConfig, fraction: f64, seed: u64, dir: &Path) -> CmdResult {
    let split = holdout_split(g, fraction, seed).map_err(classify)?;
    let details = json!({ "input": input, "fraction": fraction, "seed": seed, "graph": graph_info(g) });

    let train = dir.join("train.edges");
    write_csv_file(&train, |w| split.train.write_labelled_edgelist(w))?;
    write_sidecar(&train, "split", details.clone())?;
    for (name, pairs) in [("positives.csv", &split.positives), ("negatives.csv", &split.negatives)] {
        let path = dir.join(name);
        write_csv_file(&path, |w| {
            let mut out = csv::Writer::from_writer(w);
            out.write_record(["u", "v"])?;
            for &(a, b) in pairs.iter() {
                out.write_record([g.label(a), g.label(b)].iter().map(|s| s.as_ref()))?;
            }
            out.flush()?;
            Ok(())
        })?;
        write_sidecar(&path, "split", details.clone())?;
    }
    println!(
        "train: {} edges, {} positives, {} negatives -> {}",
        split.train.edge_count(),
        split.positives.len(),
        split.negatives.len(),
        dir.display()
    );
    Ok(ExitCode::SUCCESS)
}

fn cmd_diffuse(g: &Graph, input: &InputConfig, source: &str, times: &[f64], steps_per_unit: usize, output: Option<&Path>) -> CmdResult {
    let u = node(g, source)?;
    let mut s0 = vec![0.0; g.node_count()];
    s0[u] = 1.0;
    let trace = diffuse_trace(g, &s0, times, steps_per_unit).map_err(classify)?;
    match output {
        Some(path) => {
            write_csv_file(path, |w| trace.write_csv(w, g))?;
            let details = json!({
                "input": input,
                "source": source,
                "times": times,
                "steps_per_unit": steps_per_unit,
                "graph": graph_info(g),
            });
            write_sidecar(path, "diffuse", details)?;
        }
        None => trace.write_csv(io::stdout().lock(), g).map_err(classify)?,
    }
    Ok(ExitCode::SUCCESS)
}
