//! Evaluation protocol: seeded edge holdout, negative sampling, AUPR and
//! multi-method benchmark runs.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rand::seq::{index, SliceRandom};
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::baselines::{adamic_adar, common_neighbors, katz_score_pairs, KatzConfig};
use crate::cache::DiskCache;
use crate::dppr::{dppr_score_pairs_cached, SolverConfig};
use crate::generators::{generate_ba, generate_lfr, rng, BaParams, LfrParams};
use crate::graph::Graph;
use crate::{Error, Result};

/// A train graph with held-out positive edges and sampled negative pairs.
#[derive(Debug, Clone)]
pub struct SplitDataset {
    pub train: Graph,
    /// Held-out edges of the original graph, `u < v`.
    pub positives: Vec<(usize, usize)>,
    /// Non-edges of the original graph, `u < v`.
    pub negatives: Vec<(usize, usize)>,
    pub holdout_fraction: f64,
    pub seed: u64,
    eval_order: Vec<((usize, usize), bool)>,
}

impl SplitDataset {
    /// Positives and negatives together in a seeded random order, labelled
    /// `true` for positives. Scoring in this order keeps score ties from
    /// lining up with labels.
    pub fn eval_pairs(&self) -> &[((usize, usize), bool)] {
        &self.eval_order
    }
}

/// Holds out `floor(fraction * m)` uniformly chosen edges and samples as
/// many non-edges of `g` as negatives.
pub fn holdout_split(g: &Graph, fraction: f64, seed: u64) -> Result<SplitDataset> {
    if !(fraction > 0.0 && fraction < 1.0) {
        return Err(Error::InvalidParameter(format!("holdout fraction must lie in (0, 1), got {fraction}")));
    }
    let m = g.edge_count();
    let needed = (1.0 / fraction).ceil() as usize;
    if m < needed {
        return Err(Error::Split(format!("{m} edges is too few for holdout fraction {fraction} (need {needed})")));
    }
    let k = (fraction * m as f64).floor() as usize;
    if k == 0 || k >= m {
        return Err(Error::Split(format!("holding out {k} of {m} edges leaves no usable split")));
    }
    let n = g.node_count();
    let pool = n * (n - 1) / 2 - m;
    if pool < k {
        return Err(Error::Split(format!("only {pool} non-edges available, {k} negatives needed")));
    }

    let mut rng = rng(seed);
    let edges: Vec<(usize, usize)> = g.edges().collect();
    let positives: Vec<(usize, usize)> = index::sample(&mut rng, m, k).into_iter().map(|i| edges[i]).collect();

    let negatives = if pool >= 4 * k {
        let mut chosen = HashSet::with_capacity(k);
        let mut out = Vec::with_capacity(k);
        while out.len() < k {
            let a = rng.gen_range(0..n);
            let b = rng.gen_range(0..n);
            let pair = (a.min(b), a.max(b));
            if a != b && !g.has_edge(a, b) && chosen.insert(pair) {
                out.push(pair);
            }
        }
        out
    } else {
        let all: Vec<(usize, usize)> = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).filter(|&(a, b)| !g.has_edge(a, b)).collect();
        index::sample(&mut rng, all.len(), k).into_iter().map(|i| all[i]).collect()
    };

    let mut eval_order: Vec<((usize, usize), bool)> =
        positives.iter().map(|&p| (p, true)).chain(negatives.iter().map(|&p| (p, false))).collect();
    eval_order.shuffle(&mut rng);

    Ok(SplitDataset { train: g.without_edges(&positives), positives, negatives, holdout_fraction: fraction, seed, eval_order })
}

/// Average precision: with pairs sorted by descending score (a stable
/// sort, so ties keep input order), the mean over positives of the
/// precision at each positive's rank.
pub fn aupr(labels: &[bool], scores: &[f64]) -> Result<f64> {
    if labels.len() != scores.len() {
        return Err(Error::Aupr(format!("{} labels but {} scores", labels.len(), scores.len())));
    }
    if scores.iter().any(|s| s.is_nan()) {
        return Err(Error::Aupr("scores contain NaN".into()));
    }
    let total = labels.iter().filter(|&&l| l).count();
    if total == 0 {
        return Err(Error::Aupr("no positive labels".into()));
    }
    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| scores[b].total_cmp(&scores[a]));
    let mut hits = 0;
    let mut sum = 0.0;
    for (rank, &i) in order.iter().enumerate() {
        if labels[i] {
            hits += 1;
            sum += hits as f64 / (rank + 1) as f64;
        }
    }
    Ok(sum / total as f64)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Dppr,
    Cn,
    Aa,
    Katz,
}

impl Method {
    pub const ALL: [Method; 4] = [Method::Dppr, Method::Cn, Method::Aa, Method::Katz];

    pub fn name(self) -> &'static str {
        match self {
            Method::Dppr => "dppr",
            Method::Cn => "cn",
            Method::Aa => "aa",
            Method::Katz => "katz",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Method::ALL
            .into_iter()
            .find(|m| m.name().eq_ignore_ascii_case(s) || (s.eq_ignore_ascii_case("d-ppr") && *m == Method::Dppr))
            .ok_or_else(|| Error::InvalidParameter(format!("unknown method {s:?} (expected dppr, cn, aa or katz)")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Protocol {
    pub fraction: f64,
    pub repeats: usize,
    /// Repeat `r` splits with seed `seed + r`.
    pub seed: u64,
}

impl Default for Protocol {
    fn default() -> Self {
        Self { fraction: 0.1, repeats: 30, seed: 0 }
    }
}

impl Protocol {
    pub fn split_seed(&self, repeat: usize) -> u64 {
        self.seed.wrapping_add(repeat as u64)
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MethodConfigs {
    pub solver: SolverConfig,
    pub katz: KatzConfig,
}

/// Where each repeat's graph comes from. Generated sources draw a fresh
/// graph per repeat with seed `params.seed + repeat`.
#[derive(Debug, Clone)]
pub enum GraphSource {
    Fixed(Graph),
    Ba(BaParams),
    Lfr(LfrParams),
}

impl GraphSource {
    pub fn instance(&self, repeat: usize) -> Result<Graph> {
        let r = repeat as u64;
        match self {
            GraphSource::Fixed(g) => Ok(g.clone()),
            GraphSource::Ba(p) => generate_ba(&BaParams { seed: p.seed.wrapping_add(r), ..*p }),
            GraphSource::Lfr(p) => Ok(generate_lfr(&LfrParams { seed: p.seed.wrapping_add(r), ..*p })?.graph),
        }
    }
}

/// One labelled, scored evaluation pair.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScoredPair {
    pub u: usize,
    pub v: usize,
    pub label: bool,
    pub score: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct BenchmarkResult {
    pub method: Method,
    pub repeat: usize,
    /// Split seed.
    pub seed: u64,
    /// Parameters the method actually ran with.
    pub config: serde_json::Value,
    pub scores: Vec<ScoredPair>,
    pub aupr: Option<f64>,
    pub error: Option<String>,
    pub n_pos: usize,
    pub n_neg: usize,
    pub runtime_ms: f64,
}

/// Scores `pairs` on `train` with one method, returning the scores and the
/// configuration that produced them.
pub fn score_method(
    method: Method,
    train: &Graph,
    pairs: &[(usize, usize)],
    configs: &MethodConfigs,
    cache: Option<&DiskCache>,
) -> Result<(Vec<f64>, serde_json::Value)> {
    match method {
        Method::Dppr => {
            let scores = dppr_score_pairs_cached(train, pairs, &configs.solver, cache)
                .into_iter()
                .map(|r| r.map(|p| p.score))
                .collect::<Result<Vec<_>>>()?;
            Ok((scores, serde_json::to_value(configs.solver)?))
        }
        Method::Cn => {
            let scores = pairs.iter().map(|&(u, v)| common_neighbors(train, u, v).map(|c| c as f64)).collect::<Result<Vec<_>>>()?;
            Ok((scores, serde_json::Value::Null))
        }
        Method::Aa => {
            let scores = pairs.iter().map(|&(u, v)| adamic_adar(train, u, v)).collect::<Result<Vec<_>>>()?;
            Ok((scores, serde_json::Value::Null))
        }
        Method::Katz => {
            let (resolved, scores) = katz_score_pairs(train, pairs, &configs.katz)?;
            let scores = scores.into_iter().collect::<Result<Vec<_>>>()?;
            Ok((scores, serde_json::to_value(resolved)?))
        }
    }
}

fn evaluate(method: Method, split: &SplitDataset, repeat: usize, configs: &MethodConfigs, cache: Option<&DiskCache>) -> BenchmarkResult {
    let pairs: Vec<(usize, usize)> = split.eval_pairs().iter().map(|&(p, _)| p).collect();
    let labels: Vec<bool> = split.eval_pairs().iter().map(|&(_, l)| l).collect();
    let start = Instant::now();
    let outcome = score_method(method, &split.train, &pairs, configs, cache)
        .and_then(|(scores, config)| aupr(&labels, &scores).map(|a| (scores, config, a)));
    let runtime_ms = start.elapsed().as_secs_f64() * 1e3;
    let mut result = BenchmarkResult {
        method,
        repeat,
        seed: split.seed,
        config: serde_json::Value::Null,
        scores: Vec::new(),
        aupr: None,
        error: None,
        n_pos: split.positives.len(),
        n_neg: split.negatives.len(),
        runtime_ms,
    };
    match outcome {
        Ok((scores, config, a)) => {
            result.config = config;
            result.scores =
                pairs.iter().zip(&labels).zip(scores).map(|((&(u, v), &label), score)| ScoredPair { u, v, label, score }).collect();
            result.aupr = Some(a);
        }
        Err(e) => {
            log::warn!("{method} failed on repeat {repeat}: {e}");
            result.error = Some(e.to_string());
        }
    }
    result
}

/// Runs every method on `protocol.repeats` fresh splits. Results come back
/// ordered by repeat, then by the order of `methods`. A failing method is
/// recorded in its result and does not stop the run; a repeat whose graph
/// or split cannot be built yields an error result for every method.
pub fn run_benchmark(
    source: &GraphSource,
    methods: &[Method],
    protocol: &Protocol,
    configs: &MethodConfigs,
    cache: Option<&DiskCache>,
) -> Result<Vec<BenchmarkResult>> {
    if methods.is_empty() {
        return Err(Error::InvalidParameter("no methods selected".into()));
    }
    if protocol.repeats == 0 {
        return Err(Error::InvalidParameter("repeats must be at least 1".into()));
    }
    if !(protocol.fraction > 0.0 && protocol.fraction < 1.0) {
        return Err(Error::InvalidParameter(format!("holdout fraction must lie in (0, 1), got {}", protocol.fraction)));
    }
    configs.solver.validate()?;
    configs.katz.validate()?;

    let per_repeat: Vec<Vec<BenchmarkResult>> = (0..protocol.repeats)
        .into_par_iter()
        .map(|r| {
            let seed = protocol.split_seed(r);
            let split = source.instance(r).and_then(|g| holdout_split(&g, protocol.fraction, seed));
            match split {
                Ok(split) => methods.iter().map(|&m| evaluate(m, &split, r, configs, cache)).collect(),
                Err(e) => methods
                    .iter()
                    .map(|&method| BenchmarkResult {
                        method,
                        repeat: r,
                        seed,
                        config: serde_json::Value::Null,
                        scores: Vec::new(),
                        aupr: None,
                        error: Some(e.to_string()),
                        n_pos: 0,
                        n_neg: 0,
                        runtime_ms: 0.0,
                    })
                    .collect(),
            }
        })
        .collect();
    Ok(per_repeat.into_iter().flatten().collect())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MethodSummary {
    pub method: Method,
    /// Mean AUPR over successful repeats (NaN if none succeeded).
    pub mean: f64,
    /// Sample standard deviation (0 with a single repeat).
    pub std: f64,
    pub succeeded: usize,
    pub failed: usize,
    pub mean_runtime_ms: f64,
}

/// Per-method mean and standard deviation, in order of first appearance.
pub fn summarize(results: &[BenchmarkResult]) -> Vec<MethodSummary> {
    let mut methods: Vec<Method> = Vec::new();
    for r in results {
        if !methods.contains(&r.method) {
            methods.push(r.method);
        }
    }
    methods
        .into_iter()
        .map(|method| {
            let mine: Vec<&BenchmarkResult> = results.iter().filter(|r| r.method == method).collect();
            let values: Vec<f64> = mine.iter().filter_map(|r| r.aupr).collect();
            let k = values.len() as f64;
            let mean = values.iter().sum::<f64>() / k;
            let std = if values.len() > 1 { (values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (k - 1.0)).sqrt() } else { 0.0 };
            MethodSummary {
                method,
                mean,
                std,
                succeeded: values.len(),
                failed: mine.len() - values.len(),
                mean_runtime_ms: mine.iter().map(|r| r.runtime_ms).sum::<f64>() / mine.len() as f64,
            }
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepAxis {
    BaM,
    LfrMu,
    Alpha,
    Beta,
}

impl SweepAxis {
    pub fn name(self) -> &'static str {
        match self {
            SweepAxis::BaM => "ba_m",
            SweepAxis::LfrMu => "lfr_mu",
            SweepAxis::Alpha => "alpha",
            SweepAxis::Beta => "beta",
        }
    }
}

impl fmt::Display for SweepAxis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SweepAxis {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        [SweepAxis::BaM, SweepAxis::LfrMu, SweepAxis::Alpha, SweepAxis::Beta]
            .into_iter()
            .find(|a| a.name() == s)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown sweep axis {s:?} (expected ba_m, lfr_mu, alpha or beta)")))
    }
}

/// One sweep value with its benchmark results.
#[derive(Debug, Clone, Serialize)]
pub struct SweepCell {
    pub axis: SweepAxis,
    pub value: f64,
    pub results: Vec<BenchmarkResult>,
    pub summary: Vec<MethodSummary>,
    /// Set when the cell could not be run at all.
    pub error: Option<String>,
}

/// One row of the tidy sweep table.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub axis: SweepAxis,
    pub value: f64,
    pub method: Method,
    pub mean_aupr: f64,
    pub std_aupr: f64,
    pub failed: usize,
}

/// Runs one benchmark per value of `axis`, varying the generator parameter
/// (`ba_m`, `lfr_mu`) or solver parameter (`alpha`, `beta`) of the base
/// setup. Split seeds are the same in every cell.
pub fn sweep(
    axis: SweepAxis,
    values: &[f64],
    source: &GraphSource,
    methods: &[Method],
    protocol: &Protocol,
    configs: &MethodConfigs,
    cache: Option<&DiskCache>,
) -> Result<Vec<SweepCell>> {
    match (axis, source) {
        (SweepAxis::BaM, GraphSource::Ba(_)) | (SweepAxis::LfrMu, GraphSource::Lfr(_)) => {}
        (SweepAxis::BaM, _) => return Err(Error::InvalidParameter("a ba_m sweep needs a BA graph source".into())),
        (SweepAxis::LfrMu, _) => return Err(Error::InvalidParameter("an lfr_mu sweep needs an LFR graph source".into())),
        _ => {}
    }
    let cells = values
        .par_iter()
        .map(|&value| {
            let mut src = source.clone();
            let mut cfg = *configs;
            match (axis, &mut src) {
                (SweepAxis::BaM, GraphSource::Ba(p)) => {
                    if value < 1.0 || value.fract() != 0.0 {
                        return Err(Error::InvalidParameter(format!("ba_m must be a positive integer, got {value}")));
                    }
                    p.m = value as usize;
                }
                (SweepAxis::LfrMu, GraphSource::Lfr(p)) => p.mu = value,
                (SweepAxis::Alpha, _) => cfg.solver.alpha = value,
                (SweepAxis::Beta, _) => cfg.solver.beta = value,
                _ => unreachable!("checked above"),
            }
            run_benchmark(&src, methods, protocol, &cfg, cache)
        })
        .collect::<Vec<_>>();
    Ok(values
        .iter()
        .zip(cells)
        .map(|(&value, outcome)| match outcome {
            Ok(results) => SweepCell { axis, value, summary: summarize(&results), results, error: None },
            Err(e) => SweepCell { axis, value, results: Vec::new(), summary: Vec::new(), error: Some(e.to_string()) },
        })
        .collect())
}

/// Flattens sweep cells into `(value, method, mean, std)` rows.
pub fn sweep_table(cells: &[SweepCell]) -> Vec<SweepRow> {
    cells
        .iter()
        .flat_map(|c| {
            c.summary.iter().map(move |s| SweepRow {
                axis: c.axis,
                value: c.value,
                method: s.method,
                mean_aupr: s.mean,
                std_aupr: s.std,
                failed: s.failed,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::datasets::karate_club;
    use proptest::prelude::*;

    /// Average precision computed pair by pair: the rank of item `i` is one
    /// plus the number of items ahead of it, and precision at `i` counts the
    /// positives whose rank does not exceed it.
    fn brute_aupr(labels: &[bool], scores: &[f64]) -> f64 {
        let n = labels.len();
        let rank = |i: usize| 1 + (0..n).filter(|&j| scores[j] > scores[i] || (scores[j] == scores[i] && j < i)).count();
        let positives: Vec<usize> = (0..n).filter(|&i| labels[i]).collect();
        let mut total = 0.0;
        for &i in &positives {
            let r = rank(i);
            let above = positives.iter().filter(|&&j| rank(j) <= r).count();
            total += above as f64 / r as f64;
        }
        total / positives.len() as f64
    }

    #[test]
    fn aupr_examples() {
        assert_eq!(aupr(&[true, true, false], &[0.9, 0.8, 0.1]).unwrap(), 1.0);
        assert_eq!(aupr(&[true, false], &[0.2, 0.9]).unwrap(), 0.5);
        assert!(aupr(&[false, false], &[0.2, 0.9]).is_err());
        assert!(aupr(&[true], &[0.2, 0.9]).is_err());
        assert!(aupr(&[true], &[f64::NAN]).is_err());
        // Ties keep input order.
        assert_eq!(aupr(&[false, true], &[1.0, 1.0]).unwrap(), 0.5);
        assert_eq!(aupr(&[true, false], &[1.0, 1.0]).unwrap(), 1.0);
    }

    #[test]
    fn aupr_reversed_ranking() {
        // Balanced, every positive below every negative: positives sit at
        // ranks k+1..2k, so AP = (1/k) sum_i i / (k + i).
        let k = 10;
        let labels: Vec<bool> = (0..2 * k).map(|i| i >= k).collect();
        let scores: Vec<f64> = (0..2 * k).map(|i| -(i as f64)).collect();
        let want: f64 = (1..=k).map(|i| i as f64 / (k + i) as f64).sum::<f64>() / k as f64;
        let got = aupr(&labels, &scores).unwrap();
        assert!((got - want).abs() < 1e-15);
        assert!((got - brute_aupr(&labels, &scores)).abs() < 1e-15);
    }

    #[test]
    fn karate_split_sizes() {
        let g = karate_club();
        let s = holdout_split(&g, 0.1, 1).unwrap();
        assert_eq!((s.positives.len(), s.negatives.len(), s.train.edge_count()), (7, 7, 71));
        let s = holdout_split(&g, 0.2, 1).unwrap();
        assert_eq!((s.positives.len(), s.negatives.len(), s.train.edge_count()), (15, 15, 63));
        assert_eq!(s.train.node_count(), 34);
        assert_eq!(s.eval_pairs().len(), 30);
    }

    #[test]
    fn split_is_deterministic() {
        let g = karate_club();
        let a = holdout_split(&g, 0.1, 42).unwrap();
        let b = holdout_split(&g, 0.1, 42).unwrap();
        assert_eq!(a.positives, b.positives);
        assert_eq!(a.negatives, b.negatives);
        assert_eq!(a.eval_pairs(), b.eval_pairs());
        assert_eq!(a.train, b.train);
        let c = holdout_split(&g, 0.1, 43).unwrap();
        assert_ne!(a.eval_pairs(), c.eval_pairs());
    }

    #[test]
    fn split_errors() {
        let k4 = Graph::from_edges(4, (0..4).flat_map(|a| (a + 1..4).map(move |b| (a, b)))).unwrap();
        assert!(matches!(holdout_split(&k4, 0.2, 0), Err(Error::Split(_))));
        // 6 edges cannot support a 10% holdout at all.
        assert!(matches!(holdout_split(&k4, 0.1, 0), Err(Error::Split(_))));
        let path = Graph::from_edges(3, [(0, 1), (1, 2)]).unwrap();
        assert!(holdout_split(&path, 0.5, 0).is_ok());
        assert!(holdout_split(&path, 0.0, 0).is_err());
    }

    #[test]
    fn benchmark_is_reproducible() {
        let src = GraphSource::Fixed(karate_club());
        let protocol = Protocol { repeats: 1, seed: 5, ..Protocol::default() };
        let a = run_benchmark(&src, &[Method::Cn], &protocol, &MethodConfigs::default(), None).unwrap();
        let b = run_benchmark(&src, &[Method::Cn], &protocol, &MethodConfigs::default(), None).unwrap();
        assert_eq!(a.len(), 1);
        assert_eq!(a[0].aupr, b[0].aupr);
        assert!(a[0].aupr.is_some());
    }

    #[test]
    fn benchmark_layout_and_failures() {
        let src = GraphSource::Fixed(karate_club());
        let protocol = Protocol { repeats: 3, fraction: 0.2, seed: 0 };
        let mut configs = MethodConfigs::default();
        configs.solver.ppr_max_iter = 1;
        let out = run_benchmark(&src, &Method::ALL, &protocol, &configs, None).unwrap();
        assert_eq!(out.len(), 12);
        for (i, r) in out.iter().enumerate() {
            assert_eq!(r.repeat, i / 4);
            assert_eq!(r.method, Method::ALL[i % 4]);
            assert_eq!((r.n_pos, r.n_neg), (15, 15));
            if r.method == Method::Dppr {
                assert!(r.error.is_some() && r.aupr.is_none());
            } else {
                assert_eq!(r.scores.len(), 30);
                assert!(r.aupr.is_some());
            }
        }
        let summary = summarize(&out);
        assert_eq!(summary[0].failed, 3);
        assert!(summary[0].mean.is_nan());
        assert_eq!(summary[1].succeeded, 3);
    }

    #[test]
    fn alpha_sweep_leaves_baselines_alone() {
        let src = GraphSource::Fixed(karate_club());
        let protocol = Protocol { repeats: 2, fraction: 0.2, seed: 9 };
        let cells = sweep(SweepAxis::Alpha, &[0.1, 10.0], &src, &Method::ALL, &protocol, &MethodConfigs::default(), None).unwrap();
        for m in 1..4 {
            let (a, b) = (&cells[0].summary[m], &cells[1].summary[m]);
            assert_eq!((a.method, a.mean, a.std), (b.method, b.mean, b.std));
        }
        assert_ne!(cells[0].summary[0].mean, cells[1].summary[0].mean);
        assert_eq!(sweep_table(&cells).len(), 8);
    }

    #[test]
    fn single_value_sweep_equals_direct_run() {
        let src = GraphSource::Ba(BaParams { n: 100, m: 2, seed: 1 });
        let protocol = Protocol { repeats: 2, fraction: 0.1, seed: 3 };
        let cfg = MethodConfigs::default();
        let cells = sweep(SweepAxis::BaM, &[3.0], &src, &[Method::Aa, Method::Dppr], &protocol, &cfg, None).unwrap();
        let direct =
            run_benchmark(&GraphSource::Ba(BaParams { n: 100, m: 3, seed: 1 }), &[Method::Aa, Method::Dppr], &protocol, &cfg, None)
                .unwrap();
        let got: Vec<Option<f64>> = cells[0].results.iter().map(|r| r.aupr).collect();
        let want: Vec<Option<f64>> = direct.iter().map(|r| r.aupr).collect();
        assert_eq!(got, want);
        assert!(sweep(SweepAxis::LfrMu, &[0.1], &src, &[Method::Aa], &protocol, &cfg, None).is_err());
    }

    #[test]
    fn method_names() {
        for m in Method::ALL {
            assert_eq!(m.name().parse::<Method>().unwrap(), m);
            assert_eq!(serde_json::to_string(&m).unwrap(), format!("\"{m}\""));
        }
        assert_eq!("D-PPR".parse::<Method>().unwrap(), Method::Dppr);
        assert!("lhn".parse::<Method>().is_err());
    }

    fn labelled_scores() -> impl Strategy<Value = (Vec<bool>, Vec<f64>)> {
        (1usize..200).prop_flat_map(|n| {
            (
                prop::collection::vec(any::<bool>(), n),
                // A small value range forces plenty of ties.
                prop::collection::vec((0i32..20).prop_map(|k| k as f64 / 4.0), n),
            )
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(100))]
        #[test]
        fn aupr_matches_brute_force((mut labels, scores) in labelled_scores()) {
            if !labels.iter().any(|&l| l) {
                labels[0] = true;
            }
            let got = aupr(&labels, &scores).unwrap();
            prop_assert!((got - brute_aupr(&labels, &scores)).abs() <= 1e-12);
            prop_assert!((0.0..=1.0).contains(&got));
            // Strictly increasing transforms keep the ranking, ties included.
            let squashed: Vec<f64> = scores.iter().map(|s| (s * 0.7).exp() - 3.0).collect();
            prop_assert_eq!(got, aupr(&labels, &squashed).unwrap());
        }

        #[test]
        fn split_invariants(seed in any::<u64>(), frac in 0.05f64..0.5) {
            let g = crate::generators::random_connected(40, 0.08, seed);
            let s = holdout_split(&g, frac, seed).unwrap();
            prop_assert_eq!(s.positives.len(), s.negatives.len());
            prop_assert_eq!(s.positives.len(), (frac * g.edge_count() as f64).floor() as usize);
            let mut rebuilt: Vec<(usize, usize)> = s.train.edges().chain(s.positives.iter().copied()).collect();
            rebuilt.sort_unstable();
            prop_assert_eq!(rebuilt, g.edges().collect::<Vec<_>>());
            for &(u, v) in &s.positives {
                prop_assert!(g.has_edge(u, v) && !s.train.has_edge(u, v));
            }
            let distinct: HashSet<_> = s.negatives.iter().collect();
            prop_assert_eq!(distinct.len(), s.negatives.len());
            for &(u, v) in &s.negatives {
                prop_assert!(u < v && !g.has_edge(u, v));
            }
        }
    }
}
