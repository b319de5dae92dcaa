//! D-PPR: diffusion distance between Personalized PageRank signals.
//!
//! For a pair `(u, v)` the PPR vectors `s_u`, `s_v` are differenced, the
//! difference is smoothed by the resolvent `(I + alpha L)^-1`, and the
//! Euclidean norm of the result is the distance. The link score is
//! `1 / (distance + epsilon)`, so structurally similar nodes score high.

use std::collections::HashMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cache::{CacheKey, DiskCache};
use crate::graph::Graph;
use crate::linsolve::{cg_solve, norm2, CgConfig};
use crate::ppr::{ppr_batch, PprConfig, PprVector};
use crate::{Error, Result};

/// All numerical knobs of the D-PPR pipeline.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SolverConfig {
    /// Diffusion coefficient of the resolvent.
    pub alpha: f64,
    /// PPR continuation probability.
    pub beta: f64,
    /// Score regularizer.
    pub epsilon: f64,
    pub ppr_tol: f64,
    pub ppr_max_iter: usize,
    pub cg_tol: f64,
    /// `None` means `10 * n`.
    pub cg_max_iter: Option<usize>,
}

impl Default for SolverConfig {
    fn default() -> Self {
        let ppr = PprConfig::default();
        let cg = CgConfig::default();
        Self {
            alpha: cg.alpha,
            beta: ppr.beta,
            epsilon: 1e-10,
            ppr_tol: ppr.tol,
            ppr_max_iter: ppr.max_iter,
            cg_tol: cg.tol,
            cg_max_iter: cg.max_iter,
        }
    }
}

impl SolverConfig {
    pub fn ppr(&self) -> PprConfig {
        PprConfig { beta: self.beta, tol: self.ppr_tol, max_iter: self.ppr_max_iter }
    }

    pub fn cg(&self) -> CgConfig {
        CgConfig { alpha: self.alpha, tol: self.cg_tol, max_iter: self.cg_max_iter }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.epsilon > 0.0) {
            return Err(Error::InvalidParameter(format!("epsilon must be positive, got {}", self.epsilon)));
        }
        self.ppr().validate()?;
        self.cg().validate()
    }
}

/// Distance and score of one node pair.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PairScore {
    pub u: usize,
    pub v: usize,
    pub distance: f64,
    pub score: f64,
}

/// `||(I + alpha L)^-1 (s_u - s_v)||_2`, solved by CG.
pub fn dppr_distance(g: &Graph, su: &PprVector, sv: &PprVector, cfg: &SolverConfig) -> Result<f64> {
    let n = g.node_count();
    for s in [su, sv] {
        if s.values.len() != n {
            return Err(Error::DimensionMismatch { expected: n, found: s.values.len() });
        }
    }
    let diff: Vec<f64> = su.values.iter().zip(&sv.values).map(|(a, b)| a - b).collect();
    let report = cg_solve(g, &diff, &cfg.cg()).map_err(|e| e.for_pair(su.source, sv.source))?;
    Ok(norm2(&report.solution))
}

fn score_of(u: usize, v: usize, distance: f64, epsilon: f64) -> PairScore {
    PairScore { u, v, distance, score: 1.0 / (distance + epsilon) }
}

fn check_pair(g: &Graph, u: usize, v: usize) -> Result<()> {
    g.check_node(u)?;
    g.check_node(v)?;
    if u == v {
        return Err(Error::InvalidParameter(format!("prediction pair needs two distinct nodes, got ({u}, {u})")));
    }
    Ok(())
}

/// Scores a single pair from scratch.
pub fn dppr_score(g: &Graph, u: usize, v: usize, cfg: &SolverConfig) -> Result<PairScore> {
    cfg.validate()?;
    check_pair(g, u, v)?;
    let mut vecs = ppr_batch(g, &[u, v], &cfg.ppr()).into_iter();
    let su = vecs.next().unwrap().map_err(|e| e.for_pair(u, v))?;
    let sv = vecs.next().unwrap().map_err(|e| e.for_pair(u, v))?;
    let d = dppr_distance(g, &su, &sv, cfg)?;
    Ok(score_of(u, v, d, cfg.epsilon))
}

/// PPR vectors for a set of endpoints, computed once and shared read-only.
#[derive(Debug, Default)]
pub struct PprCache {
    vectors: HashMap<usize, std::result::Result<PprVector, String>>,
}

impl PprCache {
    /// Computes (or loads from `disk`) the PPR vector of every distinct
    /// endpoint, in parallel.
    pub fn fill(g: &Graph, endpoints: impl IntoIterator<Item = usize>, cfg: &PprConfig, disk: Option<&DiskCache>) -> Self {
        let mut nodes: Vec<usize> = endpoints.into_iter().collect();
        nodes.sort_unstable();
        nodes.dedup();
        let fingerprint = disk.map(|_| g.fingerprint());

        let mut loaded = HashMap::new();
        let mut missing = Vec::new();
        for &u in &nodes {
            let hit = match (disk, &fingerprint) {
                (Some(d), Some(fp)) => d.load(&CacheKey::with_fingerprint(fp.clone(), u, cfg), g.node_count()),
                _ => None,
            };
            match hit {
                Some(s) => {
                    loaded.insert(u, Ok(s));
                }
                None => missing.push(u),
            }
        }

        let computed = ppr_batch(g, &missing, cfg);
        for (u, res) in missing.into_iter().zip(computed) {
            if let (Some(d), Some(fp), Ok(s)) = (disk, &fingerprint, &res) {
                if let Err(e) = d.store(&CacheKey::with_fingerprint(fp.clone(), u, cfg), &s.values) {
                    log::warn!("could not cache PPR vector of node {u}: {e}");
                }
            }
            loaded.insert(u, res.map_err(|e| e.to_string()));
        }
        Self { vectors: loaded }
    }

    pub fn get(&self, u: usize) -> Result<&PprVector> {
        match self.vectors.get(&u) {
            Some(Ok(s)) => Ok(s),
            Some(Err(msg)) => Err(Error::InvalidParameter(format!("PPR vector of node {u} unavailable: {msg}"))),
            None => Err(Error::InvalidParameter(format!("node {u} is not in the PPR cache"))),
        }
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }
}

/// Scores many pairs, reusing one PPR vector per distinct endpoint.
/// Output order follows `pairs`; failures are reported per pair.
pub fn dppr_score_pairs(g: &Graph, pairs: &[(usize, usize)], cfg: &SolverConfig) -> Vec<Result<PairScore>> {
    dppr_score_pairs_cached(g, pairs, cfg, None)
}

/// [`dppr_score_pairs`] with an optional on-disk PPR cache.
pub fn dppr_score_pairs_cached(
    g: &Graph,
    pairs: &[(usize, usize)],
    cfg: &SolverConfig,
    disk: Option<&DiskCache>,
) -> Vec<Result<PairScore>> {
    if let Err(e) = cfg.validate() {
        let msg = e.to_string();
        return pairs.iter().map(|_| Err(Error::InvalidParameter(msg.clone()))).collect();
    }
    let endpoints = pairs.iter().filter(|&&(u, v)| u < g.node_count() && v < g.node_count()).flat_map(|&(u, v)| [u, v]);
    let cache = PprCache::fill(g, endpoints, &cfg.ppr(), disk);

    pairs
        .par_iter()
        .map(|&(u, v)| {
            check_pair(g, u, v)?;
            let su = cache.get(u).map_err(|e| e.for_pair(u, v))?;
            let sv = cache.get(v).map_err(|e| e.for_pair(u, v))?;
            let d = dppr_distance(g, su, sv, cfg)?;
            Ok(score_of(u, v, d, cfg.epsilon))
        })
        .collect()
}

/// Ranking of scored pairs, best first: ascending distance, with distances
/// within `1e-12` of each other treated as tied and ordered by `(u, v)`.
pub fn rank_pairs(scores: &[PairScore]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| scores[a].distance.total_cmp(&scores[b].distance).then(a.cmp(&b)));
    // Chain near-equal neighbours into tie groups, then order each group by pair.
    let mut start = 0;
    while start < order.len() {
        let mut end = start + 1;
        while end < order.len() && scores[order[end]].distance - scores[order[end - 1]].distance <= 1e-12 {
            end += 1;
        }
        order[start..end].sort_by_key(|&i| (scores[i].u, scores[i].v));
        start = end;
    }
    order
}
