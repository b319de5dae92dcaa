//! Baseline link predictors: Common Neighbors, Adamic-Adar and Katz.

use std::collections::HashMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::graph::Graph;
use crate::linsolve::conjugate_gradient;
use crate::{Error, Result};

fn check_pair(g: &Graph, u: usize, v: usize) -> Result<()> {
    g.check_node(u)?;
    g.check_node(v)
}

/// Walks two sorted neighbor lists in step, calling `f` on every shared node.
fn for_each_common(a: &[usize], b: &[usize], mut f: impl FnMut(usize)) {
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                f(a[i]);
                i += 1;
                j += 1;
            }
        }
    }
}

/// `|N(u) ∩ N(v)|`.
pub fn common_neighbors(g: &Graph, u: usize, v: usize) -> Result<usize> {
    check_pair(g, u, v)?;
    let mut count = 0;
    for_each_common(g.neighbors(u), g.neighbors(v), |_| count += 1);
    Ok(count)
}

/// `sum over z in N(u) ∩ N(v) of 1 / ln(deg z)`. A shared neighbor has
/// degree at least 2, so every term is finite.
pub fn adamic_adar(g: &Graph, u: usize, v: usize) -> Result<f64> {
    check_pair(g, u, v)?;
    let mut total = 0.0;
    for_each_common(g.neighbors(u), g.neighbors(v), |z| {
        total += 1.0 / (g.deg(z) as f64).ln();
    });
    Ok(total)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum KatzMode {
    /// Solve `(I - damping A) x = e_v` iteratively.
    Exact,
    /// Sum walks up to `max_len`.
    Truncated,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct KatzConfig {
    /// Per-step path discount.
    pub damping: f64,
    pub max_len: usize,
    pub mode: KatzMode,
    /// In exact mode, fall back to `0.85 / lambda_max` when `damping` fails
    /// the spectral guard instead of erroring.
    pub auto_fallback: bool,
}

impl Default for KatzConfig {
    fn default() -> Self {
        Self { damping: 0.005, max_len: 10, mode: KatzMode::Exact, auto_fallback: true }
    }
}

/// The damping actually used on a particular graph.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ResolvedKatz {
    pub damping: f64,
    /// Estimated spectral radius of `A` (only computed in exact mode).
    pub lambda_max: Option<f64>,
    pub fell_back: bool,
    pub mode: KatzMode,
    pub max_len: usize,
}

/// Largest adjacency eigenvalue, by power iteration on `A + I` (the shift
/// keeps bipartite graphs from oscillating) with a Rayleigh-quotient
/// stopping rule.
pub fn spectral_radius(g: &Graph) -> f64 {
    let n = g.node_count();
    if g.edge_count() == 0 {
        return 0.0;
    }
    let mut x = vec![1.0 / (n as f64).sqrt(); n];
    let mut ax = vec![0.0; n];
    let mut estimate = 0.0;
    for _ in 0..10_000 {
        g.adjacency_apply_into(&x, &mut ax).expect("sized to graph");
        let rq: f64 = x.iter().zip(&ax).map(|(a, b)| a * b).sum();
        let norm = x.iter().zip(&ax).map(|(a, b)| (a + b).powi(2)).sum::<f64>().sqrt();
        for (xi, ai) in x.iter_mut().zip(&ax) {
            *xi = (*xi + ai) / norm;
        }
        if (rq - estimate).abs() <= 1e-12 * rq.max(1.0) {
            return rq;
        }
        estimate = rq;
    }
    estimate
}

impl KatzConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.damping > 0.0 && self.damping.is_finite()) {
            return Err(Error::InvalidParameter(format!("Katz damping must be positive, got {}", self.damping)));
        }
        if self.mode == KatzMode::Truncated && self.max_len == 0 {
            return Err(Error::InvalidParameter("Katz max_len must be at least 1".into()));
        }
        Ok(())
    }

    /// Checks the spectral guard `damping * lambda_max < 1` (exact mode) and
    /// applies the fallback if allowed.
    pub fn resolve(&self, g: &Graph) -> Result<ResolvedKatz> {
        self.validate()?;
        let mut resolved =
            ResolvedKatz { damping: self.damping, lambda_max: None, fell_back: false, mode: self.mode, max_len: self.max_len };
        if self.mode == KatzMode::Exact {
            let lambda = spectral_radius(g);
            resolved.lambda_max = Some(lambda);
            if self.damping * lambda >= 1.0 {
                if !self.auto_fallback {
                    return Err(Error::SpectralGuard { damping: self.damping, lambda_max: lambda });
                }
                resolved.damping = 0.85 / lambda;
                resolved.fell_back = true;
                log::info!("Katz damping {} fails the spectral guard, using {}", self.damping, resolved.damping);
            }
        }
        Ok(resolved)
    }
}

impl ResolvedKatz {
    /// Column `v` of `(I - damping A)^-1 - I`, i.e. Katz scores of every
    /// node against `v`.
    pub fn column(&self, g: &Graph, v: usize) -> Result<Vec<f64>> {
        g.check_node(v)?;
        let n = g.node_count();
        match self.mode {
            KatzMode::Exact => {
                let mut e = vec![0.0; n];
                e[v] = 1.0;
                let d = self.damping;
                let apply = |x: &[f64], y: &mut [f64]| {
                    g.adjacency_apply_into(x, y).expect("sized to graph");
                    for (yi, xi) in y.iter_mut().zip(x) {
                        *yi = xi - d * *yi;
                    }
                };
                let (mut x, _, _) = conjugate_gradient(apply, &e, 1.0, 1e-13, 20 * n.max(10))?;
                x[v] -= 1.0;
                Ok(x)
            }
            KatzMode::Truncated => {
                let mut walk = vec![0.0; n];
                walk[v] = 1.0;
                let mut next = vec![0.0; n];
                let mut acc = vec![0.0; n];
                let mut weight = 1.0;
                for _ in 0..self.max_len {
                    g.adjacency_apply_into(&walk, &mut next).expect("sized to graph");
                    std::mem::swap(&mut walk, &mut next);
                    weight *= self.damping;
                    for (a, w) in acc.iter_mut().zip(&walk) {
                        *a += weight * w;
                    }
                }
                Ok(acc)
            }
        }
    }
}

/// Katz index of the pair `(u, v)`.
pub fn katz_score(g: &Graph, u: usize, v: usize, cfg: &KatzConfig) -> Result<f64> {
    check_pair(g, u, v)?;
    let resolved = cfg.resolve(g)?;
    Ok(resolved.column(g, v)?[u])
}

/// Katz scores for many pairs. One column is computed per distinct
/// second endpoint and shared between pairs.
pub fn katz_score_pairs(g: &Graph, pairs: &[(usize, usize)], cfg: &KatzConfig) -> Result<(ResolvedKatz, Vec<Result<f64>>)> {
    let resolved = cfg.resolve(g)?;
    let mut targets: Vec<usize> = pairs.iter().map(|&(_, v)| v).filter(|&v| v < g.node_count()).collect();
    targets.sort_unstable();
    targets.dedup();
    let columns: HashMap<usize, std::result::Result<Vec<f64>, String>> =
        targets.par_iter().map(|&v| (v, resolved.column(g, v).map_err(|e| e.to_string()))).collect();
    let scores = pairs
        .iter()
        .map(|&(u, v)| {
            check_pair(g, u, v)?;
            match &columns[&v] {
                Ok(col) => Ok(col[u]),
                Err(msg) => Err(Error::InvalidParameter(msg.clone()).for_pair(u, v)),
            }
        })
        .collect();
    Ok((resolved, scores))
}
