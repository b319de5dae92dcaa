//! Personalized PageRank by fixed-point iteration.
//!
//! The PPR vector of a source `u` solves `s = (1 - beta) e_u + beta A D^-1 s`:
//! the stationary distribution of a walker that follows a random edge with
//! probability `beta` and jumps back to `u` otherwise. A walker standing on
//! an isolated node has nowhere to go, so that mass is sent back to `u` as
//! well, which keeps every vector a probability distribution.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::graph::Graph;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PprConfig {
    /// Probability of following an edge; teleport probability is `1 - beta`.
    pub beta: f64,
    /// L1 tolerance on successive iterates.
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for PprConfig {
    fn default() -> Self {
        Self { beta: 0.85, tol: 1e-10, max_iter: 1000 }
    }
}

impl PprConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.beta > 0.0 && self.beta < 1.0) {
            return Err(Error::InvalidParameter(format!("beta must lie in (0, 1), got {}", self.beta)));
        }
        if !(self.tol > 0.0) {
            return Err(Error::InvalidParameter(format!("PPR tol must be positive, got {}", self.tol)));
        }
        if self.max_iter == 0 {
            return Err(Error::InvalidParameter("PPR max_iter must be at least 1".into()));
        }
        Ok(())
    }
}

/// PPR distribution for one source node.
#[derive(Debug, Clone, PartialEq)]
pub struct PprVector {
    pub source: usize,
    pub values: Vec<f64>,
    /// Iterations taken (0 when loaded from a cache).
    pub iterations: usize,
}

/// One application of the PPR map `s -> (1 - beta) e_u + beta (A D^-1 s + stranded e_u)`.
fn ppr_step(g: &Graph, isolated: &[usize], u: usize, beta: f64, s: &[f64], out: &mut [f64]) {
    g.walk_apply_into(s, out).expect("buffers sized to the graph");
    let stranded: f64 = isolated.iter().map(|&v| s[v]).sum();
    for v in out.iter_mut() {
        *v *= beta;
    }
    out[u] += (1.0 - beta) + beta * stranded;
}

fn isolated_nodes(g: &Graph) -> Vec<usize> {
    (0..g.node_count()).filter(|&v| g.deg(v) == 0).collect()
}

/// Computes the PPR vector of `u`, starting the iteration from `e_u`.
pub fn ppr_solve(g: &Graph, u: usize, cfg: &PprConfig) -> Result<PprVector> {
    cfg.validate()?;
    g.check_node(u)?;
    let isolated = isolated_nodes(g);
    solve_with(g, &isolated, u, cfg)
}

fn solve_with(g: &Graph, isolated: &[usize], u: usize, cfg: &PprConfig) -> Result<PprVector> {
    let n = g.node_count();
    let mut s = vec![0.0; n];
    s[u] = 1.0;
    let mut next = vec![0.0; n];
    let mut gap = f64::INFINITY;
    for it in 1..=cfg.max_iter {
        ppr_step(g, isolated, u, cfg.beta, &s, &mut next);
        gap = s.iter().zip(&next).map(|(a, b)| (a - b).abs()).sum();
        std::mem::swap(&mut s, &mut next);
        if gap <= cfg.tol {
            return Ok(PprVector { source: u, values: s, iterations: it });
        }
    }
    Err(Error::PprNotConverged { source_node: u, iterations: cfg.max_iter, gap, last: s })
}

/// PPR vectors for many sources, computed in parallel. Results line up
/// with `sources`; a failing source does not affect the others.
pub fn ppr_batch(g: &Graph, sources: &[usize], cfg: &PprConfig) -> Vec<Result<PprVector>> {
    if let Err(e) = cfg.validate() {
        let msg = e.to_string();
        return sources.iter().map(|_| Err(Error::InvalidParameter(msg.clone()))).collect();
    }
    let isolated = isolated_nodes(g);
    sources
        .par_iter()
        .map(|&u| {
            g.check_node(u)?;
            solve_with(g, &isolated, u, cfg)
        })
        .collect()
}

/// `||s - (1 - beta) e_u - beta (A D^-1 s + stranded e_u)||_1`.
pub fn fixed_point_residual(g: &Graph, s: &PprVector, beta: f64) -> Result<f64> {
    g.check_node(s.source)?;
    if s.values.len() != g.node_count() {
        return Err(Error::DimensionMismatch { expected: g.node_count(), found: s.values.len() });
    }
    let mut mapped = vec![0.0; g.node_count()];
    ppr_step(g, &isolated_nodes(g), s.source, beta, &s.values, &mut mapped);
    Ok(s.values.iter().zip(&mapped).map(|(a, b)| (a - b).abs()).sum())
}
