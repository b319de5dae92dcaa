//! Time evolution of a node signal under graph heat diffusion,
//! `ds/dt = -L s`, for plotting.

use std::io::Write;

use serde::Serialize;

use crate::graph::Graph;
use crate::linsolve::{cg_solve, CgConfig, DENSE_NODE_LIMIT};
use crate::{Error, Result};

/// Default snapshot times.
pub const DEFAULT_TIMES: [f64; 5] = [0.0, 0.5, 1.0, 2.0, 5.0];

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DiffusionTrace {
    pub times: Vec<f64>,
    /// One signal per entry of `times`.
    pub snapshots: Vec<Vec<f64>>,
}

/// One implicit Euler step `s <- (I + dt L)^-1 s`.
fn step(g: &Graph, s: &[f64], dt: f64) -> Result<Vec<f64>> {
    let cfg = CgConfig { alpha: dt, tol: 1e-12, max_iter: None };
    Ok(cg_solve(g, s, &cfg)?.solution)
}

/// Integrates the heat equation from `s0` with implicit Euler steps of
/// length `1 / steps_per_unit`, recording the signal at each of `times`.
/// When a requested time falls between steps, a shorter final step lands
/// on it exactly.
pub fn diffuse_trace(g: &Graph, s0: &[f64], times: &[f64], steps_per_unit: usize) -> Result<DiffusionTrace> {
    let n = g.node_count();
    if n > DENSE_NODE_LIMIT {
        return Err(Error::TooLarge { n, limit: DENSE_NODE_LIMIT });
    }
    if s0.len() != n {
        return Err(Error::DimensionMismatch { expected: n, found: s0.len() });
    }
    if s0.iter().any(|x| !x.is_finite()) {
        return Err(Error::InvalidParameter("initial signal must be finite".into()));
    }
    if steps_per_unit == 0 {
        return Err(Error::InvalidParameter("steps_per_unit must be at least 1".into()));
    }
    if times.iter().any(|t| !(t.is_finite() && *t >= 0.0)) || times.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::InvalidParameter("times must be finite, non-negative and ascending".into()));
    }

    let dt = 1.0 / steps_per_unit as f64;
    let mut s = s0.to_vec();
    let mut now = 0.0;
    let mut snapshots = Vec::with_capacity(times.len());
    for &target in times {
        let span = target - now;
        let full = (span / dt + 1e-9).floor() as usize;
        for _ in 0..full {
            s = step(g, &s, dt)?;
        }
        let rest = span - full as f64 * dt;
        if rest > 1e-12 {
            s = step(g, &s, rest)?;
        }
        now = target;
        snapshots.push(s.clone());
    }
    Ok(DiffusionTrace { times: times.to_vec(), snapshots })
}

impl DiffusionTrace {
    /// Writes `t,node,value` rows, using node labels when present.
    pub fn write_csv<W: Write>(&self, w: W, g: &Graph) -> Result<()> {
        let mut out = csv::Writer::from_writer(w);
        out.write_record(["t", "node", "value"])?;
        for (t, snap) in self.times.iter().zip(&self.snapshots) {
            for (u, v) in snap.iter().enumerate() {
                out.write_record([t.to_string(), g.label(u).into_owned(), v.to_string()])?;
            }
        }
        out.flush()?;
        Ok(())
    }
}
