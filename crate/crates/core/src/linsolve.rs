//! Solvers for the resolvent system `(I + alpha L) x = b`.
//!
//! `I + alpha L` is symmetric positive definite with smallest eigenvalue 1
//! (on the constant vector) and largest `1 + alpha * lambda_max(L)`, so
//! unpreconditioned conjugate gradient converges quickly. The dense Cholesky
//! solve is kept as an independent oracle for small graphs.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::graph::Graph;
use crate::{Error, Result};

/// Largest graph the dense solvers will materialize.
pub const DENSE_NODE_LIMIT: usize = 2000;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CgConfig {
    /// Diffusion coefficient.
    pub alpha: f64,
    /// Relative residual tolerance `||(I + alpha L) x - b|| / ||b||`.
    pub tol: f64,
    /// Iteration cap; `None` means `10 * n`.
    pub max_iter: Option<usize>,
}

impl Default for CgConfig {
    fn default() -> Self {
        Self { alpha: 1.0, tol: 1e-8, max_iter: None }
    }
}

impl CgConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.alpha > 0.0 && self.alpha.is_finite()) {
            return Err(Error::InvalidParameter(format!("alpha must be positive, got {}", self.alpha)));
        }
        if !(self.tol > 0.0) {
            return Err(Error::InvalidParameter(format!("CG tol must be positive, got {}", self.tol)));
        }
        if self.max_iter == Some(0) {
            return Err(Error::InvalidParameter("CG max_iter must be at least 1".into()));
        }
        Ok(())
    }

    pub fn iteration_cap(&self, n: usize) -> usize {
        self.max_iter.unwrap_or(10 * n.max(1))
    }
}

/// Outcome of a converged solve.
#[derive(Debug, Clone, PartialEq)]
pub struct SolveReport {
    pub solution: Vec<f64>,
    pub iterations: usize,
    pub final_residual: f64,
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub(crate) fn norm2(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

fn resolvent_apply_into(g: &Graph, alpha: f64, x: &[f64], y: &mut [f64]) -> Result<()> {
    g.laplacian_apply_into(x, y)?;
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi = xi + alpha * *yi;
    }
    Ok(())
}

/// Forward operator: `y = x + alpha * L x`.
pub fn resolvent_apply(g: &Graph, alpha: f64, x: &[f64]) -> Result<Vec<f64>> {
    if !(alpha > 0.0) {
        return Err(Error::InvalidParameter(format!("alpha must be positive, got {alpha}")));
    }
    let mut y = vec![0.0; g.node_count()];
    resolvent_apply_into(g, alpha, x, &mut y)?;
    Ok(y)
}

/// Plain conjugate gradient for an SPD operator, starting from zero.
///
/// Stops once the recursive residual drops below `tol * scale`, then
/// confirms against the true residual and restarts from it if the two have
/// drifted apart. Returns `(x, iterations, ||b - Ax||)`; on failure the
/// error carries the iterate with the smallest residual seen.
pub(crate) fn conjugate_gradient<F>(apply: F, b: &[f64], scale: f64, tol: f64, max_iter: usize) -> Result<(Vec<f64>, usize, f64)>
where
    F: Fn(&[f64], &mut [f64]),
{
    let n = b.len();
    let target = tol * scale;
    let mut x = vec![0.0; n];
    let mut r = b.to_vec();
    let mut ap = vec![0.0; n];
    let mut iterations = 0;
    let mut best = (x.clone(), norm2(&r));

    loop {
        let mut rs = dot(&r, &r);
        if rs.sqrt() <= target {
            apply(&x, &mut ap);
            let true_res = b.iter().zip(&ap).map(|(bi, ai)| (bi - ai).powi(2)).sum::<f64>().sqrt();
            if true_res <= target {
                return Ok((x, iterations, true_res));
            }
            if iterations >= max_iter {
                break;
            }
            // Recursive residual drifted; restart from the true one.
            for i in 0..n {
                r[i] = b[i] - ap[i];
            }
            rs = dot(&r, &r);
        }
        if iterations >= max_iter {
            break;
        }
        let mut p = r.clone();
        while iterations < max_iter {
            apply(&p, &mut ap);
            let pap = dot(&p, &ap);
            if !(pap > 0.0) {
                break;
            }
            let step = rs / pap;
            for i in 0..n {
                x[i] += step * p[i];
                r[i] -= step * ap[i];
            }
            iterations += 1;
            let rs_new = dot(&r, &r);
            if rs_new.sqrt() < best.1 {
                best.0.copy_from_slice(&x);
                best.1 = rs_new.sqrt();
            }
            if rs_new.sqrt() <= target {
                break;
            }
            let ratio = rs_new / rs;
            for i in 0..n {
                p[i] = r[i] + ratio * p[i];
            }
            rs = rs_new;
        }
        if dot(&r, &r).sqrt() > target {
            break;
        }
    }

    Err(Error::CgNotConverged { iterations, residual: if scale > 0.0 { best.1 / scale } else { best.1 }, best: best.0 })
}

/// Solves `(I + alpha L) x = b` by conjugate gradient.
///
/// The mean of `b` is split off first: constants are fixed by the operator,
/// so only the zero-sum part goes through CG and `sum(x) == sum(b)` holds up
/// to rounding regardless of `tol`.
pub fn cg_solve(g: &Graph, b: &[f64], cfg: &CgConfig) -> Result<SolveReport> {
    cfg.validate()?;
    let n = g.node_count();
    if b.len() != n {
        return Err(Error::DimensionMismatch { expected: n, found: b.len() });
    }
    if b.iter().any(|v| !v.is_finite()) {
        return Err(Error::InvalidParameter("right-hand side has non-finite entries".into()));
    }
    let b_norm = norm2(b);
    if b_norm == 0.0 {
        return Ok(SolveReport { solution: vec![0.0; n], iterations: 0, final_residual: 0.0 });
    }

    let mean = b.iter().sum::<f64>() / n as f64;
    let centered: Vec<f64> = b.iter().map(|v| v - mean).collect();
    let alpha = cfg.alpha;
    let apply = |x: &[f64], y: &mut [f64]| {
        resolvent_apply_into(g, alpha, x, y).expect("lengths checked above");
    };
    let recombine = |mut x: Vec<f64>| {
        let drift = x.iter().sum::<f64>() / n as f64;
        for v in x.iter_mut() {
            *v += mean - drift;
        }
        x
    };

    match conjugate_gradient(apply, &centered, b_norm, cfg.tol, cfg.iteration_cap(n)) {
        Ok((x, iterations, _)) => {
            let solution = recombine(x);
            let mut ax = vec![0.0; n];
            resolvent_apply_into(g, alpha, &solution, &mut ax)?;
            let res = b.iter().zip(&ax).map(|(bi, ai)| (bi - ai).powi(2)).sum::<f64>().sqrt() / b_norm;
            Ok(SolveReport { solution, iterations, final_residual: res })
        }
        Err(Error::CgNotConverged { iterations, residual, best }) => {
            Err(Error::CgNotConverged { iterations, residual, best: recombine(best) })
        }
        Err(e) => Err(e),
    }
}

/// Dense `I + alpha L` for graphs up to [`DENSE_NODE_LIMIT`] nodes.
pub fn dense_resolvent_matrix(g: &Graph, alpha: f64) -> Result<DMatrix<f64>> {
    let n = g.node_count();
    if n > DENSE_NODE_LIMIT {
        return Err(Error::TooLarge { n, limit: DENSE_NODE_LIMIT });
    }
    if !(alpha > 0.0) {
        return Err(Error::InvalidParameter(format!("alpha must be positive, got {alpha}")));
    }
    let mut m = DMatrix::<f64>::identity(n, n);
    for u in 0..n {
        m[(u, u)] += alpha * g.deg(u) as f64;
        for &v in g.neighbors(u) {
            m[(u, v)] -= alpha;
        }
    }
    Ok(m)
}

/// Direct solve of `(I + alpha L) x = b` by dense Cholesky factorization.
/// Cubic cost; refuses graphs above [`DENSE_NODE_LIMIT`] nodes.
pub fn dense_resolvent_solve(g: &Graph, b: &[f64], alpha: f64) -> Result<Vec<f64>> {
    let n = g.node_count();
    if n > DENSE_NODE_LIMIT {
        return Err(Error::TooLarge { n, limit: DENSE_NODE_LIMIT });
    }
    if b.len() != n {
        return Err(Error::DimensionMismatch { expected: n, found: b.len() });
    }
    let m = dense_resolvent_matrix(g, alpha)?;
    let chol = m.cholesky().ok_or_else(|| Error::InvalidParameter("resolvent matrix is not positive definite".into()))?;
    let x = chol.solve(&DVector::from_column_slice(b));
    Ok(x.iter().copied().collect())
}
