//! Link prediction by diffusion distances between Personalized PageRank
//! vectors, with classic baselines, synthetic network generators and a
//! reproducible AUPR benchmark harness.
//!
//! The pipeline for a candidate pair `(u, v)`:
//!
//! 1. compute the PPR vectors `s_u` and `s_v` on the observed graph ([`ppr`]);
//! 2. diffuse their difference, solving `(I + alpha L) x = s_u - s_v` by
//!    conjugate gradient ([`linsolve`]);
//! 3. the distance is `||x||_2` and the score is `1 / (distance + epsilon)`
//!    ([`dppr`]).

// `!(x > 0.0)` style checks are meant to reject NaN as well.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod baselines;
pub mod cache;
pub mod datasets;
pub mod diffusion;
pub mod dppr;
mod error;
pub mod eval;
pub mod generators;
pub mod graph;
pub mod linsolve;
pub mod ppr;
pub mod report;

pub use error::{Error, Result};
pub use graph::Graph;
