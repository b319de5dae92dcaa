//! Seeded random graph generators: Barabási–Albert, LFR benchmark graphs,
//! and a simple connected random graph used throughout the tests.

use std::collections::HashMap;
use std::io::Write;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::graph::Graph;
use crate::{Error, Result};

pub(crate) fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BaParams {
    pub n: usize,
    /// Edges added per new node.
    pub m: usize,
    pub seed: u64,
}

impl Default for BaParams {
    fn default() -> Self {
        Self { n: 500, m: 2, seed: 0 }
    }
}

impl BaParams {
    pub fn validate(&self) -> Result<()> {
        if self.m == 0 || self.m >= self.n {
            return Err(Error::InvalidParameter(format!("BA needs 1 <= m < n, got n={} m={}", self.n, self.m)));
        }
        Ok(())
    }

    /// `m (n - m) + m (m - 1) / 2`.
    pub fn expected_edges(&self) -> usize {
        self.m * (self.n - self.m) + self.m * (self.m - 1) / 2
    }
}

/// Preferential attachment grown from an `m`-clique. Targets are drawn from
/// a list holding each node once per incident edge end, so the chance of
/// picking a node is proportional to its degree.
pub fn generate_ba(params: &BaParams) -> Result<Graph> {
    params.validate()?;
    let BaParams { n, m, seed } = *params;
    let mut rng = rng(seed);
    let mut edges = Vec::with_capacity(params.expected_edges());
    let mut stubs: Vec<usize> = Vec::with_capacity(2 * params.expected_edges());
    for a in 0..m {
        for b in a + 1..m {
            edges.push((a, b));
            stubs.extend([a, b]);
        }
    }
    let mut targets = Vec::with_capacity(m);
    for t in m..n {
        targets.clear();
        while targets.len() < m {
            // Only a 1-clique has no stubs; its single node is the target.
            let pick = if stubs.is_empty() { rng.gen_range(0..t) } else { stubs[rng.gen_range(0..stubs.len())] };
            if !targets.contains(&pick) {
                targets.push(pick);
            }
        }
        for &s in &targets {
            edges.push((s, t));
            stubs.extend([s, t]);
        }
    }
    Graph::from_edges(n, edges)
}

/// A uniform random tree plus every other pair independently with
/// probability `p`. Always connected.
pub fn random_connected(n: usize, p: f64, seed: u64) -> Graph {
    let mut rng = rng(seed);
    let mut edges = Vec::new();
    for v in 1..n {
        edges.push((rng.gen_range(0..v), v));
    }
    for a in 0..n {
        for b in a + 1..n {
            if rng.gen_bool(p.clamp(0.0, 1.0)) {
                edges.push((a, b));
            }
        }
    }
    Graph::from_edges(n, edges).expect("indices in range")
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LfrParams {
    pub n: usize,
    /// Degree distribution exponent.
    pub tau1: f64,
    /// Community size exponent.
    pub tau2: f64,
    /// Target fraction of each node's edges leaving its community.
    pub mu: f64,
    pub avg_degree: f64,
    pub min_community: usize,
    /// Defaults to `n / 10`.
    pub max_degree: Option<usize>,
    /// Defaults to `n / 2`.
    pub max_community: Option<usize>,
    pub seed: u64,
}

impl Default for LfrParams {
    fn default() -> Self {
        Self { n: 250, tau1: 3.0, tau2: 1.5, mu: 0.1, avg_degree: 5.0, min_community: 20, max_degree: None, max_community: None, seed: 0 }
    }
}

impl LfrParams {
    pub fn max_degree(&self) -> usize {
        self.max_degree.unwrap_or(self.n / 10)
    }

    pub fn max_community(&self) -> usize {
        self.max_community.unwrap_or(self.n / 2)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidParameter(msg));
        if !(self.tau1 > 1.0) || !(self.tau2 > 1.0) {
            return bad(format!("LFR exponents must exceed 1, got tau1={} tau2={}", self.tau1, self.tau2));
        }
        if !(self.mu > 0.0 && self.mu < 1.0) {
            return bad(format!("LFR mu must lie in (0, 1), got {}", self.mu));
        }
        if self.min_community < 2 || self.min_community > self.max_community() || self.max_community() > self.n {
            return bad(format!(
                "LFR needs 2 <= min_community <= max_community <= n, got {} / {} / {}",
                self.min_community,
                self.max_community(),
                self.n
            ));
        }
        let kmax = self.max_degree() as f64;
        if !(self.avg_degree >= 1.0 && self.avg_degree < kmax) {
            return bad(format!("LFR avg_degree must lie in [1, max_degree), got {} with max_degree {}", self.avg_degree, kmax));
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct LfrGraph {
    pub graph: Graph,
    /// Community id of every node.
    pub communities: Vec<usize>,
}

impl LfrGraph {
    /// Writes `node community` lines, using node labels when present.
    pub fn write_communities<W: Write>(&self, mut w: W) -> Result<()> {
        for (u, c) in self.communities.iter().enumerate() {
            writeln!(w, "{} {}", self.graph.label(u), c)?;
        }
        Ok(())
    }
}

/// Per-node fraction of edges that leave the node's community; isolated
/// nodes are skipped.
pub fn mixing_fractions(g: &Graph, communities: &[usize]) -> Vec<f64> {
    (0..g.node_count())
        .filter(|&u| !g.neighbors(u).is_empty())
        .map(|u| {
            let nb = g.neighbors(u);
            let out = nb.iter().filter(|&&v| communities[v] != communities[u]).count();
            out as f64 / nb.len() as f64
        })
        .collect()
}

/// Parses `node community` lines against a graph's labels.
pub fn parse_communities(text: &str, g: &Graph) -> Result<Vec<usize>> {
    let mut out = vec![None; g.node_count()];
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut it = line.split_whitespace();
        let (Some(node), Some(comm), None) = (it.next(), it.next(), it.next()) else {
            return Err(Error::Parse { line: i + 1, message: "expected `node community`".into() });
        };
        let comm = comm.parse().map_err(|_| Error::Parse { line: i + 1, message: format!("bad community id {comm:?}") })?;
        out[g.node_index(node)?] = Some(comm);
    }
    out.into_iter()
        .enumerate()
        .map(|(u, c)| c.ok_or_else(|| Error::InvalidParameter(format!("node {} has no community", g.label(u)))))
        .collect()
}

/// Continuous power law with density proportional to `x^-tau` on `[lo, hi]`.
#[derive(Debug, Clone, Copy)]
struct PowerLaw {
    lo: f64,
    hi: f64,
    tau: f64,
}

impl PowerLaw {
    fn sample(&self, rng: &mut impl Rng) -> f64 {
        let e = 1.0 - self.tau;
        let (a, b) = (self.lo.powf(e), self.hi.powf(e));
        let u: f64 = rng.gen();
        (a + u * (b - a)).powf(1.0 / e)
    }

    fn mean(&self) -> f64 {
        // Numerical integration keeps tau = 2 from being a special case.
        let steps = 4000;
        let (mut num, mut den) = (0.0, 0.0);
        let h = (self.hi.ln() - self.lo.ln()) / steps as f64;
        for i in 0..steps {
            let x = (self.lo.ln() + (i as f64 + 0.5) * h).exp();
            // dx = x d(ln x)
            let w = x.powf(-self.tau) * x;
            num += w * x;
            den += w;
        }
        num / den
    }

    /// Lower cutoff in `[1, hi)` whose mean is `target`.
    fn with_mean(tau: f64, hi: f64, target: f64) -> Result<Self> {
        let mut lo = 1.0;
        let mut up = hi;
        if (PowerLaw { lo, hi, tau }).mean() > target {
            return Err(Error::Unrealizable(format!("average degree {target} is below the minimum reachable mean with max degree {hi}")));
        }
        for _ in 0..100 {
            let mid = 0.5 * (lo + up);
            if (PowerLaw { lo: mid, hi, tau }).mean() < target {
                lo = mid;
            } else {
                up = mid;
            }
        }
        Ok(PowerLaw { lo, hi, tau })
    }
}

const LFR_ATTEMPTS: usize = 20;

/// LFR benchmark graph. Degrees and community sizes follow power laws;
/// each node's external degree is `mu * degree`, stochastically rounded.
/// Internal and external edges are wired by separate configuration models
/// and repaired by degree-preserving swaps.
pub fn generate_lfr(params: &LfrParams) -> Result<LfrGraph> {
    params.validate()?;
    let mut rng = rng(params.seed);
    let degree_law = PowerLaw::with_mean(params.tau1, params.max_degree() as f64, params.avg_degree)?;
    let mut last_err = None;
    for attempt in 0..LFR_ATTEMPTS {
        match lfr_attempt(params, &degree_law, &mut rng) {
            Ok(g) => return Ok(g),
            Err(e) => {
                log::debug!("LFR attempt {attempt} failed: {e}");
                last_err = Some(e);
            }
        }
    }
    Err(last_err.expect("at least one attempt"))
}

fn lfr_attempt(p: &LfrParams, degree_law: &PowerLaw, rng: &mut ChaCha8Rng) -> Result<LfrGraph> {
    let n = p.n;
    let kmax = p.max_degree();
    let mut degree: Vec<usize> = (0..n).map(|_| (degree_law.sample(rng).round() as usize).clamp(1, kmax)).collect();
    if degree.iter().sum::<usize>() % 2 == 1 {
        let candidates: Vec<usize> = (0..n).filter(|&u| degree[u] < kmax).collect();
        let &u = candidates.choose(rng).ok_or_else(|| Error::Unrealizable("odd degree sum".into()))?;
        degree[u] += 1;
    }
    let mut external: Vec<usize> = degree
        .iter()
        .map(|&k| {
            let x = p.mu * k as f64;
            let base = x.floor();
            base as usize + usize::from(rng.gen::<f64>() < x - base)
        })
        .collect();

    let sizes = community_sizes(p, rng)?;
    let communities = assign_communities(&degree, &external, &sizes, rng)?;
    let mut members = vec![Vec::new(); sizes.len()];
    for (u, &c) in communities.iter().enumerate() {
        members[c].push(u);
    }

    // Every community needs an even number of internal stubs; moving one
    // stub between a node's internal and external share fixes the parity.
    for (c, nodes) in members.iter().enumerate() {
        let internal: usize = nodes.iter().map(|&u| degree[u] - external[u]).sum();
        if internal % 2 == 0 {
            continue;
        }
        let cap = sizes[c] - 1;
        let to_int: Vec<usize> = nodes.iter().copied().filter(|&u| external[u] > 0 && degree[u] - external[u] < cap).collect();
        let to_ext: Vec<usize> = nodes.iter().copied().filter(|&u| degree[u] > external[u]).collect();
        let to_int_ok = !to_int.is_empty();
        if to_int_ok && (to_ext.is_empty() || rng.gen_bool(0.5)) {
            external[*to_int.choose(rng).unwrap()] -= 1;
        } else if let Some(&u) = to_ext.choose(rng) {
            external[u] += 1;
        } else {
            return Err(Error::Unrealizable(format!("community {c} cannot have an even internal degree")));
        }
    }

    let budget = 100 * degree.iter().sum::<usize>() / 2;
    let mut edges = Vec::new();
    for nodes in &members {
        let mut stubs: Vec<usize> = nodes.iter().flat_map(|&u| std::iter::repeat(u).take(degree[u] - external[u])).collect();
        let layer = wire(&mut stubs, |_, _| true, budget, rng)
            .map_err(|left| Error::Unrealizable(format!("{left} internal edges still invalid after {budget} swap attempts")))?;
        edges.extend(layer);
    }
    let mut stubs: Vec<usize> = (0..n).flat_map(|u| std::iter::repeat(u).take(external[u])).collect();
    let comm = &communities;
    let layer = wire(&mut stubs, |a, b| comm[a] != comm[b], budget, rng)
        .map_err(|left| Error::Unrealizable(format!("{left} external edges still invalid after {budget} swap attempts")))?;
    edges.extend(layer);

    let graph = Graph::from_edges(n, edges)?;
    Ok(LfrGraph { graph, communities })
}

/// Community sizes summing to `n`, drawn from the size power law.
fn community_sizes(p: &LfrParams, rng: &mut ChaCha8Rng) -> Result<Vec<usize>> {
    let (lo, hi) = (p.min_community, p.max_community());
    let law = PowerLaw { lo: lo as f64, hi: hi as f64 + 0.5, tau: p.tau2 };
    let mut sizes = Vec::new();
    let mut total = 0;
    while total < p.n {
        let s = (law.sample(rng).round() as usize).clamp(lo, hi);
        sizes.push(s);
        total += s;
    }
    let excess = total - p.n;
    let last = *sizes.last().unwrap();
    if last - excess >= lo {
        *sizes.last_mut().unwrap() -= excess;
    } else {
        sizes.pop();
        let mut deficit = p.n - (total - last);
        while deficit > 0 {
            let open: Vec<usize> = (0..sizes.len()).filter(|&c| sizes[c] < hi).collect();
            let &c = open.choose(rng).ok_or_else(|| Error::Unrealizable("community sizes cannot cover all nodes".into()))?;
            sizes[c] += 1;
            deficit -= 1;
        }
    }
    if sizes.len() < 2 {
        return Err(Error::Unrealizable("fewer than two communities".into()));
    }
    Ok(sizes)
}

/// Places nodes in communities, largest internal degree first, each into a
/// community big enough to host its internal edges, chosen with probability
/// proportional to remaining room.
fn assign_communities(degree: &[usize], external: &[usize], sizes: &[usize], rng: &mut ChaCha8Rng) -> Result<Vec<usize>> {
    let n = degree.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&u| std::cmp::Reverse(degree[u] - external[u]));
    let mut room = sizes.to_vec();
    let mut out = vec![usize::MAX; n];
    for u in order {
        let need = degree[u] - external[u];
        let weights: Vec<(usize, usize)> = (0..sizes.len()).filter(|&c| room[c] > 0 && sizes[c] > need).map(|c| (c, room[c])).collect();
        let total: usize = weights.iter().map(|w| w.1).sum();
        if total == 0 {
            return Err(Error::Unrealizable(format!("no community can host a node with internal degree {need}")));
        }
        let mut pick = rng.gen_range(0..total);
        let c = weights
            .iter()
            .find(|&&(_, w)| {
                if pick < w {
                    true
                } else {
                    pick -= w;
                    false
                }
            })
            .unwrap()
            .0;
        room[c] -= 1;
        out[u] = c;
    }
    Ok(out)
}

fn key(a: usize, b: usize) -> (usize, usize) {
    (a.min(b), a.max(b))
}

/// Configuration-model wiring of a stub list, then degree-preserving swaps
/// until every edge is simple, unique and `allowed`. On failure returns
/// how many edges were still invalid.
fn wire(
    stubs: &mut [usize],
    allowed: impl Fn(usize, usize) -> bool,
    budget: usize,
    rng: &mut ChaCha8Rng,
) -> std::result::Result<Vec<(usize, usize)>, usize> {
    stubs.shuffle(rng);
    let mut edges: Vec<(usize, usize)> = stubs.chunks_exact(2).map(|c| (c[0], c[1])).collect();
    if edges.is_empty() {
        return Ok(edges);
    }
    let mut count: HashMap<(usize, usize), usize> = HashMap::new();
    for &(a, b) in &edges {
        *count.entry(key(a, b)).or_default() += 1;
    }
    let is_bad = |e: (usize, usize), count: &HashMap<(usize, usize), usize>| e.0 == e.1 || count[&key(e.0, e.1)] > 1 || !allowed(e.0, e.1);
    let mut bad: Vec<usize> = (0..edges.len()).filter(|&i| is_bad(edges[i], &count)).collect();
    let mut attempts = 0;
    while !bad.is_empty() {
        let slot = rng.gen_range(0..bad.len());
        let i = bad[slot];
        if !is_bad(edges[i], &count) {
            bad.swap_remove(slot);
            continue;
        }
        if attempts >= budget {
            let left = (0..edges.len()).filter(|&i| is_bad(edges[i], &count)).count();
            return Err(left);
        }
        attempts += 1;
        let j = rng.gen_range(0..edges.len());
        if j == i {
            continue;
        }
        let (a, b) = edges[i];
        let (c, d) = if rng.gen_bool(0.5) { edges[j] } else { (edges[j].1, edges[j].0) };
        let (e1, e2) = ((a, c), (b, d));
        if e1.0 == e1.1 || e2.0 == e2.1 || key(e1.0, e1.1) == key(e2.0, e2.1) {
            continue;
        }
        if !allowed(e1.0, e1.1) || !allowed(e2.0, e2.1) {
            continue;
        }
        for old in [edges[i], edges[j]] {
            *count.get_mut(&key(old.0, old.1)).unwrap() -= 1;
        }
        let free = |e: (usize, usize), count: &HashMap<(usize, usize), usize>| count.get(&key(e.0, e.1)).copied().unwrap_or(0) == 0;
        if free(e1, &count) && free(e2, &count) {
            *count.entry(key(e1.0, e1.1)).or_default() += 1;
            *count.entry(key(e2.0, e2.1)).or_default() += 1;
            edges[i] = e1;
            edges[j] = e2;
        } else {
            for old in [edges[i], edges[j]] {
                *count.get_mut(&key(old.0, old.1)).unwrap() += 1;
            }
        }
    }
    Ok(edges)
}
