//! Immutable undirected simple graphs in compressed adjacency form.
//!
//! A [`Graph`] stores one sorted neighbor list per node, back to back in a
//! single buffer. Every operator the rest of the crate needs (adjacency,
//! Laplacian `L = D - A`, random-walk transition `A D^-1`) is applied
//! matrix-free against caller-owned signal buffers.

use std::borrow::Cow;
use std::collections::HashMap;
use std::fmt::Write as _;
use std::io::{BufRead, Write};
use std::path::Path;
use std::sync::Arc;

use sha2::{Digest, Sha256};

use crate::{Error, Result};

/// Mapping between external node ids and dense indices `0..n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NodeLabels {
    names: Vec<String>,
    index: HashMap<String, usize>,
}

impl NodeLabels {
    pub fn new(names: Vec<String>) -> Result<Self> {
        let mut index = HashMap::with_capacity(names.len());
        for (i, name) in names.iter().enumerate() {
            if index.insert(name.clone(), i).is_some() {
                return Err(Error::InvalidParameter(format!("duplicate node label {name:?}")));
            }
        }
        Ok(Self { names, index })
    }

    pub fn name(&self, u: usize) -> &str {
        &self.names[u]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.index.get(label).copied()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }
}

/// Undirected, unweighted simple graph.
///
/// Invariants: neighbor lists are sorted and symmetric, there are no
/// self-loops or repeated neighbors, and the degree sum is `2 * edge_count()`.
/// The graph cannot be mutated after construction, so it can be shared
/// freely across threads.
#[derive(Debug, Clone)]
pub struct Graph {
    offsets: Vec<usize>,
    adj: Vec<usize>,
    labels: Option<Arc<NodeLabels>>,
}

impl PartialEq for Graph {
    /// Structural equality; labels are ignored.
    fn eq(&self, other: &Self) -> bool {
        self.offsets == other.offsets && self.adj == other.adj
    }
}

/// Counts of input records dropped while building a graph.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct BuildStats {
    pub self_loops: usize,
    pub duplicate_edges: usize,
}

impl Graph {
    /// Graph with `n` nodes and no edges.
    pub fn empty(n: usize) -> Self {
        Self { offsets: vec![0; n + 1], adj: Vec::new(), labels: None }
    }

    /// Builds a graph on nodes `0..n`. Self-loops are dropped and parallel
    /// edges (in either orientation) are collapsed.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        Self::from_edges_with_stats(n, edges).map(|(g, _)| g)
    }

    /// Like [`Graph::from_edges`], also reporting what was dropped.
    pub fn from_edges_with_stats<I>(n: usize, edges: I) -> Result<(Self, BuildStats)>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut stats = BuildStats::default();
        let mut pairs = Vec::new();
        for (u, v) in edges {
            for w in [u, v] {
                if w >= n {
                    return Err(Error::NodeOutOfRange { node: w, n });
                }
            }
            if u == v {
                stats.self_loops += 1;
                continue;
            }
            pairs.push((u.min(v), u.max(v)));
        }
        pairs.sort_unstable();
        let before = pairs.len();
        pairs.dedup();
        stats.duplicate_edges = before - pairs.len();

        let mut degree = vec![0usize; n];
        for &(a, b) in &pairs {
            degree[a] += 1;
            degree[b] += 1;
        }
        let mut offsets = Vec::with_capacity(n + 1);
        offsets.push(0);
        for d in &degree {
            offsets.push(offsets.last().unwrap() + d);
        }
        // Filling in (a, b)-sorted order leaves every list sorted: node x
        // first receives its smaller neighbors (as `b`), ascending, then its
        // larger ones (as `a`), ascending.
        let mut cursor = offsets[..n].to_vec();
        let mut adj = vec![0usize; 2 * pairs.len()];
        for &(a, b) in &pairs {
            adj[cursor[a]] = b;
            cursor[a] += 1;
            adj[cursor[b]] = a;
            cursor[b] += 1;
        }
        Ok((Self { offsets, adj, labels: None }, stats))
    }

    /// Attaches external labels; `names[i]` becomes the label of node `i`.
    pub fn with_labels(mut self, names: Vec<String>) -> Result<Self> {
        if names.len() != self.node_count() {
            return Err(Error::DimensionMismatch { expected: self.node_count(), found: names.len() });
        }
        self.labels = Some(Arc::new(NodeLabels::new(names)?));
        Ok(self)
    }

    pub fn node_count(&self) -> usize {
        self.offsets.len() - 1
    }

    pub fn edge_count(&self) -> usize {
        self.adj.len() / 2
    }

    pub fn average_degree(&self) -> f64 {
        if self.node_count() == 0 {
            0.0
        } else {
            self.adj.len() as f64 / self.node_count() as f64
        }
    }

    pub fn max_degree(&self) -> usize {
        (0..self.node_count()).map(|u| self.offsets[u + 1] - self.offsets[u]).max().unwrap_or(0)
    }

    pub fn check_node(&self, u: usize) -> Result<()> {
        if u < self.node_count() {
            Ok(())
        } else {
            Err(Error::NodeOutOfRange { node: u, n: self.node_count() })
        }
    }

    /// Number of neighbors of `u`.
    pub fn degree(&self, u: usize) -> Result<usize> {
        self.check_node(u)?;
        Ok(self.offsets[u + 1] - self.offsets[u])
    }

    /// Sorted neighbor list of `u`. Panics if `u` is out of range.
    #[inline]
    pub fn neighbors(&self, u: usize) -> &[usize] {
        &self.adj[self.offsets[u]..self.offsets[u + 1]]
    }

    #[inline]
    pub(crate) fn deg(&self, u: usize) -> usize {
        self.offsets[u + 1] - self.offsets[u]
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.node_count() && v < self.node_count() && self.neighbors(u).binary_search(&v).is_ok()
    }

    /// Edges as `(u, v)` with `u < v`, in ascending order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.node_count()).flat_map(move |u| self.neighbors(u).iter().copied().filter(move |&v| v > u).map(move |v| (u, v)))
    }

    pub fn labels(&self) -> Option<&NodeLabels> {
        self.labels.as_deref()
    }

    /// External label of `u`, or its index when the graph is unlabelled.
    pub fn label(&self, u: usize) -> Cow<'_, str> {
        match &self.labels {
            Some(l) => Cow::Borrowed(l.name(u)),
            None => Cow::Owned(u.to_string()),
        }
    }

    /// Resolves an external label (or a plain index on unlabelled graphs).
    pub fn node_index(&self, label: &str) -> Result<usize> {
        let found = match &self.labels {
            Some(l) => l.index_of(label),
            None => label.parse::<usize>().ok().filter(|&u| u < self.node_count()),
        };
        found.ok_or_else(|| Error::UnknownLabel(label.to_string()))
    }

    fn check_len(&self, len: usize) -> Result<()> {
        if len == self.node_count() {
            Ok(())
        } else {
            Err(Error::DimensionMismatch { expected: self.node_count(), found: len })
        }
    }

    /// `y = A x`.
    pub fn adjacency_apply_into(&self, x: &[f64], y: &mut [f64]) -> Result<()> {
        self.check_len(x.len())?;
        self.check_len(y.len())?;
        for (u, yu) in y.iter_mut().enumerate() {
            *yu = self.neighbors(u).iter().map(|&v| x[v]).sum();
        }
        Ok(())
    }

    /// `y = (D - A) x`, without materializing `L`.
    pub fn laplacian_apply_into(&self, x: &[f64], y: &mut [f64]) -> Result<()> {
        self.check_len(x.len())?;
        self.check_len(y.len())?;
        for (u, yu) in y.iter_mut().enumerate() {
            let nb = self.neighbors(u);
            let s: f64 = nb.iter().map(|&v| x[v]).sum();
            *yu = nb.len() as f64 * x[u] - s;
        }
        Ok(())
    }

    pub fn laplacian_apply(&self, x: &[f64]) -> Result<Vec<f64>> {
        let mut y = vec![0.0; self.node_count()];
        self.laplacian_apply_into(x, &mut y)?;
        Ok(y)
    }

    /// `y = A D^-1 x`: each node spreads its mass evenly over its neighbors.
    ///
    /// `D^-1` is undefined at isolated nodes; their column is taken as zero,
    /// so mass sitting on an isolated node disappears from `y`. Callers that
    /// need mass conservation (the PPR iteration) re-inject it themselves.
    pub fn walk_apply_into(&self, x: &[f64], y: &mut [f64]) -> Result<()> {
        self.check_len(x.len())?;
        self.check_len(y.len())?;
        y.fill(0.0);
        for (v, &xv) in x.iter().enumerate() {
            if xv == 0.0 {
                continue;
            }
            let nb = self.neighbors(v);
            if nb.is_empty() {
                continue;
            }
            let share = xv / nb.len() as f64;
            for &u in nb {
                y[u] += share;
            }
        }
        Ok(())
    }

    pub fn walk_apply(&self, x: &[f64]) -> Result<Vec<f64>> {
        let mut y = vec![0.0; self.node_count()];
        self.walk_apply_into(x, &mut y)?;
        Ok(y)
    }

    /// Copy of this graph with the given edges removed. Node count and
    /// labels are kept, so nodes may become isolated.
    pub fn without_edges(&self, removed: &[(usize, usize)]) -> Graph {
        let mut drop: Vec<(usize, usize)> = removed.iter().map(|&(u, v)| (u.min(v), u.max(v))).collect();
        drop.sort_unstable();
        let kept = self.edges().filter(|e| drop.binary_search(e).is_err());
        let mut g = Graph::from_edges(self.node_count(), kept).expect("edges of an existing graph are in range");
        g.labels = self.labels.clone();
        g
    }

    /// Canonical edge list: `u v` with `u < v`, sorted, dense 0-based ids,
    /// one edge per line, newline-terminated.
    pub fn write_edgelist<W: Write>(&self, mut w: W) -> Result<()> {
        for (u, v) in self.edges() {
            writeln!(w, "{u} {v}")?;
        }
        Ok(())
    }

    /// Like [`Graph::write_edgelist`] but naming nodes by label.
    pub fn write_labelled_edgelist<W: Write>(&self, mut w: W) -> Result<()> {
        for (u, v) in self.edges() {
            writeln!(w, "{} {}", self.label(u), self.label(v))?;
        }
        Ok(())
    }

    pub fn to_edgelist_string(&self) -> String {
        let mut s = String::with_capacity(self.edge_count() * 8);
        for (u, v) in self.edges() {
            let _ = writeln!(s, "{u} {v}");
        }
        s
    }

    /// SHA-256 over the node count and canonical edge sequence, hex encoded.
    pub fn fingerprint(&self) -> String {
        let mut h = Sha256::new();
        h.update((self.node_count() as u64).to_le_bytes());
        for (u, v) in self.edges() {
            h.update((u as u64).to_le_bytes());
            h.update((v as u64).to_le_bytes());
        }
        hex::encode(h.finalize())
    }
}

/// Options for [`parse_edgelist`].
#[derive(Debug, Clone, Copy, Default)]
pub struct ParseOptions {
    /// Treat ids as dense 0-based indices (`n = max id + 1`) instead of
    /// arbitrary tokens relabelled in first-appearance order.
    pub dense_ids: bool,
    /// Ignore tokens after the first two on each line (weights, timestamps).
    pub allow_extra_columns: bool,
}

/// A parsed graph together with what the parser discarded.
#[derive(Debug, Clone)]
pub struct ParsedGraph {
    pub graph: Graph,
    pub stats: BuildStats,
}

/// Reads a whitespace-separated edge list, one `u v` pair per line.
/// Lines starting with `#` and blank lines are skipped.
pub fn parse_edgelist<R: BufRead>(reader: R, opts: ParseOptions) -> Result<ParsedGraph> {
    let mut names: Vec<String> = Vec::new();
    let mut index: HashMap<String, usize> = HashMap::new();
    let mut edges = Vec::new();
    let mut max_id = 0usize;

    for (lineno, line) in reader.lines().enumerate() {
        let line = line?;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let tokens: Vec<&str> = trimmed.split_whitespace().collect();
        if tokens.len() < 2 || (tokens.len() > 2 && !opts.allow_extra_columns) {
            return Err(Error::Parse { line: lineno + 1, message: format!("expected 2 tokens, found {}", tokens.len()) });
        }
        let mut ids = [0usize; 2];
        for (slot, tok) in ids.iter_mut().zip(&tokens[..2]) {
            *slot = if opts.dense_ids {
                let id =
                    tok.parse::<usize>().map_err(|_| Error::Parse { line: lineno + 1, message: format!("{tok:?} is not a node index") })?;
                max_id = max_id.max(id);
                id
            } else if let Some(&i) = index.get(*tok) {
                i
            } else {
                let i = names.len();
                names.push(tok.to_string());
                index.insert(tok.to_string(), i);
                i
            };
        }
        edges.push((ids[0], ids[1]));
    }
    if edges.is_empty() {
        return Err(Error::EmptyInput);
    }

    let n = if opts.dense_ids { max_id + 1 } else { names.len() };
    let (mut graph, stats) = Graph::from_edges_with_stats(n, edges)?;
    if !opts.dense_ids {
        graph.labels = Some(Arc::new(NodeLabels { names, index }));
    }
    if stats.self_loops > 0 || stats.duplicate_edges > 0 {
        log::warn!("edge list: dropped {} self-loop(s) and {} duplicate edge(s)", stats.self_loops, stats.duplicate_edges);
    }
    Ok(ParsedGraph { graph, stats })
}

pub fn parse_edgelist_str(text: &str) -> Result<ParsedGraph> {
    parse_edgelist(text.as_bytes(), ParseOptions::default())
}

pub fn read_edgelist(path: impl AsRef<Path>, opts: ParseOptions) -> Result<ParsedGraph> {
    let f = std::fs::File::open(path)?;
    parse_edgelist(std::io::BufReader::new(f), opts)
}
