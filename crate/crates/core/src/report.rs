//! CSV and JSON writers for benchmark and sweep output.
//!
//! `results.csv` holds only values that are a pure function of seeds and
//! configuration, so repeated runs produce identical bytes. Wall times go
//! to `timings.csv` and the JSON summary.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::eval::{BenchmarkResult, SweepAxis, SweepCell, SweepRow};
use crate::graph::Graph;
use crate::Result;

/// Benchmark results tagged with the sweep cell they belong to (if any).
#[derive(Debug, Clone, Copy)]
pub struct Block<'a> {
    pub axis: Option<SweepAxis>,
    pub value: Option<f64>,
    pub results: &'a [BenchmarkResult],
    /// Graph whose labels name the nodes in `scores.csv`; indices otherwise.
    pub labels: Option<&'a Graph>,
}

impl<'a> Block<'a> {
    pub fn plain(results: &'a [BenchmarkResult]) -> Self {
        Self { axis: None, value: None, results, labels: None }
    }

    pub fn with_labels(self, g: &'a Graph) -> Self {
        Self { labels: Some(g), ..self }
    }

    pub fn cell(cell: &'a SweepCell) -> Self {
        Self { axis: Some(cell.axis), value: Some(cell.value), results: &cell.results, labels: None }
    }

    fn tag(&self) -> (String, String) {
        (self.axis.map(|a| a.name().to_string()).unwrap_or_default(), self.value.map(|v| v.to_string()).unwrap_or_default())
    }
}

#[derive(Serialize)]
struct ResultRow<'a> {
    axis: &'a str,
    value: &'a str,
    method: &'a str,
    repeat: usize,
    seed: u64,
    aupr: Option<f64>,
    n_pos: usize,
    n_neg: usize,
    error: &'a str,
}

#[derive(Serialize)]
struct TimingRow<'a> {
    axis: &'a str,
    value: &'a str,
    method: &'a str,
    repeat: usize,
    runtime_ms: f64,
}

#[derive(Serialize)]
struct ScoreRow<'a> {
    axis: &'a str,
    value: &'a str,
    method: &'a str,
    repeat: usize,
    u: String,
    v: String,
    label: u8,
    score: f64,
}

/// One row per method and repeat.
pub fn write_results<W: Write>(w: W, blocks: &[Block<'_>]) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    for b in blocks {
        let (axis, value) = b.tag();
        for r in b.results {
            out.serialize(ResultRow {
                axis: &axis,
                value: &value,
                method: r.method.name(),
                repeat: r.repeat,
                seed: r.seed,
                aupr: r.aupr,
                n_pos: r.n_pos,
                n_neg: r.n_neg,
                error: r.error.as_deref().unwrap_or(""),
            })?;
        }
    }
    write_header_if_empty(&mut out, blocks, &["axis", "value", "method", "repeat", "seed", "aupr", "n_pos", "n_neg", "error"])?;
    out.flush()?;
    Ok(())
}

pub fn write_timings<W: Write>(w: W, blocks: &[Block<'_>]) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    for b in blocks {
        let (axis, value) = b.tag();
        for r in b.results {
            out.serialize(TimingRow { axis: &axis, value: &value, method: r.method.name(), repeat: r.repeat, runtime_ms: r.runtime_ms })?;
        }
    }
    write_header_if_empty(&mut out, blocks, &["axis", "value", "method", "repeat", "runtime_ms"])?;
    out.flush()?;
    Ok(())
}

/// Every scored evaluation pair.
pub fn write_scores<W: Write>(w: W, blocks: &[Block<'_>]) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    for b in blocks {
        let (axis, value) = b.tag();
        for r in b.results {
            for p in &r.scores {
                out.serialize(ScoreRow {
                    axis: &axis,
                    value: &value,
                    method: r.method.name(),
                    repeat: r.repeat,
                    u: name(b.labels, p.u),
                    v: name(b.labels, p.v),
                    label: u8::from(p.label),
                    score: p.score,
                })?;
            }
        }
    }
    write_header_if_empty(&mut out, blocks, &["axis", "value", "method", "repeat", "u", "v", "label", "score"])?;
    out.flush()?;
    Ok(())
}

pub fn write_sweep_table<W: Write>(w: W, rows: &[SweepRow]) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    if rows.is_empty() {
        out.write_record(["axis", "value", "method", "mean_aupr", "std_aupr", "failed"])?;
    }
    for r in rows {
        out.serialize(r)?;
    }
    out.flush()?;
    Ok(())
}

fn name(g: Option<&Graph>, u: usize) -> String {
    match g {
        Some(g) => g.label(u).into_owned(),
        None => u.to_string(),
    }
}

// Serde writes the header with the first row, so empty tables need it by hand.
fn write_header_if_empty<W: Write>(out: &mut csv::Writer<W>, blocks: &[Block<'_>], header: &[&str]) -> Result<()> {
    if blocks.iter().all(|b| b.results.is_empty()) {
        out.write_record(header)?;
    }
    Ok(())
}

/// Pretty-printed JSON with a trailing newline.
pub fn write_json<T: Serialize + ?Sized>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    fs::write(path, text)?;
    Ok(())
}

/// `<path>.json` next to an output file, e.g. `results.csv.json`.
pub fn sidecar_path(path: &Path) -> PathBuf {
    let mut name = path.file_name().unwrap_or_default().to_os_string();
    name.push(".json");
    path.with_file_name(name)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eval::{Method, ScoredPair};

    fn result(method: Method, repeat: usize, aupr: Option<f64>) -> BenchmarkResult {
        BenchmarkResult {
            method,
            repeat,
            seed: 10 + repeat as u64,
            config: serde_json::Value::Null,
            scores: vec![ScoredPair { u: 0, v: 3, label: true, score: 0.5 }],
            aupr,
            error: aupr.is_none().then(|| "boom".to_string()),
            n_pos: 1,
            n_neg: 1,
            runtime_ms: 1.25,
        }
    }

    #[test]
    fn results_layout() {
        let rs = [result(Method::Cn, 0, Some(0.75)), result(Method::Dppr, 1, None)];
        let mut buf = Vec::new();
        write_results(&mut buf, &[Block::plain(&rs)]).unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            "axis,value,method,repeat,seed,aupr,n_pos,n_neg,error\n,,cn,0,10,0.75,1,1,\n,,dppr,1,11,,1,1,boom\n"
        );
    }

    #[test]
    fn tagged_blocks_and_empty_tables() {
        let rs = [result(Method::Aa, 0, Some(1.0))];
        let block = Block { axis: Some(SweepAxis::LfrMu), value: Some(0.3), results: &rs, labels: None };
        let mut buf = Vec::new();
        write_timings(&mut buf, &[block]).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "axis,value,method,repeat,runtime_ms\nlfr_mu,0.3,aa,0,1.25\n");

        let mut buf = Vec::new();
        write_scores(&mut buf, &[block]).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "axis,value,method,repeat,u,v,label,score\nlfr_mu,0.3,aa,0,0,3,1,0.5\n");

        let mut buf = Vec::new();
        write_results(&mut buf, &[]).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "axis,value,method,repeat,seed,aupr,n_pos,n_neg,error\n");
    }

    #[test]
    fn scores_use_labels() {
        let g = crate::graph::parse_edgelist_str("a b\nb c\nc d\n").unwrap().graph;
        let rs = [result(Method::Cn, 0, Some(1.0))];
        let mut buf = Vec::new();
        write_scores(&mut buf, &[Block::plain(&rs).with_labels(&g)]).unwrap();
        assert!(String::from_utf8(buf).unwrap().ends_with(",,cn,0,a,d,1,0.5\n"));
    }

    #[test]
    fn sidecar_names() {
        assert_eq!(sidecar_path(Path::new("out/results.csv")), PathBuf::from("out/results.csv.json"));
    }
}
