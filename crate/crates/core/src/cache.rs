//! On-disk cache of PPR vectors, so benchmark sweeps do not recompute them.
//!
//! Binary layout (all integers and floats little-endian):
//!
//! ```text
//! magic     8 bytes   "DPPRVEC1"
//! graph    64 bytes   hex SHA-256 fingerprint of the graph
//! source    u64
//! beta      f64
//! tol       f64
//! n         u64
//! values    n x f64
//! ```
//!
//! The textual fallback is a CSV with columns `node,label,value`.

use std::fs;
use std::io::{self, BufRead, Read, Write};
use std::path::{Path, PathBuf};

use crate::graph::Graph;
use crate::ppr::{PprConfig, PprVector};
use crate::{Error, Result};

const MAGIC: &[u8; 8] = b"DPPRVEC1";

/// Environment variable naming the cache directory.
pub const CACHE_DIR_ENV: &str = "DPPR_CACHE_DIR";

#[derive(Debug, Clone, PartialEq)]
pub struct CacheKey {
    pub graph: String,
    pub source: usize,
    pub beta: f64,
    pub tol: f64,
}

impl CacheKey {
    pub fn new(g: &Graph, source: usize, cfg: &PprConfig) -> Self {
        Self::with_fingerprint(g.fingerprint(), source, cfg)
    }

    pub fn with_fingerprint(graph: String, source: usize, cfg: &PprConfig) -> Self {
        Self { graph, source, beta: cfg.beta, tol: cfg.tol }
    }

    fn file_name(&self) -> String {
        format!("{}-{}-{:016x}-{:016x}.ppr", &self.graph[..16.min(self.graph.len())], self.source, self.beta.to_bits(), self.tol.to_bits())
    }
}

pub fn write_binary<W: Write>(mut w: W, key: &CacheKey, values: &[f64]) -> Result<()> {
    if key.graph.len() != 64 {
        return Err(Error::Cache(format!("graph fingerprint must be 64 hex chars, got {}", key.graph.len())));
    }
    w.write_all(MAGIC)?;
    w.write_all(key.graph.as_bytes())?;
    w.write_all(&(key.source as u64).to_le_bytes())?;
    w.write_all(&key.beta.to_le_bytes())?;
    w.write_all(&key.tol.to_le_bytes())?;
    w.write_all(&(values.len() as u64).to_le_bytes())?;
    for v in values {
        w.write_all(&v.to_le_bytes())?;
    }
    Ok(())
}

fn read_u64<R: Read>(r: &mut R) -> io::Result<u64> {
    let mut b = [0u8; 8];
    r.read_exact(&mut b)?;
    Ok(u64::from_le_bytes(b))
}

pub fn read_binary<R: Read>(mut r: R) -> Result<(CacheKey, Vec<f64>)> {
    let mut magic = [0u8; 8];
    r.read_exact(&mut magic)?;
    if &magic != MAGIC {
        return Err(Error::Cache("bad magic".into()));
    }
    let mut graph = [0u8; 64];
    r.read_exact(&mut graph)?;
    let graph = String::from_utf8(graph.to_vec()).map_err(|_| Error::Cache("fingerprint is not ASCII".into()))?;
    let source = read_u64(&mut r)? as usize;
    let beta = f64::from_bits(read_u64(&mut r)?);
    let tol = f64::from_bits(read_u64(&mut r)?);
    let n = read_u64(&mut r)? as usize;
    let mut values = Vec::with_capacity(n.min(1 << 24));
    for _ in 0..n {
        values.push(f64::from_bits(read_u64(&mut r)?));
    }
    Ok((CacheKey { graph, source, beta, tol }, values))
}

/// Writes `node,label,value` rows.
pub fn write_csv<W: Write>(w: W, g: &Graph, values: &[f64]) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(["node", "label", "value"])?;
    for (u, v) in values.iter().enumerate() {
        out.write_record([u.to_string(), g.label(u).into_owned(), v.to_string()])?;
    }
    out.flush()?;
    Ok(())
}

/// Reads the `value` column of a CSV written by [`write_csv`], indexed by `node`.
pub fn read_csv<R: BufRead>(r: R) -> Result<Vec<f64>> {
    let mut rdr = csv::Reader::from_reader(r);
    let mut rows = Vec::new();
    for rec in rdr.records() {
        let rec = rec?;
        let parse_err = |what: &str| Error::Cache(format!("bad {what} in row {:?}", rec.position().map(|p| p.line())));
        let node: usize = rec.get(0).and_then(|s| s.parse().ok()).ok_or_else(|| parse_err("node"))?;
        let value: f64 = rec.get(2).and_then(|s| s.parse().ok()).ok_or_else(|| parse_err("value"))?;
        rows.push((node, value));
    }
    let n = rows.len();
    let mut values = vec![0.0; n];
    for (node, value) in rows {
        *values.get_mut(node).ok_or_else(|| Error::Cache(format!("node {node} outside 0..{n}")))? = value;
    }
    Ok(values)
}

/// Directory of binary PPR files keyed by [`CacheKey`].
#[derive(Debug, Clone)]
pub struct DiskCache {
    dir: PathBuf,
}

impl DiskCache {
    pub fn new(dir: impl Into<PathBuf>) -> Result<Self> {
        let dir = dir.into();
        fs::create_dir_all(&dir)?;
        Ok(Self { dir })
    }

    /// Cache in `$DPPR_CACHE_DIR`, if set and usable.
    pub fn from_env() -> Option<Self> {
        let dir = std::env::var_os(CACHE_DIR_ENV)?;
        match Self::new(PathBuf::from(dir)) {
            Ok(c) => Some(c),
            Err(e) => {
                log::warn!("ignoring {CACHE_DIR_ENV}: {e}");
                None
            }
        }
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    /// Returns the cached vector, or `None` on a miss. Unreadable or
    /// mismatched entries count as misses.
    pub fn load(&self, key: &CacheKey, n: usize) -> Option<PprVector> {
        let path = self.dir.join(key.file_name());
        let file = fs::File::open(&path).ok()?;
        match read_binary(io::BufReader::new(file)) {
            Ok((stored, values)) if stored == *key && values.len() == n => Some(PprVector { source: key.source, values, iterations: 0 }),
            Ok(_) => {
                log::warn!("cache entry {} does not match its key", path.display());
                None
            }
            Err(e) => {
                log::warn!("unreadable cache entry {}: {e}", path.display());
                None
            }
        }
    }

    pub fn store(&self, key: &CacheKey, values: &[f64]) -> Result<()> {
        let path = self.dir.join(key.file_name());
        // Write-then-rename so concurrent readers never see a partial file.
        let tmp = path.with_extension(format!("tmp{}", std::process::id()));
        {
            let mut w = io::BufWriter::new(fs::File::create(&tmp)?);
            write_binary(&mut w, key, values)?;
            w.flush()?;
        }
        fs::rename(&tmp, &path)?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::tests::triangle;
    use crate::ppr::ppr_solve;
    use proptest::prelude::*;

    #[test]
    fn disk_cache_hit_and_miss() {
        let dir = tempfile::tempdir().unwrap();
        let cache = DiskCache::new(dir.path()).unwrap();
        let g = triangle();
        let cfg = PprConfig::default();
        let s = ppr_solve(&g, 1, &cfg).unwrap();
        let key = CacheKey::new(&g, 1, &cfg);
        assert!(cache.load(&key, 3).is_none());
        cache.store(&key, &s.values).unwrap();
        assert_eq!(cache.load(&key, 3).unwrap().values, s.values);

        let other = CacheKey::new(&g, 1, &PprConfig { beta: 0.5, ..cfg });
        assert!(cache.load(&other, 3).is_none());
        assert!(cache.load(&key, 4).is_none());
    }

    #[test]
    fn corrupt_entries_are_misses() {
        let dir = tempfile::tempdir().unwrap();
        let cache = DiskCache::new(dir.path()).unwrap();
        let g = triangle();
        let key = CacheKey::new(&g, 0, &PprConfig::default());
        fs::write(dir.path().join(key.file_name()), b"garbage").unwrap();
        assert!(cache.load(&key, 3).is_none());
    }

    #[test]
    fn csv_round_trip() {
        let g = crate::graph::parse_edgelist_str("x y\ny z\n").unwrap().graph;
        let mut buf = Vec::new();
        write_csv(&mut buf, &g, &[0.5, 0.25, 0.25]).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("node,label,value\n0,x,0.5\n"));
        assert_eq!(read_csv(&buf[..]).unwrap(), vec![0.5, 0.25, 0.25]);
    }

    proptest! {
        #[test]
        fn binary_round_trip(values in prop::collection::vec(any::<f64>(), 0..50), source in 0usize..1000, beta in 0.0f64..1.0) {
            let key = CacheKey { graph: "ab".repeat(32), source, beta, tol: 1e-10 };
            let mut buf = Vec::new();
            write_binary(&mut buf, &key, &values).unwrap();
            prop_assert_eq!(buf.len(), 8 + 64 + 32 + 8 * values.len());
            let (k2, v2) = read_binary(&buf[..]).unwrap();
            prop_assert_eq!(k2, key);
            prop_assert_eq!(
                v2.iter().map(|v| v.to_bits()).collect::<Vec<_>>(),
                values.iter().map(|v| v.to_bits()).collect::<Vec<_>>()
            );
        }
    }
}
