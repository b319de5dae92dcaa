//! Small bundled datasets, plus lookup of larger ones on disk.

use std::path::PathBuf;

use crate::graph::{parse_edgelist_str, Graph, ParseOptions};

/// Environment variable naming a directory with extra edge lists.
pub const DATA_DIR_ENV: &str = "DPPR_DATA_DIR";

const KARATE: &str = include_str!("../data/karate.edges");

/// Zachary's karate club, labelled `"1"` to `"34"`.
pub fn karate_club() -> Graph {
    parse_edgelist_str(KARATE).expect("bundled edge list parses").graph
}

/// The raw bundled karate edge list.
pub fn karate_edgelist() -> &'static str {
    KARATE
}

/// Reads `<name>.edges` (or `<name>.txt`) from `$DPPR_DATA_DIR`, if present.
pub fn find_external(name: &str) -> Option<PathBuf> {
    let dir = PathBuf::from(std::env::var_os(DATA_DIR_ENV)?);
    ["edges", "txt", "edgelist"].iter().map(|ext| dir.join(format!("{name}.{ext}"))).find(|p| p.is_file())
}

/// Loads a named dataset: `karate` is bundled, anything else comes from
/// `$DPPR_DATA_DIR`.
pub fn load(name: &str) -> crate::Result<Option<Graph>> {
    if name.eq_ignore_ascii_case("karate") {
        return Ok(Some(karate_club()));
    }
    match find_external(name) {
        Some(path) => Ok(Some(crate::graph::read_edgelist(path, ParseOptions::default())?.graph)),
        None => Ok(None),
    }
}
