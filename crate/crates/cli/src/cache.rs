//! Content-addressed store for rank reports.
//!
//! The key hashes everything a report depends on: the group's elements in
//! canonical order, the carrier, the enumeration, the selected invariants
//! and the node budget. Entries are JSON files named by the hex digest.

use std::fs;
use std::path::{Path, PathBuf};

use chainrank::group::MarkedGroup;
use chainrank::invariants::{RankReport, Selection};
use sha2::{Digest, Sha256};

pub const ENV_VAR: &str = "CHAINRANK_CACHE_DIR";

pub fn dir() -> Option<PathBuf> {
    std::env::var_os(ENV_VAR)
        .filter(|v| !v.is_empty())
        .map(PathBuf::from)
}

pub fn key(m: &MarkedGroup, selection: Selection, budget: usize) -> String {
    let g = m.group();
    let mut h = Sha256::new();
    h.update(b"chainrank-report-v1\n");
    h.update(format!("degree {}\n", g.degree()));
    for p in g.elements() {
        for &x in p.images() {
            h.update(x.to_le_bytes());
        }
    }
    h.update(b"\ncarrier");
    for x in m.carrier().elements() {
        h.update((x as u64).to_le_bytes());
    }
    h.update(b"\nenumeration");
    for &x in m.enumeration() {
        h.update((x as u64).to_le_bytes());
    }
    h.update(format!(
        "\nseed {:?}\nselection {selection:?}\nbudget {budget}\n",
        m.seed()
    ));
    hex::encode(h.finalize())
}

fn entry_path(dir: &Path, key: &str) -> PathBuf {
    dir.join(format!("{key}.json"))
}

pub fn get(dir: &Path, key: &str) -> Option<RankReport> {
    let text = fs::read_to_string(entry_path(dir, key)).ok()?;
    serde_json::from_str(&text).ok()
}

pub fn put(dir: &Path, key: &str, report: &RankReport) -> std::io::Result<()> {
    fs::create_dir_all(dir)?;
    let text = serde_json::to_string_pretty(report).expect("reports serialize");
    // Write then rename so concurrent readers never see a partial file.
    let tmp = dir.join(format!("{key}.json.tmp{}", std::process::id()));
    fs::write(&tmp, text)?;
    fs::rename(tmp, entry_path(dir, key))
}

pub fn entries(dir: &Path) -> std::io::Result<Vec<PathBuf>> {
    if !dir.exists() {
        return Ok(Vec::new());
    }
    let mut out: Vec<PathBuf> = fs::read_dir(dir)?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    out.sort();
    Ok(out)
}

pub fn clear(dir: &Path) -> std::io::Result<usize> {
    let files = entries(dir)?;
    for f in &files {
        fs::remove_file(f)?;
    }
    Ok(files.len())
}
