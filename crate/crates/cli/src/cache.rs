//! Append-only search-results cache: one JSON object per line in
//! `search.jsonl` under `$EKR_CACHE_DIR` (default `./.ekr-cache`).
//!
//! Entries are keyed by the canonical parameter tuple
//! (n, k, r, t, nontrivial, shifted). Only finished runs are stored
//! (EXACT, or the complete LOWER_BOUND of a shifted-only search);
//! INCOMPLETE results are never cached, so a later run with a bigger
//! budget is not shadowed by a truncated one. Corrupt lines are skipped
//! with a warning and never trusted; on duplicate keys the last line
//! wins, matching append order.

use std::fs::{self, OpenOptions};
use std::io::Write;
use std::path::PathBuf;

use serde_json::{json, Value};

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct Key {
    pub n: u32,
    pub k: u32,
    pub r: u32,
    pub t: u32,
    pub nontrivial: bool,
    pub shifted: bool,
}

#[derive(Clone, Debug)]
pub struct Entry {
    pub status: String,
    pub value: u64,
    pub nodes: u64,
    pub witnesses: Vec<String>,
}

pub fn cache_dir() -> PathBuf {
    std::env::var_os("EKR_CACHE_DIR")
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(".ekr-cache"))
}

fn store_path() -> PathBuf {
    cache_dir().join("search.jsonl")
}

fn u32_field(v: &Value, name: &str) -> Option<u32> {
    v.get(name)?.as_u64()?.try_into().ok()
}

fn parse_line(line: &str) -> Option<(Key, Entry)> {
    let v: Value = serde_json::from_str(line).ok()?;
    let key = Key {
        n: u32_field(&v, "n")?,
        k: u32_field(&v, "k")?,
        r: u32_field(&v, "r")?,
        t: u32_field(&v, "t")?,
        nontrivial: v.get("nontrivial")?.as_bool()?,
        shifted: v.get("shifted")?.as_bool()?,
    };
    let status = v.get("status")?.as_str()?.to_string();
    if status != "EXACT" && status != "LOWER_BOUND" {
        return None;
    }
    let value: u64 = v.get("value")?.as_str()?.parse().ok()?;
    let nodes = v.get("nodes")?.as_u64()?;
    let witnesses = v
        .get("witnesses")?
        .as_array()?
        .iter()
        .map(|w| w.as_str().map(str::to_string))
        .collect::<Option<Vec<_>>>()?;
    Some((key, Entry { status, value, nodes, witnesses }))
}

/// Scans the whole store; returns the last valid entry for `key`.
pub fn lookup(key: Key) -> Option<Entry> {
    let text = fs::read_to_string(store_path()).ok()?;
    let mut found = None;
    for (idx, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        match parse_line(line) {
            Some((k, entry)) => {
                if k == key {
                    found = Some(entry);
                }
            }
            None => {
                eprintln!(
                    "warning: skipping corrupt cache line {} in {}",
                    idx + 1,
                    store_path().display()
                );
            }
        }
    }
    found
}

/// Appends one finished result; creates the store on first use. The
/// record goes out in a single write so concurrent appenders do not
/// interleave partial lines.
pub fn append(key: Key, entry: &Entry) -> Result<(), String> {
    debug_assert!(entry.status == "EXACT" || entry.status == "LOWER_BOUND");
    let dir = cache_dir();
    fs::create_dir_all(&dir).map_err(|e| format!("creating {}: {e}", dir.display()))?;
    let record = json!({
        "n": key.n,
        "k": key.k,
        "r": key.r,
        "t": key.t,
        "nontrivial": key.nontrivial,
        "shifted": key.shifted,
        "status": entry.status,
        "value": entry.value.to_string(),
        "nodes": entry.nodes,
        "witnesses": entry.witnesses,
    });
    let mut line = serde_json::to_string(&record).expect("serializable record");
    line.push('\n');
    let mut f = OpenOptions::new()
        .create(true)
        .append(true)
        .open(store_path())
        .map_err(|e| format!("opening {}: {e}", store_path().display()))?;
    f.write_all(line.as_bytes())
        .map_err(|e| format!("appending to {}: {e}", store_path().display()))
}
