//! Serialization helpers: JSON records with exact numbers as strings,
//! plain CSV tables, and the run manifest written next to `--out` files.
//!
//! Exact integers serialize as decimal strings and rationals as "a/b"
//! so no value is ever squeezed through a 53-bit float; floats carry 15
//! significant digits. JSON keys come out sorted (the default
//! `serde_json` map is a BTreeMap), which is what makes reruns
//! byte-identical.

use std::fs;
use std::io::Write;
use std::path::Path;
use std::time::{SystemTime, UNIX_EPOCH};

use ekr3::ratio::{format_sig15, ratio_string};
use num_bigint::BigUint;
use num_rational::BigRational;
use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};

pub fn uint(v: &BigUint) -> Value {
    Value::String(v.to_string())
}

pub fn rat(v: &BigRational) -> Value {
    Value::String(ratio_string(v))
}

pub fn float(v: f64) -> Value {
    Value::String(format_sig15(v))
}

pub fn opt_uint(v: &Option<BigUint>) -> Value {
    v.as_ref().map(uint).unwrap_or(Value::Null)
}

/// Compact JSON with a trailing newline; keys sorted by the map type.
pub fn json_line(value: &Value) -> String {
    let mut s = serde_json::to_string(value).expect("serializable value");
    s.push('\n');
    s
}

/// CSV without quoting: every value this tool emits is from the
/// alphabet [A-Za-z0-9./e+-], so separators never collide.
pub fn csv(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut s = header.join(",");
    s.push('\n');
    for row in rows {
        debug_assert_eq!(row.len(), header.len());
        debug_assert!(row.iter().all(|f| !f.contains(',') && !f.contains('\n')));
        s.push_str(&row.join(","));
        s.push('\n');
    }
    s
}

/// Writes the payload to `path` and a manifest to `path.manifest.json`
/// recording the command line, parameter set, toolkit version,
/// timestamp, and the sha256 of every output file. The payload is
/// byte-stable across reruns; the manifest is not (timestamp).
pub fn write_with_manifest(path: &Path, payload: &str, params: &Value) -> Result<(), String> {
    let io_err = |e: std::io::Error| format!("writing {}: {e}", path.display());
    if let Some(dir) = path.parent() {
        if !dir.as_os_str().is_empty() {
            fs::create_dir_all(dir).map_err(io_err)?;
        }
    }
    fs::write(path, payload).map_err(io_err)?;

    let argv: Vec<String> = std::env::args().collect();
    let digest = format!("{:x}", Sha256::digest(payload.as_bytes()));
    let timestamp = SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0);
    let mut outputs = Map::new();
    let name = path
        .file_name()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| path.display().to_string());
    outputs.insert(name, Value::String(digest));
    let manifest = json!({
        "command": argv.join(" "),
        "parameters": params,
        "version": env!("CARGO_PKG_VERSION"),
        "timestamp_unix": timestamp,
        "outputs": Value::Object(outputs),
    });

    let mut mpath = path.as_os_str().to_owned();
    mpath.push(".manifest.json");
    let mut f = fs::File::create(Path::new(&mpath))
        .map_err(|e| format!("writing manifest: {e}"))?;
    f.write_all(json_line(&manifest).as_bytes())
        .map_err(|e| format!("writing manifest: {e}"))?;
    Ok(())
}
