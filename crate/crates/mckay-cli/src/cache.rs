//! Content-addressed result cache.
//!
//! Results are keyed by the SHA-256 of the canonical configuration JSON
//! (serde_json maps are ordered, so serialization is canonical). A cache
//! file stores the configuration, a timestamp, and the full result payload;
//! everything printed to stdout is derived from the payload alone, so a
//! cache hit reproduces a fresh run byte for byte.

use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use serde_json::Value;
use sha2::{Digest, Sha256};

/// Resolves the cache directory: the flag wins, then MCKAY_CACHE_DIR,
/// and --no-cache disables both.
pub fn resolve_dir(flag: Option<PathBuf>, no_cache: bool) -> Option<PathBuf> {
    if no_cache {
        return None;
    }
    flag.or_else(|| std::env::var_os("MCKAY_CACHE_DIR").map(PathBuf::from))
}

pub fn key(config: &Value) -> String {
    let canonical = config.to_string();
    let digest = Sha256::digest(canonical.as_bytes());
    let mut hex = String::with_capacity(64);
    for byte in digest {
        hex.push_str(&format!("{byte:02x}"));
    }
    hex
}

fn entry_path(dir: &Path, key: &str) -> PathBuf {
    dir.join(format!("{key}.json"))
}

/// Returns the stored result payload, or None on any miss or read problem
/// (a broken cache entry is treated as a miss).
pub fn load(dir: &Path, key: &str) -> Option<Value> {
    let text = std::fs::read_to_string(entry_path(dir, key)).ok()?;
    let entry: Value = serde_json::from_str(&text).ok()?;
    entry.get("result").cloned()
}

/// Writes the entry atomically: temp file in the same directory, then rename.
pub fn store(dir: &Path, key: &str, config: &Value, result: &Value) -> std::io::Result<()> {
    std::fs::create_dir_all(dir)?;
    let timestamp = SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0);
    let entry = serde_json::json!({
        "config": config,
        "key": key,
        "unix_timestamp": timestamp,
        "result": result,
    });
    let final_path = entry_path(dir, key);
    let temp_path = dir.join(format!("{key}.json.tmp.{}", std::process::id()));
    std::fs::write(&temp_path, format!("{entry:#}\n"))?;
    std::fs::rename(&temp_path, &final_path)
}
