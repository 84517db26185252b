//! Append-only JSONL cache of resolved thresholds, keyed by canonical source
//! descriptor and `k`. Readers take a shared lock, writers an exclusive one.

use std::fs::{File, OpenOptions};
use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const DEFAULT_CACHE_PATH: &str = "./parfilter-cache.jsonl";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ThresholdCacheEntry {
    pub source: String,
    pub k: u32,
    pub threshold: u32,
    /// Family digest at the threshold.
    pub established_digest: String,
    /// Family digest at `threshold - 1`, absent when the threshold is 1.
    pub refutation_digest: Option<String>,
    pub engine_version: String,
    pub nodes: u64,
}

impl ThresholdCacheEntry {
    pub fn key(&self) -> String {
        cache_key(&self.source, self.k)
    }
}

fn cache_key(source: &str, k: u32) -> String {
    format!("{source} k={k}")
}

#[derive(Debug, Clone)]
pub struct ThresholdCache {
    path: PathBuf,
}

impl ThresholdCache {
    pub fn new(path: impl Into<PathBuf>) -> Self {
        ThresholdCache { path: path.into() }
    }

    pub fn path(&self) -> &Path {
        &self.path
    }

    /// Latest entry for `(source, k)`. Conflicting lines for the key are an
    /// error rather than being reconciled.
    pub fn lookup(&self, source: &str, k: u32) -> Result<Option<ThresholdCacheEntry>> {
        let mut file = match File::open(&self.path) {
            Ok(f) => f,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(None),
            Err(e) => return Err(Error::io(&self.path, e)),
        };
        file.lock_shared().map_err(|e| Error::io(&self.path, e))?;
        let entries = read_entries(&mut file, &self.path)?;
        let key = cache_key(source, k);
        let mut found: Option<ThresholdCacheEntry> = None;
        for e in entries.into_iter().filter(|e| e.key() == key) {
            if let Some(prev) = &found {
                if prev.threshold != e.threshold {
                    return Err(Error::CacheConflict { key, cached: prev.threshold, new: e.threshold });
                }
            }
            found = Some(e);
        }
        Ok(found)
    }

    /// Appends one line. Fails with `CacheConflict` if the key is already
    /// cached with a different threshold.
    pub fn append(&self, entry: &ThresholdCacheEntry) -> Result<()> {
        let mut file = OpenOptions::new()
            .create(true)
            .read(true)
            .append(true)
            .open(&self.path)
            .map_err(|e| Error::io(&self.path, e))?;
        file.lock().map_err(|e| Error::io(&self.path, e))?;
        let key = entry.key();
        for old in read_entries(&mut file, &self.path)? {
            if old.key() == key && old.threshold != entry.threshold {
                return Err(Error::CacheConflict { key, cached: old.threshold, new: entry.threshold });
            }
        }
        let mut line = serde_json::to_string(entry).expect("entry serializes");
        line.push('\n');
        file.write_all(line.as_bytes()).map_err(|e| Error::io(&self.path, e))?;
        file.flush().map_err(|e| Error::io(&self.path, e))
    }
}

fn read_entries(file: &mut File, path: &Path) -> Result<Vec<ThresholdCacheEntry>> {
    let mut text = String::new();
    file.read_to_string(&mut text).map_err(|e| Error::io(path, e))?;
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let e = serde_json::from_str(line).map_err(|e| Error::parse(i + 1, e.to_string()))?;
        out.push(e);
    }
    Ok(out)
}
