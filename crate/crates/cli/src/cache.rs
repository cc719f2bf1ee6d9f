//! Append-only verdict cache: one JSON record per line, each carrying a
//! SHA-256 checksum of its key and payload.

use std::collections::HashMap;
use std::fs::{self, File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use rand::seq::index::sample;
use rand::Rng;
use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};
use simplexdet_core::classifier::{SkipProperLookup, Verdict};
use simplexdet_core::{Error, Result};

pub const CACHE_ENV: &str = "SIMPLEXDET_CACHE_DIR";
const FILE_NAME: &str = "verdicts.jsonl";
pub const CODE_VERSION: &str = env!("CARGO_PKG_VERSION");

/// What a record describes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Variant {
    /// Full verdict for `S_{n,k}`.
    Primal,
    /// Full verdict for the dual.
    Dual,
    /// Whether `P_ue` is nondecreasing, alone.
    Proper,
    /// Whether `P_ue` minus its first-row term is nondecreasing.
    SkipProper,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CacheKey {
    pub k: u32,
    pub n: u64,
    pub variant: Variant,
    pub code_version: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CacheRecord {
    pub key: CacheKey,
    pub payload: Value,
    pub timestamp: u64,
    pub checksum: String,
}

fn checksum(key: &CacheKey, payload: &Value) -> String {
    let body = serde_json::to_string(&(key, payload)).expect("serialisable");
    hex::encode(Sha256::digest(body.as_bytes()))
}

impl CacheRecord {
    pub fn new(key: CacheKey, payload: Value) -> Self {
        let timestamp = SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs());
        let checksum = checksum(&key, &payload);
        CacheRecord { key, payload, timestamp, checksum }
    }

    pub fn is_intact(&self) -> bool {
        checksum(&self.key, &self.payload) == self.checksum
    }
}

/// In-memory view of the cache file plus the appender.
#[derive(Debug)]
pub struct Cache {
    path: PathBuf,
    entries: HashMap<(u32, u64, Variant), Value>,
    /// Lines rejected on load: unparsable or failing their checksum.
    pub corrupted: usize,
    /// Keys served from the cache during this run.
    hits: Vec<(u32, u64, Variant)>,
}

fn io(e: std::io::Error) -> Error {
    Error::Parameter(format!("cache i/o: {e}"))
}

impl Cache {
    /// Directory from `SIMPLEXDET_CACHE_DIR`, default `./.cache`.
    pub fn default_dir() -> PathBuf {
        std::env::var_os(CACHE_ENV).map_or_else(|| PathBuf::from(".cache"), PathBuf::from)
    }

    pub fn open(dir: &Path) -> Result<Self> {
        fs::create_dir_all(dir).map_err(io)?;
        let path = dir.join(FILE_NAME);
        let mut cache = Cache { path, entries: HashMap::new(), corrupted: 0, hits: Vec::new() };
        if !cache.path.exists() {
            return Ok(cache);
        }
        let reader = BufReader::new(File::open(&cache.path).map_err(io)?);
        for line in reader.lines() {
            let line = line.map_err(io)?;
            if line.trim().is_empty() {
                continue;
            }
            match serde_json::from_str::<CacheRecord>(&line) {
                Ok(rec) if rec.is_intact() => {
                    if rec.key.code_version != CODE_VERSION {
                        continue;
                    }
                    check_payload(&rec)?;
                    let k = &rec.key;
                    cache.entries.entry((k.k, k.n, k.variant)).or_insert(rec.payload);
                }
                _ => cache.corrupted += 1,
            }
        }
        Ok(cache)
    }

    pub fn path(&self) -> &Path {
        &self.path
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Cached payload, recording the hit for later re-verification.
    pub fn get(&mut self, k: u32, n: u64, variant: Variant) -> Option<Value> {
        let v = self.entries.get(&(k, n, variant)).cloned();
        if v.is_some() {
            self.hits.push((k, n, variant));
        }
        v
    }

    fn peek(&self, k: u32, n: u64, variant: Variant) -> Option<&Value> {
        self.entries.get(&(k, n, variant))
    }

    /// Appends a record unless the key is already present.
    pub fn put(&mut self, k: u32, n: u64, variant: Variant, payload: Value) -> Result<()> {
        if self.entries.contains_key(&(k, n, variant)) {
            return Ok(());
        }
        let key = CacheKey { k, n, variant, code_version: CODE_VERSION.to_string() };
        let rec = CacheRecord::new(key, payload.clone());
        check_payload(&rec)?;
        let mut f = OpenOptions::new().create(true).append(true).open(&self.path).map_err(io)?;
        let line = serde_json::to_string(&rec).expect("serialisable");
        writeln!(f, "{line}").map_err(io)?;
        self.entries.insert((k, n, variant), payload);
        Ok(())
    }

    /// Recomputes a random 1% (at least one) of this run's cache hits with
    /// `fresh` and fails on any disagreement. Returns how many were checked.
    pub fn reverify<F>(&self, rng: &mut impl Rng, mut fresh: F) -> Result<usize>
    where
        F: FnMut(u32, u64, Variant) -> Result<Value>,
    {
        if self.hits.is_empty() {
            return Ok(0);
        }
        let want = self.hits.len().div_ceil(100);
        for i in sample(rng, self.hits.len(), want) {
            let (k, n, variant) = self.hits[i];
            let cached = self.peek(k, n, variant).expect("hit recorded from entries");
            let now = fresh(k, n, variant)?;
            if &now != cached {
                return Err(Error::Invariant(format!(
                    "cached {variant:?} verdict for (k, n) = ({k}, {n}) disagrees with a fresh computation"
                )));
            }
        }
        Ok(want)
    }
}

/// Verdict payloads must satisfy the implication chain.
fn check_payload(rec: &CacheRecord) -> Result<()> {
    if matches!(rec.key.variant, Variant::Primal | Variant::Dual) {
        let v: Verdict = serde_json::from_value(rec.payload.clone())
            .map_err(|e| Error::Invariant(format!("cache record is not a verdict: {e}")))?;
        v.check_chain()?;
    }
    Ok(())
}

impl SkipProperLookup for Cache {
    fn skip_proper(&self, k: u32, n: u64) -> Option<bool> {
        self.peek(k, n, Variant::SkipProper).and_then(Value::as_bool)
    }
}
