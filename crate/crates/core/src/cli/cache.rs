//! Content-addressed result cache: one JSON file per entry, named by the
//! SHA-256 of the operation and its canonical input.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicU64, Ordering};

use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};

pub const CACHE_SCHEMA: &str = "hilbloc.cache_entry";

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CacheEntry {
    pub schema: String,
    pub version: String,
    pub key: String,
    pub operation: String,
    pub payload: Value,
}

/// A cache directory; `None` disables caching.
#[derive(Clone, Debug)]
pub struct Cache {
    dir: Option<PathBuf>,
}

static TMP_COUNTER: AtomicU64 = AtomicU64::new(0);

impl Cache {
    pub fn new(dir: Option<PathBuf>) -> Self {
        Cache { dir }
    }

    pub fn disabled() -> Self {
        Cache { dir: None }
    }

    pub fn dir(&self) -> Option<&Path> {
        self.dir.as_deref()
    }

    /// Hex digest of the operation, the input and the tool version.
    /// `serde_json::Value` keeps object keys sorted, so the text is canonical.
    pub fn key(operation: &str, input: &Value) -> String {
        let text = serde_json::json!({ "operation": operation, "input": input, "version": crate::VERSION }).to_string();
        hex::encode(Sha256::digest(text.as_bytes()))
    }

    fn path(&self, key: &str) -> Option<PathBuf> {
        self.dir.as_ref().map(|d| d.join(format!("{key}.json")))
    }

    /// Payload stored under `(operation, input)`, if present and written by
    /// this version.
    pub fn get(&self, operation: &str, input: &Value) -> Option<Value> {
        let key = Self::key(operation, input);
        let text = fs::read_to_string(self.path(&key)?).ok()?;
        let entry: CacheEntry = serde_json::from_str(&text).ok()?;
        (entry.schema == CACHE_SCHEMA && entry.version == crate::VERSION && entry.key == key).then_some(entry.payload)
    }

    /// Stores a payload. Existing entries are left alone; the file appears
    /// atomically through a rename of a private temporary file.
    pub fn put(&self, operation: &str, input: &Value, payload: &Value) -> std::io::Result<()> {
        let Some(dir) = &self.dir else { return Ok(()) };
        let key = Self::key(operation, input);
        let target = dir.join(format!("{key}.json"));
        if target.exists() {
            return Ok(());
        }
        fs::create_dir_all(dir)?;
        let entry = CacheEntry {
            schema: CACHE_SCHEMA.into(),
            version: crate::VERSION.into(),
            key: key.clone(),
            operation: operation.into(),
            payload: payload.clone(),
        };
        let n = TMP_COUNTER.fetch_add(1, Ordering::Relaxed);
        let tmp = dir.join(format!(".{key}.{}.{n}.tmp", std::process::id()));
        {
            let mut f = fs::File::create(&tmp)?;
            f.write_all(serde_json::to_string_pretty(&entry)?.as_bytes())?;
            f.sync_all()?;
        }
        fs::rename(&tmp, &target).inspect_err(|_| {
            let _ = fs::remove_file(&tmp);
        })
    }

    /// Cached value of `compute`, keyed by `(operation, input)`. Write
    /// failures only cost the cache.
    pub fn memo<T, E>(
        &self,
        operation: &str,
        input: &Value,
        compute: impl FnOnce() -> Result<T, E>,
    ) -> Result<T, E>
    where
        T: Serialize + for<'de> Deserialize<'de>,
    {
        if let Some(v) = self.get(operation, input) {
            if let Ok(t) = serde_json::from_value(v) {
                return Ok(t);
            }
        }
        let t = compute()?;
        if let Ok(v) = serde_json::to_value(&t) {
            if let Err(e) = self.put(operation, input, &v) {
                eprintln!("warning: cache write failed: {e}");
            }
        }
        Ok(t)
    }
}
