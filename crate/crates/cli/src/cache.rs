//! On-disk memo of finished results: one JSON file per key, holding the value
//! and a SHA-256 checksum. Anything that fails to load or verify is recomputed
//! and rewritten without comment.

use std::fs;
use std::path::PathBuf;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};

use crate::commands::CliError;
use crate::Ctx;

const VERSION: &str = concat!(env!("CARGO_PKG_VERSION"), "/1");

#[derive(Debug, Clone)]
pub struct Cache {
    dir: PathBuf,
}

#[derive(Serialize, Deserialize)]
struct Entry {
    key: String,
    version: String,
    value: Value,
    checksum: String,
}

fn checksum(key: &str, version: &str, value: &Value) -> String {
    let mut h = Sha256::new();
    h.update(key.as_bytes());
    h.update([0]);
    h.update(version.as_bytes());
    h.update([0]);
    h.update(value.to_string().as_bytes());
    hex::encode(h.finalize())
}

impl Cache {
    pub fn new(dir: PathBuf) -> Self {
        Cache { dir }
    }

    fn path(&self, key: &str) -> PathBuf {
        let name = hex::encode(Sha256::digest(key.as_bytes()));
        self.dir.join(format!("{}.json", &name[..32]))
    }

    fn load(&self, key: &str) -> Option<Value> {
        let text = fs::read_to_string(self.path(key)).ok()?;
        let e: Entry = serde_json::from_str(&text).ok()?;
        let ok =
            e.key == key && e.version == VERSION && e.checksum == checksum(key, VERSION, &e.value);
        ok.then_some(e.value)
    }

    fn store(&self, key: &str, value: Value) -> std::io::Result<()> {
        fs::create_dir_all(&self.dir)?;
        let e = Entry {
            key: key.to_string(),
            version: VERSION.to_string(),
            checksum: checksum(key, VERSION, &value),
            value,
        };
        let path = self.path(key);
        let tmp = path.with_extension(format!("tmp{}", std::process::id()));
        fs::write(&tmp, serde_json::to_string_pretty(&e)?)?;
        fs::rename(tmp, path)
    }
}

/// Returns the cached value for `key`, or computes and stores it.
pub fn memo<T, F>(ctx: &Ctx, key: &str, compute: F) -> Result<T, CliError>
where
    T: Serialize + DeserializeOwned,
    F: FnOnce() -> Result<T, CliError>,
{
    let Some(cache) = &ctx.cache else {
        return compute();
    };
    if let Some(v) = cache.load(key).and_then(|v| serde_json::from_value(v).ok()) {
        return Ok(v);
    }
    let value = compute()?;
    let json = serde_json::to_value(&value).map_err(|e| CliError::Io(e.to_string()))?;
    if let Err(e) = cache.store(key, json) {
        eprintln!("pm: could not write cache entry: {e}");
    }
    Ok(value)
}
