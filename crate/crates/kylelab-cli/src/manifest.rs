//! Run manifest written alongside every output: the resolved arguments,
//! code version, seed and output paths needed to reproduce a run bit-exactly.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use serde::Serialize;

#[derive(Debug, Serialize)]
pub struct RunManifest {
    pub command: String,
    pub version: String,
    pub seed: Option<u64>,
    pub args: BTreeMap<String, serde_json::Value>,
    pub started_unix: u64,
    pub finished_unix: u64,
    pub outputs: Vec<PathBuf>,
    /// Derived facts recorded with the run (e.g. non-monotonicity flags).
    pub extra: BTreeMap<String, serde_json::Value>,
}

impl RunManifest {
    pub fn new(command: &str, seed: Option<u64>) -> Self {
        RunManifest {
            command: command.to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            seed,
            args: BTreeMap::new(),
            started_unix: now_unix(),
            finished_unix: 0,
            outputs: Vec::new(),
            extra: BTreeMap::new(),
        }
    }

    pub fn arg(&mut self, key: &str, value: impl Serialize) {
        self.args.insert(key.to_string(), serde_json::to_value(value).expect("serializable arg"));
    }

    pub fn note(&mut self, key: &str, value: impl Serialize) {
        self.extra.insert(key.to_string(), serde_json::to_value(value).expect("serializable note"));
    }

    pub fn record_output(&mut self, path: &Path) {
        self.outputs.push(path.to_path_buf());
    }

    pub fn finish_and_write(mut self, dir: &Path) -> std::io::Result<()> {
        self.finished_unix = now_unix();
        let path = dir.join("manifest.json");
        let body = serde_json::to_string_pretty(&self).expect("manifest serializes");
        std::fs::write(path, body + "\n")
    }
}

fn now_unix() -> u64 {
    SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0)
}
