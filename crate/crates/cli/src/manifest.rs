use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::config::PipelineConfig;
use crate::error::CliError;

pub const MANIFEST_FILE: &str = "manifest.json";
/// Wall-clock timings live apart from the manifest so that it stays
/// byte-identical across runs.
pub const TIMINGS_FILE: &str = "timings.json";

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct StageRecord {
    pub config_sha256: String,
    /// Output file name to SHA-256 of its contents.
    pub outputs: BTreeMap<String, String>,
    pub ok: bool,
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct RunManifest {
    pub version: String,
    pub stages: BTreeMap<String, StageRecord>,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    format!("{:x}", Sha256::digest(bytes))
}

/// Hash of everything a stage result depends on.
pub fn config_hash(cfg: &PipelineConfig) -> String {
    let v = serde_json::json!({
        "precision": cfg.precision,
        "orbit": cfg.orbit,
        "certify": cfg.certify,
        "track": cfg.track,
    });
    sha256_hex(v.to_string().as_bytes())
}

fn load<T: Default + for<'de> Deserialize<'de>>(path: &Path) -> T {
    std::fs::read_to_string(path)
        .ok()
        .and_then(|s| serde_json::from_str(&s).ok())
        .unwrap_or_default()
}

fn store<T: Serialize>(path: &Path, v: &T) -> Result<(), CliError> {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    std::fs::write(path, s).map_err(CliError::io(path))
}

/// Merges one stage into the manifest and timing files in `out`.
pub fn record(out: &Path, stage: &str, rec: StageRecord, seconds: f64) -> Result<(), CliError> {
    let path = out.join(MANIFEST_FILE);
    let mut m: RunManifest = load(&path);
    m.version = env!("CARGO_PKG_VERSION").to_string();
    m.stages.insert(stage.to_string(), rec);
    store(&path, &m)?;
    let tpath = out.join(TIMINGS_FILE);
    let mut t: BTreeMap<String, f64> = load(&tpath);
    t.insert(stage.to_string(), seconds);
    store(&tpath, &t)
}
