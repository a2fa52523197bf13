use std::collections::BTreeMap;
use std::path::Path;
use std::time::{SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};

use crate::error::{AppError, Result};
use crate::io::write_atomic;

pub const MANIFEST_FILE: &str = "manifest.json";

/// Record of one run; `config` alone is enough to replay it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub command: String,
    pub config: BTreeMap<String, String>,
    pub config_hash: String,
    pub seed: u64,
    pub version: String,
    pub started_unix: f64,
    pub finished_unix: f64,
    pub outputs: Vec<String>,
    pub exit_code: i32,
    pub diagnostics: Vec<String>,
}

pub fn unix_now() -> f64 {
    SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs_f64()).unwrap_or(0.0)
}

impl RunManifest {
    pub fn write(&self, dir: &Path) -> Result<()> {
        let mut bytes = serde_json::to_vec_pretty(self)?;
        bytes.push(b'\n');
        write_atomic(&dir.join(MANIFEST_FILE), &bytes)
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| AppError::io(path, e))?;
        serde_json::from_str(&text).map_err(|e| AppError::Input(format!("{}: {e}", path.display())))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let m = RunManifest {
            command: "distnorm".into(),
            config: [("gamma".to_string(), "2".to_string())].into(),
            config_hash: "abc".into(),
            seed: 7,
            version: "0.1.0".into(),
            started_unix: 1.0,
            finished_unix: 2.0,
            outputs: vec!["distnorm.csv".into()],
            exit_code: 0,
            diagnostics: vec![],
        };
        m.write(dir.path()).unwrap();
        assert_eq!(RunManifest::read(&dir.path().join(MANIFEST_FILE)).unwrap(), m);
        assert!(!dir.path().join("manifest.json.tmp").exists());
    }
}
