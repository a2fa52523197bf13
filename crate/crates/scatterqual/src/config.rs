//! Flat `key = value` settings. Layers, lowest first: built-in defaults,
//! `--config` file, `SCATTERQUAL_SEED`, explicit command-line flags.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use sha2::{Digest, Sha256};

use crate::error::{AppError, Result};

/// Environment fallback for the master seed.
pub const SEED_ENV: &str = "SCATTERQUAL_SEED";

/// Keys that only steer where or how fast a run happens; they are left out
/// of the config hash.
const NON_SEMANTIC: &[&str] = &["out", "threads"];

/// A documented key with its default (`None` when it must be supplied).
#[derive(Debug, Clone, Copy)]
pub struct Key {
    pub name: &'static str,
    pub default: Option<&'static str>,
    pub help: &'static str,
}

impl Key {
    pub const fn new(name: &'static str, default: &'static str, help: &'static str) -> Self {
        Self { name, default: Some(default), help }
    }

    pub const fn required(name: &'static str, help: &'static str) -> Self {
        Self { name, default: None, help }
    }
}

/// Parse a config file, rejecting keys not in `allowed`.
pub fn parse_file(path: &Path, allowed: &[Key]) -> Result<BTreeMap<String, String>> {
    let text = fs::read_to_string(path).map_err(|e| AppError::io(path, e))?;
    parse_str(&text, path, allowed)
}

pub fn parse_str(text: &str, path: &Path, allowed: &[Key]) -> Result<BTreeMap<String, String>> {
    let err = |line: usize, message: String| AppError::Config { path: path.to_path_buf(), line, message };
    let mut out = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (k, v) = line.split_once('=').ok_or_else(|| err(i + 1, format!("expected 'key = value', got '{line}'")))?;
        let key = k.trim().replace('_', "-");
        let value = v.trim();
        if !allowed.iter().any(|a| a.name == key) {
            return Err(err(i + 1, format!("unknown key '{}'", k.trim())));
        }
        if value.is_empty() {
            return Err(err(i + 1, format!("empty value for '{key}'")));
        }
        if out.insert(key.clone(), value.to_string()).is_some() {
            return Err(err(i + 1, format!("duplicate key '{key}'")));
        }
    }
    Ok(out)
}

/// Fully resolved settings of one run.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Settings {
    values: BTreeMap<String, String>,
}

impl Settings {
    pub fn resolve(
        keys: &[Key],
        file: BTreeMap<String, String>,
        env_seed: Option<String>,
        cli: BTreeMap<String, String>,
    ) -> Self {
        let mut values: BTreeMap<String, String> =
            keys.iter().filter_map(|k| k.default.map(|d| (k.name.to_string(), d.to_string()))).collect();
        values.extend(file);
        if let Some(seed) = env_seed {
            values.insert("seed".into(), seed);
        }
        values.extend(cli);
        Self { values }
    }

    pub fn from_map(values: BTreeMap<String, String>) -> Self {
        Self { values }
    }

    pub fn map(&self) -> &BTreeMap<String, String> {
        &self.values
    }

    pub fn set(&mut self, key: &str, value: impl Into<String>) {
        self.values.insert(key.into(), value.into());
    }

    pub fn has(&self, key: &str) -> bool {
        self.values.contains_key(key)
    }

    pub fn str(&self, key: &str) -> Result<&str> {
        self.values
            .get(key)
            .map(String::as_str)
            .ok_or_else(|| AppError::Input(format!("missing required setting '{key}'")))
    }

    fn parsed<T: std::str::FromStr>(&self, key: &str, what: &str) -> Result<T> {
        let raw = self.str(key)?;
        raw.parse().map_err(|_| AppError::Input(format!("'{key}' expects {what}, got '{raw}'")))
    }

    /// Accepts `inf` and simple fractions like `1/4`.
    pub fn f64(&self, key: &str) -> Result<f64> {
        parse_real(self.str(key)?).ok_or_else(|| AppError::Input(format!("'{key}' expects a number, got '{}'", self.values[key])))
    }

    pub fn usize(&self, key: &str) -> Result<usize> {
        self.parsed(key, "a non-negative integer")
    }

    pub fn u64(&self, key: &str) -> Result<u64> {
        self.parsed(key, "a non-negative integer")
    }

    pub fn bool(&self, key: &str) -> Result<bool> {
        self.parsed(key, "true or false")
    }

    /// Comma-separated integers, strictly increasing.
    pub fn schedule(&self, key: &str) -> Result<Vec<usize>> {
        let raw = self.str(key)?;
        let list: Vec<usize> = raw
            .split(',')
            .map(|t| t.trim().parse().map_err(|_| AppError::Input(format!("'{key}': bad entry '{}'", t.trim()))))
            .collect::<Result<_>>()?;
        if list.is_empty() || list.windows(2).any(|w| w[0] >= w[1]) || list[0] == 0 {
            return Err(AppError::Input(format!("'{key}' must be a strictly increasing list of positive integers")));
        }
        Ok(list)
    }

    pub fn list(&self, key: &str) -> Result<Vec<String>> {
        Ok(self.str(key)?.split(',').map(|t| t.trim().to_string()).filter(|t| !t.is_empty()).collect())
    }

    /// `auto` or a positive number.
    pub fn optional_f64(&self, key: &str) -> Result<Option<f64>> {
        match self.str(key)? {
            "auto" => Ok(None),
            _ => {
                let v = self.f64(key)?;
                if !(v > 0.0) {
                    return Err(AppError::Input(format!("'{key}' must be positive")));
                }
                Ok(Some(v))
            }
        }
    }

    /// SHA-256 over the sorted `key=value` lines, excluding output location
    /// and thread count.
    pub fn hash(&self) -> String {
        let mut h = Sha256::new();
        for (k, v) in &self.values {
            if NON_SEMANTIC.contains(&k.as_str()) {
                continue;
            }
            h.update(k.as_bytes());
            h.update(b"=");
            h.update(v.as_bytes());
            h.update(b"\n");
        }
        format!("{:x}", h.finalize())
    }
}

pub fn parse_real(raw: &str) -> Option<f64> {
    let raw = raw.trim();
    match raw {
        "inf" | "infinity" | "Inf" => return Some(f64::INFINITY),
        _ => {}
    }
    if let Some((a, b)) = raw.split_once('/') {
        let (a, b): (f64, f64) = (a.trim().parse().ok()?, b.trim().parse().ok()?);
        return (b != 0.0).then(|| a / b);
    }
    raw.parse().ok().filter(|v: &f64| !v.is_nan())
}
