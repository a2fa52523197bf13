//! CSV point files and table output with a `#` comment header.

use std::fs;
use std::io::Write;
use std::path::Path;

use scatterqual_core::PointSet;

use crate::error::{AppError, Result};

/// Reads one point per row; `#` lines are comments.
pub fn read_points(path: &Path, header: bool) -> Result<PointSet> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(header)
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .flexible(true)
        .from_path(path)
        .map_err(|source| AppError::Csv { path: path.to_path_buf(), source })?;
    let mut dim = None;
    let mut coords = Vec::new();
    for (row, record) in reader.records().enumerate() {
        let record = record.map_err(|source| AppError::Csv { path: path.to_path_buf(), source })?;
        let line = record.position().map_or(row + 1, |p| p.line() as usize);
        let d = *dim.get_or_insert(record.len());
        if record.len() != d {
            return Err(AppError::Input(format!(
                "{}:{line}: expected {d} coordinates, found {}",
                path.display(),
                record.len()
            )));
        }
        for field in record.iter() {
            let v: f64 = field
                .parse()
                .map_err(|_| AppError::Input(format!("{}:{line}: not a number: '{field}'", path.display())))?;
            if !v.is_finite() {
                return Err(AppError::Input(format!("{}:{line}: non-finite coordinate", path.display())));
            }
            coords.push(v);
        }
    }
    let dim = dim.ok_or_else(|| AppError::Input(format!("{}: no points", path.display())))?;
    Ok(PointSet::new(dim, coords)?)
}

/// Provenance lines written before every table.
#[derive(Debug, Clone)]
pub struct Preamble {
    pub command: String,
    pub config_hash: String,
    pub seed: u64,
    pub notes: Vec<(String, String)>,
}

impl Preamble {
    fn write(&self, out: &mut Vec<u8>) {
        let _ = writeln!(out, "# scatterqual {}", crate::VERSION);
        let _ = writeln!(out, "# command: {}", self.command);
        let _ = writeln!(out, "# config-sha256: {}", self.config_hash);
        let _ = writeln!(out, "# seed: {}", self.seed);
        for (k, v) in &self.notes {
            let _ = writeln!(out, "# {k}: {v}");
        }
    }
}

/// A table of string cells.
#[derive(Debug, Clone, Default)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(columns: &[&str]) -> Self {
        Self { columns: columns.iter().map(|c| c.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn to_bytes(&self, preamble: &Preamble) -> Result<Vec<u8>> {
        let mut out = Vec::new();
        preamble.write(&mut out);
        {
            let mut w = csv::Writer::from_writer(&mut out);
            let io_err = |e: csv::Error| AppError::Input(format!("csv encoding: {e}"));
            w.write_record(&self.columns).map_err(io_err)?;
            for row in &self.rows {
                w.write_record(row).map_err(io_err)?;
            }
            w.flush().map_err(|e| AppError::io("<buffer>", e))?;
        }
        Ok(out)
    }

    pub fn write(&self, path: &Path, preamble: &Preamble) -> Result<()> {
        write_atomic(path, &self.to_bytes(preamble)?)
    }
}

/// Shortest round-trip decimal form.
pub fn num(v: f64) -> String {
    if v.is_infinite() {
        if v > 0.0 { "inf".into() } else { "-inf".into() }
    } else {
        format!("{v}")
    }
}

pub fn nums(v: &[f64]) -> Vec<String> {
    v.iter().map(|x| num(*x)).collect()
}

/// Write to a sibling temporary file, then rename over `path`.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    if let Some(dir) = path.parent() {
        if !dir.as_os_str().is_empty() {
            fs::create_dir_all(dir).map_err(|e| AppError::io(dir, e))?;
        }
    }
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".tmp");
    let tmp = std::path::PathBuf::from(tmp);
    fs::write(&tmp, bytes).map_err(|e| AppError::io(&tmp, e))?;
    fs::rename(&tmp, path).map_err(|e| AppError::io(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_points() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("p.csv");
        fs::write(&p, "# comment\n0.5, 0.25\n1e-3,2\n").unwrap();
        let pts = read_points(&p, false).unwrap();
        assert_eq!(pts.len(), 2);
        assert_eq!(pts.point(1), &[0.001, 2.0]);
        fs::write(&p, "x,y\n0.5,0.25\n").unwrap();
        assert_eq!(read_points(&p, true).unwrap().len(), 1);
        assert!(read_points(&p, false).is_err());
    }

    #[test]
    fn ragged_rows_are_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("p.csv");
        fs::write(&p, "0.5,0.25\n1\n").unwrap();
        let err = read_points(&p, false).unwrap_err().to_string();
        assert!(err.contains(":2:"), "{err}");
    }

    #[test]
    fn table_has_preamble() {
        let mut t = Table::new(&["a", "b"]);
        t.push(vec![num(1.5), num(f64::INFINITY)]);
        let pre = Preamble { command: "x".into(), config_hash: "h".into(), seed: 3, notes: vec![("slope".into(), "-1".into())] };
        let s = String::from_utf8(t.to_bytes(&pre).unwrap()).unwrap();
        assert!(s.starts_with("# scatterqual "));
        assert!(s.contains("# seed: 3\n# slope: -1\na,b\n1.5,inf\n"));
    }
}
