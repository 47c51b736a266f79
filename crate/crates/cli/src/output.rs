//! CSV tables and run manifests.

use std::path::{Path, PathBuf};

use fkpp::model::Outcome;
use fkpp::Params;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::CliError;

/// Longest norm history kept in a manifest; the full one goes to CSV.
pub const MANIFEST_HISTORY: usize = 2000;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub tool: String,
    pub version: String,
    pub command: String,
    /// The merged configuration document as run.
    pub config: Value,
    /// Absent for sweeps without a valid model section.
    pub params: Option<Params>,
    pub outcome: Option<Outcome<f64>>,
    pub event_time: Option<f64>,
    /// `(t, sup norm)` pairs, thinned to at most [`MANIFEST_HISTORY`].
    pub norm_history: Vec<(f64, f64)>,
    /// Output files relative to the manifest.
    pub files: Vec<String>,
    pub wall_clock_seconds: f64,
    pub notes: Vec<String>,
    /// Command-specific results.
    pub summary: Value,
}

impl RunManifest {
    pub fn new(command: &str, config: Value, params: Option<Params>) -> Self {
        Self {
            tool: env!("CARGO_PKG_NAME").to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            command: command.to_string(),
            config,
            params,
            outcome: None,
            event_time: None,
            norm_history: Vec::new(),
            files: Vec::new(),
            wall_clock_seconds: 0.0,
            notes: Vec::new(),
            summary: Value::Null,
        }
    }

    pub fn write(&self, dir: &Path) -> Result<PathBuf, CliError> {
        let path = dir.join("manifest.json");
        std::fs::write(&path, serde_json::to_string_pretty(self)?)?;
        Ok(path)
    }
}

/// Keeps every `k`-th entry and the last so that at most `limit` remain.
pub fn thin<T: Copy>(items: &[T], limit: usize) -> Vec<T> {
    if items.len() <= limit || limit < 2 {
        return items.to_vec();
    }
    let stride = items.len().div_ceil(limit - 1);
    let mut out: Vec<T> = items.iter().step_by(stride).copied().collect();
    if !(items.len() - 1).is_multiple_of(stride) {
        out.push(items[items.len() - 1]);
    }
    out
}

pub fn fmt(v: f64) -> String {
    format!("{v:.16e}")
}

/// Writes a numeric table with a one-line header.
pub fn write_table<const N: usize>(path: &Path, header: [&str; N], rows: &[[f64; N]]) -> Result<(), CliError> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(header)?;
    for row in rows {
        w.write_record(row.iter().map(|&v| fmt(v)))?;
    }
    w.flush()?;
    Ok(())
}

/// Reads back a table written by [`write_table`].
pub fn read_table(path: &Path) -> Result<(Vec<String>, Vec<Vec<f64>>), CliError> {
    let mut r = csv::Reader::from_path(path)?;
    let header = r.headers()?.iter().map(str::to_string).collect();
    let mut rows = Vec::new();
    for rec in r.records() {
        let rec = rec?;
        let row = rec
            .iter()
            .map(|s| s.trim().parse::<f64>().map_err(|e| CliError::Io(format!("{}: {e}", path.display()))))
            .collect::<Result<Vec<_>, _>>()?;
        rows.push(row);
    }
    Ok((header, rows))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn thinning_keeps_ends() {
        let v: Vec<usize> = (0..10_001).collect();
        let t = thin(&v, 100);
        assert!(t.len() <= 101);
        assert_eq!(t[0], 0);
        assert_eq!(*t.last().unwrap(), 10_000);
        assert_eq!(thin(&v[..5], 100), v[..5].to_vec());
    }

    #[test]
    fn table_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("t.csv");
        let rows = [[0.1, 1.0 / 3.0], [-2.5e-300, 7.0]];
        write_table(&path, ["x", "u"], &rows).unwrap();
        let (header, back) = read_table(&path).unwrap();
        assert_eq!(header, vec!["x", "u"]);
        for (a, b) in rows.iter().zip(&back) {
            assert_eq!(a.to_vec(), *b);
        }
    }

    #[test]
    fn manifest_round_trip() {
        let mut m = RunManifest::new("simulate", serde_json::json!({"model": {"m": 2.0}}), Params::new(2.0, 2.0, 0.9).ok());
        m.outcome = Some(Outcome::BlowUp { t: 0.123_456_789_012_345_67 });
        m.event_time = Some(0.123_456_789_012_345_67);
        m.norm_history = vec![(0.0, 2.679), (0.1, 1.0 / 3.0)];
        m.files = vec!["final.csv".into()];
        let text = serde_json::to_string(&m).unwrap();
        let back: RunManifest = serde_json::from_str(&text).unwrap();
        assert_eq!(back, m);
    }
}
