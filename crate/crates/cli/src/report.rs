//! Scenario reports, result tables and output files.

use std::collections::BTreeMap;
use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::Value;

use crate::config::{ExperimentConfig, Scenario};

#[derive(Debug, thiserror::Error)]
pub enum RunError {
    #[error(transparent)]
    Core(#[from] schmidt_distill::Error),
    #[error("non-finite value in {0}")]
    NonFinite(String),
    #[error("cannot write {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(u64),
    Text(String),
}

impl Cell {
    pub fn as_f64(&self) -> Option<f64> {
        match self {
            Cell::Num(x) => Some(*x),
            Cell::Int(n) => Some(*n as f64),
            Cell::Text(_) => None,
        }
    }
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Cell::Num(x) => write!(f, "{x}"),
            Cell::Int(n) => write!(f, "{n}"),
            Cell::Text(s) => f.write_str(s),
        }
    }
}

/// A CSV table with a fixed header row.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub file: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(file: &str, columns: &[&str]) -> Self {
        Self {
            file: file.to_string(),
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let idx = self.columns.iter().position(|c| c == name)?;
        self.rows.iter().map(|r| r[idx].as_f64()).collect()
    }

    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.columns).expect("in-memory write");
        for row in &self.rows {
            w.write_record(row.iter().map(|c| c.to_string())).expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 cells")
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Provenance {
    pub tool: &'static str,
    pub version: &'static str,
    pub seed: u64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ScenarioReport {
    pub scenario: Scenario,
    pub config: ExperimentConfig,
    pub ideal: bool,
    pub metrics: BTreeMap<String, f64>,
    pub tables: Vec<String>,
    pub details: BTreeMap<String, Value>,
    pub provenance: Provenance,
}

/// Everything a run produces, before it is written to disk.
#[derive(Debug, Clone)]
pub struct ScenarioOutput {
    pub report: ScenarioReport,
    pub tables: Vec<Table>,
    /// Preformatted files such as raw count tables and tomography JSON.
    pub files: Vec<(String, String)>,
}

impl ScenarioOutput {
    pub fn metric(&self, name: &str) -> Option<f64> {
        self.report.metrics.get(name).copied()
    }

    pub fn table(&self, file: &str) -> Option<&Table> {
        self.tables.iter().find(|t| t.file == file)
    }

    pub fn check_finite(&self) -> Result<(), RunError> {
        for (k, v) in &self.report.metrics {
            if !v.is_finite() {
                return Err(RunError::NonFinite(format!("metric {k}")));
            }
        }
        for t in &self.tables {
            for (i, row) in t.rows.iter().enumerate() {
                for (c, cell) in row.iter().enumerate() {
                    if let Cell::Num(x) = cell {
                        if !x.is_finite() {
                            return Err(RunError::NonFinite(format!("{} row {i} column {}", t.file, t.columns[c])));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    pub fn write(&self, dir: &Path) -> Result<(), RunError> {
        let io = |path: &Path| {
            let path = path.to_path_buf();
            move |source| RunError::Io { path, source }
        };
        fs::create_dir_all(dir).map_err(io(dir))?;
        for t in &self.tables {
            let p = dir.join(&t.file);
            fs::write(&p, t.to_csv()).map_err(io(&p))?;
        }
        for (name, contents) in &self.files {
            let p = dir.join(name);
            fs::write(&p, contents).map_err(io(&p))?;
        }
        let p = dir.join("report.json");
        let mut text = serde_json::to_string_pretty(&self.report).expect("report serializes");
        text.push('\n');
        fs::write(&p, text).map_err(io(&p))
    }
}
