use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use super::config::ExperimentConfig;
use crate::error::Result;

/// First comment line of every CSV; bump when a column set changes.
pub const SCHEMA_VERSION: &str = "lagmult-csv/1";

/// `git describe` of the build.
pub const BUILD_DESCRIBE: &str = env!("LAGMULT_GIT_DESCRIBE");

/// Rows of preformatted cells under fixed column names.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(columns: Vec<&'static str>) -> Self {
        Table { columns, rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    /// Cells of one column, in row order.
    pub fn column(&self, name: &str) -> Option<Vec<&str>> {
        let i = self.columns.iter().position(|c| *c == name)?;
        Some(self.rows.iter().map(|r| r[i].as_str()).collect())
    }
}

/// One pass/fail assertion of a run.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub value: f64,
    pub threshold: f64,
    pub detail: String,
}

impl Check {
    /// Passes when `value ≤ threshold` (NaN fails).
    pub fn at_most(name: impl Into<String>, value: f64, threshold: f64, detail: impl Into<String>) -> Self {
        Check { name: name.into(), passed: value <= threshold, value, threshold, detail: detail.into() }
    }
}

/// Machine-readable companion of the CSV.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct Summary {
    pub schema: String,
    pub experiment: String,
    pub build: String,
    pub passed: bool,
    pub rows: usize,
    pub checks: Vec<Check>,
    pub stats: BTreeMap<String, f64>,
}

/// Everything one command produced.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub config: ExperimentConfig,
    pub table: Table,
    pub checks: Vec<Check>,
    pub stats: BTreeMap<String, f64>,
}

impl Outcome {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn summary(&self) -> Summary {
        Summary {
            schema: SCHEMA_VERSION.to_string(),
            experiment: self.config.experiment.to_string(),
            build: BUILD_DESCRIBE.to_string(),
            passed: self.passed(),
            rows: self.table.rows.len(),
            checks: self.checks.clone(),
            stats: self.stats.clone(),
        }
    }

    /// CSV text: schema line, config echo, build line, header, rows.
    ///
    /// The echo omits `out` and `workers`, which do not change results, so runs that differ
    /// only in those produce identical bytes.
    pub fn csv(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "# schema: {SCHEMA_VERSION} {}", self.config.experiment);
        for (k, v) in self.config.result_keys() {
            let _ = writeln!(s, "# config: {k} = {v}");
        }
        let _ = writeln!(s, "# build: {BUILD_DESCRIBE}");
        let _ = writeln!(s, "{}", self.table.columns.join(","));
        for row in &self.table.rows {
            let cells: Vec<String> = row.iter().map(|c| csv_cell(c)).collect();
            let _ = writeln!(s, "{}", cells.join(","));
        }
        s
    }

    pub fn json(&self) -> String {
        serde_json::to_string_pretty(&self.summary()).expect("summary serializes") + "\n"
    }

    /// Writes the CSV to `path` and the summary next to it; returns the summary path.
    pub fn write(&self, path: &Path) -> Result<PathBuf> {
        if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
            std::fs::create_dir_all(dir)?;
        }
        std::fs::write(path, self.csv())?;
        let json = summary_path(path);
        std::fs::write(&json, self.json())?;
        Ok(json)
    }
}

/// `results.csv` → `results.json`; other names get `.json` appended.
pub fn summary_path(csv: &Path) -> PathBuf {
    match csv.extension() {
        Some(e) if e == "csv" => csv.with_extension("json"),
        _ => {
            let mut s = csv.as_os_str().to_owned();
            s.push(".json");
            PathBuf::from(s)
        }
    }
}

fn csv_cell(c: &str) -> String {
    if c.contains([',', '"', '\n']) {
        format!("\"{}\"", c.replace('"', "\"\""))
    } else {
        c.to_string()
    }
}

/// Fixed-width scientific notation so columns diff cleanly.
pub fn num(v: f64) -> String {
    if v.is_nan() {
        "nan".into()
    } else if v.is_infinite() {
        if v > 0.0 { "inf".into() } else { "-inf".into() }
    } else {
        format!("{v:.12e}")
    }
}

pub fn flag(b: bool) -> String {
    (if b { "true" } else { "false" }).to_string()
}
