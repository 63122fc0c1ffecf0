//! Reproducible data files: CSV with `#`-prefixed header comments, or an
//! equivalent JSON layout under `--json`. Reruns with identical config and
//! seed are byte-identical, so nothing time- or host-dependent may appear in
//! a header.

use anyhow::{Context, Result};
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

/// 15 significant digits, scientific notation.
pub fn sig15(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    format!("{x:.14e}")
}

/// Resolved configuration echoed into every output, as ordered key/value
/// pairs. Worker count is deliberately excluded: results do not depend on it.
#[derive(Debug, Clone, Default)]
pub struct ConfigEcho {
    pub entries: Vec<(String, String)>,
}

impl ConfigEcho {
    pub fn push(&mut self, key: &str, value: impl std::fmt::Display) {
        self.entries.push((key.to_string(), value.to_string()));
    }
}

pub struct DataTable {
    pub command: &'static str,
    pub config: ConfigEcho,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<f64>>,
    /// Extra `# key = value` diagnostics appended after the config echo.
    pub notes: Vec<(String, String)>,
}

impl DataTable {
    pub fn new(command: &'static str, config: ConfigEcho, columns: Vec<&'static str>) -> Self {
        DataTable {
            command,
            config,
            columns,
            rows: Vec::new(),
            notes: Vec::new(),
        }
    }

    pub fn push_row(&mut self, row: Vec<f64>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn note(&mut self, key: &str, value: impl std::fmt::Display) {
        self.notes.push((key.to_string(), value.to_string()));
    }

    fn to_csv(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!(
            "# semiclassica {} {}\n",
            env!("CARGO_PKG_VERSION"),
            self.command
        ));
        for (k, v) in &self.config.entries {
            out.push_str(&format!("# {k} = {v}\n"));
        }
        for (k, v) in &self.notes {
            out.push_str(&format!("# {k} = {v}\n"));
        }
        out.push_str(&self.columns.join(","));
        out.push('\n');
        for row in &self.rows {
            let fields: Vec<String> = row.iter().map(|&x| sig15(x)).collect();
            out.push_str(&fields.join(","));
            out.push('\n');
        }
        out
    }

    fn to_json(&self) -> Result<String> {
        #[derive(serde::Serialize)]
        struct JsonTable<'a> {
            tool: &'static str,
            version: &'static str,
            command: &'static str,
            config: Vec<(&'a str, &'a str)>,
            notes: Vec<(&'a str, &'a str)>,
            columns: &'a [&'static str],
            rows: &'a [Vec<f64>],
        }
        let table = JsonTable {
            tool: "semiclassica",
            version: env!("CARGO_PKG_VERSION"),
            command: self.command,
            config: self
                .config
                .entries
                .iter()
                .map(|(k, v)| (k.as_str(), v.as_str()))
                .collect(),
            notes: self
                .notes
                .iter()
                .map(|(k, v)| (k.as_str(), v.as_str()))
                .collect(),
            columns: &self.columns,
            rows: &self.rows,
        };
        Ok(serde_json::to_string_pretty(&table)?)
    }

    /// Writes `<dir>/<stem>.csv` (or `.json`) and returns the path.
    pub fn write(&self, dir: &Path, stem: &str, json: bool) -> Result<PathBuf> {
        fs::create_dir_all(dir)
            .with_context(|| format!("creating output directory {}", dir.display()))?;
        let path = dir.join(format!("{stem}.{}", if json { "json" } else { "csv" }));
        let contents = if json { self.to_json()? } else { self.to_csv() };
        let mut file =
            fs::File::create(&path).with_context(|| format!("creating {}", path.display()))?;
        file.write_all(contents.as_bytes())?;
        Ok(path)
    }
}
