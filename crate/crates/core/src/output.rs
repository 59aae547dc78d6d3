//! Artifact writers: comma-separated tables with `#` metadata lines, LF line
//! endings, floats at 17 significant digits.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::error::Result;

/// Conventions line written into every artifact.
pub const CONVENTIONS: &str = "H = (J/n_spins) S^2 + h N^z; N = S_A - S_B; n^z = 2 N^z / n_spins; s^z = 2 S^z / n_spins; hbar = 1; S_A = S_B = n_spins/4";

/// A table cell.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Cell {
    Int(i64),
    Float(f64),
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Float(x)
    }
}

impl From<usize> for Cell {
    fn from(x: usize) -> Self {
        Cell::Int(x as i64)
    }
}

impl From<i64> for Cell {
    fn from(x: i64) -> Self {
        Cell::Int(x)
    }
}

/// Formats a float with 17 significant digits (exact round trip).
pub fn format_float(x: f64) -> String {
    if x.is_nan() {
        "nan".into()
    } else if x.is_infinite() {
        if x > 0.0 { "inf" } else { "-inf" }.into()
    } else {
        format!("{x:.16e}")
    }
}

/// Header shared by every artifact of a run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Metadata {
    pub command: String,
    pub digest: String,
}

impl Metadata {
    pub fn new(command: &str, digest: &str) -> Self {
        Metadata {
            command: command.to_string(),
            digest: digest.to_string(),
        }
    }

    fn lines(&self) -> String {
        format!(
            "# lr-staggered {}\n# command: {}\n# config_sha256: {}\n# conventions: {}\n",
            env!("CARGO_PKG_VERSION"),
            self.command,
            self.digest,
            CONVENTIONS
        )
    }
}

/// An in-memory table.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
    /// Extra `#` lines after the metadata.
    pub notes: Vec<String>,
}

impl Table {
    pub fn new(columns: &[&str]) -> Self {
        Table {
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
            notes: Vec::new(),
        }
    }

    pub fn note(mut self, text: impl Into<String>) -> Self {
        self.notes.push(text.into());
        self
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn render(&self, meta: &Metadata) -> String {
        let mut s = meta.lines();
        for n in &self.notes {
            let _ = writeln!(s, "# {n}");
        }
        s.push_str(&self.columns.join(","));
        s.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row
                .iter()
                .map(|c| match *c {
                    Cell::Int(i) => i.to_string(),
                    Cell::Float(x) => format_float(x),
                })
                .collect();
            s.push_str(&cells.join(","));
            s.push('\n');
        }
        s
    }
}

/// Collects the files of one run.
#[derive(Debug)]
pub struct ArtifactWriter {
    dir: PathBuf,
    meta: Metadata,
    written: Vec<PathBuf>,
}

impl ArtifactWriter {
    pub fn new(dir: &Path, meta: Metadata) -> Result<Self> {
        std::fs::create_dir_all(dir)?;
        Ok(ArtifactWriter {
            dir: dir.to_path_buf(),
            meta,
            written: Vec::new(),
        })
    }

    pub fn table(&mut self, name: &str, table: &Table) -> Result<()> {
        self.text(name, &table.render(&self.meta))
    }

    /// JSON document wrapped with the metadata.
    pub fn json<T: Serialize>(&mut self, name: &str, value: &T) -> Result<()> {
        #[derive(Serialize)]
        struct Wrapped<'a, T> {
            version: &'a str,
            command: &'a str,
            config_sha256: &'a str,
            conventions: &'a str,
            result: &'a T,
        }
        let w = Wrapped {
            version: env!("CARGO_PKG_VERSION"),
            command: &self.meta.command,
            config_sha256: &self.meta.digest,
            conventions: CONVENTIONS,
            result: value,
        };
        let mut s = serde_json::to_string_pretty(&w).map_err(|e| crate::Error::Domain(format!("serializing {name}: {e}")))?;
        s.push('\n');
        self.text(name, &s)
    }

    pub fn text(&mut self, name: &str, body: &str) -> Result<()> {
        let path = self.dir.join(name);
        std::fs::write(&path, body)?;
        self.written.push(path);
        Ok(())
    }

    pub fn written(&self) -> &[PathBuf] {
        &self.written
    }

    pub fn into_written(self) -> Vec<PathBuf> {
        self.written
    }
}
