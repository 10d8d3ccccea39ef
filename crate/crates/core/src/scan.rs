//! Tabular scan output with `#`-prefixed metadata, written as CSV or JSON.

use std::fmt::Write as _;
use std::io::Write;

use serde::Serialize;

use crate::error::{ChainError, Result};

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(untagged)]
pub enum Cell {
    Float(f64),
    Int(i64),
    Text(String),
}

impl Cell {
    pub fn as_f64(&self) -> Option<f64> {
        match self {
            Cell::Float(x) => Some(*x),
            Cell::Int(i) => Some(*i as f64),
            Cell::Text(_) => None,
        }
    }

    pub fn as_str(&self) -> Option<&str> {
        match self {
            Cell::Text(s) => Some(s),
            _ => None,
        }
    }

    fn render(&self, out: &mut String) {
        match self {
            // 17 significant digits round-trip every f64
            Cell::Float(x) => write!(out, "{x:.16e}").unwrap(),
            Cell::Int(i) => write!(out, "{i}").unwrap(),
            Cell::Text(s) => out.push_str(s),
        }
    }
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Float(x)
    }
}

impl From<usize> for Cell {
    fn from(i: usize) -> Self {
        Cell::Int(i as i64)
    }
}

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Cell::Text(s.to_owned())
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct ScanResult {
    pub metadata: Vec<(String, String)>,
    pub header: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl ScanResult {
    pub fn new(header: &[&str]) -> Self {
        Self { metadata: Vec::new(), header: header.iter().map(|s| s.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push_meta(&mut self, key: impl Into<String>, value: impl ToString) {
        self.metadata.push((key.into(), value.to_string()));
    }

    pub fn push_row(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn column_index(&self, name: &str) -> Option<usize> {
        self.header.iter().position(|h| h == name)
    }

    pub fn column_f64(&self, name: &str) -> Option<Vec<f64>> {
        let k = self.column_index(name)?;
        self.rows.iter().map(|r| r[k].as_f64()).collect()
    }

    /// Every float cell is finite and every row matches the header width.
    pub fn check(&self) -> Result<()> {
        for (i, row) in self.rows.iter().enumerate() {
            if row.len() != self.header.len() {
                return Err(ChainError::Domain(format!("row {i} has {} cells", row.len())));
            }
            if row.iter().any(|c| matches!(c, Cell::Float(x) if !x.is_finite())) {
                return Err(ChainError::Domain(format!("row {i} contains a non-finite value")));
            }
        }
        Ok(())
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for (k, v) in &self.metadata {
            writeln!(out, "# {k} = {v}").unwrap();
        }
        out.push_str(&self.header.join(","));
        out.push('\n');
        for row in &self.rows {
            for (i, cell) in row.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                cell.render(&mut out);
            }
            out.push('\n');
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("scan results serialize")
    }

    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        w.write_all(self.to_csv().as_bytes())?;
        Ok(())
    }
}
