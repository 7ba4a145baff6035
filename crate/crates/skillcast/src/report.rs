//! Report plumbing for the command-line front end: a JSON-lines machine
//! format whose first line echoes the run configuration, and aligned
//! text tables for human eyes. No timestamps anywhere; identical runs
//! must produce identical bytes.

use crate::error::{Error, Result};
use serde::Serialize;
use serde_json::Value;

#[derive(Debug, Clone, Serialize)]
pub struct InputDigest {
    pub name: String,
    pub sha256: String,
}

/// First line of every machine report.
#[derive(Debug, Clone, Serialize)]
pub struct ReportHeader {
    pub command: String,
    pub seed: u64,
    pub config: Value,
    pub inputs: Vec<InputDigest>,
}

impl ReportHeader {
    pub fn new(command: &str, seed: u64, config: Value) -> ReportHeader {
        ReportHeader { command: command.to_string(), seed, config, inputs: Vec::new() }
    }

    pub fn add_input(&mut self, name: &str, bytes: &[u8]) {
        self.inputs.push(InputDigest {
            name: name.to_string(),
            sha256: crate::util::sha256_hex(bytes),
        });
    }
}

/// Header line followed by one JSON object per row.
pub fn machine_report(header: &ReportHeader, rows: &[Value]) -> Result<String> {
    let mut out = serde_json::to_string(header)
        .map_err(|e| Error::Data(format!("serialize report header: {e}")))?;
    out.push('\n');
    for row in rows {
        out.push_str(
            &serde_json::to_string(row).map_err(|e| Error::Data(format!("serialize row: {e}")))?,
        );
        out.push('\n');
    }
    Ok(out)
}

pub fn to_row<T: Serialize>(value: &T) -> Result<Value> {
    serde_json::to_value(value).map_err(|e| Error::Data(format!("serialize row: {e}")))
}

/// Space-aligned text table. Column widths fit the widest cell.
#[derive(Debug, Clone)]
pub struct Table {
    columns: Vec<String>,
    rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(columns: &[&str]) -> Table {
        Table { columns: columns.iter().map(|c| c.to_string()).collect(), rows: Vec::new() }
    }

    pub fn row(&mut self, cells: Vec<String>) {
        assert_eq!(cells.len(), self.columns.len(), "row width mismatch");
        self.rows.push(cells);
    }

    pub fn render(&self) -> String {
        let mut widths: Vec<usize> = self.columns.iter().map(|c| c.chars().count()).collect();
        for row in &self.rows {
            for (w, cell) in widths.iter_mut().zip(row) {
                *w = (*w).max(cell.chars().count());
            }
        }
        let mut out = String::new();
        let emit = |out: &mut String, cells: &[String]| {
            for (i, (cell, w)) in cells.iter().zip(&widths).enumerate() {
                if i > 0 {
                    out.push_str("  ");
                }
                out.push_str(cell);
                // No trailing spaces on the last column.
                if i + 1 < cells.len() {
                    for _ in cell.chars().count()..*w {
                        out.push(' ');
                    }
                }
            }
            out.push('\n');
        };
        emit(&mut out, &self.columns);
        let dashes: Vec<String> = widths.iter().map(|w| "-".repeat(*w)).collect();
        emit(&mut out, &dashes);
        for row in &self.rows {
            emit(&mut out, row);
        }
        out
    }
}

/// Fixed-width float for table cells.
pub fn fmt_f(v: f64, decimals: usize) -> String {
    format!("{v:.decimals$}")
}
