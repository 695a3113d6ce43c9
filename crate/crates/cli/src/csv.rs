//! Minimal CSV layer tuned for reproducibility: comma separator, `\n`
//! line endings, one header row, floats in their shortest round-trip
//! form. Parsing an emitted file and re-emitting it is byte identical.
//!
//! Fields never contain commas, quotes or newlines, so no quoting rules
//! are needed.

use anyhow::{bail, Context, Result};

/// Shortest decimal representation that parses back to the same f64.
pub fn fmt_f64(x: f64) -> String {
    format!("{x}")
}

#[derive(Clone, Debug, PartialEq)]
pub struct Csv {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Csv {
    pub fn new<S: Into<String>>(header: Vec<S>) -> Self {
        Self {
            header: header.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push_row(&mut self, cells: Vec<String>) {
        debug_assert_eq!(cells.len(), self.header.len());
        self.rows.push(cells);
    }

    pub fn emit(&self) -> String {
        let mut out = String::new();
        out.push_str(&self.header.join(","));
        out.push('\n');
        for row in &self.rows {
            out.push_str(&row.join(","));
            out.push('\n');
        }
        out
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text.split('\n');
        let header: Vec<String> = lines
            .next()
            .context("empty CSV input")?
            .split(',')
            .map(str::to_owned)
            .collect();
        let mut rows = Vec::new();
        for line in lines {
            if line.is_empty() {
                continue;
            }
            let cells: Vec<String> = line.split(',').map(str::to_owned).collect();
            if cells.len() != header.len() {
                bail!(
                    "row has {} fields, header has {}",
                    cells.len(),
                    header.len()
                );
            }
            rows.push(cells);
        }
        Ok(Self { header, rows })
    }
}
