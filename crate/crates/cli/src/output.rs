//! CSV tables and the JSON report envelope.

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::Path;

use anyhow::{Context, Result};
use serde_json::{json, Value};

use crate::config::Provenance;
use crate::{Format, OutArgs};

pub enum Cell {
    Num(f64),
    Int(u64),
    Text(String),
    Empty,
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Num(v)
    }
}

impl From<u64> for Cell {
    fn from(v: u64) -> Self {
        Cell::Int(v)
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as u64)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}

impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell::Text(v)
    }
}

impl From<Option<f64>> for Cell {
    fn from(v: Option<f64>) -> Self {
        v.map_or(Cell::Empty, Cell::Num)
    }
}

pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new<S: Into<String>>(header: impl IntoIterator<Item = S>) -> Self {
        Self {
            header: header.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    /// 17 significant digits, so every double reads back exactly.
    pub fn to_csv(&self) -> String {
        let mut s = self.header.join(",");
        s.push('\n');
        for row in &self.rows {
            for (i, c) in row.iter().enumerate() {
                if i > 0 {
                    s.push(',');
                }
                match c {
                    Cell::Num(v) => write!(s, "{v:.16e}").unwrap(),
                    Cell::Int(v) => write!(s, "{v}").unwrap(),
                    Cell::Text(t) => s.push_str(t),
                    Cell::Empty => {}
                }
            }
            s.push('\n');
        }
        s
    }
}

pub struct Report {
    pub subcommand: &'static str,
    /// The effective settings after defaults, config file and flags.
    pub config: Value,
    pub results: Value,
    pub table: Table,
}

impl Report {
    pub fn to_json(&self, prov: &Provenance) -> Value {
        json!({
            "tool": "dioph",
            "version": env!("CARGO_PKG_VERSION"),
            "subcommand": self.subcommand,
            "config": self.config,
            "config_file": prov.config_file.as_ref().map(|p| p.display().to_string()),
            "env_workers": prov.env_workers,
            "results": self.results,
            "csv_columns": self.table.header,
        })
    }

    pub fn emit(&self, out: &OutArgs, prov: &Provenance) -> Result<()> {
        let json_text = || serde_json::to_string_pretty(&self.to_json(prov)).map(|s| s + "\n");
        let primary = match out.format {
            Format::Csv => self.table.to_csv(),
            Format::Json => json_text()?,
        };
        match &out.output {
            Some(p) => write_file(p, &primary)?,
            None => std::io::stdout()
                .lock()
                .write_all(primary.as_bytes())
                .context("writing to stdout")?,
        }
        if let Some(p) = &out.report {
            write_file(p, &json_text()?)?;
        }
        Ok(())
    }
}

fn write_file(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).with_context(|| format!("cannot write {}", path.display()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_round_trips_doubles() {
        let mut t = Table::new(["x", "n", "tag", "gap"]);
        let v = 0.1 + 0.2;
        t.push(vec![v.into(), 7u64.into(), "a".into(), None.into()]);
        let csv = t.to_csv();
        let line = csv.lines().nth(1).unwrap();
        let fields: Vec<&str> = line.split(',').collect();
        assert_eq!(fields[0].parse::<f64>().unwrap(), v);
        assert_eq!(&fields[1..], ["7", "a", ""]);
    }
}
