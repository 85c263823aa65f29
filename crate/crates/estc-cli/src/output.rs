//! Table emission: CSV with '#'-prefixed effective-config header, or one
//! JSON object {config, columns, rows}. All numbers are written as the
//! shortest round-trip decimal of their binary64 value.

use crate::config::{OutputFormat, RunConfig};
use anyhow::{Context, Result};
use serde_json::{json, Map, Value};
use std::io::Write;
use std::path::Path;

/// One table cell; numbers keep full binary64 fidelity in both formats.
#[derive(Debug, Clone)]
pub enum Cell {
    Number(f64),
    Text(String),
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Number(x) => fmt_f64(*x),
            Cell::Text(s) => s.clone(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Number(x) => json!(x),
            Cell::Text(s) => json!(s),
        }
    }
}

/// Shortest round-trip decimal of a binary64 value (exponent notation
/// where that is shorter, matching the JSON serialization).
pub fn fmt_f64(x: f64) -> String {
    if x.is_finite() {
        serde_json::to_string(&x).expect("finite f64")
    } else {
        format!("{x}")
    }
}

#[derive(Debug, Clone)]
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(columns: Vec<&'static str>) -> Self {
        Self {
            columns,
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn render(&self, cfg: &RunConfig) -> String {
        match cfg.format {
            OutputFormat::Csv => self.render_csv(cfg),
            OutputFormat::Json => self.render_json(cfg),
        }
    }

    fn render_csv(&self, cfg: &RunConfig) -> String {
        let mut out = String::new();
        for (key, value) in cfg.echo() {
            out.push_str(&format!("# {key} = {value}\n"));
        }
        out.push_str(&self.columns.join(","));
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(Cell::csv).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }

    fn render_json(&self, cfg: &RunConfig) -> String {
        let mut config = Map::new();
        for (key, value) in cfg.echo() {
            config.insert(key, json!(value));
        }
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|row| Value::Array(row.iter().map(Cell::json).collect()))
            .collect();
        let doc = json!({
            "config": Value::Object(config),
            "columns": self.columns,
            "rows": rows,
        });
        let mut text = serde_json::to_string_pretty(&doc).expect("json");
        text.push('\n');
        text
    }
}

/// Writes to the configured path or stdout.
pub fn emit(table: &Table, cfg: &RunConfig) -> Result<()> {
    let text = table.render(cfg);
    match &cfg.out {
        Some(path) if path != Path::new("-") => {
            std::fs::write(path, text)
                .with_context(|| format!("writing {}", path.display()))?;
        }
        _ => {
            std::io::stdout()
                .write_all(text.as_bytes())
                .context("writing stdout")?;
        }
    }
    Ok(())
}
