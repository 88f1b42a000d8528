//! Deterministic CSV / JSON emission.

use std::io::Write;
use std::path::Path;

use anyhow::{Context, Result};
use serde::Serialize;
use serde_json::Value;

use crate::config::Format;

/// Column-major header with row-major cells. Non-finite numbers are stored
/// as `Null` and written as `NaN` in CSV.
#[derive(Debug, Clone, Serialize)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Value>>,
}

impl Table {
    pub fn new(columns: &[&str]) -> Self {
        Self {
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Value>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }
}

pub fn num(x: f64) -> Value {
    serde_json::Number::from_f64(x).map_or(Value::Null, Value::Number)
}

fn csv_cell(v: &Value) -> String {
    match v {
        Value::Null => "NaN".to_string(),
        Value::Number(n) => match n.as_f64() {
            Some(x) if n.is_f64() => format!("{x:.11e}"),
            _ => n.to_string(),
        },
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

pub fn to_csv(t: &Table) -> String {
    let mut s = t.columns.join(",");
    s.push('\n');
    for row in &t.rows {
        let cells: Vec<String> = row.iter().map(csv_cell).collect();
        s.push_str(&cells.join(","));
        s.push('\n');
    }
    s
}

pub fn render(t: &Table, format: Format) -> Result<String> {
    Ok(match format {
        Format::Csv => to_csv(t),
        Format::Json => serde_json::to_string_pretty(t)? + "\n",
    })
}

pub fn write(text: &str, path: Option<&Path>) -> Result<()> {
    match path {
        Some(p) => std::fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes()).context("writing to stdout")?;
            out.flush().context("writing to stdout")
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_uses_twelve_digits() {
        let mut t = Table::new(&["a", "b", "c"]);
        t.push(vec![num(1.0 / 3.0), num(f64::NAN), Value::Bool(true)]);
        t.push(vec![num(-2.5e-300), Value::from(3u32), Value::String("x".into())]);
        assert_eq!(
            to_csv(&t),
            "a,b,c\n3.33333333333e-1,NaN,true\n-2.50000000000e-300,3,x\n"
        );
    }
}
