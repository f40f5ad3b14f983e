use std::io::Write;
use std::path::Path;

use clap::ValueEnum;
use serde::Serialize;
use serde_json::Value;

use crate::failure::Failure;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

/// A command's result: the JSON document plus an optional table for CSV output.
pub struct Output {
    pub json: Value,
    pub table: Option<Table>,
    /// Axioms or checks failed; the artifact is still written.
    pub failed: bool,
}

pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        Table { header: header.iter().map(|s| s.to_string()).collect(), rows: vec![] }
    }

    pub fn push(&mut self, row: Vec<String>) {
        self.rows.push(row);
    }
}

impl Output {
    pub fn new(value: impl Serialize) -> Result<Self, Failure> {
        Ok(Output { json: to_value(value)?, table: None, failed: false })
    }

    pub fn with_table(mut self, t: Table) -> Self {
        self.table = Some(t);
        self
    }

    pub fn failed_if(mut self, failed: bool) -> Self {
        self.failed = failed;
        self
    }

    pub fn render(&self, format: Format) -> Result<String, Failure> {
        match format {
            Format::Json => {
                let mut s = serde_json::to_string_pretty(&self.json).map_err(|e| Failure::Io(e.to_string()))?;
                s.push('\n');
                Ok(s)
            }
            Format::Csv => {
                let fallback;
                let table = match &self.table {
                    Some(t) => t,
                    None => {
                        fallback = flatten(&self.json);
                        &fallback
                    }
                };
                let mut w = csv::Writer::from_writer(vec![]);
                w.write_record(&table.header).map_err(|e| Failure::Io(e.to_string()))?;
                for r in &table.rows {
                    w.write_record(r).map_err(|e| Failure::Io(e.to_string()))?;
                }
                let bytes = w.into_inner().map_err(|e| Failure::Io(e.to_string()))?;
                String::from_utf8(bytes).map_err(|e| Failure::Io(e.to_string()))
            }
        }
    }

    pub fn write(&self, format: Format, out: Option<&Path>) -> Result<(), Failure> {
        let text = self.render(format)?;
        match out {
            Some(p) => std::fs::write(p, text).map_err(|e| Failure::Io(format!("{}: {e}", p.display()))),
            None => std::io::stdout().write_all(text.as_bytes()).map_err(|e| Failure::Io(e.to_string())),
        }
    }
}

pub fn to_value(v: impl Serialize) -> Result<Value, Failure> {
    serde_json::to_value(v).map_err(|e| Failure::Io(e.to_string()))
}

/// Shortest representation that parses back to the same `f64`.
pub fn num(x: f64) -> String {
    if x.is_finite() {
        format!("{x:?}")
    } else if x.is_nan() {
        "NaN".into()
    } else if x > 0.0 {
        "inf".into()
    } else {
        "-inf".into()
    }
}

/// Dotted-path `field,value` rows for documents without a natural table.
fn flatten(v: &Value) -> Table {
    fn walk(prefix: &str, v: &Value, t: &mut Table) {
        match v {
            Value::Object(m) => {
                for (k, x) in m {
                    let p = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                    walk(&p, x, t);
                }
            }
            Value::Array(a) => {
                for (i, x) in a.iter().enumerate() {
                    walk(&format!("{prefix}.{i}"), x, t);
                }
            }
            Value::Null => t.push(vec![prefix.into(), String::new()]),
            Value::String(s) => t.push(vec![prefix.into(), s.clone()]),
            other => t.push(vec![prefix.into(), other.to_string()]),
        }
    }
    let mut t = Table::new(&["field", "value"]);
    walk("", v, &mut t);
    t
}
