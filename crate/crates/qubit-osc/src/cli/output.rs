//! Table emission. Numbers go out in scientific notation with 12 significant digits.

use serde::Serialize;
use serde_json::{json, Value};
use std::io::Write;

use super::config::{Format, RunConfig};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Text(String),
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Num(v) => sci(*v),
            Cell::Text(s) => s.clone(),
        }
    }

    fn json(&self) -> Value {
        match self {
            // non-finite values have no JSON number form
            Cell::Num(v) if v.is_finite() => json!(v),
            Cell::Num(v) => json!(v.to_string()),
            Cell::Text(s) => json!(s),
        }
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Num(v)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.into())
    }
}

impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell::Text(v)
    }
}

/// `d.ddddddddddde±XX`
pub fn sci(v: f64) -> String {
    if !v.is_finite() {
        return v.to_string();
    }
    let s = format!("{v:.11e}");
    let (mant, exp) = s.split_once('e').expect("exponent present");
    let e: i32 = exp.parse().expect("integer exponent");
    let sign = if e < 0 { '-' } else { '+' };
    format!("{mant}e{sign}{:02}", e.abs())
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
    /// Discrete spectral lines kept apart from the sampled curve.
    pub peaks: Option<Box<Table>>,
}

impl Table {
    pub fn new<S: Into<String>>(columns: impl IntoIterator<Item = S>) -> Self {
        Table { columns: columns.into_iter().map(Into::into).collect(), rows: Vec::new(), peaks: None }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn append(&mut self, other: Table) {
        self.rows.extend(other.rows);
        if let Some(p) = other.peaks {
            match &mut self.peaks {
                Some(mine) => mine.rows.extend(p.rows),
                None => self.peaks = Some(p),
            }
        }
    }

    pub fn to_csv(&self, hash: &str) -> String {
        let mut s = format!("# config_sha256={hash}\n{}\n", self.columns.join(","));
        for r in &self.rows {
            s.push_str(&r.iter().map(Cell::csv).collect::<Vec<_>>().join(","));
            s.push('\n');
        }
        s
    }

    fn rows_json(&self) -> Value {
        Value::Array(self.rows.iter().map(|r| Value::Array(r.iter().map(Cell::json).collect())).collect())
    }

    pub fn to_json(&self, cfg: &RunConfig) -> String {
        #[derive(Serialize)]
        struct Doc<'a> {
            config_hash: String,
            config: &'a RunConfig,
            columns: &'a [String],
            rows: Value,
            #[serde(skip_serializing_if = "Option::is_none")]
            peaks: Option<Value>,
        }
        let doc = Doc {
            config_hash: cfg.hash(),
            config: cfg,
            columns: &self.columns,
            rows: self.rows_json(),
            peaks: self.peaks.as_ref().map(|p| json!({ "columns": p.columns, "rows": p.rows_json() })),
        };
        let mut s = serde_json::to_string_pretty(&doc).expect("table serializes");
        s.push('\n');
        s
    }
}

fn write_to(path: Option<&std::path::Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| Error::Config(format!("cannot write {}: {e}", p.display()))),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes()).and_then(|_| out.flush()).map_err(|e| Error::Config(format!("stdout: {e}")))
        }
    }
}

/// Writes the table to `cfg.out` or stdout. For CSV, peaks go to `<out>.peaks.csv` next to
/// the main file, or follow the main table on stdout after a blank line.
pub fn emit(table: &Table, cfg: &RunConfig) -> Result<()> {
    match cfg.format {
        Format::Json => write_to(cfg.out.as_deref(), &table.to_json(cfg)),
        Format::Csv => {
            let hash = cfg.hash();
            let main = table.to_csv(&hash);
            match (&table.peaks, &cfg.out) {
                (None, _) => write_to(cfg.out.as_deref(), &main),
                (Some(p), Some(out)) => {
                    write_to(Some(out), &main)?;
                    let mut side = out.clone().into_os_string();
                    side.push(".peaks.csv");
                    write_to(Some(std::path::Path::new(&side)), &p.to_csv(&hash))
                }
                (Some(p), None) => write_to(None, &format!("{main}\n{}", p.to_csv(&hash))),
            }
        }
    }
}
