//! Result tables and their CSV/JSON serialization.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde_json::{json, Map, Value};

use crate::args::{Common, Format};
use crate::error::CliError;

/// One table cell.
#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Float(f64),
    Int(u64),
    Bool(bool),
    Text(String),
    Empty,
}

impl Cell {
    /// CSV text: floats use the shortest representation that round-trips.
    fn csv(&self) -> String {
        match self {
            Cell::Float(x) => format!("{x:?}"),
            Cell::Int(n) => n.to_string(),
            Cell::Bool(b) => b.to_string(),
            Cell::Text(s) => s.clone(),
            Cell::Empty => String::new(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Float(x) => float(*x),
            Cell::Int(n) => json!(n),
            Cell::Bool(b) => json!(b),
            Cell::Text(s) => json!(s),
            Cell::Empty => Value::Null,
        }
    }
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Float(x)
    }
}

impl From<u64> for Cell {
    fn from(n: u64) -> Self {
        Cell::Int(n)
    }
}

impl From<usize> for Cell {
    fn from(n: usize) -> Self {
        Cell::Int(n as u64)
    }
}

impl From<bool> for Cell {
    fn from(b: bool) -> Self {
        Cell::Bool(b)
    }
}

impl From<String> for Cell {
    fn from(s: String) -> Self {
        Cell::Text(s)
    }
}

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Cell::Text(s.to_string())
    }
}

impl<T: Into<Cell>> From<Option<T>> for Cell {
    fn from(v: Option<T>) -> Self {
        v.map_or(Cell::Empty, Into::into)
    }
}

/// JSON has no infinities or NaN; those become strings.
pub fn float(x: f64) -> Value {
    if x.is_finite() {
        json!(x)
    } else {
        json!(format!("{x}"))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(columns: &[&'static str]) -> Self {
        Self { columns: columns.to_vec(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> Result<Vec<u8>, CliError> {
        let mut wtr = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
        let csv_err = |e: csv::Error| CliError::Output(std::io::Error::other(e));
        wtr.write_record(&self.columns).map_err(csv_err)?;
        for row in &self.rows {
            wtr.write_record(row.iter().map(Cell::csv)).map_err(csv_err)?;
        }
        wtr.into_inner().map_err(|e| CliError::Output(e.into_error()))
    }

    fn to_json(&self) -> Value {
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|row| {
                let obj: Map<String, Value> = self
                    .columns
                    .iter()
                    .zip(row)
                    .map(|(c, v)| (c.to_string(), v.json()))
                    .collect();
                Value::Object(obj)
            })
            .collect();
        json!({ "columns": self.columns, "rows": rows })
    }
}

/// Outcome of one command.
#[derive(Debug, Clone)]
pub struct Report {
    pub table: Table,
    pub summary: Map<String, Value>,
}

impl Report {
    pub fn new(table: Table) -> Self {
        Self { table, summary: Map::new() }
    }

    pub fn set(&mut self, key: &str, value: impl Into<Value>) {
        self.summary.insert(key.to_string(), value.into());
    }

    pub fn set_float(&mut self, key: &str, value: f64) {
        self.summary.insert(key.to_string(), float(value));
    }
}

/// Output locations for one run.
pub struct Sink {
    pub csv: PathBuf,
    pub json: PathBuf,
    formats: Vec<Format>,
}

impl Sink {
    pub fn new(command: &str, common: &Common) -> Self {
        let stem = format!("{command}-{}", common.seed);
        Self {
            csv: common.outdir.join(format!("{stem}.csv")),
            json: common.outdir.join(format!("{stem}.json")),
            formats: common.format.clone(),
        }
    }

    fn wants(&self, f: Format) -> bool {
        self.formats.contains(&f)
    }

    fn envelope(command: &str, config: Value) -> Map<String, Value> {
        let mut doc = Map::new();
        doc.insert("tool".into(), json!("qclink"));
        doc.insert("version".into(), json!(env!("CARGO_PKG_VERSION")));
        doc.insert("timestamp".into(), json!(chrono::Utc::now().to_rfc3339()));
        doc.insert("command".into(), json!(command));
        doc.insert("config".into(), config);
        doc
    }

    pub fn write_success(&self, command: &str, config: Value, report: &Report) -> Result<(), CliError> {
        ensure_dir(&self.csv)?;
        if self.wants(Format::Csv) {
            atomic_write(&self.csv, &report.table.to_csv()?)?;
        }
        if self.wants(Format::Json) {
            let mut doc = Self::envelope(command, config);
            doc.insert("status".into(), json!("ok"));
            doc.insert("table".into(), report.table.to_json());
            doc.insert("summary".into(), Value::Object(report.summary.clone()));
            atomic_write(&self.json, &pretty(&doc)?)?;
        }
        Ok(())
    }

    /// Removes partial outputs and records the failure in the JSON report.
    pub fn write_failure(&self, command: &str, config: Value, err: &CliError) -> Result<(), CliError> {
        remove_if_present(&self.csv)?;
        remove_if_present(&self.json)?;
        ensure_dir(&self.json)?;
        let mut doc = Self::envelope(command, config);
        doc.insert("status".into(), json!("error"));
        doc.insert(
            "error".into(),
            json!({ "kind": err.kind(), "exit_code": err.exit_code(), "message": err.to_string() }),
        );
        atomic_write(&self.json, &pretty(&doc)?)
    }
}

fn pretty(doc: &Map<String, Value>) -> Result<Vec<u8>, CliError> {
    let mut bytes = serde_json::to_vec_pretty(doc).map_err(|e| CliError::Output(e.into()))?;
    bytes.push(b'\n');
    Ok(bytes)
}

fn ensure_dir(path: &Path) -> Result<(), CliError> {
    if let Some(dir) = path.parent() {
        if !dir.as_os_str().is_empty() {
            fs::create_dir_all(dir)?;
        }
    }
    Ok(())
}

fn remove_if_present(path: &Path) -> Result<(), CliError> {
    match fs::remove_file(path) {
        Err(e) if e.kind() != std::io::ErrorKind::NotFound => Err(e.into()),
        _ => Ok(()),
    }
}

/// Writes through a temporary sibling so an interrupted run never leaves a truncated file.
fn atomic_write(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    let tmp = path.with_extension("partial");
    {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(bytes)?;
        f.sync_all()?;
    }
    fs::rename(&tmp, path)?;
    Ok(())
}
