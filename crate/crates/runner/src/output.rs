use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde_json::{json, Map, Value};

use crate::error::{RunError, RunResult};

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    U(u64),
    I(i128),
    F(f64),
    S(String),
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::U(v) => v.to_string(),
            Cell::I(v) => v.to_string(),
            Cell::F(v) => v.to_string(),
            Cell::S(s) => s.clone(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::U(v) => json!(v),
            Cell::I(v) => i64::try_from(*v)
                .map(Value::from)
                .unwrap_or_else(|_| Value::String(v.to_string())),
            Cell::F(v) if v.is_finite() => json!(v),
            Cell::F(v) => Value::String(v.to_string()),
            Cell::S(s) => Value::String(s.clone()),
        }
    }
}

impl From<u64> for Cell {
    fn from(v: u64) -> Self {
        Cell::U(v)
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::U(v as u64)
    }
}

impl From<u32> for Cell {
    fn from(v: u32) -> Self {
        Cell::U(v as u64)
    }
}

impl From<i128> for Cell {
    fn from(v: i128) -> Self {
        Cell::I(v)
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::F(v)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::S(v.into())
    }
}

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::S(v.to_string())
    }
}

/// A named table destined for `<name>.csv` (and `<name>.json`).
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub name: String,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
    /// Extra `# key: value` lines after the provenance header.
    pub notes: Vec<(String, String)>,
}

impl Table {
    pub fn new(name: &str, columns: &[&'static str]) -> Self {
        Table {
            name: name.into(),
            columns: columns.to_vec(),
            rows: Vec::new(),
            notes: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn note(&mut self, key: &str, value: impl ToString) {
        self.notes.push((key.into(), value.to_string()));
    }

    pub fn column(&self, name: &str) -> Option<Vec<&Cell>> {
        let i = self.columns.iter().position(|c| *c == name)?;
        Some(self.rows.iter().map(|r| &r[i]).collect())
    }

    /// Data rows only, as CSV text.
    pub fn data_csv(&self) -> String {
        let mut out = self.columns.join(",");
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(Cell::csv).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }
}

/// Header lines written at the top of every output file.
#[derive(Debug, Clone, PartialEq)]
pub struct Provenance {
    pub tool: String,
    pub experiment: String,
    pub config_sha256: String,
    pub seed: u64,
    pub generator: String,
    pub stamp: Option<String>,
}

impl Provenance {
    fn pairs(&self) -> Vec<(&'static str, String)> {
        let mut v = vec![
            ("tool", self.tool.clone()),
            ("experiment", self.experiment.clone()),
            ("config_sha256", self.config_sha256.clone()),
            ("seed", self.seed.to_string()),
            ("generator", self.generator.clone()),
        ];
        if let Some(s) = &self.stamp {
            v.push(("stamp", s.clone()));
        }
        v
    }
}

pub fn render_csv(table: &Table, prov: &Provenance) -> String {
    let mut out = String::new();
    for (k, v) in prov.pairs() {
        writeln!(out, "# {k}: {v}").unwrap();
    }
    for (k, v) in &table.notes {
        writeln!(out, "# {k}: {v}").unwrap();
    }
    out.push_str(&table.data_csv());
    out
}

pub fn render_json(table: &Table, prov: &Provenance) -> String {
    let header: Map<String, Value> = prov
        .pairs()
        .into_iter()
        .map(|(k, v)| (k.to_string(), Value::String(v)))
        .collect();
    let notes: Map<String, Value> = table
        .notes
        .iter()
        .map(|(k, v)| (k.clone(), Value::String(v.clone())))
        .collect();
    let rows: Vec<Value> = table
        .rows
        .iter()
        .map(|r| {
            let m: Map<String, Value> = table
                .columns
                .iter()
                .zip(r)
                .map(|(c, v)| (c.to_string(), v.json()))
                .collect();
            Value::Object(m)
        })
        .collect();
    let doc =
        json!({ "provenance": header, "notes": notes, "columns": table.columns, "rows": rows });
    let mut s = serde_json::to_string_pretty(&doc).expect("json renders");
    s.push('\n');
    s
}

/// Writes each table as CSV, plus JSON when `json` is set. Returns the
/// paths written.
pub fn write_tables(
    dir: &Path,
    tables: &[Table],
    prov: &Provenance,
    json: bool,
) -> RunResult<Vec<PathBuf>> {
    std::fs::create_dir_all(dir).map_err(|e| RunError::io(dir, e))?;
    let mut written = Vec::new();
    for t in tables {
        let path = dir.join(format!("{}.csv", t.name));
        std::fs::write(&path, render_csv(t, prov)).map_err(|e| RunError::io(&path, e))?;
        written.push(path);
        if json {
            let path = dir.join(format!("{}.json", t.name));
            std::fs::write(&path, render_json(t, prov)).map_err(|e| RunError::io(&path, e))?;
            written.push(path);
        }
    }
    Ok(written)
}

/// Lines of a CSV file that are not `#` comments.
pub fn data_lines(text: &str) -> Vec<&str> {
    text.lines().filter(|l| !l.starts_with('#')).collect()
}
