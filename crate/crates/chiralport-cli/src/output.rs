//! Tabular output in CSV or JSON, formatted deterministically.

use std::fmt::Write as _;

/// Output encoding.
#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    /// Comma-separated, header row, LF line endings, 17 significant digits.
    Csv,
    /// One object: column names plus an array of row arrays.
    Json,
}

/// One table cell. Infeasible rows carry [`Cell::Empty`] in their value
/// columns rather than fabricated zeros.
#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(u64),
    Bool(bool),
    Str(String),
    Empty,
}

impl Cell {
    fn write_csv(&self, out: &mut String) {
        match self {
            // 17 significant digits round-trip any f64 exactly.
            Cell::Num(x) => {
                let _ = write!(out, "{x:.16e}");
            }
            Cell::Int(n) => {
                let _ = write!(out, "{n}");
            }
            Cell::Bool(b) => {
                let _ = write!(out, "{b}");
            }
            Cell::Str(s) => {
                debug_assert!(!s.contains([',', '"', '\n']), "cell needs quoting: {s}");
                out.push_str(s);
            }
            Cell::Empty => {}
        }
    }

    fn to_json(&self) -> serde_json::Value {
        match self {
            Cell::Num(x) if x.is_finite() => serde_json::json!(x),
            // JSON numbers cannot express infinities; keep them readable.
            Cell::Num(x) => serde_json::Value::String(format!("{x}")),
            Cell::Int(n) => serde_json::json!(n),
            Cell::Bool(b) => serde_json::json!(b),
            Cell::Str(s) => serde_json::Value::String(s.clone()),
            Cell::Empty => serde_json::Value::Null,
        }
    }
}

/// A rectangular table with named columns.
#[derive(Debug, Clone)]
pub struct Table {
    columns: Vec<&'static str>,
    rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(columns: Vec<&'static str>) -> Self {
        Table {
            columns,
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        assert_eq!(row.len(), self.columns.len(), "row width mismatch");
        self.rows.push(row);
    }

    pub fn extend(&mut self, rows: impl IntoIterator<Item = Vec<Cell>>) {
        for row in rows {
            self.push(row);
        }
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn columns(&self) -> &[&'static str] {
        &self.columns
    }

    pub fn rows(&self) -> &[Vec<Cell>] {
        &self.rows
    }

    /// Renders the table in the requested format, ending with one LF.
    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Csv => {
                let mut out = String::new();
                out.push_str(&self.columns.join(","));
                out.push('\n');
                for row in &self.rows {
                    for (i, cell) in row.iter().enumerate() {
                        if i > 0 {
                            out.push(',');
                        }
                        cell.write_csv(&mut out);
                    }
                    out.push('\n');
                }
                out
            }
            Format::Json => {
                let rows: Vec<serde_json::Value> = self
                    .rows
                    .iter()
                    .map(|row| serde_json::Value::Array(row.iter().map(Cell::to_json).collect()))
                    .collect();
                let doc = serde_json::json!({
                    "columns": self.columns,
                    "rows": rows,
                });
                let mut out = serde_json::to_string_pretty(&doc).expect("table serializes");
                out.push('\n');
                out
            }
        }
    }
}
