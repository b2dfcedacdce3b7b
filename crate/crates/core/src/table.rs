//! Rectangular result tables and their byte-exact CSV / JSONL renderings.

use std::fmt::Write as _;
use std::io::Write;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Column {
    pub name: String,
    /// `"1"` for dimensionless quantities.
    pub unit: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Provenance {
    pub tool: String,
    pub version: String,
    pub command: String,
    pub config_sha256: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScanTable {
    pub name: String,
    pub columns: Vec<Column>,
    pub rows: Vec<Vec<f64>>,
    pub provenance: Option<Provenance>,
}

impl ScanTable {
    pub fn new(name: &str, columns: &[(&str, &str)]) -> Self {
        Self {
            name: name.to_string(),
            columns: columns
                .iter()
                .map(|&(n, u)| Column {
                    name: n.to_string(),
                    unit: u.to_string(),
                })
                .collect(),
            rows: Vec::new(),
            provenance: None,
        }
    }

    /// Panics if the row width differs from the column count.
    pub fn push_row(&mut self, row: Vec<f64>) {
        assert_eq!(
            row.len(),
            self.columns.len(),
            "ragged row in table {}",
            self.name
        );
        self.rows.push(row);
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn column_index(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c.name == name)
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let i = self.column_index(name)?;
        Some(self.rows.iter().map(|r| r[i]).collect())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Csv,
    Jsonl,
}

impl std::str::FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "csv" => Ok(Format::Csv),
            "jsonl" => Ok(Format::Jsonl),
            other => Err(format!("unknown format `{other}` (expected csv or jsonl)")),
        }
    }
}

impl Format {
    pub fn as_str(&self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Jsonl => "jsonl",
        }
    }
}

pub const DEFAULT_PRECISION: usize = 9;

/// Scientific notation with `precision` significant digits, e.g. `1.00e0`.
pub fn format_number(value: f64, precision: usize) -> String {
    let digits = precision.max(1) - 1;
    if value == 0.0 {
        // no negative zero in output
        return format!("{:.*e}", digits, 0.0);
    }
    if value.is_nan() {
        return "nan".to_string();
    }
    if value.is_infinite() {
        return if value > 0.0 { "inf" } else { "-inf" }.to_string();
    }
    format!("{:.*e}", digits, value)
}

fn json_number(value: f64, precision: usize) -> String {
    if value.is_finite() {
        format_number(value, precision)
    } else {
        "null".to_string()
    }
}

/// JSONL field name: column name with its unit as suffix.
fn field_name(col: &Column) -> String {
    if col.unit == "1" || col.unit.is_empty() {
        col.name.clone()
    } else {
        let mut unit = String::new();
        for c in col.unit.chars() {
            match c {
                '/' => unit.push_str("_per_"),
                c if c.is_ascii_alphanumeric() => unit.push(c),
                _ => unit.push('_'),
            }
        }
        format!("{}_{}", col.name, unit)
    }
}

pub fn render(table: &ScanTable, format: Format, precision: usize) -> String {
    let mut out = String::new();
    match format {
        Format::Csv => {
            if let Some(p) = &table.provenance {
                let _ = writeln!(out, "# tool: {} {}", p.tool, p.version);
                let _ = writeln!(out, "# command: {}", p.command);
                let _ = writeln!(out, "# config_sha256: {}", p.config_sha256);
            }
            let names: Vec<&str> = table.columns.iter().map(|c| c.name.as_str()).collect();
            let units: Vec<&str> = table.columns.iter().map(|c| c.unit.as_str()).collect();
            let _ = writeln!(out, "{}", names.join(","));
            let _ = writeln!(out, "#{}", units.join(","));
            for row in &table.rows {
                let cells: Vec<String> = row.iter().map(|&v| format_number(v, precision)).collect();
                let _ = writeln!(out, "{}", cells.join(","));
            }
        }
        Format::Jsonl => {
            let names: Vec<String> = table.columns.iter().map(field_name).collect();
            for row in &table.rows {
                let fields: Vec<String> = names
                    .iter()
                    .zip(row)
                    .map(|(n, &v)| format!("\"{}\":{}", n, json_number(v, precision)))
                    .collect();
                let _ = writeln!(out, "{{{}}}", fields.join(","));
            }
        }
    }
    out
}

pub fn write_table<W: Write>(
    table: &ScanTable,
    format: Format,
    precision: usize,
    mut sink: W,
) -> Result<()> {
    sink.write_all(render(table, format, precision).as_bytes())
        .and_then(|_| sink.flush())
        .map_err(|e| Error::Io(e.to_string()))
}
