//! Tabular output as CSV or JSON.

use serde::{Deserialize, Serialize};
use serde_json::{Map, Number, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Float(f64),
    Int(i64),
    Text(String),
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Float(v)
    }
}

impl From<u32> for Cell {
    fn from(v: u32) -> Self {
        Cell::Int(v.into())
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            // 17 significant digits round-trip every double
            Cell::Float(v) => format!("{v:.16e}"),
            Cell::Int(v) => v.to_string(),
            Cell::Text(s) if s.contains([',', '"', '\n']) => {
                format!("\"{}\"", s.replace('"', "\"\""))
            }
            Cell::Text(s) => s.clone(),
        }
    }

    pub fn to_json(&self) -> Value {
        match self {
            Cell::Float(v) => Number::from_f64(*v).map_or(Value::Null, Value::Number),
            Cell::Int(v) => Value::from(*v),
            Cell::Text(s) => Value::String(s.clone()),
        }
    }
}

/// Homogeneous records: every row has one cell per column.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(columns: &[&str]) -> Self {
        Table {
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        assert_eq!(
            row.len(),
            self.columns.len(),
            "row width must match the header"
        );
        self.rows.push(row);
    }

    pub fn to_json(&self) -> Value {
        Value::Array(
            self.rows
                .iter()
                .map(|row| {
                    let obj: Map<String, Value> = self
                        .columns
                        .iter()
                        .cloned()
                        .zip(row.iter().map(Cell::to_json))
                        .collect();
                    Value::Object(obj)
                })
                .collect(),
        )
    }
}

pub fn emit_table(table: &Table, format: Format) -> String {
    match format {
        Format::Csv => {
            let mut out = table.columns.join(",");
            out.push('\n');
            for row in &table.rows {
                let cells: Vec<String> = row.iter().map(Cell::csv).collect();
                out.push_str(&cells.join(","));
                out.push('\n');
            }
            out
        }
        Format::Json => {
            let mut out = serde_json::to_string_pretty(&table.to_json()).expect("tables serialize");
            out.push('\n');
            out
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k_table() -> Table {
        let mut t = Table::new(&["xB", "tB", "re", "im", "modulus", "phase", "caustic_index"]);
        t.push(vec![
            1.0.into(),
            1.0.into(),
            0.1.into(),
            (-1.0f64 / 3.0).into(),
            0.398942.into(),
            (-0.285398).into(),
            0u32.into(),
        ]);
        t
    }

    #[test]
    fn csv_header_and_row() {
        let out = emit_table(&k_table(), Format::Csv);
        let lines: Vec<&str> = out.lines().collect();
        assert_eq!(lines[0], "xB,tB,re,im,modulus,phase,caustic_index");
        assert_eq!(lines.len(), 2);
        assert!(lines[1].ends_with(",0"));
    }

    #[test]
    fn empty_tables() {
        let t = Table::new(&["a", "b"]);
        assert_eq!(emit_table(&t, Format::Csv), "a,b\n");
        assert_eq!(emit_table(&t, Format::Json).trim(), "[]");
    }

    #[test]
    fn json_keys_follow_columns() {
        let v: Value = serde_json::from_str(&emit_table(&k_table(), Format::Json)).unwrap();
        let keys: Vec<&String> = v[0].as_object().unwrap().keys().collect();
        assert_eq!(
            keys,
            ["xB", "tB", "re", "im", "modulus", "phase", "caustic_index"]
        );
    }

    #[test]
    fn text_cells_are_quoted() {
        let mut t = Table::new(&["check"]);
        t.push(vec!["a,b".into()]);
        assert_eq!(emit_table(&t, Format::Csv), "check\n\"a,b\"\n");
    }
}
