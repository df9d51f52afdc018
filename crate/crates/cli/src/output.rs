use std::fmt::Write as _;
use std::path::Path;

use anyhow::Context;
use serde_json::{Map, Value};

/// One output cell.
#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Float(f64),
    Int(u64),
    Bool(bool),
    Text(String),
    Null,
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Float(v)
    }
}

impl From<Option<f64>> for Cell {
    fn from(v: Option<f64>) -> Self {
        v.map_or(Cell::Null, Cell::Float)
    }
}

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Bool(v)
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
        Cell::Text(v.to_owned())
    }
}

impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell::Text(v)
    }
}

/// Seventeen significant digits in scientific notation.
pub fn format_float(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.16e}")
    } else {
        v.to_string()
    }
}

fn csv_field(cell: &Cell) -> String {
    match cell {
        Cell::Float(v) => format_float(*v),
        Cell::Int(v) => v.to_string(),
        Cell::Bool(v) => v.to_string(),
        Cell::Text(s) if s.contains([',', '"', '\n']) => format!("\"{}\"", s.replace('"', "\"\"")),
        Cell::Text(s) => s.clone(),
        Cell::Null => String::new(),
    }
}

fn json_value(cell: &Cell) -> Value {
    match cell {
        Cell::Float(v) => serde_json::Number::from_f64(*v).map_or(Value::Null, Value::Number),
        Cell::Int(v) => Value::from(*v),
        Cell::Bool(v) => Value::Bool(*v),
        Cell::Text(s) => Value::String(s.clone()),
        Cell::Null => Value::Null,
    }
}

/// Flat record: ordered `(snake_case key, cell)` pairs.
pub type Record = Vec<(&'static str, Cell)>;

pub fn record_json(record: &Record) -> Value {
    let mut map = Map::new();
    for (key, cell) in record {
        map.insert((*key).to_owned(), json_value(cell));
    }
    Value::Object(map)
}

/// Header row plus one line per record, `\n` line endings.
pub fn to_csv(records: &[Record]) -> String {
    let mut out = String::new();
    if let Some(first) = records.first() {
        out.push_str(&first.iter().map(|(k, _)| *k).collect::<Vec<_>>().join(","));
        out.push('\n');
    }
    for record in records {
        let line = record
            .iter()
            .map(|(_, c)| csv_field(c))
            .collect::<Vec<_>>()
            .join(",");
        writeln!(out, "{line}").expect("writing to a String");
    }
    out
}

pub fn to_json_array(records: &[Record]) -> String {
    let array = Value::Array(records.iter().map(record_json).collect());
    let mut out = serde_json::to_string_pretty(&array).expect("serializable");
    out.push('\n');
    out
}

pub fn to_json_object(record: &Record) -> String {
    let mut out = serde_json::to_string_pretty(&record_json(record)).expect("serializable");
    out.push('\n');
    out
}

/// Writes to `path`, or to standard output when absent.
pub fn emit(text: &str, path: Option<&Path>) -> anyhow::Result<()> {
    match path {
        Some(p) => std::fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            use std::io::Write;
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .context("writing to standard output")?;
            stdout.flush().context("writing to standard output")
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_have_seventeen_significant_digits() {
        let s = format_float(13.0 / 18.0);
        assert_eq!(s, "7.2222222222222221e-1");
        assert_eq!(s.parse::<f64>().unwrap(), 13.0 / 18.0);
        assert_eq!(format_float(0.0), "0.0000000000000000e0");
    }

    #[test]
    fn csv_has_header_and_unix_newlines() {
        let rows = vec![
            vec![("eta_b", Cell::from(0.5)), ("ok", Cell::from(true))],
            vec![("eta_b", Cell::from(1.0)), ("ok", Cell::from(false))],
        ];
        let csv = to_csv(&rows);
        assert_eq!(csv.lines().next().unwrap(), "eta_b,ok");
        assert_eq!(csv.lines().count(), 3);
        assert!(!csv.contains('\r') && csv.ends_with('\n'));
    }

    #[test]
    fn csv_quotes_text_with_commas() {
        let rows = vec![vec![("detail", Cell::from("a, b"))]];
        assert_eq!(to_csv(&rows), "detail\n\"a, b\"\n");
    }

    #[test]
    fn json_is_flat_and_ordered() {
        let rec = vec![("b_key", Cell::from(1.5)), ("a_key", Cell::Null)];
        let v = record_json(&rec);
        assert_eq!(v["b_key"], 1.5);
        assert!(v["a_key"].is_null());
        assert!(
            to_json_object(&rec).find("b_key").unwrap()
                < to_json_object(&rec).find("a_key").unwrap()
        );
    }
}
