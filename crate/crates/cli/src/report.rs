//! Tabular reports rendered as CSV, JSON or an aligned text table.
//!
//! CSV output starts with `# key=value` comment lines, then a header row.
//! Floats are written with 17 significant digits so reruns compare byte for
//! byte; non-finite values are written as `inf`, `-inf` or `nan` (as strings
//! in JSON).

use serde_json::{Map, Number, Value};

use crate::args::Format;

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Int(i64),
    Float(f64),
    Bool(bool),
    Text(String),
    /// Not applicable for this row.
    Empty,
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Float(v)
    }
}

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Bool(v)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}

impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell::Text(v)
    }
}

impl<T: Into<Cell>> From<Option<T>> for Cell {
    fn from(v: Option<T>) -> Self {
        v.map_or(Cell::Empty, Into::into)
    }
}

/// Scalar or list value for the report header.
#[derive(Debug, Clone, PartialEq)]
pub enum Meta {
    Cell(Cell),
    List(Vec<Cell>),
}

impl<T: Into<Cell>> From<T> for Meta {
    fn from(v: T) -> Self {
        Meta::Cell(v.into())
    }
}

impl Meta {
    pub fn floats(values: &[f64]) -> Self {
        Meta::List(values.iter().map(|&v| Cell::Float(v)).collect())
    }

    pub fn ints(values: &[usize]) -> Self {
        Meta::List(values.iter().map(|&v| Cell::from(v)).collect())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub command: String,
    pub meta: Vec<(String, Meta)>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Report {
    pub fn new(command: &str, columns: &[&str]) -> Self {
        Self {
            command: command.to_string(),
            meta: Vec::new(),
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn meta(&mut self, key: &str, value: impl Into<Meta>) -> &mut Self {
        self.meta.push((key.to_string(), value.into()));
        self
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len(), "row width in {}", self.command);
        self.rows.push(row);
    }

    pub fn meta_value(&self, key: &str) -> Option<&Meta> {
        self.meta.iter().find(|(k, _)| k == key).map(|(_, v)| v)
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Csv => self.to_csv(),
            Format::Json => self.to_json(),
            Format::Table => self.to_table(),
        }
    }

    pub fn to_csv(&self) -> String {
        let mut out = format!("# command={}\n", self.command);
        for (key, value) in &self.meta {
            out.push_str(&format!("# {key}={}\n", meta_text(value, csv_cell)));
        }
        out.push_str(&self.columns.join(","));
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(csv_cell).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }

    pub fn to_json(&self) -> String {
        let mut meta = Map::new();
        for (key, value) in &self.meta {
            let v = match value {
                Meta::Cell(c) => json_cell(c),
                Meta::List(items) => Value::Array(items.iter().map(json_cell).collect()),
            };
            meta.insert(key.clone(), v);
        }
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|row| {
                let obj: Map<String, Value> = self
                    .columns
                    .iter()
                    .zip(row)
                    .map(|(c, v)| (c.clone(), json_cell(v)))
                    .collect();
                Value::Object(obj)
            })
            .collect();
        let mut top = Map::new();
        top.insert("command".into(), Value::String(self.command.clone()));
        top.insert("meta".into(), Value::Object(meta));
        top.insert("rows".into(), Value::Array(rows));
        let mut text = serde_json::to_string_pretty(&Value::Object(top)).expect("report serializes");
        text.push('\n');
        text
    }

    pub fn to_table(&self) -> String {
        let body: Vec<Vec<String>> = self
            .rows
            .iter()
            .map(|row| row.iter().map(table_cell).collect())
            .collect();
        let mut widths: Vec<usize> = self.columns.iter().map(|c| c.chars().count()).collect();
        for row in &body {
            for (w, cell) in widths.iter_mut().zip(row) {
                *w = (*w).max(cell.chars().count());
            }
        }
        let line = |cells: &[String]| {
            let padded: Vec<String> = cells
                .iter()
                .zip(&widths)
                .map(|(c, &w)| format!("{c:<w$}"))
                .collect();
            let mut s = padded.join("  ").trim_end().to_string();
            s.push('\n');
            s
        };
        let mut out = String::new();
        for (key, value) in &self.meta {
            out.push_str(&format!("{key}: {}\n", meta_text(value, table_cell)));
        }
        if !self.meta.is_empty() {
            out.push('\n');
        }
        out.push_str(&line(&self.columns));
        let rule: Vec<String> = widths.iter().map(|&w| "-".repeat(w)).collect();
        out.push_str(&line(&rule));
        for row in &body {
            out.push_str(&line(row));
        }
        out
    }
}

pub fn format_float(v: f64) -> String {
    if v.is_nan() {
        "nan".into()
    } else if v.is_infinite() {
        if v > 0.0 { "inf".into() } else { "-inf".into() }
    } else {
        format!("{v:.16e}")
    }
}

fn meta_text(value: &Meta, cell: fn(&Cell) -> String) -> String {
    match value {
        Meta::Cell(c) => cell(c),
        Meta::List(items) => items.iter().map(cell).collect::<Vec<_>>().join(";"),
    }
}

fn csv_cell(cell: &Cell) -> String {
    match cell {
        Cell::Int(v) => v.to_string(),
        Cell::Float(v) => format_float(*v),
        Cell::Bool(v) => v.to_string(),
        Cell::Text(s) if s.contains([',', '"', '\n']) => format!("\"{}\"", s.replace('"', "\"\"")),
        Cell::Text(s) => s.clone(),
        Cell::Empty => String::new(),
    }
}

fn table_cell(cell: &Cell) -> String {
    match cell {
        Cell::Float(v) if v.is_finite() => format!("{v:.6e}"),
        Cell::Text(s) => s.clone(),
        Cell::Empty => "-".into(),
        other => csv_cell(other),
    }
}

fn json_cell(cell: &Cell) -> Value {
    match cell {
        Cell::Int(v) => Value::from(*v),
        Cell::Float(v) => Number::from_f64(*v).map_or_else(|| Value::String(format_float(*v)), Value::Number),
        Cell::Bool(v) => Value::Bool(*v),
        Cell::Text(s) => Value::String(s.clone()),
        Cell::Empty => Value::Null,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Report {
        let mut r = Report::new("demo", &["n", "value", "note"]);
        r.meta("seed", 42usize).meta("levels", Meta::floats(&[0.5, 0.25]));
        r.push(vec![1usize.into(), 0.1.into(), "a,b".into()]);
        r.push(vec![2usize.into(), f64::INFINITY.into(), Cell::Empty]);
        r
    }

    #[test]
    fn csv_layout() {
        let text = sample().to_csv();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "# command=demo");
        assert_eq!(lines[1], "# seed=42");
        assert_eq!(lines[2], "# levels=5.0000000000000000e-1;2.5000000000000000e-1");
        assert_eq!(lines[3], "n,value,note");
        assert_eq!(lines[4], "1,1.0000000000000001e-1,\"a,b\"");
        assert_eq!(lines[5], "2,inf,");
        assert!(!text.contains('\r'));
    }

    #[test]
    fn json_keeps_column_order_and_marks_non_finite() {
        let value: Value = serde_json::from_str(&sample().to_json()).unwrap();
        let row = &value["rows"][1];
        assert_eq!(row["value"], Value::String("inf".into()));
        assert_eq!(row["note"], Value::Null);
        let keys: Vec<&String> = value["rows"][0].as_object().unwrap().keys().collect();
        assert_eq!(keys, ["n", "value", "note"]);
        assert_eq!(value["meta"]["seed"], Value::from(42));
    }

    #[test]
    fn table_aligns_columns() {
        let text = sample().to_table();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[3], "n  value        note");
        assert_eq!(lines[4], "-  -----------  ----");
        assert_eq!(lines[5], "1  1.000000e-1  a,b");
        assert_eq!(lines[6], "2  inf          -");
    }

    #[test]
    fn float_formatting() {
        assert_eq!(format_float(1.0), "1.0000000000000000e0");
        assert_eq!(format_float(-3.0517578125e-5), "-3.0517578125000000e-5");
        assert_eq!(format_float(f64::NAN), "nan");
    }
}
