//! Tabular command output and its CSV / JSON encodings.
//!
//! Numbers are written in their shortest round-trip decimal form, so a
//! parsed value is bit-identical to the emitted one and identical inputs
//! give byte-identical output.

use serde_json::{Map, Value};

use crate::tolerances::{EXCESS_ATOL_FACTOR, MAX_ITER, PRICE_RTOL};

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Text(String),
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Num(x)
    }
}

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Cell::Text(s.to_owned())
    }
}

impl From<String> for Cell {
    fn from(s: String) -> Self {
        Cell::Text(s)
    }
}

impl From<bool> for Cell {
    fn from(b: bool) -> Self {
        Cell::Text(b.to_string())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Csv,
    Json,
}

/// Ordered headers, rows of cells and provenance metadata.
#[derive(Debug, Clone, PartialEq)]
pub struct OutputTable {
    pub headers: Vec<String>,
    rows: Vec<Vec<Cell>>,
    pub metadata: Vec<(String, String)>,
}

impl OutputTable {
    /// Empty table carrying the standard metadata: tool version, scenario
    /// hash and solver tolerances.
    pub fn new<S: Into<String>>(
        headers: impl IntoIterator<Item = S>,
        scenario_hash: Option<&str>,
    ) -> Self {
        let metadata = vec![
            ("tool_version".into(), env!("CARGO_PKG_VERSION").into()),
            (
                "scenario_hash".into(),
                scenario_hash.unwrap_or("none").into(),
            ),
            ("price_rtol".into(), format_number(PRICE_RTOL)),
            (
                "excess_atol_factor".into(),
                format_number(EXCESS_ATOL_FACTOR),
            ),
            ("max_iter".into(), MAX_ITER.to_string()),
        ];
        OutputTable {
            headers: headers.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
            metadata,
        }
    }

    pub fn with_meta(mut self, key: &str, value: impl Into<String>) -> Self {
        self.metadata.push((key.into(), value.into()));
        self
    }

    /// Appends a row. Panics when its length differs from the header count.
    pub fn push(&mut self, row: Vec<Cell>) {
        assert_eq!(
            row.len(),
            self.headers.len(),
            "row length must match header length"
        );
        self.rows.push(row);
    }

    pub fn rows(&self) -> &[Vec<Cell>] {
        &self.rows
    }

    pub fn emit(&self, format: Format) -> String {
        emit_table(self, format)
    }
}

/// Shortest decimal string that parses back to the same `f64`.
pub fn format_number(x: f64) -> String {
    format!("{x:?}")
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n', '\r']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_owned()
    }
}

pub fn emit_table(t: &OutputTable, format: Format) -> String {
    match format {
        Format::Csv => emit_csv(t),
        Format::Json => emit_json(t),
    }
}

fn emit_csv(t: &OutputTable) -> String {
    let mut out = String::new();
    let header: Vec<String> = t.headers.iter().map(|h| csv_field(h)).collect();
    out.push_str(&header.join(","));
    out.push('\n');
    for row in &t.rows {
        let cells: Vec<String> = row
            .iter()
            .map(|c| match c {
                Cell::Num(x) => format_number(*x),
                Cell::Text(s) => csv_field(s),
            })
            .collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    for (k, v) in &t.metadata {
        out.push_str(&format!("# {k}: {v}\n"));
    }
    out
}

fn emit_json(t: &OutputTable) -> String {
    let rows: Vec<Value> = t
        .rows
        .iter()
        .map(|row| {
            Value::Array(
                row.iter()
                    .map(|c| match c {
                        Cell::Num(x) => serde_json::Number::from_f64(*x)
                            .map(Value::Number)
                            .unwrap_or_else(|| Value::String(format_number(*x))),
                        Cell::Text(s) => Value::String(s.clone()),
                    })
                    .collect(),
            )
        })
        .collect();
    let metadata: Map<String, Value> = t
        .metadata
        .iter()
        .map(|(k, v)| (k.clone(), Value::String(v.clone())))
        .collect();
    let mut doc = Map::new();
    doc.insert(
        "headers".into(),
        Value::Array(t.headers.iter().cloned().map(Value::String).collect()),
    );
    doc.insert("rows".into(), Value::Array(rows));
    doc.insert("metadata".into(), Value::Object(metadata));
    let mut s = serde_json::to_string_pretty(&Value::Object(doc)).expect("json values serialize");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_table_is_header_and_metadata() {
        let t = OutputTable::new(["a", "b"], None);
        let csv = t.emit(Format::Csv);
        let mut lines = csv.lines();
        assert_eq!(lines.next(), Some("a,b"));
        assert!(lines.all(|l| l.starts_with("# ")));
        assert!(csv.ends_with('\n'));
    }

    #[test]
    fn single_row_shape() {
        let mut t = OutputTable::new(["ceiling"], None);
        t.push(vec![2.0.into()]);
        assert!(t.emit(Format::Csv).starts_with("ceiling\n2.0\n# "));
    }

    #[test]
    fn numbers_round_trip() {
        for x in [0.05, 0.1, 1.0 / 3.0, 1e-300, 12345678.9, -2.5e22] {
            assert_eq!(format_number(x).parse::<f64>().unwrap(), x);
        }
        assert_eq!(format_number(0.05), "0.05");
        assert_eq!(format_number(10.0), "10.0");
    }

    #[test]
    fn text_cells_are_quoted_when_needed() {
        let mut t = OutputTable::new(["x", "note"], None);
        t.push(vec![1.0.into(), "a, \"b\"".into()]);
        assert!(t.emit(Format::Csv).contains("1.0,\"a, \"\"b\"\"\"\n"));
    }

    #[test]
    fn json_nests_metadata() {
        let mut t = OutputTable::new(["x"], Some("abc")).with_meta("command", "bound");
        t.push(vec![f64::INFINITY.into()]);
        let v: Value = serde_json::from_str(&t.emit(Format::Json)).unwrap();
        assert_eq!(v["headers"][0], "x");
        assert_eq!(v["rows"][0][0], "inf");
        assert_eq!(v["metadata"]["scenario_hash"], "abc");
        assert_eq!(v["metadata"]["command"], "bound");
    }

    #[test]
    #[should_panic]
    fn ragged_rows_are_rejected() {
        let mut t = OutputTable::new(["a", "b"], None);
        t.push(vec![1.0.into()]);
    }
}
