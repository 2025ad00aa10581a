//! Artifact serialization: JSON documents and CSV tables.

use std::fmt::Write as _;

use serde_json::{json, Value};
use tripsim_core::C64;

use crate::error::{CliError, CliResult};

pub const SCHEMA: &str = "tripsim/1";

/// Bound applied to every probability- or fidelity-like field on output.
const BOUND_SLACK: f64 = 1e-9;

/// Keys whose numeric contents must lie in `[0, 1]`.
const UNIT_INTERVAL_KEYS: &[&str] = &[
    "p",
    "probability",
    "success_probability",
    "total_probability",
    "fidelity",
    "avg_fidelity",
    "avg_fidelity_unnormalized",
    "success_fidelity",
    "closed_form",
    "values",
    "trace_distance",
    "three_tangle",
    "pair_concurrences",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
}

impl std::str::FromStr for Format {
    type Err = CliError;

    fn from_str(s: &str) -> CliResult<Self> {
        match s {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            other => Err(CliError::config(format!(
                "unknown output format {other:?} (expected json or csv)"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Float(f64),
    Int(i64),
    Text(String),
    Bool(bool),
    Missing,
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Float(x)
    }
}

impl From<Option<f64>> for Cell {
    fn from(x: Option<f64>) -> Self {
        x.map_or(Cell::Missing, Cell::Float)
    }
}

impl From<usize> for Cell {
    fn from(x: usize) -> Self {
        Cell::Int(x as i64)
    }
}

impl From<u8> for Cell {
    fn from(x: u8) -> Self {
        Cell::Int(x.into())
    }
}

impl From<bool> for Cell {
    fn from(x: bool) -> Self {
        Cell::Bool(x)
    }
}

impl From<String> for Cell {
    fn from(x: String) -> Self {
        Cell::Text(x)
    }
}

impl From<&str> for Cell {
    fn from(x: &str) -> Self {
        Cell::Text(x.to_owned())
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Table {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(header: Vec<&'static str>) -> Self {
        Self {
            header,
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> String {
        let mut out = self.header.join(",");
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(render_cell).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }
}

fn render_cell(c: &Cell) -> String {
    match c {
        Cell::Float(x) => fmt_float(*x),
        Cell::Int(i) => i.to_string(),
        Cell::Bool(b) => b.to_string(),
        Cell::Missing => String::new(),
        Cell::Text(s) if s.contains([',', '"', '\n']) => format!("\"{}\"", s.replace('"', "\"\"")),
        Cell::Text(s) => s.clone(),
    }
}

/// 17 significant digits, positional for moderate magnitudes.
pub fn fmt_float(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let exponent = x.abs().log10().floor() as i32;
    if (-5..17).contains(&exponent) {
        let decimals = (16 - exponent).max(0) as usize;
        let mut s = String::new();
        write!(s, "{x:.decimals$}").expect("write to string");
        s
    } else {
        format!("{x:.16e}")
    }
}

/// `[re, im]`.
pub fn complex(z: C64) -> Value {
    json!([z.re, z.im])
}

pub fn complex_list(zs: &[C64]) -> Value {
    Value::Array(zs.iter().map(|&z| complex(z)).collect())
}

/// A command's result in both output forms.
#[derive(Debug, Clone, PartialEq)]
pub struct Artifact {
    pub json: Value,
    pub table: Table,
}

impl Artifact {
    /// Stamps the schema tag and command name onto `body`.
    pub fn new(command: &str, mut body: Value, table: Table) -> Self {
        if let Value::Object(map) = &mut body {
            map.insert("schema".into(), json!(SCHEMA));
            map.insert("command".into(), json!(command));
        }
        Self { json: body, table }
    }

    pub fn render(&self, format: Format) -> CliResult<String> {
        validate(&self.json)?;
        Ok(match format {
            Format::Json => {
                let mut s = serde_json::to_string_pretty(&self.json)?;
                s.push('\n');
                s
            }
            Format::Csv => self.table.to_csv(),
        })
    }
}

/// Checks that every probability- and fidelity-like value lies in `[0, 1]`.
pub fn validate(doc: &Value) -> CliResult<()> {
    if doc.get("schema").and_then(Value::as_str) != Some(SCHEMA) {
        return Err(CliError::Invariant {
            name: "schema tag",
            detail: format!("expected {SCHEMA}"),
        });
    }
    walk(doc, None)
}

fn walk(v: &Value, bounded_by: Option<&str>) -> CliResult<()> {
    match v {
        Value::Object(map) => {
            for (k, child) in map {
                let bound =
                    bounded_by.or_else(|| UNIT_INTERVAL_KEYS.iter().copied().find(|&u| u == k));
                walk(child, bound)?;
            }
            Ok(())
        }
        Value::Array(items) => items.iter().try_for_each(|c| walk(c, bounded_by)),
        Value::Number(n) => match (bounded_by, n.as_f64()) {
            (Some(key), Some(x)) if !(-BOUND_SLACK..=1.0 + BOUND_SLACK).contains(&x) => {
                Err(CliError::Invariant {
                    name: "probabilities and fidelities lie in [0, 1]",
                    detail: format!("{key} = {x}"),
                })
            }
            _ => Ok(()),
        },
        _ => Ok(()),
    }
}
