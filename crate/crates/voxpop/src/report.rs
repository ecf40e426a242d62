//! Tabular reports written as CSV and/or JSON.
//!
//! Both encodings print numbers through the same formatter (shortest
//! round-trip decimal), so a value reads identically in either file.

use std::path::Path;

use serde_json::{Map, Value};

use voxpop_core::spectral::EigenQuery;
use voxpop_core::vpa::{CycleTrace, DomainAllocation};

use crate::error::Result;
use crate::io::write_file;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, clap::ValueEnum, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Text(String),
    Int(u64),
    Float(f64),
    Bool(bool),
}

impl Cell {
    fn to_json(&self) -> Value {
        match self {
            Cell::Text(s) => Value::String(s.clone()),
            Cell::Int(n) => Value::from(*n),
            Cell::Float(x) => serde_json::Number::from_f64(*x).map_or(Value::Null, Value::Number),
            Cell::Bool(b) => Value::Bool(*b),
        }
    }

    fn to_field(&self) -> String {
        match self.to_json() {
            Value::String(s) => s,
            Value::Null => String::new(),
            other => other.to_string(),
        }
    }
}

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Cell::Text(s.to_string())
    }
}

impl From<String> for Cell {
    fn from(s: String) -> Self {
        Cell::Text(s)
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

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    columns: Vec<&'static str>,
    rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(columns: &[&'static str]) -> Self {
        Table {
            columns: columns.to_vec(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        assert_eq!(row.len(), self.columns.len(), "row width must match the header");
        self.rows.push(row);
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn to_csv(&self) -> String {
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
        w.write_record(&self.columns).expect("in-memory write");
        for row in &self.rows {
            w.write_record(row.iter().map(Cell::to_field)).expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 fields")
    }

    pub fn to_json_value(&self) -> Value {
        Value::Array(
            self.rows
                .iter()
                .map(|row| {
                    let obj: Map<String, Value> =
                        self.columns.iter().zip(row).map(|(c, v)| (c.to_string(), v.to_json())).collect();
                    Value::Object(obj)
                })
                .collect(),
        )
    }

    pub fn to_json(&self) -> String {
        pretty(&self.to_json_value())
    }

    /// Writes `<dir>/<stem>.csv` and/or `<dir>/<stem>.json`.
    pub fn write(&self, dir: &Path, stem: &str, formats: &[Format]) -> Result<()> {
        for f in formats {
            match f {
                Format::Csv => write_file(&dir.join(format!("{stem}.csv")), &self.to_csv())?,
                Format::Json => write_file(&dir.join(format!("{stem}.json")), &self.to_json())?,
            }
        }
        Ok(())
    }
}

pub fn pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("json values serialize") + "\n"
}

pub fn write_json(path: &Path, v: &Value) -> Result<()> {
    write_file(path, &pretty(v))
}

pub fn eigenqueries_json(eqs: &[EigenQuery]) -> Value {
    Value::Array(
        eqs.iter()
            .map(|eq| {
                let terms: Vec<Value> = eq
                    .terms
                    .iter()
                    .map(|(k, c)| serde_json::json!({ "keyword": k, "coefficient": c }))
                    .collect();
                serde_json::json!({
                    "rank": eq.rank,
                    "eigenvalue": eq.eigenvalue,
                    "importance": eq.importance,
                    "terms": terms,
                })
            })
            .collect(),
    )
}

pub fn budget_table(rows: &[DomainAllocation]) -> Table {
    let mut t = Table::new(&["domain", "baseline", "lambda_hat", "correction", "final_budget", "slots"]);
    for r in rows {
        t.push(vec![
            r.domain.as_str().into(),
            r.baseline.into(),
            r.lambda_hat.into(),
            r.correction.into(),
            r.final_budget.into(),
            r.slots.into(),
        ]);
    }
    t
}

pub fn cycle_trace_json(traces: &[CycleTrace]) -> Value {
    Value::Array(
        traces
            .iter()
            .map(|t| {
                let domains: Vec<Value> = t
                    .domains
                    .iter()
                    .map(|d| {
                        serde_json::json!({
                            "domain": d.domain,
                            "static_rank": d.static_rank,
                            "baseline": d.baseline,
                            "lambda_hat": d.lambda_hat,
                            "correction": d.correction,
                            "final_budget": d.final_budget,
                            "credit": d.credit,
                            "slots": d.slots,
                            "revealed": d.revealed,
                        })
                    })
                    .collect();
                serde_json::json!({
                    "cycle": t.cycle,
                    "eigenqueries": eigenqueries_json(&t.eigenqueries),
                    "domains": domains,
                })
            })
            .collect(),
    )
}
