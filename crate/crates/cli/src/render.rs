//! Rendering of command output as text, CSV or JSON.
//!
//! Every command produces a list of records; a record is an ordered list of
//! named fields. Floats are rounded to 15 significant digits before any
//! rendering, so the three formats carry identical numbers.

use std::io::{self, Write};

use clap::ValueEnum;
use serde_json::{Map, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Debug, Clone)]
pub enum Field {
    Num(f64),
    Int(u64),
    Bool(bool),
    Str(String),
    List(Vec<f64>),
    Json(Value),
}

pub type Record = Vec<(&'static str, Field)>;

/// Rounds to 15 significant decimal digits; non-finite values pass through.
pub fn sig15(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{x:.14e}").parse().unwrap_or(x)
}

fn num_str(x: f64) -> String {
    if x.is_nan() {
        "nan".into()
    } else if x.is_infinite() {
        if x > 0.0 { "inf" } else { "-inf" }.into()
    } else {
        serde_json::Number::from_f64(sig15(x))
            .map(|n| n.to_string())
            .unwrap_or_default()
    }
}

fn to_json(field: &Field) -> Value {
    match field {
        Field::Num(x) => serde_json::Number::from_f64(sig15(*x))
            .map(Value::Number)
            .unwrap_or(Value::Null),
        Field::Int(i) => Value::from(*i),
        Field::Bool(b) => Value::Bool(*b),
        Field::Str(s) => Value::String(s.clone()),
        Field::List(xs) => Value::Array(xs.iter().map(|x| to_json(&Field::Num(*x))).collect()),
        Field::Json(v) => round_json(v.clone()),
    }
}

/// Rounds every float inside an arbitrary JSON value.
pub fn round_json(v: Value) -> Value {
    match v {
        Value::Number(n) if n.is_f64() => n
            .as_f64()
            .and_then(|x| serde_json::Number::from_f64(sig15(x)))
            .map(Value::Number)
            .unwrap_or(Value::Null),
        Value::Array(items) => Value::Array(items.into_iter().map(round_json).collect()),
        Value::Object(map) => Value::Object(map.into_iter().map(|(k, v)| (k, round_json(v))).collect()),
        other => other,
    }
}

fn to_cell(field: &Field) -> String {
    match field {
        Field::Num(x) => num_str(*x),
        Field::Int(i) => i.to_string(),
        Field::Bool(b) => b.to_string(),
        Field::Str(s) => s.clone(),
        Field::List(xs) => xs.iter().map(|x| num_str(*x)).collect::<Vec<_>>().join(";"),
        Field::Json(v) => round_json(v.clone()).to_string(),
    }
}

fn record_json(record: &Record) -> Value {
    let map: Map<String, Value> = record
        .iter()
        .map(|(k, f)| (k.to_string(), to_json(f)))
        .collect();
    Value::Object(map)
}

/// Renders a single record (`as_table == false`) or a table of rows.
pub fn render(
    out: &mut impl Write,
    format: Format,
    records: &[Record],
    as_table: bool,
) -> io::Result<()> {
    match format {
        Format::Json => {
            let value = if as_table {
                Value::Array(records.iter().map(record_json).collect())
            } else {
                records.first().map(record_json).unwrap_or(Value::Null)
            };
            writeln!(out, "{}", serde_json::to_string_pretty(&value)?)
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            if let Some(first) = records.first() {
                w.write_record(first.iter().map(|(k, _)| *k))?;
            }
            for r in records {
                w.write_record(r.iter().map(|(_, f)| to_cell(f)))?;
            }
            w.flush()
        }
        Format::Text => {
            if as_table {
                let Some(first) = records.first() else {
                    return Ok(());
                };
                let cells: Vec<Vec<String>> = records
                    .iter()
                    .map(|r| r.iter().map(|(_, f)| to_cell(f)).collect())
                    .collect();
                let widths: Vec<usize> = first
                    .iter()
                    .enumerate()
                    .map(|(i, (k, _))| cells.iter().map(|c| c[i].len()).max().unwrap_or(0).max(k.len()))
                    .collect();
                let header: Vec<String> = first
                    .iter()
                    .zip(&widths)
                    .map(|((k, _), w)| format!("{k:>w$}"))
                    .collect();
                writeln!(out, "{}", header.join("  "))?;
                for row in cells {
                    let line: Vec<String> =
                        row.iter().zip(&widths).map(|(c, w)| format!("{c:>w$}")).collect();
                    writeln!(out, "{}", line.join("  "))?;
                }
                Ok(())
            } else {
                for r in records {
                    let width = r.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
                    for (k, f) in r {
                        writeln!(out, "{k:<width$}  {}", to_cell(f))?;
                    }
                }
                Ok(())
            }
        }
    }
}
