//! Plain-text serialization helpers shared by the command-line tool.
//!
//! Floats are written with Rust's shortest round-trip formatting, so output
//! is byte-identical across runs on the same input.

use std::fmt::Write as _;

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::corpus::SentenceLengthSeries;
use crate::{Error, Result};

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// Pretty JSON with a trailing newline. Struct fields keep declaration
/// order, so the output is stable for a given type.
pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable value");
    s.push('\n');
    s
}

/// Writes a table as CSV. Cells are quoted only if they contain a comma,
/// quote or newline.
pub fn to_csv<R, C>(header: &[&str], rows: R) -> String
where
    R: IntoIterator<Item = C>,
    C: IntoIterator<Item = String>,
{
    let mut out = header.join(",");
    out.push('\n');
    for row in rows {
        let cells: Vec<String> = row.into_iter().map(|c| quote(&c)).collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}

fn quote(cell: &str) -> String {
    if cell.contains([',', '"', '\n']) {
        format!("\"{}\"", cell.replace('"', "\"\""))
    } else {
        cell.to_string()
    }
}

/// `index,length` rows with a 1-based index into the source segmentation.
pub fn series_csv(series: &SentenceLengthSeries) -> String {
    let mut out = String::from("index,length\n");
    for (i, v) in series.values.iter().enumerate() {
        let _ = writeln!(out, "{},{}", series.source.from + i, v);
    }
    out
}

/// Reads a numeric series from CSV: the last column of every row, skipping
/// a non-numeric header line and blank lines. A single-column file works too.
pub fn read_series_csv(text: &str) -> Result<Vec<f64>> {
    let mut values = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let cell = line.rsplit(',').next().unwrap_or("").trim();
        match cell.parse::<f64>() {
            Ok(v) if v.is_finite() => values.push(v),
            Ok(_) => return Err(Error::Parse(format!("line {}: non-finite value", lineno + 1))),
            Err(_) if values.is_empty() && lineno == 0 => continue,
            Err(_) => return Err(Error::Parse(format!("line {}: {cell:?} is not a number", lineno + 1))),
        }
    }
    if values.is_empty() {
        return Err(Error::Parse("no values".into()));
    }
    Ok(values)
}
