//! Matrix file formats.
//!
//! Text: `n` lines of `n` whitespace-separated `0`/`1` digits (blank lines
//! and `#` comments are skipped). JSON: `{"labels": [...]?, "matrix": [[...]]}`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::BinaryMatrix;

#[derive(Debug, Serialize, Deserialize)]
struct MatrixDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    labels: Option<Vec<String>>,
    matrix: Vec<Vec<i64>>,
}

pub fn parse_text(input: &str) -> Result<BinaryMatrix> {
    let mut rows: Vec<Vec<u8>> = Vec::new();
    for (lineno, line) in input.lines().enumerate() {
        let line = line.split('#').next().unwrap().trim();
        if line.is_empty() {
            continue;
        }
        let row = line
            .split_whitespace()
            .map(|tok| match tok {
                "0" => Ok(0u8),
                "1" => Ok(1u8),
                other => Err(Error::Parse(format!(
                    "line {}: expected 0 or 1, found {other:?}",
                    lineno + 1
                ))),
            })
            .collect::<Result<Vec<_>>>()?;
        rows.push(row);
    }
    BinaryMatrix::from_rows(&rows)
}

pub fn parse_json(input: &str) -> Result<BinaryMatrix> {
    let doc: MatrixDoc =
        serde_json::from_str(input).map_err(|e| Error::Parse(format!("invalid JSON: {e}")))?;
    let n = doc.matrix.len();
    let mut rows = Vec::with_capacity(n);
    for (i, r) in doc.matrix.iter().enumerate() {
        let mut row = Vec::with_capacity(r.len());
        for (j, &x) in r.iter().enumerate() {
            if x != 0 && x != 1 {
                return Err(Error::InvalidEntry {
                    row: i + 1,
                    col: j + 1,
                    value: x,
                });
            }
            row.push(x as u8);
        }
        rows.push(row);
    }
    let m = BinaryMatrix::from_rows(&rows)?;
    match doc.labels {
        Some(l) => m.with_labels(l),
        None => Ok(m),
    }
}

/// JSON when the first non-blank character is `{`, text otherwise.
pub fn parse_matrix(input: &str) -> Result<BinaryMatrix> {
    if input.trim_start().starts_with('{') {
        parse_json(input)
    } else {
        parse_text(input)
    }
}

pub fn to_text(m: &BinaryMatrix) -> String {
    m.to_string()
}

pub fn to_json_value(m: &BinaryMatrix) -> serde_json::Value {
    let doc = MatrixDoc {
        labels: m.has_custom_labels().then(|| m.labels()),
        matrix: m
            .to_rows()
            .into_iter()
            .map(|r| r.into_iter().map(i64::from).collect())
            .collect(),
    };
    serde_json::to_value(doc).unwrap()
}

pub fn to_json(m: &BinaryMatrix) -> String {
    serde_json::to_string(&to_json_value(m)).unwrap()
}
