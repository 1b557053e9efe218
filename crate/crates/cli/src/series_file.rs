//! JSON series files: `{"alphabet": "ab" | "cd", "slices": [[[entry]]]}`,
//! where `slices[k][x][y]` is the degree-`k` part of entry `(x, y)` written
//! in the polynomial grammar (for example `"c^2 + d"`).

use levelposet::algebra::{AbWord, CdWord, GradedMatrixSeries, Polynomial, Word};
use levelposet::enumeration::{ab_series_from_cd, AbSeries};
use serde_json::{json, Value};

pub fn to_value<W: Word>(series: &GradedMatrixSeries<W>, alphabet: &str) -> Value {
    let n = series.order();
    let slices: Vec<Vec<Vec<String>>> = (0..=series.cap())
        .map(|k| {
            (0..n)
                .map(|x| {
                    (0..n)
                        .map(|y| series.entry(k, x, y).to_power_string())
                        .collect()
                })
                .collect()
        })
        .collect();
    json!({ "degree_cap": series.cap(), "alphabet": alphabet, "slices": slices })
}

fn read_series<W: Word>(slices: &[Value], n: usize) -> Result<GradedMatrixSeries<W>, String> {
    let mut out = GradedMatrixSeries::new(n, Vec::new());
    for (k, slice) in slices.iter().enumerate() {
        let rows = slice
            .as_array()
            .filter(|r| r.len() == n)
            .ok_or_else(|| format!("slice {k} must have {n} rows"))?;
        let mut flat = Vec::with_capacity(n * n);
        for (x, row) in rows.iter().enumerate() {
            let cells = row
                .as_array()
                .filter(|r| r.len() == n)
                .ok_or_else(|| format!("slice {k} row {} must have {n} entries", x + 1))?;
            for (y, cell) in cells.iter().enumerate() {
                let s = cell.as_str().ok_or_else(|| {
                    format!("slice {k} entry ({}, {}) is not a string", x + 1, y + 1)
                })?;
                let p = Polynomial::<W>::parse(s)
                    .map_err(|e| format!("slice {k} entry ({}, {}): {e}", x + 1, y + 1))?;
                flat.push(p);
            }
        }
        out.push_slice(flat);
    }
    Ok(out)
}

/// Reads a series of `n×n` entries, expanding cd-series into {a,b}.
pub fn parse(raw: &str, n: usize) -> Result<AbSeries, String> {
    let doc: Value = serde_json::from_str(raw).map_err(|e| format!("invalid series JSON: {e}"))?;
    let slices = doc["slices"]
        .as_array()
        .filter(|s| !s.is_empty())
        .ok_or("series file needs a nonempty \"slices\" array")?;
    match doc["alphabet"].as_str().unwrap_or("ab") {
        "ab" => read_series::<AbWord>(slices, n),
        "cd" => Ok(ab_series_from_cd(&read_series::<CdWord>(slices, n)?)),
        other => Err(format!("unknown alphabet {other:?}")),
    }
}
