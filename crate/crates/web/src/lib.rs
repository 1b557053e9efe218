//! wasm-bindgen exports for the browser demo. Each export takes the matrix
//! as 0/1 text (or the JSON format) and returns a JSON string; the page in
//! `www/` renders it.

use levelposet::enumeration::{ab_index_interval, DEFAULT_DEGREE_CAP};
use levelposet::matrix::{exponent, is_indecomposable, period_index};
use levelposet::poset::{check_level_eulerian, check_level_half_eulerian, CheckOptions};
use levelposet::shelling::{
    find_vertex_shelling_order, is_vertex_shelling_order, reduced_z_power_table, render_walk,
    VertexOrder,
};
use levelposet::{algebra, io, BinaryMatrix, LevelPoset};
use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

/// Longest table the page will request; beyond this the walks get unwieldy.
const MAX_TABLE_K: usize = 8;

fn parse(matrix: &str) -> Result<BinaryMatrix, String> {
    let m = io::parse_matrix(matrix).map_err(|e| e.to_string())?;
    if m.order() > 12 {
        return Err("the demo accepts matrices of order at most 12".into());
    }
    Ok(m)
}

pub fn analyze_json(matrix: &str) -> Result<String, String> {
    let m = parse(matrix)?;
    let poset = LevelPoset::new(m.clone());
    let p = period_index(&m);
    let eulerian = check_level_eulerian(&poset, CheckOptions::default());
    let half = check_level_half_eulerian(&poset, CheckOptions::default());
    let report = json!({
        "n": m.order(),
        "d": p.period,
        "gamma": p.index,
        "indecomposable": is_indecomposable(&m),
        "exponent": exponent(&m),
        "eulerian": serde_json::to_value(&eulerian).unwrap(),
        "half_eulerian": serde_json::to_value(&half).unwrap(),
    });
    Ok(report.to_string())
}

pub fn cd_index_json(matrix: &str, from: &str, to: &str, rank: usize) -> Result<String, String> {
    let m = parse(matrix)?;
    if rank > DEFAULT_DEGREE_CAP + 1 {
        return Err(format!(
            "rank is limited to {} in the demo",
            DEFAULT_DEGREE_CAP + 1
        ));
    }
    let poset = LevelPoset::new(m.clone());
    let u = m.resolve_vertex(from).map_err(|e| e.to_string())?;
    let v = m.resolve_vertex(to).map_err(|e| e.to_string())?;
    let iv = poset.interval(u, v, rank).map_err(|e| e.to_string())?;
    let ab = ab_index_interval(&poset, &iv).map_err(|e| e.to_string())?;
    let cd = match algebra::ab_to_cd(&ab) {
        Ok(q) => Value::from(q.to_power_string()),
        Err(_) => Value::Null,
    };
    Ok(json!({ "ab_index": ab.to_power_string(), "cd_index": cd }).to_string())
}

pub fn shelling_tables_json(matrix: &str, order: &str, k: usize) -> Result<String, String> {
    let m = parse(matrix)?;
    if !(1..=MAX_TABLE_K).contains(&k) {
        return Err(format!("k must be between 1 and {MAX_TABLE_K}"));
    }
    let order = if order.trim().is_empty() {
        match find_vertex_shelling_order(&m, Some(k)).map_err(|e| e.to_string())? {
            Some(o) => o,
            None => return Ok(json!({ "order": Value::Null, "shelling": false }).to_string()),
        }
    } else {
        let seq = order
            .split(',')
            .map(|t| m.resolve_vertex(t.trim()))
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| e.to_string())?;
        VertexOrder::new(seq).map_err(|e| e.to_string())?
    };
    let labels: Vec<String> = order.sequence().iter().map(|&v| m.label(v)).collect();
    let verdict = is_vertex_shelling_order(&m, &order, Some(k)).map_err(|e| e.to_string())?;
    if !verdict.shelling {
        let v = verdict.violation.unwrap();
        return Ok(json!({
            "order": labels,
            "shelling": false,
            "violation": format!("Z^{} entry ({}, {}) has {} surviving walks", v.k, v.from + 1, v.to + 1, v.count),
        })
        .to_string());
    }
    let mut tables = Vec::new();
    for j in 1..=k {
        let t = reduced_z_power_table(&m, &order, j).map_err(|e| e.to_string())?;
        let cells: Vec<Vec<String>> = t
            .iter()
            .map(|r| r.iter().map(render_walk).collect())
            .collect();
        tables.push(cells);
    }
    Ok(json!({ "order": labels, "shelling": true, "tables": tables }).to_string())
}

#[wasm_bindgen]
pub fn analyze(matrix: &str) -> Result<String, JsValue> {
    analyze_json(matrix).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn cd_index(matrix: &str, from: &str, to: &str, rank: usize) -> Result<String, JsValue> {
    cd_index_json(matrix, from, to, rank).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn shelling_tables(matrix: &str, order: &str, k: usize) -> Result<String, JsValue> {
    shelling_tables_json(matrix, order, k).map_err(|e| JsValue::from_str(&e))
}
