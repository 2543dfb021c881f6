//! WebAssembly bindings for the static demo page in `www/`. Every exported
//! function takes PD text and returns a JSON string; the `*_json` functions
//! behind them are plain Rust so they can be tested natively.

use khoma::bracket::{bracket_spanning_tree_with, bracket_state_sum};
use khoma::diagram::{parse_pd, PlanarDiagram};
use khoma::expansion::{expand, module_a_ranks, Numbering};
use khoma::khovanov::khovanov_homology;
use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

/// The cube has `2^n` vertices; keep the page responsive.
pub const MAX_CROSSINGS: usize = 10;

fn load(pd: &str) -> Result<PlanarDiagram, String> {
    let d = parse_pd(pd).map_err(|e| e.to_string())?;
    if d.crossing_count() > MAX_CROSSINGS {
        return Err(format!("{} crossings; the demo stops at {MAX_CROSSINGS}", d.crossing_count()));
    }
    Ok(d)
}

fn parse_numbering(d: &PlanarDiagram, order: &str) -> Result<Numbering, String> {
    let n = d.crossing_count();
    if order.trim().is_empty() {
        return Ok(Numbering::identity(n));
    }
    let order = order
        .split(',')
        .map(|s| s.trim().parse::<usize>().map_err(|e| format!("numbering: {e}")))
        .collect::<Result<Vec<_>, _>>()?;
    Numbering::new(order, n).map_err(|e| e.to_string())
}

pub fn bracket_json(pd: &str, order: &str) -> Result<String, String> {
    let d = load(pd)?;
    let numbering = parse_numbering(&d, order)?;
    let state_sum = bracket_state_sum(&d);
    let tree = bracket_spanning_tree_with(&d, &numbering).map_err(|e| e.to_string())?;
    Ok(json!({
        "state_sum": state_sum.to_string(),
        "spanning_tree": tree.to_string(),
        "equal": state_sum == tree,
    })
    .to_string())
}

pub fn expansion_json(pd: &str, order: &str) -> Result<String, String> {
    let d = load(pd)?;
    let numbering = parse_numbering(&d, order)?;
    let leaves = expand(&d, &numbering).map_err(|e| e.to_string())?;
    let ranks = module_a_ranks(&d, &numbering).map_err(|e| e.to_string())?;
    Ok(json!({
        "numbering": numbering.order(),
        "leaves": leaves.iter().map(|l| json!({
            "word": l.word.to_string(),
            "state": l.state.to_string(),
            "x": l.x,
            "y": l.y,
            "w": l.w,
            "r": l.r_d_s,
        })).collect::<Vec<_>>(),
        "module_a": ranks.iter().map(|((i, j), r)| json!([i, j, r])).collect::<Vec<_>>(),
    })
    .to_string())
}

pub fn homology_json(pd: &str, normalize: bool) -> Result<String, String> {
    let d = load(pd)?;
    let h = khovanov_homology(&d, normalize).map_err(|e| e.to_string())?;
    let cells: Vec<Value> = h
        .iter()
        .filter(|(_, g)| !g.is_zero())
        .map(|((i, j), g)| json!({"i": i, "j": j, "rank": g.rank, "torsion": g.torsion}))
        .collect();
    Ok(json!({ "cells": cells, "total_rank": h.total_rank() }).to_string())
}

#[wasm_bindgen]
pub fn bracket(pd: &str, numbering: &str) -> Result<String, JsError> {
    bracket_json(pd, numbering).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn expansion(pd: &str, numbering: &str) -> Result<String, JsError> {
    expansion_json(pd, numbering).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn homology(pd: &str, normalize: bool) -> Result<String, JsError> {
    homology_json(pd, normalize).map_err(|e| JsError::new(&e))
}

#[cfg(test)]
mod tests {
    use super::*;

    const TREFOIL: &str = "X(1,4,2,5) X(3,6,4,1) X(5,2,6,3)";

    #[test]
    fn bracket_agrees() {
        let v: Value = serde_json::from_str(&bracket_json(TREFOIL, "2,1,0").unwrap()).unwrap();
        assert_eq!(v["equal"], true);
        assert_eq!(v["state_sum"], "q^-3 - q - q^3 - q^5");
    }

    #[test]
    fn expansion_leaves() {
        let v: Value = serde_json::from_str(&expansion_json(TREFOIL, "").unwrap()).unwrap();
        assert_eq!(v["leaves"].as_array().unwrap().len(), 3);
        assert_eq!(v["module_a"].as_array().unwrap().len(), 6);
    }

    #[test]
    fn homology_cells() {
        let v: Value = serde_json::from_str(&homology_json(TREFOIL, false).unwrap()).unwrap();
        assert_eq!(v["total_rank"], 4);
        assert_eq!(v["cells"].as_array().unwrap().len(), 5);
    }

    #[test]
    fn errors_are_messages() {
        assert!(homology_json("X(1,2", false).is_err());
        assert!(expansion_json(TREFOIL, "0,0,1").unwrap_err().contains("numbering"));
    }
}
