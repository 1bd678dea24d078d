//! Browser bindings: reconstruct a network, check properties, generate
//! random examples.

use orthonet::io::report_json;
use orthonet::{
    check_properties, export_dot, network_popping, parse_dissimilarity, print_dissimilarity,
    print_network, random_network, GenConfig,
};
use serde::Serialize;
use wasm_bindgen::prelude::*;

#[derive(Serialize)]
struct Popped {
    newick: String,
    dot: String,
}

#[derive(Serialize)]
struct Generated {
    newick: String,
    dissimilarity: String,
}

fn to_js<T: Serialize>(value: &T) -> Result<String, JsError> {
    serde_json::to_string(value).map_err(|e| JsError::new(&e.to_string()))
}

/// Pops a dissimilarity file. Returns `{newick, dot}` as JSON or throws the
/// rejection reason.
#[wasm_bindgen]
pub fn pop(text: &str) -> Result<String, JsError> {
    let delta = parse_dissimilarity(text).map_err(|e| JsError::new(&e.to_string()))?;
    let net = network_popping(&delta).map_err(|e| JsError::new(&e.describe(delta.taxa())))?;
    to_js(&Popped {
        newick: print_network(&net),
        dot: export_dot(&net),
    })
}

/// Per-property verdicts with witnesses, as JSON.
#[wasm_bindgen]
pub fn check(text: &str) -> Result<String, JsError> {
    let delta = parse_dissimilarity(text).map_err(|e| JsError::new(&e.to_string()))?;
    Ok(report_json(&check_properties(&delta), delta.taxa()))
}

/// A random network and its induced dissimilarity, as JSON.
#[wasm_bindgen]
pub fn generate(n: usize, m: usize, cycles: usize, seed: u32) -> Result<String, JsError> {
    let cfg = GenConfig {
        n,
        m,
        cycle_budget: cycles,
        seed: seed.into(),
        ..GenConfig::default()
    };
    let net = random_network(&cfg).map_err(|e| JsError::new(&e.to_string()))?;
    let delta = net.induce().map_err(|e| JsError::new(&e.to_string()))?;
    to_js(&Generated {
        newick: print_network(&net),
        dissimilarity: print_dissimilarity(&delta),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    // JsError only exists on wasm targets, so native tests stick to success paths.
    #[test]
    fn generate_then_pop() {
        let g: serde_json::Value = serde_json::from_str(&generate(9, 3, 2, 4).unwrap()).unwrap();
        let p: serde_json::Value =
            serde_json::from_str(&pop(g["dissimilarity"].as_str().unwrap()).unwrap()).unwrap();
        assert!(p["newick"].as_str().unwrap().ends_with(';'));
        assert!(p["dot"].as_str().unwrap().starts_with("digraph"));
        let report: serde_json::Value =
            serde_json::from_str(&check(g["dissimilarity"].as_str().unwrap()).unwrap()).unwrap();
        assert_eq!(report["P1"]["pass"], true);
    }
}
