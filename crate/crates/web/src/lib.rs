//! WebAssembly bindings for the browser demo in `www/`.
//!
//! Every export returns a JSON string; errors become JavaScript exceptions.

pub mod demo;

use wasm_bindgen::prelude::*;

fn to_js(r: torus_spectra::Result<serde_json::Value>) -> Result<String, JsValue> {
    r.map(|v| v.to_string()).map_err(|e| JsValue::from_str(&e.to_string()))
}

#[wasm_bindgen(js_name = torusStatistics)]
pub fn torus_statistics(a1: f64, a2: f64, a3: f64, n: usize, bins: usize) -> Result<String, JsValue> {
    to_js(demo::torus_statistics(a1, a2, a3, n, bins))
}

#[wasm_bindgen(js_name = constructionComparison)]
pub fn construction_comparison(n: usize, seed: u32) -> Result<String, JsValue> {
    to_js(demo::construction_comparison(n, seed.into()))
}

#[wasm_bindgen(js_name = endgameSlack)]
pub fn endgame_slack(eps: f64) -> Result<String, JsValue> {
    to_js(demo::endgame_slack(eps))
}
