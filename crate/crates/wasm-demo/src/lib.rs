//! wasm-bindgen entry points for the static page in `www/`.
//!
//! Every export returns a JSON string; errors surface as JS exceptions.

pub mod demo;

use serde::Serialize;
use wasm_bindgen::prelude::*;

fn to_js<T: Serialize>(r: prophet_core::Result<T>) -> Result<String, JsError> {
    let v = r.map_err(|e| JsError::new(&e.to_string()))?;
    serde_json::to_string(&v).map_err(|e| JsError::new(&e.to_string()))
}

#[wasm_bindgen]
pub fn orientation_view(vertices: usize, edges: usize, seed: u64, cut_seed: u64) -> Result<String, JsError> {
    to_js(demo::orientation_view(vertices, edges, seed, cut_seed))
}

#[wasm_bindgen]
pub fn pipeline_ratio(vertices: usize, edges: usize, seed: u64) -> Result<String, JsError> {
    to_js(demo::pipeline_ratio(vertices, edges, seed))
}

#[wasm_bindgen]
pub fn tightness_curve(points: usize) -> Result<String, JsError> {
    to_js(demo::tightness_curve(points))
}
