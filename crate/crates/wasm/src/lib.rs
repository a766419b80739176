//! Browser entry points. Each export takes plain strings and numbers and
//! returns a JSON report; errors surface as thrown JS strings.

pub mod api;

use wasm_bindgen::prelude::*;

fn js(r: Result<String, api::DemoError>) -> Result<String, JsValue> {
    r.map_err(|e| JsValue::from_str(&e.to_string()))
}

/// Walsh spectrum report of `function` over `F_{p^m}`. An empty `modulus`
/// selects the default one.
#[wasm_bindgen]
pub fn spectrum(p: u32, m: u32, modulus: &str, function: &str) -> Result<String, JsValue> {
    js(api::spectrum(p, m, modulus, function))
}

/// Code built from `function` and the defining-set selector `set` (empty for
/// the default).
#[wasm_bindgen]
pub fn construct(p: u32, m: u32, modulus: &str, function: &str, set: &str) -> Result<String, JsValue> {
    js(api::construct(p, m, modulus, function, set))
}

#[wasm_bindgen]
pub fn list_examples() -> String {
    api::list_examples()
}

#[wasm_bindgen]
pub fn run_example(id: &str) -> Result<String, JsValue> {
    js(api::run_example(id))
}
