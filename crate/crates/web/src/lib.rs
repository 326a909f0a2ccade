//! WebAssembly bindings for the static demo page in `www/`.

pub mod demo;

use wasm_bindgen::prelude::*;

fn js(e: String) -> JsError {
    JsError::new(&e)
}

/// Flattened rows `x, Itô, intermediate, Stratonovich`.
#[wasm_bindgen(js_name = driftCurves)]
pub fn drift_curves(mu0: &[f64], lambdas: &[f64], tau0: f64, points: usize) -> Result<Vec<f64>, JsError> {
    demo::drift_curves(mu0, lambdas, tau0, points).map_err(js)
}

/// Flattened rows `t, x, X`; `coarse_dt ≤ 0` selects the default grid.
#[wasm_bindgen(js_name = coupledPath)]
#[allow(clippy::too_many_arguments)]
pub fn coupled_path(
    epsilon: f64,
    gamma: f64,
    tau0: f64,
    lambda: f64,
    x0: f64,
    coarse_dt: f64,
    seed: u32,
    max_rows: usize,
) -> Result<Vec<f64>, JsError> {
    demo::coupled_path(epsilon, gamma, tau0, lambda, x0, coarse_dt, seed as u64, max_rows).map_err(js)
}

/// `[mean, se]` of the μ-sum minus the left-endpoint sum.
#[wasm_bindgen(js_name = muIntegral)]
pub fn mu_integral(mu: f64, exponent: u32, paths: usize, seed: u32) -> Result<Vec<f64>, JsError> {
    demo::mu_integral(mu, exponent, paths, seed as u64).map_err(js)
}

#[wasm_bindgen(js_name = muFromTau0)]
pub fn mu_from_tau0(alpha: f64, tau0: f64) -> Result<f64, JsError> {
    colored_limits::limits::mu_from_tau0(alpha, tau0).map_err(|e| js(e.to_string()))
}
