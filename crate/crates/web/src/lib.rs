//! Browser bindings. Each export rebuilds the collective spectrum from the
//! page's parameters; sizes are kept small enough to run interactively.

use wasm_bindgen::prelude::*;

pub mod demo;

fn js(e: lr_staggered::Error) -> JsError {
    JsError::new(&e.to_string())
}

/// `⟨n^z⟩(t)` on `points` times in `[0, t_max]`. `sigma = 0` evolves the
/// rotated Néel state itself.
#[wasm_bindgen]
pub fn evolve_nz(exchange: f64, field: f64, n_spins: usize, theta: f64, sigma: f64, t_max: f64, points: usize) -> Result<Vec<f64>, JsError> {
    demo::evolve_nz(exchange, field, n_spins, theta, sigma, t_max, points).map_err(js)
}

/// Mean-field pendulum `cos θ(t)` on the same grid.
#[wasm_bindgen]
pub fn pendulum_nz(exchange: f64, field: f64, n_spins: usize, theta: f64, t_max: f64, points: usize) -> Result<Vec<f64>, JsError> {
    demo::pendulum_nz(exchange, field, n_spins, theta, t_max, points).map_err(js)
}

/// Eigenstate scan flattened to rows of [`demo::SCAN_FIELDS`] values.
#[wasm_bindgen]
pub fn eigenstate_scan(exchange: f64, field: f64, n_spins: usize) -> Result<Vec<f64>, JsError> {
    demo::scan(exchange, field, n_spins).map_err(js)
}

#[wasm_bindgen]
pub fn scan_fields() -> usize {
    demo::SCAN_FIELDS
}

/// `J/2 + h n_spins/2`.
#[wasm_bindgen]
pub fn separatrix_energy(exchange: f64, field: f64, n_spins: usize) -> Result<f64, JsError> {
    demo::separatrix(exchange, field, n_spins).map_err(js)
}

/// Husimi grid of one eigenstate over `θ ∈ [0, 2π)`, `γ ∈ [-π, π)`,
/// row-major in `θ`.
#[wasm_bindgen]
pub fn husimi_eigenstate(exchange: f64, field: f64, n_spins: usize, m: f64, index: usize, n_theta: usize, n_gamma: usize) -> Result<Vec<f64>, JsError> {
    demo::husimi_eigenstate(exchange, field, n_spins, m, index, n_theta, n_gamma).map_err(js)
}
