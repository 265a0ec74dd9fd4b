//! WebAssembly bindings for the browser demo in `www/`.
//!
//! The exported functions are thin wrappers over [`demo`], which is plain
//! Rust and tested natively.

use wasm_bindgen::prelude::*;

pub mod demo;

fn js_error(message: String) -> JsError {
    JsError::new(&message)
}

/// Pump scan for a design; returns `steps` rows of
/// `[pump_nm, p11, p22, p12, fidelity]`, flattened.
#[wasm_bindgen]
pub fn scan_curves(
    length_m: f64,
    coupling_rad_m: f64,
    sigma_rad_s: f64,
    start_nm: f64,
    stop_nm: f64,
    steps: usize,
    grid_n: usize,
) -> Result<Vec<f64>, JsError> {
    let design = demo::DemoDesign {
        length_m,
        coupling_rad_m,
        sigma_rad_s,
    };
    demo::scan(&design, start_nm, stop_nm, steps, grid_n)
        .map(|rows| rows.into_iter().flatten().collect())
        .map_err(js_error)
}

/// Joint spectral amplitude magnitudes at one pump wavelength.
#[wasm_bindgen]
pub fn jsa_heatmap(
    length_m: f64,
    coupling_rad_m: f64,
    sigma_rad_s: f64,
    pump_nm: f64,
    waveguide_basis: bool,
    grid_n: usize,
) -> Result<demo::Heatmap, JsError> {
    let design = demo::DemoDesign {
        length_m,
        coupling_rad_m,
        sigma_rad_s,
    };
    demo::heatmap(&design, pump_nm, waveguide_basis, grid_n).map_err(js_error)
}

/// `[pump_nm, p11, p22, p12, fidelity]` at the cross-pair pump.
#[wasm_bindgen]
pub fn cross_pump_fidelity(
    length_m: f64,
    coupling_rad_m: f64,
    sigma_rad_s: f64,
    grid_n: usize,
) -> Result<Vec<f64>, JsError> {
    let design = demo::DemoDesign {
        length_m,
        coupling_rad_m,
        sigma_rad_s,
    };
    demo::fidelity(&design, grid_n)
        .map(|r| r.to_vec())
        .map_err(js_error)
}

/// Design parameters of the bundled default configuration:
/// `[length_m, coupling_rad_m, sigma_rad_s]`.
#[wasm_bindgen]
pub fn default_parameters() -> Vec<f64> {
    let d = demo::DemoDesign::bundled();
    vec![d.length_m, d.coupling_rad_m, d.sigma_rad_s]
}
