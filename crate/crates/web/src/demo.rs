//! Demo computations behind the wasm exports.
//!
//! Every design shares the bundled dispersion and degenerate wavelength; the
//! page only varies length, coupling and pump width. The poling period is
//! re-solved for each request.

use pdc_coupler::config::{Simulation, SimulationConfig};
use pdc_coupler::coupler::{CouplerDesign, CouplingModel};
use pdc_coupler::design_search::Candidate;
use pdc_coupler::dispersion::omega_from_nm;
use pdc_coupler::observables::{evaluate_at_cross_pump, pump_scan};
use pdc_coupler::pdc_state::{build_eigen_state, to_waveguide_basis, GridPolicy, PumpSpec};
use wasm_bindgen::prelude::*;

pub const MIN_GRID: usize = 21;
pub const MAX_GRID: usize = 401;
pub const MAX_SCAN_STEPS: usize = 401;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DemoDesign {
    pub length_m: f64,
    pub coupling_rad_m: f64,
    pub sigma_rad_s: f64,
}

fn bundled_simulation() -> Simulation {
    SimulationConfig::default_design()
        .validate()
        .expect("bundled configuration is valid")
}

impl DemoDesign {
    pub fn bundled() -> Self {
        let sim = bundled_simulation();
        let coupling_rad_m = match sim.design.coupling {
            CouplingModel::Constant { c } => c,
            ref other => other.at_unchecked(sim.pump.center / 2.0),
        };
        Self {
            length_m: sim.design.length,
            coupling_rad_m,
            sigma_rad_s: sim.pump.sigma,
        }
    }

    fn realize(&self, grid_n: usize) -> Result<(CouplerDesign, PumpSpec, GridPolicy), String> {
        let positive = |v: f64, what: &str| {
            if v > 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err(format!("{what} must be positive"))
            }
        };
        positive(self.length_m, "length")?;
        positive(self.coupling_rad_m, "coupling")?;
        positive(self.sigma_rad_s, "pump width")?;
        if !(MIN_GRID..=MAX_GRID).contains(&grid_n) {
            return Err(format!("grid size must be between {MIN_GRID} and {MAX_GRID}"));
        }
        let sim = bundled_simulation();
        let space = sim.search.as_ref().ok_or("bundled config has no search table")?;
        let candidate = Candidate {
            length: self.length_m,
            coupling: self.coupling_rad_m,
            sigma: self.sigma_rad_s,
        };
        let (design, pump) = space.realize(&candidate).map_err(|e| e.to_string())?;
        let grid = GridPolicy {
            n: grid_n,
            ..sim.grid
        };
        Ok((design, pump, grid))
    }
}

pub fn scan(
    d: &DemoDesign,
    start_nm: f64,
    stop_nm: f64,
    steps: usize,
    grid_n: usize,
) -> Result<Vec<[f64; 5]>, String> {
    if steps > MAX_SCAN_STEPS {
        return Err(format!("at most {MAX_SCAN_STEPS} scan steps"));
    }
    let (design, pump, grid) = d.realize(grid_n)?;
    let records = pump_scan(&design, &pump, &grid, start_nm, stop_nm, steps).map_err(|e| e.to_string())?;
    Ok(records
        .iter()
        .map(|r| [r.pump_wavelength_nm, r.probs.p11, r.probs.p22, r.probs.p12, r.fidelity])
        .collect())
}

pub fn fidelity(d: &DemoDesign, grid_n: usize) -> Result<[f64; 5], String> {
    let (design, pump, grid) = d.realize(grid_n)?;
    let r = evaluate_at_cross_pump(&design, &pump, &grid, None).map_err(|e| e.to_string())?;
    Ok([r.pump_wavelength_nm, r.probs.p11, r.probs.p22, r.probs.p12, r.fidelity])
}

/// |amplitude| of the four channels on an n × n grid, scaled so the largest
/// value over all channels is 1.
#[wasm_bindgen]
#[derive(Debug, Clone, PartialEq)]
pub struct Heatmap {
    n: usize,
    omega_min: f64,
    omega_max: f64,
    channel_names: [&'static str; 4],
    /// Four row-major n × n blocks, signal index major.
    magnitudes: Vec<f64>,
}

#[wasm_bindgen]
impl Heatmap {
    #[wasm_bindgen(getter)]
    pub fn n(&self) -> usize {
        self.n
    }

    #[wasm_bindgen(getter)]
    pub fn omega_min(&self) -> f64 {
        self.omega_min
    }

    #[wasm_bindgen(getter)]
    pub fn omega_max(&self) -> f64 {
        self.omega_max
    }

    pub fn channel_name(&self, channel: usize) -> String {
        self.channel_names.get(channel).copied().unwrap_or("").to_string()
    }

    /// n × n magnitudes of one channel.
    pub fn channel(&self, channel: usize) -> Vec<f64> {
        let len = self.n * self.n;
        self.magnitudes
            .get(channel * len..(channel + 1) * len)
            .map(<[f64]>::to_vec)
            .unwrap_or_default()
    }
}

pub fn heatmap(d: &DemoDesign, pump_nm: f64, waveguide_basis: bool, grid_n: usize) -> Result<Heatmap, String> {
    if !(pump_nm > 0.0 && pump_nm.is_finite()) {
        return Err("pump wavelength must be positive".into());
    }
    let (design, pump, grid_policy) = d.realize(grid_n)?;
    let pump = pump.recentered(omega_from_nm(pump_nm));
    let grid = grid_policy.grid_for(&pump).map_err(|e| e.to_string())?;
    let mut state = build_eigen_state(&design, &pump, &grid).map_err(|e| e.to_string())?;
    if waveguide_basis {
        state = to_waveguide_basis(&state).map_err(|e| e.to_string())?;
    }
    let mut magnitudes: Vec<f64> = state.amp.iter().flatten().map(|z| z.norm()).collect();
    let peak = magnitudes.iter().copied().fold(0.0, f64::max);
    if peak > 0.0 {
        magnitudes.iter_mut().for_each(|m| *m /= peak);
    }
    Ok(Heatmap {
        n: grid.n,
        omega_min: grid.omega_min,
        omega_max: grid.omega_max,
        channel_names: state.basis.channel_names(),
        magnitudes,
    })
}
