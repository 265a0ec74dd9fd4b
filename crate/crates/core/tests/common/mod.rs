#![allow(dead_code)]

pub mod oracle;

use std::path::PathBuf;

use pdc_coupler::config::{Simulation, SimulationConfig};

pub fn repo_root() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../..")
}

pub fn config_path(name: &str) -> PathBuf {
    repo_root().join("configs").join(name)
}

pub fn default_sim() -> Simulation {
    SimulationConfig::default_design().validate().unwrap()
}

pub fn optimized_sim() -> Simulation {
    SimulationConfig::load(&config_path("optimized.toml"))
        .unwrap()
        .validate()
        .unwrap()
}

/// Fidelity recorded for configs/optimized.toml at n = 301.
pub const OPTIMIZED_FIDELITY: f64 = 0.99784035588658559;

pub fn rng(seed: u64) -> rand_chacha::ChaCha8Rng {
    use rand::SeedableRng;
    rand_chacha::ChaCha8Rng::seed_from_u64(seed)
}
