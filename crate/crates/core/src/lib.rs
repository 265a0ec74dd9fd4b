//! Two-photon states from type-0 parametric down-conversion inside a
//! periodically poled two-waveguide directional coupler.
//!
//! The pair is generated into coupler supermodes; changing to the waveguide
//! basis acts as a balanced beam splitter on the (S,A)/(A,S) pairs, which
//! cancels cross-waveguide coincidences and leaves a two-photon N00N state.
//!
//! Module map:
//! - [`dispersion`]: β(ω) models and a bracketing root finder
//! - [`coupler`]: supermode constants, basis matrix, coupling model
//! - [`pdc_state`]: joint spectral amplitudes in both bases
//! - [`observables`]: coincidence probabilities, fidelity, pump scans
//! - [`design_search`]: Latin hypercube + Nelder–Mead design search
//! - [`config`], [`cli`]: configuration file and command line

#[cfg(feature = "cli")]
pub mod cli;
pub mod config;
pub mod coupler;
pub mod design_search;
pub mod dispersion;
pub mod error;
pub mod observables;
pub mod pdc_state;

pub use error::{Error, Result};
