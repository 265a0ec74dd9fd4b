//! Simulation configuration file.
//!
//! TOML with nested tables. Every key carries its unit as a suffix (`_m`,
//! `_nm`, `_rad_m`, `_rad_s`, ...) and unknown keys are rejected.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::coupler::{coupling_at, CouplerDesign, CouplingModel};
use crate::design_search::DesignSpace;
use crate::dispersion::{
    omega_from_nm, DispersionModel, PolynomialModel, SellmeierModel, ValidityWindow,
};
use crate::error::{Error, Result};
use crate::pdc_state::{sigma_from_fwhm_nm, GridPolicy, PumpSpec};

/// The stock design, identical to `configs/default.toml`.
pub const DEFAULT_CONFIG_TOML: &str = include_str!("../../../configs/default.toml");

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimulationConfig {
    pub dispersion: DispersionSpec,
    pub pump_dispersion: DispersionSpec,
    pub coupler: CouplerSpec,
    pub pump: PumpConfig,
    #[serde(default)]
    pub grid: GridSpec,
    #[serde(default)]
    pub search: Option<SearchSpec>,
    #[serde(default)]
    pub output: Option<OutputSpec>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DispersionSpec {
    Polynomial(PolynomialSpec),
    Sellmeier(SellmeierSpec),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolynomialSpec {
    pub omega_ref_rad_s: f64,
    pub b0_rad_m: f64,
    pub b1_s_m: f64,
    #[serde(default)]
    pub b2_s2_m: f64,
    #[serde(default)]
    pub b3_s3_m: f64,
    pub valid_min_nm: f64,
    pub valid_max_nm: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SellmeierSpec {
    #[serde(default = "one")]
    pub a: f64,
    pub b: Vec<f64>,
    pub c_um2: Vec<f64>,
    pub valid_min_nm: f64,
    pub valid_max_nm: f64,
}

fn one() -> f64 {
    1.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CouplerSpec {
    pub length_m: f64,
    pub poling_period_m: f64,
    pub coupling: CouplingSpec,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CouplingSpec {
    Constant(ConstantCouplingSpec),
    ExponentialGap(ExponentialGapSpec),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConstantCouplingSpec {
    pub c_rad_m: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExponentialGapSpec {
    pub c0_rad_m: f64,
    pub lambda_ref_nm: f64,
    #[serde(default)]
    pub gap_decay_per_m: f64,
    #[serde(default)]
    pub gap_delta_m: f64,
    #[serde(default)]
    pub slope_per_m: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PumpConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub center_nm: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub center_rad_s: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sigma_rad_s: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fwhm_nm: Option<f64>,
    #[serde(default = "half")]
    pub gamma_re: f64,
    #[serde(default)]
    pub gamma_im: f64,
    #[serde(default = "half")]
    pub delta_re: f64,
    #[serde(default)]
    pub delta_im: f64,
}

fn half() -> f64 {
    PumpSpec::DEFAULT_WEIGHT
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    pub n: usize,
    pub half_width_sigmas: f64,
}

impl Default for GridSpec {
    fn default() -> Self {
        let p = GridPolicy::default();
        Self {
            n: p.n,
            half_width_sigmas: p.half_width_sigmas,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SearchSpec {
    pub length_m: [f64; 2],
    pub coupling_rad_m: [f64; 2],
    pub sigma_rad_s: [f64; 2],
    pub degenerate_nm: f64,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub jsa: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scan: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trace: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub design: Option<String>,
}

fn positive(key: &str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::config(key, format!("must be positive and finite, got {v}")))
    }
}

fn window_nm(key: &str, lo: f64, hi: f64) -> Result<ValidityWindow> {
    positive(&format!("{key}.valid_min_nm"), lo)?;
    positive(&format!("{key}.valid_max_nm"), hi)?;
    if lo >= hi {
        return Err(Error::config(
            format!("{key}.valid_min_nm"),
            "must be below valid_max_nm",
        ));
    }
    Ok(ValidityWindow::from_wavelengths_nm(lo, hi))
}

impl DispersionSpec {
    pub fn to_model(&self, key: &str) -> Result<DispersionModel> {
        let model = match self {
            DispersionSpec::Polynomial(p) => {
                positive(&format!("{key}.omega_ref_rad_s"), p.omega_ref_rad_s)?;
                for (name, v) in [
                    ("b0_rad_m", p.b0_rad_m),
                    ("b1_s_m", p.b1_s_m),
                    ("b2_s2_m", p.b2_s2_m),
                    ("b3_s3_m", p.b3_s3_m),
                ] {
                    if !v.is_finite() {
                        return Err(Error::config(format!("{key}.{name}"), "must be finite"));
                    }
                }
                DispersionModel::Polynomial(PolynomialModel {
                    omega_ref: p.omega_ref_rad_s,
                    b0: p.b0_rad_m,
                    b1: p.b1_s_m,
                    b2: p.b2_s2_m,
                    b3: p.b3_s3_m,
                    window: window_nm(key, p.valid_min_nm, p.valid_max_nm)?,
                })
            }
            DispersionSpec::Sellmeier(s) => {
                if s.b.len() != s.c_um2.len() || s.b.is_empty() {
                    return Err(Error::config(
                        format!("{key}.b"),
                        "b and c_um2 must be non-empty and of equal length",
                    ));
                }
                DispersionModel::Sellmeier(SellmeierModel {
                    a: s.a,
                    b: s.b.clone(),
                    c_um2: s.c_um2.clone(),
                    window: window_nm(key, s.valid_min_nm, s.valid_max_nm)?,
                })
            }
        };
        model
            .validate(512)
            .map_err(|reason| Error::config(key, reason))?;
        Ok(model)
    }
}

impl CouplingSpec {
    pub fn to_model(&self) -> Result<CouplingModel> {
        match self {
            CouplingSpec::Constant(c) => {
                positive("coupler.coupling.c_rad_m", c.c_rad_m)?;
                Ok(CouplingModel::Constant { c: c.c_rad_m })
            }
            CouplingSpec::ExponentialGap(e) => {
                positive("coupler.coupling.c0_rad_m", e.c0_rad_m)?;
                positive("coupler.coupling.lambda_ref_nm", e.lambda_ref_nm)?;
                for (name, v) in [
                    ("gap_decay_per_m", e.gap_decay_per_m),
                    ("gap_delta_m", e.gap_delta_m),
                    ("slope_per_m", e.slope_per_m),
                ] {
                    if !v.is_finite() {
                        return Err(Error::config(format!("coupler.coupling.{name}"), "must be finite"));
                    }
                }
                Ok(CouplingModel::ExponentialGap {
                    c0: e.c0_rad_m,
                    lambda_ref: e.lambda_ref_nm * 1e-9,
                    gap_decay: e.gap_decay_per_m,
                    gap_delta: e.gap_delta_m,
                    slope: e.slope_per_m,
                })
            }
        }
    }

    pub fn from_model(model: &CouplingModel) -> Self {
        match *model {
            CouplingModel::Constant { c } => CouplingSpec::Constant(ConstantCouplingSpec { c_rad_m: c }),
            CouplingModel::ExponentialGap {
                c0,
                lambda_ref,
                gap_decay,
                gap_delta,
                slope,
            } => CouplingSpec::ExponentialGap(ExponentialGapSpec {
                c0_rad_m: c0,
                lambda_ref_nm: lambda_ref * 1e9,
                gap_decay_per_m: gap_decay,
                gap_delta_m: gap_delta,
                slope_per_m: slope,
            }),
        }
    }
}

/// Validated, unit-converted view of a [`SimulationConfig`].
#[derive(Debug, Clone, PartialEq)]
pub struct Simulation {
    pub design: CouplerDesign,
    pub pump: PumpSpec,
    pub grid: GridPolicy,
    pub search: Option<DesignSpace>,
}

impl SimulationConfig {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| {
            let message = e.message().to_string();
            let key = e
                .span()
                .map(|s| {
                    let line = text[..s.start].lines().count().max(1);
                    format!("line {line}")
                })
                .unwrap_or_else(|| "config".into());
            Error::config(key, message)
        })
    }

    pub fn load(path: &std::path::Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Io {
            path: path.display().to_string(),
            message: e.to_string(),
        })?;
        Self::from_toml_str(&text)
    }

    pub fn default_design() -> Self {
        Self::from_toml_str(DEFAULT_CONFIG_TOML).expect("bundled default config is valid")
    }

    pub fn to_toml_string(&self) -> String {
        toml::to_string(self).expect("configuration serializes")
    }

    /// Checks every key and converts to model types.
    pub fn validate(&self) -> Result<Simulation> {
        let dispersion = self.dispersion.to_model("dispersion")?;
        let pump_dispersion = self.pump_dispersion.to_model("pump_dispersion")?;

        positive("coupler.length_m", self.coupler.length_m)?;
        positive("coupler.poling_period_m", self.coupler.poling_period_m)?;
        let coupling = self.coupler.coupling.to_model()?;
        let window = dispersion.window();
        for omega in [window.omega_min, window.omega_max] {
            coupling_at(&coupling, omega)?;
        }

        let center = match (self.pump.center_nm, self.pump.center_rad_s) {
            (Some(nm), None) => {
                positive("pump.center_nm", nm)?;
                omega_from_nm(nm)
            }
            (None, Some(w)) => {
                positive("pump.center_rad_s", w)?;
                w
            }
            _ => {
                return Err(Error::config(
                    "pump.center_nm",
                    "give exactly one of center_nm or center_rad_s",
                ))
            }
        };
        let sigma = match (self.pump.sigma_rad_s, self.pump.fwhm_nm) {
            (Some(s), None) => {
                positive("pump.sigma_rad_s", s)?;
                s
            }
            (None, Some(fwhm)) => {
                positive("pump.fwhm_nm", fwhm)?;
                sigma_from_fwhm_nm(fwhm, crate::dispersion::nm_from_omega(center))
            }
            _ => {
                return Err(Error::config(
                    "pump.sigma_rad_s",
                    "give exactly one of sigma_rad_s or fwhm_nm",
                ))
            }
        };
        for (name, v) in [
            ("gamma_re", self.pump.gamma_re),
            ("gamma_im", self.pump.gamma_im),
            ("delta_re", self.pump.delta_re),
            ("delta_im", self.pump.delta_im),
        ] {
            if !v.is_finite() {
                return Err(Error::config(format!("pump.{name}"), "must be finite"));
            }
        }
        let gamma = Complex64::new(self.pump.gamma_re, self.pump.gamma_im);
        let delta = Complex64::new(self.pump.delta_re, self.pump.delta_im);

        if self.grid.n < 3 {
            return Err(Error::config("grid.n", "need at least 3 points per axis"));
        }
        positive("grid.half_width_sigmas", self.grid.half_width_sigmas)?;
        let grid = GridPolicy {
            n: self.grid.n,
            half_width_sigmas: self.grid.half_width_sigmas,
        };

        let design = CouplerDesign {
            length: self.coupler.length_m,
            coupling: coupling.clone(),
            poling_period: self.coupler.poling_period_m,
            dispersion: dispersion.clone(),
        };
        let pump = PumpSpec {
            center,
            sigma,
            gamma,
            delta,
            dispersion: pump_dispersion.clone(),
        };

        let search = match &self.search {
            None => None,
            Some(s) => {
                positive("search.degenerate_nm", s.degenerate_nm)?;
                let space = DesignSpace {
                    length: s.length_m,
                    coupling: s.coupling_rad_m,
                    sigma: s.sigma_rad_s,
                    omega_degenerate: omega_from_nm(s.degenerate_nm),
                    dispersion,
                    pump_dispersion,
                    coupling_template: coupling,
                    gamma,
                    delta,
                    grid,
                };
                space.validate()?;
                Some(space)
            }
        };

        Ok(Simulation {
            design,
            pump,
            grid,
            search,
        })
    }

    /// Copy with the coupler and pump width replaced by a search result.
    pub fn with_design(&self, design: &CouplerDesign, sigma: f64, center: f64) -> Self {
        let mut out = self.clone();
        out.coupler = CouplerSpec {
            length_m: design.length,
            poling_period_m: design.poling_period,
            coupling: CouplingSpec::from_model(&design.coupling),
        };
        out.pump.sigma_rad_s = Some(sigma);
        out.pump.fwhm_nm = None;
        out.pump.center_rad_s = Some(center);
        out.pump.center_nm = None;
        out
    }
}
