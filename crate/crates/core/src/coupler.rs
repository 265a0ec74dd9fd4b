//! Linear optics of the two-waveguide coupler: supermode propagation
//! constants, the eigenmode/waveguide basis change, and the coupling model.

use num_complex::Complex64;

use crate::dispersion::{DispersionModel, SPEED_OF_LIGHT};
use crate::error::{Error, Result};

/// Coupler supermode.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Mode {
    /// Symmetric, `(E1 + E2)/√2`, propagation constant β0 − C.
    S,
    /// Antisymmetric, `(E1 − E2)/√2`, propagation constant β0 + C.
    A,
}

impl Mode {
    /// Sign of the coupling correction: β_mode = β0 + sign·C.
    #[inline]
    pub fn coupling_sign(self) -> f64 {
        match self {
            Mode::S => -1.0,
            Mode::A => 1.0,
        }
    }

    /// Row index in [`eigen_to_waveguide_matrix`].
    pub fn index(self) -> usize {
        match self {
            Mode::S => 0,
            Mode::A => 1,
        }
    }
}

/// Returns `(β_S, β_A)` for the uncoupled constant `beta0` and coupling `c`.
pub fn eigen_propagation_constants(beta0: f64, c: f64) -> (f64, f64) {
    (beta0 - c, beta0 + c)
}

/// Basis change from supermodes to waveguide modes.
///
/// Row order is (S, A), column order is (WG1, WG2); row `m` holds the
/// waveguide amplitudes of supermode `m`:
///
/// ```text
/// U = 1/√2 · | 1   1 |
///            | 1  −1 |
/// ```
///
/// U is real, orthogonal, symmetric and its own inverse.
pub fn eigen_to_waveguide_matrix() -> [[Complex64; 2]; 2] {
    let h = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    [[h, h], [h, -h]]
}

#[derive(Debug, Clone, PartialEq)]
pub enum CouplingModel {
    Constant {
        /// rad/m
        c: f64,
    },
    /// `C(ω) = C0 · exp(−s·Δg) · (1 + k_λ·(λ(ω) − λ_ref))`.
    ///
    /// `gap_delta` is a gap change relative to the reference design; at zero
    /// the exponential factor drops out.
    ExponentialGap {
        c0: f64,
        /// m
        lambda_ref: f64,
        /// 1/m
        gap_decay: f64,
        /// m
        gap_delta: f64,
        /// 1/m
        slope: f64,
    },
}

impl CouplingModel {
    #[inline]
    pub fn at_unchecked(&self, omega: f64) -> f64 {
        match *self {
            CouplingModel::Constant { c } => c,
            CouplingModel::ExponentialGap {
                c0,
                lambda_ref,
                gap_decay,
                gap_delta,
                slope,
            } => {
                let lambda = 2.0 * std::f64::consts::PI * SPEED_OF_LIGHT / omega;
                let gap_factor = if gap_delta == 0.0 {
                    1.0
                } else {
                    (-gap_decay * gap_delta).exp()
                };
                c0 * gap_factor * (1.0 + slope * (lambda - lambda_ref))
            }
        }
    }

    pub fn is_frequency_flat(&self) -> bool {
        match self {
            CouplingModel::Constant { .. } => true,
            CouplingModel::ExponentialGap { slope, .. } => *slope == 0.0,
        }
    }

    /// Same model with its overall strength multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> Self {
        match self.clone() {
            CouplingModel::Constant { c } => CouplingModel::Constant { c: c * factor },
            CouplingModel::ExponentialGap {
                c0,
                lambda_ref,
                gap_decay,
                gap_delta,
                slope,
            } => CouplingModel::ExponentialGap {
                c0: c0 * factor,
                lambda_ref,
                gap_decay,
                gap_delta,
                slope,
            },
        }
    }
}

/// Coupling constant at `omega`; a nonpositive value is a configuration error.
pub fn coupling_at(model: &CouplingModel, omega: f64) -> Result<f64> {
    let c = model.at_unchecked(omega);
    if c > 0.0 && c.is_finite() {
        Ok(c)
    } else {
        Err(Error::config(
            "coupler.coupling",
            format!("coupling constant {c} rad/m at ω = {omega:.6e} rad/s is not positive"),
        ))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CouplerDesign {
    /// Poled coupling-region length, m.
    pub length: f64,
    pub coupling: CouplingModel,
    /// Poling period Λ, m.
    pub poling_period: f64,
    /// Dispersion shared by signal and idler.
    pub dispersion: DispersionModel,
}

impl CouplerDesign {
    pub fn validate(&self) -> Result<()> {
        if !(self.length > 0.0 && self.length.is_finite()) {
            return Err(Error::config("coupler.length_m", "must be positive"));
        }
        if !(self.poling_period > 0.0 && self.poling_period.is_finite()) {
            return Err(Error::config("coupler.poling_period_m", "must be positive"));
        }
        Ok(())
    }

    /// Grating momentum 2π/Λ, rad/m.
    pub fn grating_wavenumber(&self) -> f64 {
        2.0 * std::f64::consts::PI / self.poling_period
    }
}
