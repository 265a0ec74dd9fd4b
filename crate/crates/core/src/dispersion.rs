//! Propagation constants of the uncoupled waveguide.
//!
//! Frequencies are angular (rad/s) throughout; wavelengths appear only at the
//! edges, as vacuum wavelengths in nm, converted with [`omega_from_nm`] and
//! [`nm_from_omega`].

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Speed of light in vacuum, m/s.
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

/// Angular frequency of a vacuum wavelength given in nm.
pub fn omega_from_nm(wavelength_nm: f64) -> f64 {
    2.0 * PI * SPEED_OF_LIGHT / (wavelength_nm * 1e-9)
}

/// Vacuum wavelength in nm of an angular frequency.
pub fn nm_from_omega(omega: f64) -> f64 {
    2.0 * PI * SPEED_OF_LIGHT / omega * 1e9
}

/// Closed frequency interval on which a model may be evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ValidityWindow {
    pub omega_min: f64,
    pub omega_max: f64,
}

impl ValidityWindow {
    pub fn new(omega_min: f64, omega_max: f64) -> Self {
        Self {
            omega_min,
            omega_max,
        }
    }

    /// Window spanned by two vacuum wavelengths (in either order).
    pub fn from_wavelengths_nm(a_nm: f64, b_nm: f64) -> Self {
        let (wa, wb) = (omega_from_nm(a_nm), omega_from_nm(b_nm));
        Self::new(wa.min(wb), wa.max(wb))
    }

    pub fn contains(&self, omega: f64) -> bool {
        omega >= self.omega_min && omega <= self.omega_max
    }

    pub(crate) fn check(&self, what: &'static str, omega: f64) -> Result<()> {
        if self.contains(omega) {
            Ok(())
        } else {
            Err(Error::Domain {
                what,
                omega,
                lo: self.omega_min,
                hi: self.omega_max,
            })
        }
    }
}

/// Third-order Taylor expansion of β(ω) around `omega_ref`.
#[derive(Debug, Clone, PartialEq)]
pub struct PolynomialModel {
    pub omega_ref: f64,
    /// rad/m
    pub b0: f64,
    /// s/m
    pub b1: f64,
    /// s²/m
    pub b2: f64,
    /// s³/m
    pub b3: f64,
    pub window: ValidityWindow,
}

impl PolynomialModel {
    pub fn beta_unchecked(&self, omega: f64) -> f64 {
        let d = omega - self.omega_ref;
        self.b0 + d * (self.b1 + d * (self.b2 / 2.0 + d * self.b3 / 6.0))
    }
}

/// Sellmeier index `n² = a + Σ bₖ λ² / (λ² − cₖ)` with λ in µm.
#[derive(Debug, Clone, PartialEq)]
pub struct SellmeierModel {
    pub a: f64,
    pub b: Vec<f64>,
    /// Pole positions, µm².
    pub c_um2: Vec<f64>,
    pub window: ValidityWindow,
}

impl SellmeierModel {
    /// Congruent lithium niobate, extraordinary polarization, room temperature.
    pub fn lithium_niobate_extraordinary() -> Self {
        Self {
            a: 1.0,
            b: vec![2.9804, 0.5981, 8.9543],
            c_um2: vec![0.02047, 0.0666, 416.08],
            window: ValidityWindow::from_wavelengths_nm(400.0, 5000.0),
        }
    }

    pub fn index_at_um(&self, wavelength_um: f64) -> f64 {
        let l2 = wavelength_um * wavelength_um;
        let n2 = self
            .b
            .iter()
            .zip(&self.c_um2)
            .fold(self.a, |acc, (b, c)| acc + b * l2 / (l2 - c));
        n2.sqrt()
    }

    pub fn beta_unchecked(&self, omega: f64) -> f64 {
        let wavelength_um = 2.0 * PI * SPEED_OF_LIGHT / omega * 1e6;
        self.index_at_um(wavelength_um) * omega / SPEED_OF_LIGHT
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum DispersionModel {
    Polynomial(PolynomialModel),
    Sellmeier(SellmeierModel),
}

impl DispersionModel {
    pub fn window(&self) -> ValidityWindow {
        match self {
            DispersionModel::Polynomial(m) => m.window,
            DispersionModel::Sellmeier(m) => m.window,
        }
    }

    /// β(ω) without the window check, for inner loops whose range was
    /// validated up front.
    #[inline]
    pub fn beta_unchecked(&self, omega: f64) -> f64 {
        match self {
            DispersionModel::Polynomial(m) => m.beta_unchecked(omega),
            DispersionModel::Sellmeier(m) => m.beta_unchecked(omega),
        }
    }

    pub fn beta(&self, omega: f64) -> Result<f64> {
        self.window().check("dispersion", omega)?;
        Ok(self.beta_unchecked(omega))
    }

    /// Checks that β is positive and strictly increasing on `samples` evenly
    /// spaced points of the validity window.
    pub fn validate(&self, samples: usize) -> std::result::Result<(), String> {
        let w = self.window();
        if !(w.omega_min.is_finite() && w.omega_max.is_finite() && w.omega_min > 0.0) {
            return Err("validity window must be finite and positive".into());
        }
        if w.omega_min >= w.omega_max {
            return Err("validity window is empty".into());
        }
        let samples = samples.max(2);
        let mut prev = f64::NEG_INFINITY;
        for k in 0..samples {
            let omega =
                w.omega_min + (w.omega_max - w.omega_min) * k as f64 / (samples - 1) as f64;
            let b = self.beta_unchecked(omega);
            if !(b.is_finite() && b > 0.0) {
                return Err(format!("β({omega:.6e}) = {b} is not positive"));
            }
            if b <= prev {
                return Err(format!(
                    "β is not strictly increasing near ω = {omega:.6e} rad/s"
                ));
            }
            prev = b;
        }
        Ok(())
    }
}

/// Propagation constant of the uncoupled waveguide.
pub fn beta(model: &DispersionModel, omega: f64) -> Result<f64> {
    model.beta(omega)
}

/// Bracketing root finder: alternates secant (regula falsi) steps with
/// bisection so the bracket at least halves every second step.
///
/// Stops once `|f(x)| <= tol`, the bracket is narrower than
/// `tol * max(1, |x|)`, or the bracket endpoints are adjacent floats.
pub fn find_root_monotone<F>(f: F, lo: f64, hi: f64, tol: f64) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    let (mut a, mut b) = (lo, hi);
    let (mut fa, mut fb) = (f(a), f(b));
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if !(fa.is_finite() && fb.is_finite()) || fa.signum() == fb.signum() {
        return Err(Error::Bracket {
            lo,
            hi,
            f_lo: fa,
            f_hi: fb,
        });
    }

    for iter in 0..1000 {
        let (left, right) = if a < b { (a, b) } else { (b, a) };
        let secant = b - fb * (b - a) / (fb - fa);
        let x = if iter % 2 == 0 && secant > left && secant < right {
            secant
        } else {
            left + (right - left) / 2.0
        };
        if x <= left || x >= right {
            break;
        }
        let fx = f(x);
        if fx.abs() <= tol {
            return Ok(x);
        }
        if fx.signum() == fa.signum() {
            a = x;
            fa = fx;
        } else {
            b = x;
            fb = fx;
        }
        if (b - a).abs() < tol * x.abs().max(1.0) {
            break;
        }
    }
    Ok(if fa.abs() <= fb.abs() { a } else { b })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn flat(b0: f64) -> DispersionModel {
        DispersionModel::Polynomial(PolynomialModel {
            omega_ref: 1.2e15,
            b0,
            b1: 0.0,
            b2: 0.0,
            b3: 0.0,
            window: ValidityWindow::new(1.0e15, 1.4e15),
        })
    }

    #[test]
    fn constant_model() {
        let m = flat(1.0e7);
        for w in [1.0e15, 1.1e15, 1.4e15] {
            assert_eq!(beta(&m, w).unwrap(), 1.0e7);
        }
    }

    #[test]
    fn linear_model_is_exact() {
        let m = DispersionModel::Polynomial(PolynomialModel {
            omega_ref: 1.0e15,
            b0: 5.0e6,
            b1: 7.0e-9,
            b2: 0.0,
            b3: 0.0,
            window: ValidityWindow::new(0.5e15, 1.5e15),
        });
        let delta = 2.5e13;
        assert_eq!(beta(&m, 1.0e15 + delta).unwrap(), 5.0e6 + 7.0e-9 * delta);
    }

    #[test]
    fn outside_window_is_a_domain_error() {
        let m = flat(1.0e7);
        match beta(&m, 2.0e15) {
            Err(Error::Domain { lo, hi, .. }) => {
                assert_eq!(lo, 1.0e15);
                assert_eq!(hi, 1.4e15);
            }
            other => panic!("expected domain error, got {other:?}"),
        }
    }

    #[test]
    fn lithium_niobate_at_1516_nm() {
        // n(1.516 µm) and n·2π/λ evaluated independently at 50 digits.
        let m = SellmeierModel::lithium_niobate_extraordinary();
        let n = m.index_at_um(1.516);
        assert!((n - 2.138_550_659_301_300_1).abs() < 1e-13);
        let model = DispersionModel::Sellmeier(m);
        let b = beta(&model, omega_from_nm(1516.0)).unwrap();
        assert!((b - 8_863_397.151_174_898_5).abs() / b < 1e-14);
    }

    #[test]
    fn sellmeier_is_monotone_over_window() {
        let m = DispersionModel::Sellmeier(SellmeierModel::lithium_niobate_extraordinary());
        m.validate(2000).unwrap();
    }

    #[test]
    fn decreasing_model_fails_validation() {
        let m = DispersionModel::Polynomial(PolynomialModel {
            omega_ref: 1.2e15,
            b0: 1.0e7,
            b1: -1.0e-9,
            b2: 0.0,
            b3: 0.0,
            window: ValidityWindow::new(1.0e15, 1.4e15),
        });
        assert!(m.validate(16).is_err());
    }

    #[test]
    fn wavelength_conversion_roundtrip() {
        let w = omega_from_nm(758.0);
        assert!((nm_from_omega(w) - 758.0).abs() < 1e-12);
    }

    #[test]
    fn roots_of_simple_functions() {
        let r = find_root_monotone(|x| x - 2.0, 0.0, 10.0, 1e-12).unwrap();
        assert!((r - 2.0).abs() < 1e-12);
        let r = find_root_monotone(|x| x * x - 2.0, 0.0, 2.0, 1e-12).unwrap();
        assert!((r - std::f64::consts::SQRT_2).abs() < 1e-12);
        // decreasing function, reversed bracket
        let r = find_root_monotone(|x| 3.0 - x, 10.0, 0.0, 1e-12).unwrap();
        assert!((r - 3.0).abs() < 1e-12);
    }

    #[test]
    fn missing_sign_change_is_rejected() {
        let err = find_root_monotone(|x| x * x + 1.0, -1.0, 1.0, 1e-12).unwrap_err();
        assert!(matches!(err, Error::Bracket { .. }));
    }
}
