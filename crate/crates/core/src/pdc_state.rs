//! Two-photon joint spectral amplitudes of the down-converted pair.
//!
//! The state is sampled on an `n × n` grid over (ω_s, ω_i) and stored as four
//! complex channels, one per ordered mode pair. In the supermode basis a
//! channel `(i, j)` carries
//!
//! ```text
//! w_ij · sinc(Δβ_ij L/2) · exp(−i Δβ_ij L/2) · α(ω_s + ω_i)
//! ```
//!
//! with `w = γ` on (S,S), (A,A) and `w = δ` on (S,A), (A,S). The waveguide
//! basis follows from substituting `S† = (1† + 2†)/√2`, `A† = (1† − 2†)/√2`
//! for each photon.

use std::io::Write;

use num_complex::Complex64;

use crate::coupler::{coupling_at, CouplerDesign, Mode};
use crate::dispersion::DispersionModel;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct PumpSpec {
    /// Pump center ω_p0, rad/s.
    pub center: f64,
    /// Width of the Gaussian `α = exp(−(ω_s + ω_i − ω_p0)² / 4σ²)`, rad/s.
    /// This is the rms width of the pump intensity spectrum.
    pub sigma: f64,
    /// Weight of the (S,S) and (A,A) channels.
    pub gamma: Complex64,
    /// Weight of the (S,A) and (A,S) channels.
    pub delta: Complex64,
    pub dispersion: DispersionModel,
}

impl PumpSpec {
    /// Channel weights for a pump confined to waveguide 1.
    pub const DEFAULT_WEIGHT: f64 = 0.5;

    pub fn validate(&self) -> Result<()> {
        if !(self.center > 0.0 && self.center.is_finite()) {
            return Err(Error::config("pump.center", "must be positive"));
        }
        if !(self.sigma > 0.0 && self.sigma.is_finite()) {
            return Err(Error::config("pump.sigma_rad_s", "must be positive"));
        }
        Ok(())
    }

    pub fn recentered(&self, center: f64) -> Self {
        Self {
            center,
            ..self.clone()
        }
    }

    /// Multiplies both channel weights by `e^{iφ}`.
    pub fn with_global_phase(&self, phi: f64) -> Self {
        let p = Complex64::from_polar(1.0, phi);
        Self {
            gamma: self.gamma * p,
            delta: self.delta * p,
            ..self.clone()
        }
    }
}

/// σ for a Gaussian pump whose intensity spectrum has the given FWHM in
/// wavelength, centered at `center_nm`.
pub fn sigma_from_fwhm_nm(fwhm_nm: f64, center_nm: f64) -> f64 {
    let d_omega = 2.0 * std::f64::consts::PI * crate::dispersion::SPEED_OF_LIGHT * fwhm_nm * 1e-9
        / (center_nm * 1e-9).powi(2);
    d_omega / (2.0 * (2.0 * std::f64::consts::LN_2).sqrt())
}

/// Uniform square grid in (ω_s, ω_i).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrequencyGrid {
    pub omega_min: f64,
    pub omega_max: f64,
    pub n: usize,
}

impl FrequencyGrid {
    pub fn new(omega_min: f64, omega_max: f64, n: usize) -> Result<Self> {
        let g = Self {
            omega_min,
            omega_max,
            n,
        };
        g.validate()?;
        Ok(g)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.omega_min < self.omega_max) || !self.omega_min.is_finite() {
            return Err(Error::config("grid", "omega_min must be below omega_max"));
        }
        if self.n < 3 {
            return Err(Error::config("grid.n", "need at least 3 points per axis"));
        }
        Ok(())
    }

    pub fn spacing(&self) -> f64 {
        (self.omega_max - self.omega_min) / (self.n - 1) as f64
    }

    pub fn omega(&self, k: usize) -> f64 {
        if k == self.n - 1 {
            self.omega_max
        } else {
            self.omega_min + k as f64 * self.spacing()
        }
    }

    pub fn omegas(&self) -> Vec<f64> {
        (0..self.n).map(|k| self.omega(k)).collect()
    }

    /// One-dimensional trapezoidal weights.
    pub fn weights(&self) -> Vec<f64> {
        let h = self.spacing();
        (0..self.n)
            .map(|k| if k == 0 || k == self.n - 1 { h / 2.0 } else { h })
            .collect()
    }

    /// Trapezoidal ∬ g over the grid for a row-major `n × n` sample array.
    pub fn integrate(&self, values: impl Fn(usize) -> f64) -> f64 {
        let w = self.weights();
        let n = self.n;
        let mut total = 0.0;
        for (s, ws) in w.iter().enumerate() {
            let mut row = 0.0;
            for (i, wi) in w.iter().enumerate() {
                row += wi * values(s * n + i);
            }
            total += ws * row;
        }
        total
    }
}

/// How to lay a grid around a pump: centered on ω_p0/2, half-width
/// `half_width_sigmas · σ` on each axis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridPolicy {
    pub n: usize,
    pub half_width_sigmas: f64,
}

impl Default for GridPolicy {
    fn default() -> Self {
        Self {
            n: 301,
            half_width_sigmas: 8.0,
        }
    }
}

impl GridPolicy {
    pub fn grid_for(&self, pump: &PumpSpec) -> Result<FrequencyGrid> {
        if !(self.half_width_sigmas > 0.0) {
            return Err(Error::config("grid.half_width_sigmas", "must be positive"));
        }
        let center = pump.center / 2.0;
        let half = self.half_width_sigmas * pump.sigma;
        FrequencyGrid::new(center - half, center + half, self.n)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Basis {
    Eigenmode,
    Waveguide,
}

impl Basis {
    pub fn name(self) -> &'static str {
        match self {
            Basis::Eigenmode => "eigenmode",
            Basis::Waveguide => "waveguide",
        }
    }

    pub fn channel_names(self) -> [&'static str; 4] {
        match self {
            Basis::Eigenmode => ["SS", "SA", "AS", "AA"],
            Basis::Waveguide => ["W11", "W12", "W21", "W22"],
        }
    }
}

/// Ordered (signal, idler) supermode pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ModePair(pub Mode, pub Mode);

impl ModePair {
    pub const SS: ModePair = ModePair(Mode::S, Mode::S);
    pub const SA: ModePair = ModePair(Mode::S, Mode::A);
    pub const AS: ModePair = ModePair(Mode::A, Mode::S);
    pub const AA: ModePair = ModePair(Mode::A, Mode::A);
    pub const ALL: [ModePair; 4] = [Self::SS, Self::SA, Self::AS, Self::AA];

    /// Channel slot in an eigenmode-basis [`TwoPhotonAmplitude`].
    pub fn channel(self) -> usize {
        2 * self.0.index() + self.1.index()
    }

    pub fn parse(name: &str) -> Option<Self> {
        match name.trim().to_ascii_uppercase().as_str() {
            "SS" => Some(Self::SS),
            "SA" => Some(Self::SA),
            "AS" => Some(Self::AS),
            "AA" => Some(Self::AA),
            _ => None,
        }
    }
}

/// Waveguide-basis channel slots: (1,1), (1,2), (2,1), (2,2).
pub const W11: usize = 0;
pub const W12: usize = 1;
pub const W21: usize = 2;
pub const W22: usize = 3;

#[derive(Debug, Clone, PartialEq)]
pub struct TwoPhotonAmplitude {
    pub basis: Basis,
    pub grid: FrequencyGrid,
    /// Row-major `n × n` samples, signal index major, per channel.
    pub amp: [Vec<Complex64>; 4],
    /// Divisor applied to the raw amplitudes to normalize the state.
    pub norm_constant: f64,
}

impl TwoPhotonAmplitude {
    #[inline]
    pub fn at(&self, channel: usize, signal: usize, idler: usize) -> Complex64 {
        self.amp[channel][signal * self.grid.n + idler]
    }

    /// Trapezoidal ∬ |amp|² of one channel.
    pub fn channel_weight(&self, channel: usize) -> f64 {
        let a = &self.amp[channel];
        self.grid.integrate(|k| a[k].norm_sqr())
    }

    /// Trapezoidal ∬ Σ |amp|² over all channels.
    pub fn norm_squared(&self) -> f64 {
        (0..4).map(|c| self.channel_weight(c)).sum()
    }

    fn normalize(&mut self) -> Result<()> {
        let norm2 = self.norm_squared();
        if !(norm2 > 0.0 && norm2.is_finite()) {
            return Err(Error::Degenerate(format!(
                "two-photon amplitude has norm² = {norm2}"
            )));
        }
        let norm = norm2.sqrt();
        let inv = 1.0 / norm;
        for ch in self.amp.iter_mut() {
            for z in ch.iter_mut() {
                *z *= inv;
            }
        }
        self.norm_constant *= norm;
        Ok(())
    }

    /// Writes the four-channel CSV: one row per grid point per channel.
    pub fn write_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "ω_s_rad_s,ω_i_rad_s,channel,re,im")?;
        let names = self.basis.channel_names();
        let omegas = self.grid.omegas();
        let n = self.grid.n;
        for (s, ws) in omegas.iter().enumerate() {
            for (i, wi) in omegas.iter().enumerate() {
                for (c, name) in names.iter().enumerate() {
                    let z = self.amp[c][s * n + i];
                    writeln!(out, "{ws:.16e},{wi:.16e},{name},{:.16e},{:.16e}", z.re, z.im)?;
                }
            }
        }
        Ok(())
    }
}

/// Unnormalized sinc, `sin(x)/x` with `sinc(0) = 1`.
#[inline]
pub fn sinc(x: f64) -> f64 {
    if x == 0.0 {
        1.0
    } else {
        x.sin() / x
    }
}

/// Δβ_ij from precomputed pieces. The coupling corrections are summed first
/// so the (S,A) and (A,S) channels see bit-identical mismatches whenever
/// C(ω_s) = C(ω_i).
#[inline]
pub(crate) fn mismatch_from_parts(
    beta_pump: f64,
    beta0_signal: f64,
    beta0_idler: f64,
    coupling_signal: f64,
    coupling_idler: f64,
    pair: ModePair,
    grating: f64,
) -> f64 {
    let base = beta_pump - beta0_signal - beta0_idler - grating;
    let shift = pair.0.coupling_sign() * coupling_signal + pair.1.coupling_sign() * coupling_idler;
    base - shift
}

/// `Δβ_ij = β_p(ω_s + ω_i) − β_i(ω_s) − β_j(ω_i) − 2π/Λ`, rad/m.
pub fn phase_mismatch(
    design: &CouplerDesign,
    pump: &PumpSpec,
    pair: ModePair,
    omega_s: f64,
    omega_i: f64,
) -> Result<f64> {
    let beta_p = pump.dispersion.beta(omega_s + omega_i)?;
    let beta_s = design.dispersion.beta(omega_s)?;
    let beta_i = design.dispersion.beta(omega_i)?;
    let c_s = coupling_at(&design.coupling, omega_s)?;
    let c_i = coupling_at(&design.coupling, omega_i)?;
    Ok(mismatch_from_parts(
        beta_p,
        beta_s,
        beta_i,
        c_s,
        c_i,
        pair,
        design.grating_wavenumber(),
    ))
}

/// Spectral pump amplitude α(ω_s + ω_i).
pub fn pump_amplitude(pump: &PumpSpec, omega_s: f64, omega_i: f64) -> Complex64 {
    Complex64::new(gaussian(pump, omega_s + omega_i), 0.0)
}

#[inline]
fn gaussian(pump: &PumpSpec, omega_p: f64) -> f64 {
    let d = omega_p - pump.center;
    (-d * d / (4.0 * pump.sigma * pump.sigma)).exp()
}

#[inline]
fn weight(pump: &PumpSpec, pair: ModePair) -> Complex64 {
    if pair.0 == pair.1 {
        pump.gamma
    } else {
        pump.delta
    }
}

#[inline]
fn phase_matching(mismatch: f64, length: f64) -> Complex64 {
    let x = mismatch * length / 2.0;
    Complex64::from_polar(sinc(x), -x)
}

/// Unnormalized amplitude of one channel at one grid point.
pub fn channel_amplitude(
    design: &CouplerDesign,
    pump: &PumpSpec,
    pair: ModePair,
    omega_s: f64,
    omega_i: f64,
) -> Result<Complex64> {
    let dbeta = phase_mismatch(design, pump, pair, omega_s, omega_i)?;
    Ok(weight(pump, pair) * phase_matching(dbeta, design.length) * gaussian(pump, omega_s + omega_i))
}

fn check_grid_domain(design: &CouplerDesign, pump: &PumpSpec, grid: &FrequencyGrid) -> Result<()> {
    let photon = design.dispersion.window();
    photon.check("photon dispersion", grid.omega_min)?;
    photon.check("photon dispersion", grid.omega_max)?;
    let pw = pump.dispersion.window();
    pw.check("pump dispersion", 2.0 * grid.omega_min)?;
    pw.check("pump dispersion", 2.0 * grid.omega_max)?;
    Ok(())
}

/// Fills the four supermode channels on `grid` and normalizes the state.
pub fn build_eigen_state(
    design: &CouplerDesign,
    pump: &PumpSpec,
    grid: &FrequencyGrid,
) -> Result<TwoPhotonAmplitude> {
    design.validate()?;
    pump.validate()?;
    grid.validate()?;
    check_grid_domain(design, pump, grid)?;

    let omegas = grid.omegas();
    let beta0: Vec<f64> = omegas
        .iter()
        .map(|&w| design.dispersion.beta_unchecked(w))
        .collect();
    let coupling = omegas
        .iter()
        .map(|&w| coupling_at(&design.coupling, w))
        .collect::<Result<Vec<f64>>>()?;
    let grating = design.grating_wavenumber();
    let n = grid.n;
    let weights = ModePair::ALL.map(|p| weight(pump, p));

    let fill_row = |s: usize, row: &mut [[Complex64; 4]]| {
        let ws = omegas[s];
        for (i, cell) in row.iter_mut().enumerate() {
            let wi = omegas[i];
            let beta_p = pump.dispersion.beta_unchecked(ws + wi);
            let alpha = gaussian(pump, ws + wi);
            for (c, pair) in ModePair::ALL.iter().enumerate() {
                if weights[c] == Complex64::new(0.0, 0.0) {
                    cell[c] = Complex64::new(0.0, 0.0);
                    continue;
                }
                let dbeta = mismatch_from_parts(
                    beta_p,
                    beta0[s],
                    beta0[i],
                    coupling[s],
                    coupling[i],
                    *pair,
                    grating,
                );
                cell[c] = weights[c] * phase_matching(dbeta, design.length) * alpha;
            }
        }
    };

    let mut points = vec![[Complex64::new(0.0, 0.0); 4]; n * n];
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        points
            .par_chunks_mut(n)
            .enumerate()
            .for_each(|(s, row)| fill_row(s, row));
    }
    #[cfg(not(feature = "parallel"))]
    points
        .chunks_mut(n)
        .enumerate()
        .for_each(|(s, row)| fill_row(s, row));

    let amp = [0, 1, 2, 3].map(|c| points.iter().map(|p| p[c]).collect::<Vec<_>>());
    let mut state = TwoPhotonAmplitude {
        basis: Basis::Eigenmode,
        grid: *grid,
        amp,
        norm_constant: 1.0,
    };
    state.normalize()?;
    Ok(state)
}

/// Supermode → waveguide basis, pointwise:
///
/// ```text
/// (1,1) = ½(SS + SA + AS + AA)    (1,2) = ½(SS − SA + AS − AA)
/// (2,1) = ½(SS + SA − AS − AA)    (2,2) = ½(SS − SA − AS + AA)
/// ```
pub fn to_waveguide_basis(state: &TwoPhotonAmplitude) -> Result<TwoPhotonAmplitude> {
    if state.basis != Basis::Eigenmode {
        return Err(Error::Basis {
            expected: Basis::Eigenmode.name(),
            found: state.basis.name(),
        });
    }
    let len = state.amp[0].len();
    let mut out: [Vec<Complex64>; 4] = std::array::from_fn(|_| Vec::with_capacity(len));
    let [ss, sa, as_, aa] = &state.amp;
    for k in 0..len {
        let (p, q, r, t) = (ss[k], sa[k], as_[k], aa[k]);
        out[W11].push(0.5 * (p + q + r + t));
        out[W12].push(0.5 * (p - q + r - t));
        out[W21].push(0.5 * (p + q - r - t));
        out[W22].push(0.5 * (p - q - r + t));
    }
    Ok(TwoPhotonAmplitude {
        basis: Basis::Waveguide,
        grid: state.grid,
        amp: out,
        norm_constant: state.norm_constant,
    })
}

/// Zeroes every supermode channel not in `keep` and renormalizes.
pub fn restrict_channels(state: &TwoPhotonAmplitude, keep: &[ModePair]) -> Result<TwoPhotonAmplitude> {
    if state.basis != Basis::Eigenmode {
        return Err(Error::Basis {
            expected: Basis::Eigenmode.name(),
            found: state.basis.name(),
        });
    }
    if keep.is_empty() {
        return Err(Error::Degenerate("no channels kept".into()));
    }
    let mut out = state.clone();
    for pair in ModePair::ALL {
        if !keep.contains(&pair) {
            out.amp[pair.channel()].iter_mut().for_each(|z| *z = Complex64::new(0.0, 0.0));
        }
    }
    out.normalize()?;
    Ok(out)
}
