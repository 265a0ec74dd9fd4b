//! Coincidence probabilities, the N00N fidelity, and pump-wavelength scans.

use std::io::Write;

use crate::coupler::CouplerDesign;
use crate::dispersion::{find_root_monotone, nm_from_omega, omega_from_nm};
use crate::error::{Error, Result};
use crate::pdc_state::{
    build_eigen_state, mismatch_from_parts, restrict_channels, to_waveguide_basis, Basis,
    GridPolicy, ModePair, PumpSpec, TwoPhotonAmplitude, W11, W12, W21, W22,
};

/// Largest tolerated deviation of the state norm from one.
pub const NORM_TOLERANCE: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoincidenceProbabilities {
    /// Both photons in waveguide 1 (pumped).
    pub p11: f64,
    /// Both photons in waveguide 2.
    pub p22: f64,
    /// One photon in each waveguide, both orderings.
    pub p12: f64,
}

impl CoincidenceProbabilities {
    pub fn total(&self) -> f64 {
        self.p11 + self.p22 + self.p12
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScanRecord {
    pub pump_wavelength_nm: f64,
    pub probs: CoincidenceProbabilities,
    pub fidelity: f64,
}

pub fn coincidence_probabilities(state: &TwoPhotonAmplitude) -> Result<CoincidenceProbabilities> {
    if state.basis != Basis::Waveguide {
        return Err(Error::Basis {
            expected: Basis::Waveguide.name(),
            found: state.basis.name(),
        });
    }
    let p11 = state.channel_weight(W11);
    let p22 = state.channel_weight(W22);
    let p12 = state.channel_weight(W12) + state.channel_weight(W21);
    let total = p11 + p22 + p12;
    if !((total - 1.0).abs() <= NORM_TOLERANCE) {
        return Err(Error::Contract(format!(
            "state is not normalized (norm² = {total})"
        )));
    }
    Ok(CoincidenceProbabilities { p11, p22, p12 })
}

/// `F = (p11 + p22 − p12) / (p11 + p22 + p12)`.
pub fn fidelity(p: &CoincidenceProbabilities) -> Result<f64> {
    let den = p.total();
    if !(den > 0.0) {
        return Err(Error::Degenerate(
            "all coincidence probabilities vanish".into(),
        ));
    }
    Ok((p.p11 + p.p22 - p.p12) / den)
}

/// Probabilities and fidelity of the full four-channel state, optionally
/// restricted to a subset of supermode channels.
pub fn evaluate(
    design: &CouplerDesign,
    pump: &PumpSpec,
    policy: &GridPolicy,
    keep: Option<&[ModePair]>,
) -> Result<(CoincidenceProbabilities, f64)> {
    let grid = policy.grid_for(pump)?;
    let mut state = build_eigen_state(design, pump, &grid)?;
    if let Some(keep) = keep {
        state = restrict_channels(&state, keep)?;
    }
    let wg = to_waveguide_basis(&state)?;
    let probs = coincidence_probabilities(&wg)?;
    let f = fidelity(&probs)?;
    Ok((probs, f))
}

/// Δβ of `pair` on the degeneracy line ω_s = ω_i = ω_p/2.
pub fn degenerate_mismatch(
    design: &CouplerDesign,
    pump: &PumpSpec,
    pair: ModePair,
    omega_p: f64,
) -> Result<f64> {
    let w = omega_p / 2.0;
    let beta_p = pump.dispersion.beta(omega_p)?;
    let beta0 = design.dispersion.beta(w)?;
    let c = crate::coupler::coupling_at(&design.coupling, w)?;
    Ok(mismatch_from_parts(
        beta_p,
        beta0,
        beta0,
        c,
        c,
        pair,
        design.grating_wavenumber(),
    ))
}

/// Pump frequency at which `pair` is phase matched for degenerate photons,
/// searched outward from `guess`.
pub fn matching_pump_frequency(
    design: &CouplerDesign,
    pump: &PumpSpec,
    pair: ModePair,
    guess: f64,
) -> Result<f64> {
    let pump_window = pump.dispersion.window();
    let photon_window = design.dispersion.window();
    let lo_limit = pump_window.omega_min.max(2.0 * photon_window.omega_min);
    let hi_limit = pump_window.omega_max.min(2.0 * photon_window.omega_max);
    let f = |w: f64| {
        degenerate_mismatch(design, pump, pair, w).unwrap_or(f64::NAN)
    };
    let mut rel = 1e-4;
    while rel < 1.0 {
        let lo = (guess * (1.0 - rel)).max(lo_limit);
        let hi = (guess * (1.0 + rel)).min(hi_limit);
        let (flo, fhi) = (f(lo), f(hi));
        if flo.is_finite() && fhi.is_finite() && flo.signum() != fhi.signum() {
            return find_root_monotone(f, lo, hi, 1e-12);
        }
        if lo <= lo_limit && hi >= hi_limit {
            break;
        }
        rel *= 2.0;
    }
    Err(Error::Infeasible(format!(
        "no pump frequency phase-matches the {:?}{:?} channel inside the dispersion windows",
        pair.0, pair.1
    )))
}

/// Evaluation at the pump frequency where the (S,A)/(A,S) channels are
/// phase matched for degenerate photons.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CrossPumpReport {
    pub pump_omega: f64,
    pub pump_wavelength_nm: f64,
    pub probs: CoincidenceProbabilities,
    pub fidelity: f64,
}

pub fn evaluate_at_cross_pump(
    design: &CouplerDesign,
    pump: &PumpSpec,
    policy: &GridPolicy,
    keep: Option<&[ModePair]>,
) -> Result<CrossPumpReport> {
    let omega = matching_pump_frequency(design, pump, ModePair::SA, pump.center)?;
    let (probs, fidelity) = evaluate(design, &pump.recentered(omega), policy, keep)?;
    Ok(CrossPumpReport {
        pump_omega: omega,
        pump_wavelength_nm: nm_from_omega(omega),
        probs,
        fidelity,
    })
}

/// Pump wavelengths of a scan, evenly spaced in wavelength.
pub fn scan_wavelengths(start_nm: f64, stop_nm: f64, steps: usize) -> Vec<f64> {
    (0..steps)
        .map(|k| {
            if k == steps - 1 {
                stop_nm
            } else {
                start_nm + (stop_nm - start_nm) * k as f64 / (steps - 1) as f64
            }
        })
        .collect()
}

/// Re-centers the pump (and the grid with it) at each wavelength and
/// evaluates the full state.
pub fn pump_scan(
    design: &CouplerDesign,
    pump_template: &PumpSpec,
    policy: &GridPolicy,
    start_nm: f64,
    stop_nm: f64,
    steps: usize,
) -> Result<Vec<ScanRecord>> {
    if !(start_nm < stop_nm) {
        return Err(Error::config("scan", "start wavelength must be below stop wavelength"));
    }
    if steps < 2 {
        return Err(Error::config("scan.steps", "need at least 2 samples"));
    }
    let sample = |lambda: f64| -> Result<ScanRecord> {
        let pump = pump_template.recentered(omega_from_nm(lambda));
        evaluate(design, &pump, policy, None)
            .map(|(probs, fidelity)| ScanRecord {
                pump_wavelength_nm: lambda,
                probs,
                fidelity,
            })
            .map_err(|e| Error::AtWavelength {
                wavelength_nm: lambda,
                source: Box::new(e),
            })
    };
    let wavelengths = scan_wavelengths(start_nm, stop_nm, steps);
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        // collect per sample first so the reported error is the shortest wavelength's
        let results: Vec<Result<ScanRecord>> = wavelengths.par_iter().map(|&l| sample(l)).collect();
        results.into_iter().collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        wavelengths.iter().map(|&l| sample(l)).collect()
    }
}

pub const SCAN_CSV_HEADER: &str = "pump_wavelength_nm,p_coinc_wg1,p_coinc_wg2,p_coinc_cross,fidelity";

pub fn write_scan_csv<W: Write>(records: &[ScanRecord], mut out: W) -> std::io::Result<()> {
    writeln!(out, "{SCAN_CSV_HEADER}")?;
    for r in records {
        writeln!(
            out,
            "{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}",
            r.pump_wavelength_nm, r.probs.p11, r.probs.p22, r.probs.p12, r.fidelity
        )?;
    }
    Ok(())
}

/// Peaks of a scan located the simple way: split at the p12 local minimum
/// closest to `split_nm`, then take the discrete argmax of p12 on each side.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScanMorphology {
    pub minimum_index: usize,
    pub left_peak_index: usize,
    pub right_peak_index: usize,
}

pub fn scan_morphology(records: &[ScanRecord], split_nm: f64) -> Option<ScanMorphology> {
    let p12: Vec<f64> = records.iter().map(|r| r.probs.p12).collect();
    let minimum_index = (1..p12.len().saturating_sub(1))
        .filter(|&k| p12[k] <= p12[k - 1] && p12[k] <= p12[k + 1])
        .min_by(|&a, &b| {
            let da = (records[a].pump_wavelength_nm - split_nm).abs();
            let db = (records[b].pump_wavelength_nm - split_nm).abs();
            da.total_cmp(&db)
        })?;
    let argmax = |range: std::ops::Range<usize>| {
        range.max_by(|&a, &b| p12[a].total_cmp(&p12[b]))
    };
    let left_peak_index = argmax(0..minimum_index)?;
    let right_peak_index = argmax(minimum_index + 1..p12.len())?;
    Some(ScanMorphology {
        minimum_index,
        left_peak_index,
        right_peak_index,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConvergenceRow {
    pub n: usize,
    pub fidelity: f64,
    /// |F(n) − F(previous n)|.
    pub delta: Option<f64>,
}

/// Fidelity at the configured pump for each grid size in `n_ladder`.
pub fn convergence_check(
    design: &CouplerDesign,
    pump: &PumpSpec,
    half_width_sigmas: f64,
    n_ladder: &[usize],
) -> Result<Vec<ConvergenceRow>> {
    if n_ladder.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::config("n_ladder", "grid sizes must be increasing"));
    }
    let mut rows: Vec<ConvergenceRow> = Vec::with_capacity(n_ladder.len());
    for &n in n_ladder {
        let policy = GridPolicy {
            n,
            half_width_sigmas,
        };
        let (_, f) = evaluate(design, pump, &policy, None)?;
        let delta = rows.last().map(|r| (f - r.fidelity).abs());
        rows.push(ConvergenceRow {
            n,
            fidelity: f,
            delta,
        });
    }
    Ok(rows)
}
