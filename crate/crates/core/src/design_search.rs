//! Derivative-free search over (L, C, σ) for the highest N00N fidelity at the
//! cross-pair pump.
//!
//! The search seeds with a Latin hypercube and then refines the best seed
//! with a Nelder–Mead simplex in the unit cube, projecting trial points back
//! onto the bounds.

use std::cmp::Ordering;
use std::io::Write;

use num_complex::Complex64;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::coupler::{coupling_at, CouplerDesign, CouplingModel};
use crate::dispersion::DispersionModel;
use crate::error::{Error, Result};
use crate::observables::{degenerate_mismatch, evaluate_at_cross_pump};
use crate::pdc_state::{mismatch_from_parts, GridPolicy, ModePair, PumpSpec};

/// Largest accepted |Δβ_SA| at the degenerate point after solving for Λ.
pub const POLING_RESIDUAL_TOLERANCE: f64 = 1e-9;

/// Fidelity reported for candidates that cannot be built.
pub const INFEASIBLE_FIDELITY: f64 = -1.0;

/// Poling period that phase-matches the (S,A) channel for degenerate photons
/// at `omega_degenerate` with the pump at twice that frequency.
///
/// The coupling enters β_S + β_A with opposite signs, so Λ does not depend on
/// C for frequency-flat coupling.
pub fn solve_poling_period(
    dispersion: &DispersionModel,
    pump_dispersion: &DispersionModel,
    coupling: &CouplingModel,
    omega_degenerate: f64,
) -> Result<f64> {
    let infeasible = |e: Error| Error::Infeasible(e.to_string());
    let beta_p = pump_dispersion.beta(2.0 * omega_degenerate).map_err(infeasible)?;
    let beta0 = dispersion.beta(omega_degenerate).map_err(infeasible)?;
    let c = coupling_at(coupling, omega_degenerate)?;
    let grating = mismatch_from_parts(beta_p, beta0, beta0, c, c, ModePair::SA, 0.0);
    if !(grating > 0.0 && grating.is_finite()) {
        return Err(Error::Infeasible(format!(
            "mismatch without grating is {grating} rad/m; no positive poling period exists"
        )));
    }
    let period = 2.0 * std::f64::consts::PI / grating;
    let residual = mismatch_from_parts(
        beta_p,
        beta0,
        beta0,
        c,
        c,
        ModePair::SA,
        2.0 * std::f64::consts::PI / period,
    );
    if residual.abs() > POLING_RESIDUAL_TOLERANCE {
        return Err(Error::Infeasible(format!(
            "poling period residual {residual:e} rad/m exceeds tolerance"
        )));
    }
    Ok(period)
}

/// A point of the design space.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Candidate {
    /// m
    pub length: f64,
    /// Coupling at the degenerate frequency, rad/m.
    pub coupling: f64,
    /// rad/s
    pub sigma: f64,
}

impl Candidate {
    fn lex_cmp(&self, other: &Self) -> Ordering {
        self.length
            .total_cmp(&other.length)
            .then(self.coupling.total_cmp(&other.coupling))
            .then(self.sigma.total_cmp(&other.sigma))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DesignSpace {
    pub length: [f64; 2],
    pub coupling: [f64; 2],
    pub sigma: [f64; 2],
    pub omega_degenerate: f64,
    pub dispersion: DispersionModel,
    pub pump_dispersion: DispersionModel,
    /// Shape of C(ω); each candidate rescales it to its own C at the
    /// degenerate frequency.
    pub coupling_template: CouplingModel,
    pub gamma: Complex64,
    pub delta: Complex64,
    pub grid: GridPolicy,
}

impl DesignSpace {
    pub fn validate(&self) -> Result<()> {
        for (key, [lo, hi]) in [
            ("search.length_m", self.length),
            ("search.coupling_rad_m", self.coupling),
            ("search.sigma_rad_s", self.sigma),
        ] {
            if !(lo > 0.0 && lo < hi && hi.is_finite()) {
                return Err(Error::config(
                    key,
                    format!("bounds [{lo}, {hi}] must be positive and increasing"),
                ));
            }
        }
        Ok(())
    }

    pub fn contains(&self, c: &Candidate) -> bool {
        let inside = |v: f64, [lo, hi]: [f64; 2]| v >= lo && v <= hi;
        inside(c.length, self.length) && inside(c.coupling, self.coupling) && inside(c.sigma, self.sigma)
    }

    fn from_unit(&self, u: [f64; 3]) -> Candidate {
        let map = |t: f64, [lo, hi]: [f64; 2]| {
            let t = t.clamp(0.0, 1.0);
            if t == 1.0 {
                hi
            } else {
                lo + t * (hi - lo)
            }
        };
        Candidate {
            length: map(u[0], self.length),
            coupling: map(u[1], self.coupling),
            sigma: map(u[2], self.sigma),
        }
    }

    /// Coupling model whose value at the degenerate frequency is `c`.
    pub fn coupling_for(&self, c: f64) -> Result<CouplingModel> {
        let reference = coupling_at(&self.coupling_template, self.omega_degenerate)?;
        Ok(self.coupling_template.scaled(c / reference))
    }

    /// Full design and pump for a candidate, with Λ solved.
    pub fn realize(&self, c: &Candidate) -> Result<(CouplerDesign, PumpSpec)> {
        let coupling = self.coupling_for(c.coupling)?;
        let poling_period = solve_poling_period(
            &self.dispersion,
            &self.pump_dispersion,
            &coupling,
            self.omega_degenerate,
        )?;
        let design = CouplerDesign {
            length: c.length,
            coupling,
            poling_period,
            dispersion: self.dispersion.clone(),
        };
        let pump = PumpSpec {
            center: 2.0 * self.omega_degenerate,
            sigma: c.sigma,
            gamma: self.gamma,
            delta: self.delta,
            dispersion: self.pump_dispersion.clone(),
        };
        Ok((design, pump))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Evaluation {
    pub fidelity: f64,
    /// NaN when the candidate was infeasible.
    pub poling_period: f64,
}

fn try_objective(space: &DesignSpace, c: &Candidate) -> Result<Evaluation> {
    if !space.contains(c) {
        return Err(Error::Infeasible("candidate outside the search bounds".into()));
    }
    let (design, pump) = space.realize(c)?;
    let residual = degenerate_mismatch(&design, &pump, ModePair::SA, pump.center)?;
    if residual.abs() > POLING_RESIDUAL_TOLERANCE {
        return Err(Error::Infeasible(format!(
            "(S,A) mismatch {residual:e} rad/m at the degenerate point"
        )));
    }
    let report = evaluate_at_cross_pump(&design, &pump, &space.grid, None)?;
    Ok(Evaluation {
        fidelity: report.fidelity,
        poling_period: design.poling_period,
    })
}

/// Fidelity at the cross-pair pump, or [`INFEASIBLE_FIDELITY`] when the
/// candidate cannot be built.
pub fn objective(space: &DesignSpace, candidate: &Candidate) -> f64 {
    evaluate_candidate(space, candidate).fidelity
}

pub fn evaluate_candidate(space: &DesignSpace, candidate: &Candidate) -> Evaluation {
    match try_objective(space, candidate) {
        Ok(e) => e,
        Err(e) => {
            log::warn!("infeasible candidate {candidate:?}: {e}");
            Evaluation {
                fidelity: INFEASIBLE_FIDELITY,
                poling_period: f64::NAN,
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceEntry {
    pub index: usize,
    pub candidate: Candidate,
    pub poling_period: f64,
    pub fidelity: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SearchResult {
    pub best: Candidate,
    pub best_fidelity: f64,
    pub best_poling_period: f64,
    pub trace: Vec<TraceEntry>,
}

impl SearchResult {
    /// Running maximum of the fidelity along the trace.
    pub fn running_best(&self) -> Vec<f64> {
        self.trace
            .iter()
            .scan(f64::NEG_INFINITY, |best, e| {
                *best = best.max(e.fidelity);
                Some(*best)
            })
            .collect()
    }
}

pub const TRACE_CSV_HEADER: &str = "eval_index,L_m,C_rad_m,sigma_rad_s,poling_period_m,fidelity";

pub fn write_trace_csv<W: Write>(trace: &[TraceEntry], mut out: W) -> std::io::Result<()> {
    writeln!(out, "{TRACE_CSV_HEADER}")?;
    for e in trace {
        writeln!(
            out,
            "{},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}",
            e.index,
            e.candidate.length,
            e.candidate.coupling,
            e.candidate.sigma,
            e.poling_period,
            e.fidelity
        )?;
    }
    Ok(())
}

const REFLECTION: f64 = 1.0;
const EXPANSION: f64 = 2.0;
const CONTRACTION: f64 = 0.5;
const SHRINK: f64 = 0.5;
const INITIAL_STEP: f64 = 0.1;

struct Evaluator<'a> {
    space: &'a DesignSpace,
    budget: usize,
    trace: Vec<TraceEntry>,
}

impl Evaluator<'_> {
    fn remaining(&self) -> usize {
        self.budget - self.trace.len()
    }

    fn record(&mut self, candidate: Candidate, eval: Evaluation) -> f64 {
        self.trace.push(TraceEntry {
            index: self.trace.len(),
            candidate,
            poling_period: eval.poling_period,
            fidelity: eval.fidelity,
        });
        eval.fidelity
    }

    fn eval_unit(&mut self, u: [f64; 3]) -> Option<Vertex> {
        if self.remaining() == 0 {
            return None;
        }
        let u = u.map(|t| t.clamp(0.0, 1.0));
        let candidate = self.space.from_unit(u);
        let eval = evaluate_candidate(self.space, &candidate);
        let fidelity = self.record(candidate, eval);
        Some(Vertex {
            u,
            candidate,
            fidelity,
        })
    }
}

#[derive(Debug, Clone, Copy)]
struct Vertex {
    u: [f64; 3],
    candidate: Candidate,
    fidelity: f64,
}

/// Higher fidelity first; equal fidelities ordered lexicographically by
/// (L, C, σ).
fn rank(a: &Vertex, b: &Vertex) -> Ordering {
    b.fidelity
        .total_cmp(&a.fidelity)
        .then_with(|| a.candidate.lex_cmp(&b.candidate))
}

fn latin_hypercube(points: usize, seed: u64) -> Vec<[f64; 3]> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut strata: [Vec<usize>; 3] = std::array::from_fn(|_| (0..points).collect());
    for s in strata.iter_mut() {
        s.shuffle(&mut rng);
    }
    (0..points)
        .map(|k| {
            std::array::from_fn(|d| (strata[d][k] as f64 + rng.gen::<f64>()) / points as f64)
        })
        .collect()
}

fn lerp(a: &[f64; 3], b: &[f64; 3], t: f64) -> [f64; 3] {
    std::array::from_fn(|d| a[d] + t * (b[d] - a[d]))
}

/// Latin-hypercube seeding followed by Nelder–Mead from the best seed.
/// Deterministic for a given `seed`; uses exactly `budget` evaluations unless
/// the simplex collapses first.
pub fn optimize(space: &DesignSpace, budget: usize, seed: u64) -> Result<SearchResult> {
    space.validate()?;
    if budget < 10 {
        return Err(Error::config("budget", "need at least 10 evaluations"));
    }
    let seeds = (budget / 4).clamp(4, 40);
    let seed_points = latin_hypercube(seeds, seed);

    let mut ev = Evaluator {
        space,
        budget,
        trace: Vec::with_capacity(budget),
    };

    let seed_candidates: Vec<Candidate> = seed_points.iter().map(|u| space.from_unit(*u)).collect();
    #[cfg(feature = "parallel")]
    let seed_evals: Vec<Evaluation> = {
        use rayon::prelude::*;
        seed_candidates
            .par_iter()
            .map(|c| evaluate_candidate(space, c))
            .collect()
    };
    #[cfg(not(feature = "parallel"))]
    let seed_evals: Vec<Evaluation> = seed_candidates
        .iter()
        .map(|c| evaluate_candidate(space, c))
        .collect();

    let mut best_seed: Option<Vertex> = None;
    for ((u, c), e) in seed_points.iter().zip(&seed_candidates).zip(seed_evals) {
        let fidelity = ev.record(*c, e);
        let v = Vertex {
            u: *u,
            candidate: *c,
            fidelity,
        };
        if best_seed.map_or(true, |b| rank(&v, &b) == Ordering::Less) {
            best_seed = Some(v);
        }
    }
    let start = best_seed.expect("at least one seed");

    // initial simplex around the best seed
    let mut simplex = vec![start];
    for d in 0..3 {
        let mut u = start.u;
        u[d] = if u[d] + INITIAL_STEP <= 1.0 {
            u[d] + INITIAL_STEP
        } else {
            u[d] - INITIAL_STEP
        };
        match ev.eval_unit(u) {
            Some(v) => simplex.push(v),
            None => break,
        }
    }

    if simplex.len() == 4 {
        nelder_mead(&mut ev, &mut simplex);
    }

    let trace = ev.trace;
    let best = trace
        .iter()
        .filter(|e| e.poling_period.is_finite())
        .min_by(|a, b| {
            b.fidelity
                .total_cmp(&a.fidelity)
                .then_with(|| a.candidate.lex_cmp(&b.candidate))
        })
        .copied();
    match best {
        Some(b) => Ok(SearchResult {
            best: b.candidate,
            best_fidelity: b.fidelity,
            best_poling_period: b.poling_period,
            trace,
        }),
        _ => Err(Error::Infeasible("every evaluated candidate was infeasible".into())),
    }
}

fn nelder_mead(ev: &mut Evaluator<'_>, simplex: &mut [Vertex]) {
    loop {
        simplex.sort_by(rank);
        let anchor = simplex[0].u;
        let diameter = simplex[1..]
            .iter()
            .flat_map(|v| (0..3).map(move |d| (v.u[d] - anchor[d]).abs()))
            .fold(0.0, f64::max);
        if diameter < 1e-10 {
            return;
        }
        let worst = simplex[3];
        let centroid: [f64; 3] =
            std::array::from_fn(|d| simplex[..3].iter().map(|v| v.u[d]).sum::<f64>() / 3.0);
        let away = |t: f64| lerp(&centroid, &worst.u, -t);

        let Some(reflected) = ev.eval_unit(away(REFLECTION)) else {
            return;
        };
        if rank(&reflected, &simplex[0]) == Ordering::Less {
            let Some(expanded) = ev.eval_unit(away(REFLECTION * EXPANSION)) else {
                simplex[3] = reflected;
                return;
            };
            simplex[3] = if rank(&expanded, &reflected) == Ordering::Less {
                expanded
            } else {
                reflected
            };
            continue;
        }
        if rank(&reflected, &simplex[2]) == Ordering::Less {
            simplex[3] = reflected;
            continue;
        }
        // contraction: outside if the reflection beat the worst vertex
        let outside = rank(&reflected, &worst) == Ordering::Less;
        let target = if outside { away(REFLECTION * CONTRACTION) } else { away(-CONTRACTION) };
        let Some(contracted) = ev.eval_unit(target) else {
            return;
        };
        let reference = if outside { reflected } else { worst };
        if rank(&contracted, &reference) == Ordering::Less {
            simplex[3] = contracted;
            continue;
        }
        let best = simplex[0];
        for v in simplex[1..].iter_mut() {
            let Some(shrunk) = ev.eval_unit(lerp(&best.u, &v.u, SHRINK)) else {
                return;
            };
            *v = shrunk;
        }
    }
}
