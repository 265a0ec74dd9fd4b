mod common;

use std::f64::consts::PI;

use pdc_coupler::coupler::CouplingModel;
use pdc_coupler::design_search::{
    evaluate_candidate, objective, optimize, solve_poling_period, write_trace_csv, Candidate,
    DesignSpace, INFEASIBLE_FIDELITY, POLING_RESIDUAL_TOLERANCE, TRACE_CSV_HEADER,
};
use pdc_coupler::dispersion::{DispersionModel, PolynomialModel, ValidityWindow};
use pdc_coupler::observables::degenerate_mismatch;
use pdc_coupler::pdc_state::{phase_mismatch, ModePair};
use pdc_coupler::Error;
use rand::Rng;

fn space() -> DesignSpace {
    common::default_sim().search.expect("bundled config has a search table")
}

fn constant(b0: f64) -> DispersionModel {
    DispersionModel::Polynomial(PolynomialModel {
        omega_ref: 1.0e15,
        b0,
        b1: 0.0,
        b2: 0.0,
        b3: 0.0,
        window: ValidityWindow::new(0.5e15, 3.0e15),
    })
}

#[test]
fn poling_period_closed_form() {
    let (bp, b0) = (2.5e7, 1.0e7);
    // C must be positive, so approach C → 0 from above.
    let period = solve_poling_period(
        &constant(b0),
        &constant(bp),
        &CouplingModel::Constant { c: 1e-9 },
        1.2e15,
    )
    .unwrap();
    let expected = 2.0 * PI / (bp - 2.0 * b0);
    assert!((period - expected).abs() <= 1e-15 * expected);
}

#[test]
fn poling_period_ignores_flat_coupling() {
    let sim = common::default_sim();
    let w = sim.pump.center / 2.0;
    let periods: Vec<f64> = [200.0, 400.0, 800.0, 1000.0]
        .iter()
        .map(|&c| {
            solve_poling_period(&sim.design.dispersion, &sim.pump.dispersion, &CouplingModel::Constant { c }, w)
                .unwrap()
        })
        .collect();
    assert!(periods.iter().all(|p| *p == periods[0]), "{periods:?}");
    assert!((periods[0] - sim.design.poling_period).abs() <= 1e-12 * periods[0]);
}

#[test]
fn solved_period_zeroes_the_sinc_argument() {
    let sim = common::default_sim();
    let w = sim.pump.center / 2.0;
    let mut design = sim.design.clone();
    design.poling_period =
        solve_poling_period(&design.dispersion, &sim.pump.dispersion, &design.coupling, w).unwrap();
    let d = phase_mismatch(&design, &sim.pump, ModePair::SA, w, w).unwrap();
    assert!((d * design.length / 2.0).abs() <= 1e-9 * design.length / 2.0, "{d:e}");
}

#[test]
fn unreachable_matching_is_infeasible() {
    let err = solve_poling_period(
        &constant(1.0e7),
        &constant(1.5e7),
        &CouplingModel::Constant { c: 500.0 },
        1.2e15,
    )
    .unwrap_err();
    assert!(matches!(err, Error::Infeasible(_)), "{err:?}");
}

fn optimized_candidate() -> Candidate {
    let sim = common::optimized_sim();
    let CouplingModel::Constant { c } = sim.design.coupling else {
        panic!("optimized design uses constant coupling");
    };
    Candidate {
        length: sim.design.length,
        coupling: c,
        sigma: sim.pump.sigma,
    }
}

#[test]
fn objective_reproduces_recorded_design() {
    let f = objective(&space(), &optimized_candidate());
    assert!((f - common::OPTIMIZED_FIDELITY).abs() <= 1e-12, "{f}");
    assert!(f >= 0.93);
}

#[test]
fn objective_rewards_a_longer_coupler() {
    let base = Candidate {
        length: 0.01,
        coupling: 500.0,
        sigma: 1.0e12,
    };
    let longer = Candidate {
        length: 0.02,
        ..base
    };
    let s = space();
    assert!(objective(&s, &longer) > objective(&s, &base));
}

#[test]
fn objective_stays_in_range() {
    let s = space();
    let mut rng = common::rng(7);
    for _ in 0..12 {
        let c = Candidate {
            length: rng.gen_range(s.length[0]..s.length[1]),
            coupling: rng.gen_range(s.coupling[0]..s.coupling[1]),
            sigma: rng.gen_range(s.sigma[0]..s.sigma[1]),
        };
        let f = objective(&s, &c);
        assert!((-1.0..=1.0).contains(&f), "{c:?}: {f}");
    }
}

#[test]
fn out_of_bounds_candidate_gets_sentinel() {
    let c = Candidate {
        length: 1.0,
        coupling: 500.0,
        sigma: 1.0e12,
    };
    let e = evaluate_candidate(&space(), &c);
    assert_eq!(e.fidelity, INFEASIBLE_FIDELITY);
    assert!(e.poling_period.is_nan());
}

#[test]
fn weight_magnitude_is_absorbed_by_normalization() {
    let s = space();
    let mut scaled = s.clone();
    scaled.gamma *= 3.7;
    scaled.delta *= 3.7;
    let c = optimized_candidate();
    assert!((objective(&s, &c) - objective(&scaled, &c)).abs() <= 1e-12);
}

#[test]
fn search_is_seeded_and_bookkept() {
    let s = space();
    let a = optimize(&s, 60, 11).unwrap();
    let b = optimize(&s, 60, 11).unwrap();
    assert_eq!(a, b);
    let c = optimize(&s, 60, 12).unwrap();
    assert_ne!(a.trace, c.trace);

    assert!(a.trace.len() <= 60);
    let running = a.running_best();
    assert!(running.windows(2).all(|w| w[1] >= w[0]));
    assert_eq!(*running.last().unwrap(), a.best_fidelity);
    assert!(a.trace.iter().enumerate().all(|(k, e)| e.index == k));

    for e in a.trace.iter().filter(|e| e.fidelity != INFEASIBLE_FIDELITY) {
        let (design, pump) = s.realize(&e.candidate).unwrap();
        assert_eq!(design.poling_period, e.poling_period);
        let r = degenerate_mismatch(&design, &pump, ModePair::SA, pump.center).unwrap();
        assert!(r.abs() <= POLING_RESIDUAL_TOLERANCE);
    }

    let mut buf = Vec::new();
    write_trace_csv(&a.trace, &mut buf).unwrap();
    let text = String::from_utf8(buf).unwrap();
    assert_eq!(text.lines().next(), Some(TRACE_CSV_HEADER));
    assert_eq!(text.lines().count(), a.trace.len() + 1);
}

#[test]
fn search_beats_a_contained_design() {
    let s = space();
    let default = Candidate {
        length: 0.01,
        coupling: 500.0,
        sigma: 1.0e12,
    };
    assert!(s.contains(&default));
    let result = optimize(&s, 80, 3).unwrap();
    assert!(result.best_fidelity >= objective(&s, &default));
}

#[test]
fn tiny_budget_is_rejected() {
    assert!(matches!(optimize(&space(), 9, 0), Err(Error::Config { .. })));
}
