mod common;

use common::{reference, rel};
use macrocoherence::analytic::PhysicalParams;
use macrocoherence::dynamics::IntegratorConfig;
use macrocoherence::protocol::{run_single, run_thermal, sweep, SweepAxis, SweepMode};
use macrocoherence::states::CoherentLabel;
use macrocoherence::Error;

fn origin() -> CoherentLabel {
    CoherentLabel::new(0.0, 0.0)
}

#[test]
fn no_damping_means_no_decoherence() {
    let params = PhysicalParams { gamma: 0.0, ..reference(0.5) };
    let space = params.space(48).unwrap();
    let r = run_single(CoherentLabel::new(0.4, 0.1), &params, &space, &IntegratorConfig::default()).unwrap();
    assert!(r.c_full >= 1.0 - 1e-5);
    assert!(r.d_eff.abs() < 1e-5);
    assert!(r.revival_fidelity >= 1.0 - 1e-5);
    assert_eq!(r.d01_analytic, 0.0);
    assert!(r.relative_discrepancy.is_none());
}

#[test]
fn no_coupling_leaves_the_qubit_untouched() {
    let params = PhysicalParams { epsilon: 0.0, ..reference(0.5) };
    let space = params.space(32).unwrap();
    let r = run_single(CoherentLabel::new(0.5, 0.0), &params, &space, &IntegratorConfig::default()).unwrap();
    assert!((r.c_full - 1.0).abs() < 1e-6, "{}", r.c_full);
    assert!((r.c_half - 1.0).abs() < 1e-6);
    assert_eq!(r.branch_separation, 0.0);
}

#[test]
fn reference_point_exponent_matches_analytic() {
    let params = reference(0.5);
    let space = params.space(64).unwrap();
    let r = run_single(origin(), &params, &space, &IntegratorConfig::default()).unwrap();
    assert!(rel(r.d_eff, 0.5) <= 0.15, "d_eff {}", r.d_eff);
    assert!(r.c_full >= 0.0 && r.c_full <= 1.0);
    assert_eq!(r.relative_discrepancy, Some(r.d_eff / 0.5 - 1.0));
    assert!((r.branch_separation - 2.0).abs() < 1e-12);
}

#[test]
fn repeated_runs_are_bitwise_identical() {
    let params = reference(0.25);
    let space = params.space(32).unwrap();
    let a = run_single(CoherentLabel::new(0.2, 0.1), &params, &space, &IntegratorConfig::default()).unwrap();
    let b = run_single(CoherentLabel::new(0.2, 0.1), &params, &space, &IntegratorConfig::default()).unwrap();
    assert_eq!(a, b);
}

#[test]
fn oversized_excursion_is_rejected_before_integration() {
    let params = reference(0.5);
    let space = params.space(16).unwrap();
    let err = run_single(CoherentLabel::new(2.0, 0.0), &params, &space, &IntegratorConfig::default()).unwrap_err();
    assert!(matches!(err, Error::Infeasible(_)), "{err:?}");
    assert_eq!(err.exit_code(), 5);
}

#[test]
fn cold_thermal_average_equals_vacuum_run() {
    let params = reference(0.5).with_nbar(0.0).with_d01(0.5);
    let space = params.space(32).unwrap();
    let cfg = IntegratorConfig::default();
    let thermal = run_thermal(&params, &space, &cfg, 3, 11).unwrap();
    let single = run_single(origin(), &params, &space, &cfg).unwrap();
    assert_eq!(thermal.c_full.mean, single.c_full);
    assert_eq!(thermal.d_eff.mean, single.d_eff);
    assert_eq!(thermal.d_eff.std_dev, 0.0);
    assert_eq!(thermal.rejected, 0);
}

#[test]
fn thermal_runs_are_reproducible_per_seed() {
    let params = reference(0.25);
    let space = params.space(40).unwrap();
    let cfg = IntegratorConfig::default();
    let a = run_thermal(&params, &space, &cfg, 4, 5).unwrap();
    let b = run_thermal(&params, &space, &cfg, 4, 5).unwrap();
    let c = run_thermal(&params, &space, &cfg, 4, 6).unwrap();
    assert_eq!(a, b);
    assert_ne!(a.samples[0].result.alpha, c.samples[0].result.alpha);
    assert_eq!(a.sample_count(), 4);
    assert!(a.samples.iter().enumerate().all(|(i, s)| s.index == i));
}

#[test]
fn too_many_rejections_abort_the_thermal_run() {
    // n̄ = 20 with 16 levels rejects most draws
    let params = reference(0.25).with_nbar(20.0);
    let space = params.space(16).unwrap();
    let err = run_thermal(&params, &space, &IntegratorConfig::default(), 20, 1).unwrap_err();
    assert!(matches!(err, Error::Infeasible(_)), "{err:?}");
}

#[test]
fn zero_samples_is_a_domain_error() {
    let params = reference(0.25);
    let space = params.space(16).unwrap();
    assert!(matches!(
        run_thermal(&params, &space, &IntegratorConfig::default(), 0, 1),
        Err(Error::Domain { name: "n_samples", .. })
    ));
}

#[test]
fn high_temperature_theta_sweep_is_linear() {
    let params = reference(0.5).with_nbar(19.5);
    let t0 = params.theta;
    let space = params.space(16).unwrap();
    let table = sweep(
        &params,
        SweepAxis::Theta,
        &[t0, 2.0 * t0, 4.0 * t0],
        SweepMode::Analytic,
        &space,
        &IntegratorConfig::default(),
    )
    .unwrap();
    let d: Vec<f64> = table.rows.iter().map(|r| r.d01_analytic.unwrap()).collect();
    assert!(rel(d[1] / d[0], 2.0) < 0.01);
    assert!(rel(d[2] / d[0], 4.0) < 0.01);
}

#[test]
fn mass_sweep_doubles_exponent_at_fixed_separation() {
    let params = reference(0.5);
    let space = params.space(16).unwrap();
    let table = sweep(&params, SweepAxis::M, &[1.0, 2.0], SweepMode::Analytic, &space, &IntegratorConfig::default()).unwrap();
    let d: Vec<f64> = table.rows.iter().map(|r| r.d01_analytic.unwrap()).collect();
    assert_eq!(d[1] / d[0], 2.0);
    assert_eq!(table.rows[1].epsilon, 2.0 * params.epsilon);
}

#[test]
fn gamma_sweep_vanishes_monotonically() {
    let params = reference(0.5);
    let space = params.space(16).unwrap();
    let g = params.gamma;
    let values = [g, g / 10.0, g / 100.0, 0.0];
    let table = sweep(&params, SweepAxis::Gamma, &values, SweepMode::Analytic, &space, &IntegratorConfig::default()).unwrap();
    let d: Vec<f64> = table.rows.iter().map(|r| r.d01_analytic.unwrap()).collect();
    assert!(d.windows(2).all(|w| w[1] < w[0]));
    assert_eq!(d[3], 0.0);
}

#[test]
fn numeric_sweep_records_row_errors_inline() {
    let params = reference(0.25);
    let space = params.space(24).unwrap();
    let table = sweep(
        &params,
        SweepAxis::Epsilon,
        &[params.epsilon, 4.0 * params.epsilon],
        SweepMode::Both,
        &space,
        &IntegratorConfig::default(),
    )
    .unwrap();
    assert!(table.rows[0].error.is_none());
    assert!(table.rows[0].d_eff_numeric.is_some());
    assert!(table.rows[1].error.is_some());
    assert!(table.rows[1].d01_analytic.is_some());
    assert!(table.rows[1].d_eff_numeric.is_none());
}
