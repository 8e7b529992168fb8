//! The two-step coherence-probing experiment.
//!
//! Step one runs from t = 0 to T/2 and separates the oscillator branches
//! conditioned on the qubit; step two runs on to T, where the branches
//! recombine. The qubit coherence at T is the read-out: c_full = e^{−2D₀₁}
//! when both steps decohere equally.

use std::io::Write;

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::analytic::{
    branch_amplitudes, coherent_overlap, design_summary, feasibility, FeasibilityReport, FeasibilityThresholds,
    PhysicalParams,
};
use crate::dynamics::{DissipatorKind, Evolver, IntegratorConfig};
use crate::error::{Error, Result};
use crate::hilbert::{partial_trace_qubit, pure_fidelity, CompositeDensity, SpaceDescriptor};
use crate::states::{
    coherent_state, prepare_protocol_input, sample_with, seeded_rng, truncation_adequate, CoherentLabel,
    OscillatorInit, ThermalSpec, RNG_ALGORITHM,
};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProtocolResult {
    pub alpha: C64,
    pub dissipator: DissipatorKind,
    /// Qubit coherence at T/2.
    pub c_half: f64,
    /// Qubit coherence at T.
    pub c_full: f64,
    /// −½ ln c_full.
    pub d_eff: f64,
    /// Half-period exponent −ln c_half with the measured branch overlap
    /// removed: −ln c_half − |⟨a⟩₀ − ⟨a⟩₁|²/2.
    pub d_half: f64,
    /// e^{−|⟨a⟩₀ − ⟨a⟩₁|²/2} from the simulated branch means at T/2.
    pub half_overlap_numeric: f64,
    /// |⟨α₀′|α₁′⟩| from the closed-form amplitudes.
    pub half_overlap_analytic: f64,
    /// e^{−D₀₁}·|⟨α₀′|α₁′⟩|.
    pub c_half_analytic: f64,
    pub d01_analytic: f64,
    /// Δx/2δ_x.
    pub branch_separation: f64,
    /// ⟨α|ρ_A(T)|α⟩.
    pub revival_fidelity: f64,
    /// d_eff/D₀₁ − 1; absent when D₀₁ = 0.
    pub relative_discrepancy: Option<f64>,
    pub regime_report: FeasibilityReport,
}

/// Branch excursion |α| + Δx/2δ_x + |Δp/2δ_p| checked against the Fock guard.
pub fn truncation_guard(alpha: C64, params: &PhysicalParams, fock_dim: usize) -> Result<()> {
    let design = design_summary(params);
    let excursion = alpha.norm() + design.dx_over_2dx.abs() + design.dp_over_2dp.abs();
    if truncation_adequate(excursion, fock_dim) {
        Ok(())
    } else {
        Err(Error::Infeasible(format!(
            "branch excursion {excursion:.3} needs more than {fock_dim} Fock levels"
        )))
    }
}

/// ⟨a⟩ within each qubit branch, normalized by the branch population.
pub fn branch_means(rho: &CompositeDensity) -> [C64; 2] {
    let n = rho.fock_dim();
    std::array::from_fn(|q| {
        let off = q * n;
        let mut mean = C64::new(0.0, 0.0);
        let mut pop = 0.0;
        for i in 0..n {
            pop += rho.matrix[(off + i, off + i)].re;
            if i + 1 < n {
                mean += rho.matrix[(off + i + 1, off + i)] * ((i + 1) as f64).sqrt();
            }
        }
        mean / pop
    })
}

fn check_inputs(params: &PhysicalParams, space: &SpaceDescriptor, config: &IntegratorConfig) -> Result<()> {
    params.validate()?;
    config.validate()?;
    let expected = params.space(space.fock_dim)?;
    if (expected.delta_x - space.delta_x).abs() > 1e-12 * expected.delta_x {
        return Err(Error::Config("space descriptor does not match the oscillator parameters".into()));
    }
    Ok(())
}

pub fn run_single(
    alpha: CoherentLabel,
    params: &PhysicalParams,
    space: &SpaceDescriptor,
    config: &IntegratorConfig,
) -> Result<ProtocolResult> {
    check_inputs(params, space, config)?;
    truncation_guard(alpha.alpha, params, space.fock_dim)?;

    let design = design_summary(params);
    let amps = branch_amplitudes(alpha.alpha, params);
    let report = feasibility(&design, params, &FeasibilityThresholds::default());

    let rho0 = prepare_protocol_input(&OscillatorInit::Coherent(alpha), space)?;
    let period = params.period();
    let evolver = Evolver::new(params, space, config)?;
    let (trajectory, snaps) = evolver.evolve_capturing(&rho0, period, &[period / 2.0])?;
    let half = &snaps[0];
    let full = &trajectory.final_state;

    let c_half = half.qubit_coherence();
    let [m0, m1] = branch_means(half);
    let half_overlap_numeric = coherent_overlap(m0, m1);
    let c_full = full.qubit_coherence();
    let half_overlap_analytic = coherent_overlap(amps.alpha0p, amps.alpha1p);

    let initial = coherent_state(alpha, space)?.amplitudes;
    let revival_fidelity = pure_fidelity(&initial, &partial_trace_qubit(full));

    let d_eff = -0.5 * c_full.ln();
    Ok(ProtocolResult {
        alpha: alpha.alpha,
        dissipator: config.dissipator,
        c_half,
        c_full,
        d_eff,
        d_half: -c_half.ln() - 0.5 * (m0 - m1).norm_sqr(),
        half_overlap_numeric,
        half_overlap_analytic,
        c_half_analytic: (-design.d01).exp() * half_overlap_analytic,
        d01_analytic: design.d01,
        branch_separation: design.dx_over_2dx,
        revival_fidelity,
        relative_discrepancy: (design.d01 > 0.0).then(|| d_eff / design.d01 - 1.0),
        regime_report: report,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ThermalSample {
    pub index: usize,
    pub result: ProtocolResult,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SummaryStats {
    pub mean: f64,
    /// Unbiased sample standard deviation (0 for a single sample).
    pub std_dev: f64,
    pub std_error: f64,
}

impl SummaryStats {
    pub fn of(values: &[f64]) -> Self {
        let n = values.len() as f64;
        let mean = values.iter().sum::<f64>() / n;
        let std_dev = if values.len() > 1 {
            (values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt()
        } else {
            0.0
        };
        SummaryStats {
            mean,
            std_dev,
            std_error: std_dev / n.sqrt(),
        }
    }

    pub fn coefficient_of_variation(&self) -> f64 {
        self.std_dev / self.mean.abs()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ThermalProtocolResult {
    pub seed: u64,
    pub rng: String,
    pub nbar: f64,
    pub samples: Vec<ThermalSample>,
    pub rejected: usize,
    pub c_full: SummaryStats,
    pub d_eff: SummaryStats,
    pub d01_analytic: f64,
}

impl ThermalProtocolResult {
    pub fn sample_count(&self) -> usize {
        self.samples.len()
    }
}

/// Averages the protocol over coherent states drawn from the thermal
/// P-function. Draws that violate the truncation guard are redrawn; more
/// than 10% rejections abort the run.
pub fn run_thermal(
    params: &PhysicalParams,
    space: &SpaceDescriptor,
    config: &IntegratorConfig,
    n_samples: usize,
    seed: u64,
) -> Result<ThermalProtocolResult> {
    if n_samples == 0 {
        return Err(Error::domain("n_samples", 0.0, "need at least one sample"));
    }
    check_inputs(params, space, config)?;
    let nbar = params.nbar();
    let spec = ThermalSpec { nbar };
    let mut rng = seeded_rng(seed);
    let mut labels = Vec::with_capacity(n_samples);
    let mut rejected = 0usize;
    while labels.len() < n_samples {
        let label = sample_with(spec, &mut rng);
        if truncation_guard(label.alpha, params, space.fock_dim).is_ok() {
            labels.push(label);
        } else {
            rejected += 1;
            if rejected * 9 > n_samples {
                return Err(Error::Infeasible(format!(
                    "{rejected} thermal draws rejected by the truncation guard (more than 10%)"
                )));
            }
        }
    }

    let results: Vec<ProtocolResult> = labels
        .par_iter()
        .map(|label| run_single(*label, params, space, config))
        .collect::<Result<_>>()?;

    let c_full: Vec<f64> = results.iter().map(|r| r.c_full).collect();
    let d_eff: Vec<f64> = results.iter().map(|r| r.d_eff).collect();
    let d01_analytic = design_summary(params).d01;
    Ok(ThermalProtocolResult {
        seed,
        rng: RNG_ALGORITHM.to_string(),
        nbar,
        samples: results
            .into_iter()
            .enumerate()
            .map(|(index, result)| ThermalSample { index, result })
            .collect(),
        rejected,
        c_full: SummaryStats::of(&c_full),
        d_eff: SummaryStats::of(&d_eff),
        d01_analytic,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SweepAxis {
    Theta,
    /// Mass sweep at fixed Δx: ε is rescaled in proportion to m.
    M,
    Epsilon,
    Gamma,
    Omega,
}

impl std::str::FromStr for SweepAxis {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "theta" => Ok(SweepAxis::Theta),
            "m" => Ok(SweepAxis::M),
            "epsilon" => Ok(SweepAxis::Epsilon),
            "gamma" => Ok(SweepAxis::Gamma),
            "omega" => Ok(SweepAxis::Omega),
            other => Err(Error::Config(format!("unknown sweep axis `{other}`"))),
        }
    }
}

impl SweepAxis {
    pub fn base_value(self, params: &PhysicalParams) -> f64 {
        match self {
            SweepAxis::Theta => params.theta,
            SweepAxis::M => params.m,
            SweepAxis::Epsilon => params.epsilon,
            SweepAxis::Gamma => params.gamma,
            SweepAxis::Omega => params.omega,
        }
    }

    /// Parameters with the axis set to `value`.
    pub fn apply(self, params: &PhysicalParams, value: f64) -> PhysicalParams {
        let mut p = *params;
        match self {
            SweepAxis::Theta => p.theta = value,
            SweepAxis::M => {
                // Δx = 2ε/mω² held fixed
                p.epsilon = params.epsilon * value / params.m;
                p.m = value;
            }
            SweepAxis::Epsilon => p.epsilon = value,
            SweepAxis::Gamma => p.gamma = value,
            SweepAxis::Omega => p.omega = value,
        }
        p
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SweepMode {
    #[default]
    Analytic,
    Numeric,
    Both,
}

impl std::str::FromStr for SweepMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "analytic" => Ok(SweepMode::Analytic),
            "numeric" => Ok(SweepMode::Numeric),
            "both" => Ok(SweepMode::Both),
            other => Err(Error::Config(format!("unknown sweep mode `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub axis_value: f64,
    pub epsilon: f64,
    pub d01_analytic: Option<f64>,
    pub d_eff_numeric: Option<f64>,
    pub c_full: Option<f64>,
    pub feasibility: Option<FeasibilityReport>,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepTable {
    pub axis: SweepAxis,
    pub mode: SweepMode,
    pub rows: Vec<SweepRow>,
}

/// Column order of the sweep CSV.
pub const SWEEP_COLUMNS: [&str; 10] = [
    "axis_value",
    "d01_analytic",
    "d_eff_numeric",
    "c_full",
    "cond_momentum_shift",
    "cond_separation",
    "cond_coherence",
    "cond_markov",
    "cond_underdamped",
    "error",
];

fn opt(v: Option<f64>) -> String {
    v.map(|x| format!("{x:e}")).unwrap_or_default()
}

fn flag(v: Option<bool>) -> String {
    match v {
        Some(true) => "pass".into(),
        Some(false) => "fail".into(),
        None => String::new(),
    }
}

impl SweepTable {
    pub fn write_csv<W: Write>(&self, mut out: W, comment: &str) -> csv::Result<()> {
        writeln!(out, "# {comment}")?;
        let mut w = csv::Writer::from_writer(out);
        w.write_record(SWEEP_COLUMNS)?;
        for row in &self.rows {
            let f = row.feasibility.as_ref();
            w.write_record([
                format!("{:e}", row.axis_value),
                opt(row.d01_analytic),
                opt(row.d_eff_numeric),
                opt(row.c_full),
                flag(f.map(|r| r.cond_momentum_shift.passed)),
                flag(f.map(|r| r.cond_separation.passed)),
                flag(f.map(|r| r.cond_coherence.passed)),
                flag(f.and_then(|r| r.cond_markov.map(|c| c.passed))),
                flag(f.map(|r| r.cond_underdamped.passed)),
                row.error.clone().unwrap_or_default(),
            ])?;
        }
        w.flush()?;
        Ok(())
    }
}

fn sweep_row(
    params: &PhysicalParams,
    axis: SweepAxis,
    value: f64,
    mode: SweepMode,
    fock_dim: usize,
    config: &IntegratorConfig,
) -> SweepRow {
    let p = axis.apply(params, value);
    let mut row = SweepRow {
        axis_value: value,
        epsilon: p.epsilon,
        d01_analytic: None,
        d_eff_numeric: None,
        c_full: None,
        feasibility: None,
        error: None,
    };
    if let Err(e) = p.validate() {
        row.error = Some(e.to_string());
        return row;
    }
    let design = design_summary(&p);
    row.d01_analytic = Some(design.d01);
    row.feasibility = Some(feasibility(&design, &p, &FeasibilityThresholds::default()));
    if mode != SweepMode::Analytic {
        let run = p
            .space(fock_dim)
            .and_then(|space| run_single(CoherentLabel::new(0.0, 0.0), &p, &space, config));
        match run {
            Ok(r) => {
                row.d_eff_numeric = Some(r.d_eff);
                row.c_full = Some(r.c_full);
            }
            Err(e) => row.error = Some(e.to_string()),
        }
    }
    row
}

/// One row per value; failures are recorded in the row instead of aborting.
pub fn sweep(
    params: &PhysicalParams,
    axis: SweepAxis,
    values: &[f64],
    mode: SweepMode,
    space: &SpaceDescriptor,
    config: &IntegratorConfig,
) -> Result<SweepTable> {
    if values.is_empty() {
        return Err(Error::Config("sweep needs at least one value".into()));
    }
    params.validate()?;
    config.validate()?;
    let rows = values
        .par_iter()
        .map(|&v| sweep_row(params, axis, v, mode, space.fock_dim, config))
        .collect();
    Ok(SweepTable { axis, mode, rows })
}

/// Oscillator density with the qubit traced out, for diagnostics.
pub fn oscillator_state(rho: &CompositeDensity) -> DMatrix<C64> {
    partial_trace_qubit(rho)
}
