//! Report payloads, the JSON envelope and the CSV schemas.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::analytic::{
    decoherence_time, design_summary, diffusion_coefficient, feasibility, momentum_shift, DimensionlessDesign,
    FeasibilityReport,
};
use crate::dynamics::{trajectory_observables, Evolver, ObservableSample};
use crate::error::{Error, Result};
use crate::protocol::{run_single, run_thermal, sweep, ProtocolResult, SweepTable, ThermalProtocolResult};
use crate::states::{prepare_protocol_input, CoherentLabel, OscillatorInit};
use crate::units::UnitSystem;

use super::spec::{Command, Preset, RunSpec};

/// Version of the CSV and JSON layouts.
pub const SCHEMA_VERSION: u32 = 1;
pub const ARTIFACT: &str = env!("CARGO_PKG_NAME");
pub const ARTIFACT_VERSION: &str = env!("CARGO_PKG_VERSION");

pub const PROTOCOL_COLUMNS: [&str; 12] = [
    "sample",
    "alpha_re",
    "alpha_im",
    "c_half",
    "c_full",
    "d_eff",
    "d_half",
    "d01_analytic",
    "branch_separation",
    "revival_fidelity",
    "half_overlap_numeric",
    "half_overlap_analytic",
];

pub const FEASIBILITY_COLUMNS: [&str; 3] = ["quantity", "value", "passed"];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeasibilitySummary {
    pub design: DimensionlessDesign,
    pub report: FeasibilityReport,
    pub all_passed: bool,
    pub delta_x: f64,
    pub delta_p: f64,
    pub period: f64,
    pub diffusion: f64,
    pub separation: f64,
    pub momentum_shift: f64,
    /// ħ²/(DΔx²); absent when D or Δx vanishes.
    pub decoherence_time: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimulationSummary {
    pub t_end: f64,
    pub steps: usize,
    pub dt: f64,
    pub samples: Vec<ObservableSample>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Payload {
    Feasibility(FeasibilitySummary),
    Simulate(SimulationSummary),
    Protocol(ProtocolResult),
    Thermal(ThermalProtocolResult),
    Sweep(SweepTable),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportEnvelope {
    pub artifact: String,
    pub version: String,
    pub schema_version: u32,
    pub units: UnitSystem,
    pub spec: RunSpec,
    /// Kept as a JSON value so that non-finite numbers (written as null)
    /// do not prevent reading the envelope back.
    pub payload: serde_json::Value,
    pub warnings: Vec<String>,
}

impl ReportEnvelope {
    pub fn new(spec: &RunSpec, payload: &Payload) -> Result<Self> {
        Ok(ReportEnvelope {
            artifact: ARTIFACT.to_string(),
            version: ARTIFACT_VERSION.to_string(),
            schema_version: SCHEMA_VERSION,
            units: spec.params.units,
            spec: spec.clone(),
            payload: payload_value(payload)?,
            warnings: warnings(spec),
        })
    }
}

pub fn payload_value(payload: &Payload) -> Result<serde_json::Value> {
    serde_json::to_value(payload).map_err(|e| Error::Config(format!("cannot serialize payload: {e}")))
}

pub fn warnings(spec: &RunSpec) -> Vec<String> {
    let mut w = Vec::new();
    if let Some(circuit) = &spec.flux_lc {
        w.push(format!(
            "flux quantum taken as {:?} = {:.6e} Wb; the literal hbar/2e gives a chi about 2 pi smaller",
            circuit.flux_quantum,
            circuit.flux_quantum.value()
        ));
    }
    if spec.preset.is_none() {
        w.push("no preset: unset parameters default to m = omega = 1, epsilon = gamma = theta = 0 in natural units".into());
    }
    let numeric = match spec.command {
        Command::Simulate | Command::Protocol => true,
        Command::Sweep => spec
            .sweep
            .as_ref()
            .is_some_and(|s| s.mode != crate::protocol::SweepMode::Analytic),
        Command::Feasibility => false,
    };
    if numeric {
        w.push(format!("dissipator: {}", spec.integrator.dissipator));
    }
    if matches!(spec.preset, Some(Preset::FluxLc | Preset::IonTrap)) && numeric {
        w.push("hardware presets need Fock dimensions far beyond desk scale; expect a truncation error".into());
    }
    w
}

/// Runs the command described by `spec`.
pub fn execute(spec: &RunSpec) -> Result<Payload> {
    let params = &spec.params;
    match spec.command {
        Command::Feasibility => {
            let design = design_summary(params);
            let report = feasibility(&design, params, &spec.thresholds);
            let diffusion = diffusion_coefficient(params);
            let separation = params.separation();
            Ok(Payload::Feasibility(FeasibilitySummary {
                all_passed: report.all_passed(),
                design,
                report,
                delta_x: params.delta_x(),
                delta_p: params.delta_p(),
                period: params.period(),
                diffusion,
                separation,
                momentum_shift: momentum_shift(params),
                decoherence_time: decoherence_time(diffusion, separation, params.units).ok(),
            }))
        }
        Command::Simulate => {
            let space = params.space(spec.fock_dim)?;
            let label = CoherentLabel::new(spec.alpha[0], spec.alpha[1]);
            let rho0 = prepare_protocol_input(&OscillatorInit::Coherent(label), &space)?;
            let t_end = spec.periods * params.period();
            let trajectory = Evolver::new(params, &space, &spec.integrator)?.evolve(&rho0, t_end)?;
            Ok(Payload::Simulate(SimulationSummary {
                t_end,
                steps: trajectory.metadata.steps,
                dt: trajectory.metadata.dt,
                samples: trajectory_observables(&trajectory).samples,
            }))
        }
        Command::Protocol => {
            let space = params.space(spec.fock_dim)?;
            match spec.thermal_samples {
                Some(n) => Ok(Payload::Thermal(run_thermal(params, &space, &spec.integrator, n, spec.seed)?)),
                None => {
                    let label = CoherentLabel::new(spec.alpha[0], spec.alpha[1]);
                    Ok(Payload::Protocol(run_single(label, params, &space, &spec.integrator)?))
                }
            }
        }
        Command::Sweep => {
            let s = spec
                .sweep
                .as_ref()
                .ok_or_else(|| Error::Config("sweep command without sweep settings".into()))?;
            let space = params.space(spec.fock_dim)?;
            Ok(Payload::Sweep(sweep(params, s.axis, &s.values, s.mode, &space, &spec.integrator)?))
        }
    }
}

/// Comment line that heads every CSV file.
pub fn csv_comment(spec: &RunSpec) -> String {
    format!(
        "schema_version={SCHEMA_VERSION} artifact={ARTIFACT} version={ARTIFACT_VERSION} command={} units={:?}",
        spec.command.name(),
        spec.params.units.kind
    )
}

fn protocol_row(index: usize, r: &ProtocolResult) -> Vec<String> {
    let mut row = vec![index.to_string()];
    row.extend(
        [
            r.alpha.re,
            r.alpha.im,
            r.c_half,
            r.c_full,
            r.d_eff,
            r.d_half,
            r.d01_analytic,
            r.branch_separation,
            r.revival_fidelity,
            r.half_overlap_numeric,
            r.half_overlap_analytic,
        ]
        .iter()
        .map(|v| format!("{v:e}")),
    );
    row
}

fn csv_err(e: csv::Error) -> Error {
    Error::Config(format!("cannot write CSV: {e}"))
}

pub fn write_csv<W: Write>(payload: &Payload, spec: &RunSpec, mut out: W) -> Result<()> {
    let comment = csv_comment(spec);
    match payload {
        Payload::Simulate(s) => crate::dynamics::ObservableSeries {
            samples: s.samples.clone(),
        }
        .write_csv(out, &comment)
        .map_err(csv_err),
        Payload::Sweep(t) => t.write_csv(out, &comment).map_err(csv_err),
        Payload::Protocol(r) => {
            writeln!(out, "# {comment}").map_err(|e| csv_err(e.into()))?;
            let mut w = csv::Writer::from_writer(out);
            w.write_record(PROTOCOL_COLUMNS).map_err(csv_err)?;
            w.write_record(protocol_row(0, r)).map_err(csv_err)?;
            w.flush().map_err(|e| csv_err(e.into()))
        }
        Payload::Thermal(t) => {
            writeln!(out, "# {comment} seed={} rejected={}", t.seed, t.rejected).map_err(|e| csv_err(e.into()))?;
            let mut w = csv::Writer::from_writer(out);
            w.write_record(PROTOCOL_COLUMNS).map_err(csv_err)?;
            for s in &t.samples {
                w.write_record(protocol_row(s.index, &s.result)).map_err(csv_err)?;
            }
            w.flush().map_err(|e| csv_err(e.into()))
        }
        Payload::Feasibility(f) => {
            writeln!(out, "# {comment}").map_err(|e| csv_err(e.into()))?;
            let mut w = csv::Writer::from_writer(out);
            w.write_record(FEASIBILITY_COLUMNS).map_err(csv_err)?;
            let d = &f.design;
            let r = &f.report;
            let mut rows: Vec<(&str, f64, Option<bool>)> = vec![
                ("chi", d.chi, None),
                ("quality", d.quality, None),
                ("nbar", d.nbar, None),
                ("dx_over_2dx", d.dx_over_2dx, None),
                ("dp_over_2dp", d.dp_over_2dp, None),
                ("d01", d.d01, None),
                ("phi01", d.phi01, None),
                ("cond_momentum_shift", r.cond_momentum_shift.ratio, Some(r.cond_momentum_shift.passed)),
                ("cond_separation", r.cond_separation.ratio, Some(r.cond_separation.passed)),
                ("cond_coherence", r.cond_coherence.ratio, Some(r.cond_coherence.passed)),
            ];
            if let Some(c) = r.cond_markov {
                rows.push(("cond_markov", c.ratio, Some(c.passed)));
            }
            rows.push(("cond_underdamped", r.cond_underdamped.ratio, Some(r.cond_underdamped.passed)));
            for (name, value, passed) in rows {
                let passed = passed.map(|p| if p { "pass" } else { "fail" }).unwrap_or("");
                w.write_record([name, &format!("{value:e}"), passed]).map_err(csv_err)?;
            }
            w.flush().map_err(|e| csv_err(e.into()))
        }
    }
}
