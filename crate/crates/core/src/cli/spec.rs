//! Run specifications: partial inputs from a config file or flags, and the
//! fully resolved [`RunSpec`].
//!
//! Resolution order: preset, then config file, then flags. Within the
//! parameter overrides the raw fields are applied first (units, m, omega,
//! gamma, theta, epsilon, lambda, omega_cut) and the dimensionless targets
//! after them (chi, nbar, quality, d01).

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::analytic::{
    flux_lc_realization, ion_trap_realization, FeasibilityThresholds, FluxLcCircuit, IonTrap, PhysicalParams,
};
use crate::dynamics::{DissipatorKind, IntegratorConfig};
use crate::error::{Error, Result};
use crate::protocol::{SweepAxis, SweepMode};
use crate::units::{FluxQuantum, UnitKind, UnitSystem};

pub const DEFAULT_FOCK_DIM: usize = 64;
pub const DEFAULT_SEED: u64 = 0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    Feasibility,
    Simulate,
    Protocol,
    Sweep,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Feasibility => "feasibility",
            Command::Simulate => "simulate",
            Command::Protocol => "protocol",
            Command::Sweep => "sweep",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Preset {
    FluxLc,
    IonTrap,
    NaturalUnitsReference,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Format {
    #[default]
    Json,
    Csv,
}

/// A sweep value: a number, or a multiple of the axis base value written as
/// `2x`, `2base` or with the axis marker (`2t0`, `2m0`, `2e0`, `2g0`, `2w0`).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ValueToken {
    Number(f64),
    Text(String),
}

impl ValueToken {
    pub fn parse_list(list: &str) -> Vec<ValueToken> {
        list.split(',')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .map(|s| ValueToken::Text(s.to_string()))
            .collect()
    }

    pub fn resolve(&self, axis: SweepAxis, base: f64) -> Result<f64> {
        let text = match self {
            ValueToken::Number(v) => return Ok(*v),
            ValueToken::Text(t) => t.as_str(),
        };
        if let Ok(v) = text.parse::<f64>() {
            return Ok(v);
        }
        let marker = match axis {
            SweepAxis::Theta => "t0",
            SweepAxis::M => "m0",
            SweepAxis::Epsilon => "e0",
            SweepAxis::Gamma => "g0",
            SweepAxis::Omega => "w0",
        };
        let coefficient = [marker, "base", "x"]
            .iter()
            .find_map(|m| text.strip_suffix(m))
            .ok_or_else(|| Error::Config(format!("cannot read sweep value `{text}`")))?;
        let k = if coefficient.is_empty() {
            1.0
        } else {
            coefficient
                .trim_end_matches('*')
                .parse::<f64>()
                .map_err(|_| Error::Config(format!("cannot read sweep value `{text}`")))?
        };
        Ok(k * base)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ParamOverrides {
    pub units: Option<UnitKind>,
    pub m: Option<f64>,
    pub omega: Option<f64>,
    pub gamma: Option<f64>,
    pub theta: Option<f64>,
    pub epsilon: Option<f64>,
    pub lambda: Option<f64>,
    pub omega_cut: Option<f64>,
    pub chi: Option<f64>,
    pub nbar: Option<f64>,
    pub quality: Option<f64>,
    pub d01: Option<f64>,
}

fn conflict(a: &str, b: &str) -> Error {
    Error::Config(format!("conflicting overrides `{a}` and `{b}`"))
}

fn check_target(name: &'static str, v: f64) -> Result<f64> {
    if v.is_finite() && v >= 0.0 {
        Ok(v)
    } else {
        Err(Error::Domain {
            name,
            value: v,
            reason: "target must be finite and non-negative",
        })
    }
}

impl ParamOverrides {
    /// Field-by-field merge; `other` wins.
    pub fn merge(self, other: ParamOverrides) -> ParamOverrides {
        ParamOverrides {
            units: other.units.or(self.units),
            m: other.m.or(self.m),
            omega: other.omega.or(self.omega),
            gamma: other.gamma.or(self.gamma),
            theta: other.theta.or(self.theta),
            epsilon: other.epsilon.or(self.epsilon),
            lambda: other.lambda.or(self.lambda),
            omega_cut: other.omega_cut.or(self.omega_cut),
            chi: other.chi.or(self.chi),
            nbar: other.nbar.or(self.nbar),
            quality: other.quality.or(self.quality),
            d01: other.d01.or(self.d01),
        }
    }

    pub fn apply(&self, base: PhysicalParams) -> Result<PhysicalParams> {
        for (a, b, x, y) in [
            ("epsilon", "chi", self.epsilon, self.chi),
            ("theta", "nbar", self.theta, self.nbar),
            ("gamma", "quality", self.gamma, self.quality),
            ("gamma", "d01", self.gamma, self.d01),
            ("quality", "d01", self.quality, self.d01),
        ] {
            if x.is_some() && y.is_some() {
                return Err(conflict(a, b));
            }
        }
        let mut p = base;
        match self.units {
            Some(UnitKind::Natural) => p.units = UnitSystem::NATURAL,
            Some(UnitKind::Si) => p.units = UnitSystem::SI,
            Some(UnitKind::Custom) => {
                return Err(Error::Config("`units = custom` is not available from the command line".into()))
            }
            None => {}
        }
        p.m = self.m.unwrap_or(p.m);
        p.omega = self.omega.unwrap_or(p.omega);
        p.gamma = self.gamma.unwrap_or(p.gamma);
        p.theta = self.theta.unwrap_or(p.theta);
        p.epsilon = self.epsilon.unwrap_or(p.epsilon);
        p.lambda = self.lambda.unwrap_or(p.lambda);
        if self.omega_cut.is_some() {
            p.omega_cut = self.omega_cut;
        }
        p.validate()?;
        if let Some(chi) = self.chi {
            p = p.with_chi(check_target("chi", chi)?);
        }
        if let Some(nbar) = self.nbar {
            p = p.with_nbar(check_target("nbar", nbar)?);
        }
        if let Some(q) = self.quality {
            if !(q > 0.0) {
                return Err(Error::Domain {
                    name: "quality",
                    value: q,
                    reason: "must be positive",
                });
            }
            p = p.with_quality(q);
        }
        if let Some(d01) = self.d01 {
            p = p.with_d01(check_target("d01", d01)?);
        }
        p.validate()?;
        Ok(p)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct IntegratorOverrides {
    pub steps_per_period: Option<usize>,
    pub dissipator: Option<DissipatorKind>,
    pub trace_tolerance: Option<f64>,
    pub leak_threshold: Option<f64>,
    pub record_stride: Option<usize>,
}

impl IntegratorOverrides {
    fn merge(self, o: IntegratorOverrides) -> Self {
        IntegratorOverrides {
            steps_per_period: o.steps_per_period.or(self.steps_per_period),
            dissipator: o.dissipator.or(self.dissipator),
            trace_tolerance: o.trace_tolerance.or(self.trace_tolerance),
            leak_threshold: o.leak_threshold.or(self.leak_threshold),
            record_stride: o.record_stride.or(self.record_stride),
        }
    }

    fn resolve(&self) -> IntegratorConfig {
        let d = IntegratorConfig::default();
        IntegratorConfig {
            steps_per_period: self.steps_per_period.unwrap_or(d.steps_per_period),
            dissipator: self.dissipator.unwrap_or(d.dissipator),
            trace_tolerance: self.trace_tolerance.unwrap_or(d.trace_tolerance),
            leak_threshold: self.leak_threshold.unwrap_or(d.leak_threshold),
            record_stride: self.record_stride.unwrap_or(d.record_stride),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunOverrides {
    pub fock_dim: Option<usize>,
    pub alpha_re: Option<f64>,
    pub alpha_im: Option<f64>,
    pub periods: Option<f64>,
    pub thermal_samples: Option<usize>,
    pub seed: Option<u64>,
}

impl RunOverrides {
    fn merge(self, o: RunOverrides) -> Self {
        RunOverrides {
            fock_dim: o.fock_dim.or(self.fock_dim),
            alpha_re: o.alpha_re.or(self.alpha_re),
            alpha_im: o.alpha_im.or(self.alpha_im),
            periods: o.periods.or(self.periods),
            thermal_samples: o.thermal_samples.or(self.thermal_samples),
            seed: o.seed.or(self.seed),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SweepOverrides {
    pub axis: Option<SweepAxis>,
    pub values: Option<Vec<ValueToken>>,
    pub mode: Option<SweepMode>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OutputOverrides {
    pub dir: Option<PathBuf>,
    pub format: Option<Format>,
    pub name: Option<String>,
}

/// One layer of input: a config file or the command-line flags.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SpecInput {
    pub command: Option<Command>,
    pub preset: Option<Preset>,
    pub flux_quantum: Option<FluxQuantum>,
    pub flux_lc: Option<FluxLcCircuit>,
    pub ion_trap: Option<IonTrap>,
    pub params: ParamOverrides,
    pub thresholds: Option<FeasibilityThresholds>,
    pub integrator: IntegratorOverrides,
    pub run: RunOverrides,
    pub sweep: SweepOverrides,
    pub output: OutputOverrides,
}

impl SpecInput {
    pub fn from_toml(text: &str) -> Result<SpecInput> {
        toml::from_str(text).map_err(|e| Error::Config(e.message().to_string()))
    }

    pub fn from_file(path: &Path) -> Result<SpecInput> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read config file `{}`: {e}", path.display())))?;
        SpecInput::from_toml(&text).map_err(|e| match e {
            Error::Config(msg) => Error::Config(format!("{}: {msg}", path.display())),
            other => other,
        })
    }

    /// Layers `over` on top of `self`. Conflicting commands are an error.
    pub fn merge(self, over: SpecInput) -> Result<SpecInput> {
        let command = match (self.command, over.command) {
            (Some(a), Some(b)) if a != b => {
                return Err(Error::Config(format!(
                    "command `{}` conflicts with command `{}`",
                    b.name(),
                    a.name()
                )))
            }
            (a, b) => b.or(a),
        };
        Ok(SpecInput {
            command,
            preset: over.preset.or(self.preset),
            flux_quantum: over.flux_quantum.or(self.flux_quantum),
            flux_lc: over.flux_lc.or(self.flux_lc),
            ion_trap: over.ion_trap.or(self.ion_trap),
            params: self.params.merge(over.params),
            thresholds: over.thresholds.or(self.thresholds),
            integrator: self.integrator.merge(over.integrator),
            run: self.run.merge(over.run),
            sweep: SweepOverrides {
                axis: over.sweep.axis.or(self.sweep.axis),
                values: over.sweep.values.or(self.sweep.values),
                mode: over.sweep.mode.or(self.sweep.mode),
            },
            output: OutputOverrides {
                dir: over.output.dir.or(self.output.dir),
                format: over.output.format.or(self.output.format),
                name: over.output.name.or(self.output.name),
            },
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepSpec {
    pub axis: SweepAxis,
    pub values: Vec<f64>,
    pub mode: SweepMode,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OutputSpec {
    pub dir: Option<PathBuf>,
    pub format: Format,
    pub name: String,
}

/// Fully resolved run. Re-running a `RunSpec` taken from a report
/// envelope reproduces the report payload.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunSpec {
    pub command: Command,
    pub preset: Option<Preset>,
    pub flux_lc: Option<FluxLcCircuit>,
    pub ion_trap: Option<IonTrap>,
    pub params: PhysicalParams,
    pub thresholds: FeasibilityThresholds,
    pub fock_dim: usize,
    pub integrator: IntegratorConfig,
    pub alpha: [f64; 2],
    pub periods: f64,
    pub thermal_samples: Option<usize>,
    pub seed: u64,
    pub sweep: Option<SweepSpec>,
    pub output: OutputSpec,
}

/// Oscillator, coupling and bath used when no preset is named:
/// natural units, m = ω = 1, no coupling, no bath.
pub fn default_base() -> PhysicalParams {
    PhysicalParams::natural(1.0, 1.0, 0.0, 0.0, 0.0)
}

impl SpecInput {
    pub fn resolve(self) -> Result<RunSpec> {
        let command = self
            .command
            .ok_or_else(|| Error::Config("no command given".into()))?;
        if self.flux_quantum.is_some() && self.preset != Some(Preset::FluxLc) {
            return Err(Error::Config("`flux_quantum` only applies to the flux-lc preset".into()));
        }
        if self.flux_lc.is_some() && self.preset != Some(Preset::FluxLc) {
            return Err(Error::Config("`flux_lc` section requires the flux-lc preset".into()));
        }
        if self.ion_trap.is_some() && self.preset != Some(Preset::IonTrap) {
            return Err(Error::Config("`ion_trap` section requires the ion-trap preset".into()));
        }

        let mut flux_lc = None;
        let mut ion_trap = None;
        let base = match self.preset {
            None => default_base(),
            Some(Preset::NaturalUnitsReference) => PhysicalParams::natural_reference(),
            Some(Preset::FluxLc) => {
                let mut circuit = self.flux_lc.unwrap_or_default();
                if let Some(fq) = self.flux_quantum {
                    circuit.flux_quantum = fq;
                }
                flux_lc = Some(circuit);
                flux_lc_realization(&circuit)?
            }
            Some(Preset::IonTrap) => {
                let trap = self.ion_trap.unwrap_or_default();
                ion_trap = Some(trap);
                ion_trap_realization(&trap)?
            }
        };
        let params = self.params.apply(base)?;

        let integrator = self.integrator.resolve();
        integrator.validate()?;
        let fock_dim = self.run.fock_dim.unwrap_or(DEFAULT_FOCK_DIM);
        if fock_dim < 2 {
            return Err(Error::Domain {
                name: "fock_dim",
                value: fock_dim as f64,
                reason: "must be at least 2",
            });
        }
        let periods = self.run.periods.unwrap_or(1.0);
        if !(periods > 0.0) || !periods.is_finite() {
            return Err(Error::Domain {
                name: "periods",
                value: periods,
                reason: "must be positive",
            });
        }
        if self.run.thermal_samples == Some(0) {
            return Err(Error::Domain {
                name: "thermal_samples",
                value: 0.0,
                reason: "must be at least 1",
            });
        }

        let sweep = match command {
            Command::Sweep => {
                let axis = self
                    .sweep
                    .axis
                    .ok_or_else(|| Error::Config("sweep needs an `axis`".into()))?;
                let tokens = self
                    .sweep
                    .values
                    .ok_or_else(|| Error::Config("sweep needs `values`".into()))?;
                if tokens.is_empty() {
                    return Err(Error::Config("sweep needs at least one value".into()));
                }
                let base_value = axis.base_value(&params);
                let values = tokens
                    .iter()
                    .map(|t| t.resolve(axis, base_value))
                    .collect::<Result<Vec<_>>>()?;
                Some(SweepSpec {
                    axis,
                    values,
                    mode: self.sweep.mode.unwrap_or_default(),
                })
            }
            _ => {
                if self.sweep.axis.is_some() || self.sweep.values.is_some() || self.sweep.mode.is_some() {
                    return Err(Error::Config(format!(
                        "sweep settings given to the `{}` command",
                        command.name()
                    )));
                }
                None
            }
        };

        Ok(RunSpec {
            command,
            preset: self.preset,
            flux_lc,
            ion_trap,
            params,
            thresholds: self.thresholds.unwrap_or_default(),
            fock_dim,
            integrator,
            alpha: [self.run.alpha_re.unwrap_or(0.0), self.run.alpha_im.unwrap_or(0.0)],
            periods,
            thermal_samples: self.run.thermal_samples,
            seed: self.run.seed.unwrap_or(DEFAULT_SEED),
            sweep,
            output: OutputSpec {
                dir: self.output.dir,
                format: self.output.format.unwrap_or_default(),
                name: self.output.name.unwrap_or_else(|| command.name().to_string()),
            },
        })
    }
}
