//! Command-line surface: presets, feasibility reports, protocol runs and
//! sweeps, with TOML configuration and CSV/JSON output.
//!
//! Exit codes: 0 success, 2 configuration or domain error, 3 Fock
//! truncation, 4 integrator failure, 5 infeasible run. Failures print a
//! JSON error envelope on stderr.

mod report;
mod spec;

pub use report::{
    csv_comment, execute, payload_value, warnings, write_csv, FeasibilitySummary, Payload, ReportEnvelope,
    SimulationSummary, ARTIFACT, ARTIFACT_VERSION, FEASIBILITY_COLUMNS, PROTOCOL_COLUMNS, SCHEMA_VERSION,
};
pub use spec::{
    default_base, Command, Format, IntegratorOverrides, OutputOverrides, OutputSpec, ParamOverrides, Preset,
    RunOverrides, RunSpec, SpecInput, SweepOverrides, SweepSpec, ValueToken, DEFAULT_FOCK_DIM, DEFAULT_SEED,
};

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::dynamics::DissipatorKind;
use crate::error::{Error, Result};
use crate::protocol::{SweepAxis, SweepMode};
use crate::units::{FluxQuantum, UnitKind};

/// Environment variable naming the default output directory.
pub const OUT_DIR_ENV: &str = "MACROCOHERENCE_OUT_DIR";

#[derive(Debug, Parser)]
#[command(name = "macrocoherence", version, about = "Qubit-probed coherence of a damped oscillator")]
pub struct Cli {
    #[command(subcommand)]
    pub command: CliCommand,
}

#[derive(Debug, Subcommand)]
pub enum CliCommand {
    /// Dimensionless design summary and feasibility conditions.
    Feasibility(CommonArgs),
    /// Integrate the master equation from |+⟩ ⊗ |α⟩ and record observables.
    Simulate {
        #[command(flatten)]
        common: CommonArgs,
        #[command(flatten)]
        numeric: NumericArgs,
        /// Duration in oscillator periods.
        #[arg(long)]
        periods: Option<f64>,
    },
    /// Run the two-step protocol for one coherent state or a thermal ensemble.
    Protocol {
        #[command(flatten)]
        common: CommonArgs,
        #[command(flatten)]
        numeric: NumericArgs,
        /// Average over this many coherent states drawn from the thermal P-function.
        #[arg(long)]
        thermal_samples: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Vary one parameter and tabulate analytic and numeric exponents.
    Sweep {
        #[command(flatten)]
        common: CommonArgs,
        #[command(flatten)]
        numeric: NumericArgs,
        #[arg(long)]
        axis: Option<SweepAxis>,
        /// Comma-separated numbers or base multiples such as `2x` or `2t0`.
        #[arg(long)]
        values: Option<String>,
        #[arg(long)]
        mode: Option<SweepMode>,
    },
    /// Run whatever command a config file names.
    Run {
        #[command(flatten)]
        common: CommonArgs,
    },
}

#[derive(Debug, Clone, Default, Args)]
pub struct CommonArgs {
    #[arg(long, value_enum)]
    pub preset: Option<Preset>,
    /// TOML file layered between the preset and the flags.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub flux_quantum: Option<FluxQuantumArg>,
    #[arg(long, value_enum)]
    pub units: Option<UnitsArg>,
    #[arg(long, allow_hyphen_values = true)]
    pub m: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub omega: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub gamma: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub theta: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub epsilon: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub lambda: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub omega_cut: Option<f64>,
    /// Target χ = εδ_x/ħω; sets ε.
    #[arg(long, allow_hyphen_values = true)]
    pub chi: Option<f64>,
    /// Target thermal occupation; sets θ.
    #[arg(long, allow_hyphen_values = true)]
    pub nbar: Option<f64>,
    /// Target Q = ω/γ; sets γ.
    #[arg(long, allow_hyphen_values = true)]
    pub quality: Option<f64>,
    /// Target analytic decoherence exponent; sets γ.
    #[arg(long, allow_hyphen_values = true)]
    pub d01: Option<f64>,
    /// Output directory; without it the report goes to stdout.
    #[arg(long, env = OUT_DIR_ENV)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Base name of the emitted files.
    #[arg(long)]
    pub name: Option<String>,
}

#[derive(Debug, Clone, Default, Args)]
pub struct NumericArgs {
    #[arg(long)]
    pub fock_dim: Option<usize>,
    #[arg(long)]
    pub steps_per_period: Option<usize>,
    #[arg(long)]
    pub dissipator: Option<DissipatorKind>,
    #[arg(long)]
    pub record_stride: Option<usize>,
    #[arg(long, allow_hyphen_values = true)]
    pub alpha_re: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub alpha_im: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum FluxQuantumArg {
    HOverTwoE,
    HbarOverTwoE,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum UnitsArg {
    Natural,
    Si,
}

impl CommonArgs {
    fn to_input(&self, command: Option<Command>) -> SpecInput {
        SpecInput {
            command,
            preset: self.preset,
            flux_quantum: self.flux_quantum.map(|f| match f {
                FluxQuantumArg::HOverTwoE => FluxQuantum::HOverTwoE,
                FluxQuantumArg::HbarOverTwoE => FluxQuantum::HbarOverTwoE,
            }),
            params: ParamOverrides {
                units: self.units.map(|u| match u {
                    UnitsArg::Natural => UnitKind::Natural,
                    UnitsArg::Si => UnitKind::Si,
                }),
                m: self.m,
                omega: self.omega,
                gamma: self.gamma,
                theta: self.theta,
                epsilon: self.epsilon,
                lambda: self.lambda,
                omega_cut: self.omega_cut,
                chi: self.chi,
                nbar: self.nbar,
                quality: self.quality,
                d01: self.d01,
            },
            output: OutputOverrides {
                dir: self.out.clone(),
                format: self.format,
                name: self.name.clone(),
            },
            ..SpecInput::default()
        }
    }
}

impl NumericArgs {
    fn apply(&self, input: &mut SpecInput) {
        input.integrator = IntegratorOverrides {
            steps_per_period: self.steps_per_period,
            dissipator: self.dissipator,
            trace_tolerance: None,
            leak_threshold: None,
            record_stride: self.record_stride,
        };
        input.run.fock_dim = self.fock_dim;
        input.run.alpha_re = self.alpha_re;
        input.run.alpha_im = self.alpha_im;
    }
}

/// Resolves parsed arguments: preset, then config file, then flags.
pub fn load_spec(cli: &Cli) -> Result<RunSpec> {
    let (common, flags) = match &cli.command {
        CliCommand::Feasibility(common) => (common, common.to_input(Some(Command::Feasibility))),
        CliCommand::Simulate {
            common,
            numeric,
            periods,
        } => {
            let mut input = common.to_input(Some(Command::Simulate));
            numeric.apply(&mut input);
            input.run.periods = *periods;
            (common, input)
        }
        CliCommand::Protocol {
            common,
            numeric,
            thermal_samples,
            seed,
        } => {
            let mut input = common.to_input(Some(Command::Protocol));
            numeric.apply(&mut input);
            input.run.thermal_samples = *thermal_samples;
            input.run.seed = *seed;
            (common, input)
        }
        CliCommand::Sweep {
            common,
            numeric,
            axis,
            values,
            mode,
        } => {
            let mut input = common.to_input(Some(Command::Sweep));
            numeric.apply(&mut input);
            input.sweep = SweepOverrides {
                axis: *axis,
                values: values.as_deref().map(ValueToken::parse_list),
                mode: *mode,
            };
            (common, input)
        }
        CliCommand::Run { common } => {
            if common.config.is_none() {
                return Err(Error::Config("`run` needs --config".into()));
            }
            (common, common.to_input(None))
        }
    };
    let layered = match &common.config {
        Some(path) => SpecInput::from_file(path)?.merge(flags)?,
        None => flags,
    };
    layered.resolve()
}

/// Reads a TOML config file and resolves it with no flag overrides.
pub fn load_spec_file(path: &Path) -> Result<RunSpec> {
    SpecInput::from_file(path)?.resolve()
}

fn io_err(path: &Path, e: std::io::Error) -> Error {
    Error::Config(format!("cannot write `{}`: {e}", path.display()))
}

fn envelope_json(envelope: &ReportEnvelope) -> Result<String> {
    serde_json::to_string_pretty(envelope).map_err(|e| Error::Config(format!("cannot serialize report: {e}")))
}

/// Executes `spec` and emits the report. With an output directory the
/// envelope is written to `<name>.json` (plus `<name>.csv` for CSV output)
/// and the written paths are returned; otherwise the report goes to `stdout`.
pub fn run_command(spec: &RunSpec, stdout: &mut dyn Write) -> Result<Vec<PathBuf>> {
    let payload = execute(spec)?;
    let envelope = ReportEnvelope::new(spec, &payload)?;
    let Some(dir) = &spec.output.dir else {
        match spec.output.format {
            Format::Json => writeln!(stdout, "{}", envelope_json(&envelope)?)
                .map_err(|e| io_err(Path::new("<stdout>"), e))?,
            Format::Csv => write_csv(&payload, spec, &mut *stdout)?,
        }
        return Ok(Vec::new());
    };
    std::fs::create_dir_all(dir).map_err(|e| io_err(dir, e))?;
    let json_path = dir.join(format!("{}.json", spec.output.name));
    std::fs::write(&json_path, envelope_json(&envelope)? + "\n").map_err(|e| io_err(&json_path, e))?;
    let mut files = vec![json_path];
    if spec.output.format == Format::Csv {
        let csv_path = dir.join(format!("{}.csv", spec.output.name));
        let file = std::fs::File::create(&csv_path).map_err(|e| io_err(&csv_path, e))?;
        write_csv(&payload, spec, std::io::BufWriter::new(file))?;
        files.push(csv_path);
    }
    for f in &files {
        writeln!(stdout, "{}", f.display()).map_err(|e| io_err(f, e))?;
    }
    Ok(files)
}

/// Machine-readable failure report.
pub fn error_envelope(kind: &str, exit_code: i32, message: &str) -> serde_json::Value {
    serde_json::json!({
        "artifact": ARTIFACT,
        "version": ARTIFACT_VERSION,
        "schema_version": SCHEMA_VERSION,
        "error": {
            "kind": kind,
            "exit_code": exit_code,
            "message": message,
        }
    })
}

/// Full driver: parse, resolve, execute, emit. Returns the process exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = write!(stdout, "{e}");
            return 0;
        }
        Err(e) => {
            let envelope = error_envelope("usage", 2, e.to_string().trim());
            let _ = writeln!(stderr, "{envelope}");
            return 2;
        }
    };
    match load_spec(&cli).and_then(|spec| run_command(&spec, stdout)) {
        Ok(_) => 0,
        Err(e) => {
            let code = e.exit_code();
            let _ = writeln!(stderr, "{}", error_envelope(e.kind(), code, &e.to_string()));
            code
        }
    }
}
