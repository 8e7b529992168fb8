//! Temperature and mass sweeps of the decoherence exponent. The mass sweep
//! rescales the coupling so that the branch separation stays fixed.

use macrocoherence::analytic::PhysicalParams;
use macrocoherence::dynamics::IntegratorConfig;
use macrocoherence::protocol::{sweep, SweepAxis, SweepMode};

fn main() -> macrocoherence::Result<()> {
    let config = IntegratorConfig::default();

    // high-temperature regime: k_B θ = 20 ħω
    let hot = PhysicalParams::natural_reference().with_nbar(19.5).with_d01(0.5);
    let space = hot.space(32)?;
    let t0 = hot.theta;
    let table = sweep(&hot, SweepAxis::Theta, &[t0, 2.0 * t0, 4.0 * t0], SweepMode::Analytic, &space, &config)?;
    table.write_csv(std::io::stdout().lock(), "schema_version=1 example=theta_sweep").expect("stdout");

    let base = PhysicalParams::natural_reference().with_d01(0.25);
    let space = base.space(48)?;
    let table = sweep(&base, SweepAxis::M, &[1.0, 2.0], SweepMode::Both, &space, &config)?;
    table.write_csv(std::io::stdout().lock(), "schema_version=1 example=mass_sweep").expect("stdout");
    Ok(())
}
