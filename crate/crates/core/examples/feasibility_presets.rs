//! Design summary and feasibility verdicts for the two hardware realizations,
//! including the effect of the flux-quantum convention on the LC circuit.

use macrocoherence::analytic::{
    design_summary, feasibility, flux_lc_realization, ion_trap_realization, FeasibilityThresholds, FluxLcCircuit,
    IonTrap, PhysicalParams,
};
use macrocoherence::units::FluxQuantum;

fn report(name: &str, params: &PhysicalParams) {
    let design = design_summary(params);
    let verdict = feasibility(&design, params, &FeasibilityThresholds::default());
    println!("{name}");
    println!("  omega = {:.3e} rad/s, Q = {:.0}, nbar = {:.2}", params.omega, design.quality, design.nbar);
    println!("  chi = {:.3}, dx/2dx = {:.3}, dp/2dp = {:.3}", design.chi, design.dx_over_2dx, design.dp_over_2dp);
    println!("  D01 = {:.3}, phi01 = {:.3}", design.d01, design.phi01);
    let c = &verdict;
    println!("  Q^2/(chi nbar)^2 = {:9.3}  {}", c.cond_momentum_shift.ratio, c.cond_momentum_shift.passed);
    println!("  chi              = {:9.3}  {}", c.cond_separation.ratio, c.cond_separation.passed);
    println!("  Q/(chi^2 nbar)   = {:9.3}  {}", c.cond_coherence.ratio, c.cond_coherence.passed);
    println!("  gamma/omega      = {:9.2e}  {}", c.cond_underdamped.ratio, c.cond_underdamped.passed);
}

fn main() -> macrocoherence::Result<()> {
    report("flux qubit + LC circuit (h/2e)", &flux_lc_realization(&FluxLcCircuit::default())?);
    let literal = FluxLcCircuit {
        flux_quantum: FluxQuantum::HbarOverTwoE,
        ..FluxLcCircuit::default()
    };
    report("flux qubit + LC circuit (hbar/2e)", &flux_lc_realization(&literal)?);
    report("trapped ions", &ion_trap_realization(&IonTrap::default())?);
    Ok(())
}
