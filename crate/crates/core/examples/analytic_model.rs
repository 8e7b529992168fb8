//! Closed-form quantities of the protocol: branch amplitudes at half a period,
//! decoherence times and the analytic joint states.

use macrocoherence::analytic::{
    analytic_joint_state, branch_amplitudes, decoherence_time, diffusion_coefficient, zero_temp_decoherence_time,
    PhysicalParams, ProtocolTime,
};
use macrocoherence::hilbert::partial_trace_oscillator;
use macrocoherence::Complex64;

fn main() -> macrocoherence::Result<()> {
    let params = PhysicalParams::natural_reference();
    let alpha = Complex64::new(0.5, 0.0);
    let amps = branch_amplitudes(alpha, &params);
    println!("alpha0  = {:.4}", amps.alpha0);
    println!("alpha1  = {:.4}", amps.alpha1);
    println!("alpha0' = {:.4}", amps.alpha0p);
    println!("alpha1' = {:.4}", amps.alpha1p);

    let d = diffusion_coefficient(&params);
    let tau = decoherence_time(d, params.separation(), params.units)?;
    println!("D = {d:.5}, tau_D = {tau:.4}, T/2 = {:.4}", params.period() / 2.0);

    // at θ = 0 the thermal form reduces to 1/(2γ|Δα|²) with Δα = Δx/2δ_x
    let cold = params.with_nbar(0.0);
    let delta_alpha = cold.separation() / (2.0 * cold.delta_x());
    println!(
        "theta = 0: {:.6} vs {:.6}",
        decoherence_time(diffusion_coefficient(&cold), cold.separation(), cold.units)?,
        zero_temp_decoherence_time(cold.gamma, delta_alpha)?
    );

    let space = params.space(48)?;
    for at in [ProtocolTime::Half, ProtocolTime::Full] {
        let rho = analytic_joint_state(at, alpha, &params, &space)?;
        let qubit = partial_trace_oscillator(&rho)?;
        println!("{at:?}: qubit coherence {:.5}", 2.0 * qubit[(0, 1)].norm());
    }
    Ok(())
}
