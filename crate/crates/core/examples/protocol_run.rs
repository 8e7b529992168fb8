//! One run of the two-step protocol at the natural-units reference point,
//! with both dissipators.

use macrocoherence::analytic::PhysicalParams;
use macrocoherence::dynamics::{DissipatorKind, IntegratorConfig};
use macrocoherence::protocol::run_single;
use macrocoherence::states::CoherentLabel;

fn main() -> macrocoherence::Result<()> {
    let params = PhysicalParams::natural_reference();
    let space = params.space(48)?;
    for dissipator in [DissipatorKind::QuantumOptical, DissipatorKind::CaldeiraLeggett] {
        let config = IntegratorConfig {
            dissipator,
            ..IntegratorConfig::default()
        };
        let r = run_single(CoherentLabel::new(0.0, 0.0), &params, &space, &config)?;
        println!("{dissipator}");
        println!("  D01 analytic      {:.4}", r.d01_analytic);
        println!("  C(T/2)            {:.4}  (analytic {:.4})", r.c_half, r.c_half_analytic);
        println!("  C(T)              {:.4}  (e^-2D01 = {:.4})", r.c_full, (-2.0 * r.d01_analytic).exp());
        println!("  d_eff, d_half     {:.4}, {:.4}", r.d_eff, r.d_half);
        println!("  revival fidelity  {:.4}", r.revival_fidelity);
    }
    Ok(())
}
