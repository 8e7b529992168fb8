//! Protocol averaged over coherent states drawn from the thermal P-function.
//! The spread of the per-sample exponent measures how far the decoherence
//! factor depends on the initial coherent state.

use macrocoherence::analytic::PhysicalParams;
use macrocoherence::dynamics::IntegratorConfig;
use macrocoherence::protocol::run_thermal;

fn main() -> macrocoherence::Result<()> {
    let params = PhysicalParams::natural_reference();
    let space = params.space(48)?;
    let result = run_thermal(&params, &space, &IntegratorConfig::default(), 8, 2024)?;
    for s in &result.samples {
        println!(
            "sample {:2}  alpha = {:+.3}{:+.3}i  d_eff = {:.4}",
            s.index, s.result.alpha.re, s.result.alpha.im, s.result.d_eff
        );
    }
    println!("rng {}, seed {}, rejected {}", result.rng, result.seed, result.rejected);
    println!(
        "d_eff = {:.4} ± {:.4} (cv {:.3}), analytic D01 = {:.4}",
        result.d_eff.mean,
        result.d_eff.std_error,
        result.d_eff.coefficient_of_variation(),
        result.d01_analytic
    );
    Ok(())
}
