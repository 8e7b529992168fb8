//! Coherent and thermal oscillator states on a truncated Fock space, and the
//! thermal state rebuilt from coherent states drawn from its P-function.

use macrocoherence::analytic::coherent_overlap;
use macrocoherence::hilbert::{build_space, pure_fidelity, trace_distance};
use macrocoherence::states::{coherent_state, sample_with, seeded_rng, thermal_state, CoherentLabel, ThermalSpec};
use macrocoherence::units::UnitSystem;
use macrocoherence::Complex64;
use nalgebra::DMatrix;

fn main() -> macrocoherence::Result<()> {
    let space = build_space(40, 1.0, 1.0, UnitSystem::NATURAL)?;

    let a = CoherentLabel::new(1.0, 0.5);
    let b = CoherentLabel::new(-0.5, 1.0);
    let psi_a = coherent_state(a, &space)?;
    let psi_b = coherent_state(b, &space)?;
    let numeric = psi_a.amplitudes.dotc(&psi_b.amplitudes).norm();
    println!("|<a|b>| numeric {numeric:.8}, closed form {:.8}", coherent_overlap(a.alpha, b.alpha));

    let spec = ThermalSpec { nbar: 0.5 };
    let thermal = thermal_state(spec, &space)?;
    let purity = (&thermal * &thermal).trace().re;
    println!("thermal purity {purity:.8}, 1/(2nbar+1) = {:.8}", 1.0 / (2.0 * spec.nbar + 1.0));

    let mut rng = seeded_rng(7);
    let samples = 10_000;
    let mut mixture = DMatrix::<Complex64>::zeros(space.fock_dim, space.fock_dim);
    for _ in 0..samples {
        mixture += coherent_state(sample_with(spec, &mut rng), &space)?.projector();
    }
    mixture /= Complex64::new(samples as f64, 0.0);
    println!("P-function mixture of {samples} coherent states:");
    println!("  trace distance to thermal state {:.4}", trace_distance(&mixture, &thermal));
    println!("  vacuum population {:.4}", pure_fidelity(&coherent_state(CoherentLabel::new(0.0, 0.0), &space)?.amplitudes, &mixture));
    Ok(())
}
