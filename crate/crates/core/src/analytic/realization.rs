//! Hardware realizations mapped onto [`PhysicalParams`] (SI units).

use serde::{Deserialize, Serialize};

use super::PhysicalParams;
use crate::error::{Error, Result};
use crate::units::{FluxQuantum, UnitSystem, ATOMIC_MASS_SI};

/// Mass of a ⁹Be⁺ ion in kg.
pub const BERYLLIUM_9_MASS: f64 = 9.012_182 * ATOMIC_MASS_SI;

/// Flux qubit coupled by flux linkage to an LC tank circuit. The circuit
/// flux Φ plays the role of x and the capacitance that of m.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FluxLcCircuit {
    /// L in henry.
    pub inductance: f64,
    /// C in farad.
    pub capacitance: f64,
    /// R in ohm.
    pub resistance: f64,
    /// Qubit inductance Λ in henry.
    pub qubit_inductance: f64,
    /// Dimensionless flux linkage μ, 0 < μ ≤ 1.
    pub flux_linkage: f64,
    /// Temperature in kelvin.
    pub theta: f64,
    #[serde(default)]
    pub flux_quantum: FluxQuantum,
}

impl Default for FluxLcCircuit {
    fn default() -> Self {
        FluxLcCircuit {
            inductance: 100e-6,
            capacitance: 100e-12,
            resistance: 1.0,
            qubit_inductance: 100e-12,
            flux_linkage: 1e-6,
            theta: 10e-3,
            flux_quantum: FluxQuantum::HOverTwoE,
        }
    }
}

fn positive(name: &'static str, v: f64) -> Result<f64> {
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(Error::domain(name, v, "must be positive"))
    }
}

/// m ← C, ω ← 1/√(LC), γ ← R/2L, ε ← μΦ₀/Λ.
pub fn flux_lc_realization(circuit: &FluxLcCircuit) -> Result<PhysicalParams> {
    let l = positive("inductance", circuit.inductance)?;
    let c = positive("capacitance", circuit.capacitance)?;
    let r = positive("resistance", circuit.resistance)?;
    let lambda_q = positive("qubit_inductance", circuit.qubit_inductance)?;
    let mu = positive("flux_linkage", circuit.flux_linkage)?;
    if mu > 1.0 {
        return Err(Error::domain("flux_linkage", mu, "must not exceed 1"));
    }
    let theta = positive("theta", circuit.theta)?;
    Ok(PhysicalParams {
        m: c,
        omega: 1.0 / (l * c).sqrt(),
        gamma: r / (2.0 * l),
        theta,
        epsilon: mu * circuit.flux_quantum.value() / lambda_q,
        lambda: 0.0,
        omega_cut: None,
        units: UnitSystem::SI,
    })
}

/// Internal levels of one ion coupled to the collective motion of `ions` ions.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct IonTrap {
    pub ions: u32,
    /// Collective-mode angular frequency in rad/s.
    pub omega: f64,
    /// Vacuum Rabi frequency g in rad/s.
    pub rabi_frequency: f64,
    /// Single-ion Lamb-Dicke parameter η₀.
    pub lamb_dicke: f64,
    pub gamma: f64,
    pub theta: f64,
    /// Mass of one ion in kg; the collective mode carries `ions` times this.
    pub ion_mass: f64,
}

impl Default for IonTrap {
    fn default() -> Self {
        IonTrap {
            ions: 100,
            omega: 1e6,
            rabi_frequency: 100.0 * 10f64.sqrt() * 1e6,
            lamb_dicke: 0.1 * 10f64.sqrt(),
            gamma: 1e3,
            theta: 0.1e-3,
            ion_mass: BERYLLIUM_9_MASS,
        }
    }
}

/// ε ← ħgη₀/(√N δ_x), so that χ = gη₀/(√N ω).
pub fn ion_trap_realization(trap: &IonTrap) -> Result<PhysicalParams> {
    if trap.ions == 0 {
        return Err(Error::domain("ions", 0.0, "need at least one ion"));
    }
    let omega = positive("omega", trap.omega)?;
    let g = positive("rabi_frequency", trap.rabi_frequency)?;
    let eta = positive("lamb_dicke", trap.lamb_dicke)?;
    let gamma = positive("gamma", trap.gamma)?;
    let theta = positive("theta", trap.theta)?;
    let ion_mass = positive("ion_mass", trap.ion_mass)?;
    let n = trap.ions as f64;
    let m = n * ion_mass;
    let hbar = UnitSystem::SI.hbar;
    let delta_x = (hbar / (2.0 * m * omega)).sqrt();
    Ok(PhysicalParams {
        m,
        omega,
        gamma,
        theta,
        epsilon: hbar * g * eta / (n.sqrt() * delta_x),
        lambda: 0.0,
        omega_cut: None,
        units: UnitSystem::SI,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytic::{design_summary, feasibility, FeasibilityThresholds};
    use approx::assert_relative_eq;

    #[test]
    fn lc_circuit_frequency_and_damping() {
        let p = flux_lc_realization(&FluxLcCircuit::default()).unwrap();
        assert_relative_eq!(p.omega, 1e7, max_relative = 1e-12);
        assert_relative_eq!(p.gamma, 5e3, max_relative = 1e-12);
        let d = design_summary(&p);
        assert_relative_eq!(d.quality, 2e3, max_relative = 1e-12);
    }

    #[test]
    fn lc_circuit_coupling_with_both_flux_conventions() {
        let p = flux_lc_realization(&FluxLcCircuit::default()).unwrap();
        let chi = p.chi();
        assert!((4.4..4.6).contains(&chi), "{chi}");

        let literal = FluxLcCircuit {
            flux_quantum: FluxQuantum::HbarOverTwoE,
            ..FluxLcCircuit::default()
        };
        let chi = flux_lc_realization(&literal).unwrap().chi();
        assert!((0.70..0.73).contains(&chi), "{chi}");
    }

    #[test]
    fn lc_circuit_validation() {
        let bad = FluxLcCircuit {
            flux_linkage: 2.0,
            ..FluxLcCircuit::default()
        };
        assert!(flux_lc_realization(&bad).is_err());
        let bad = FluxLcCircuit {
            resistance: 0.0,
            ..FluxLcCircuit::default()
        };
        assert!(matches!(
            flux_lc_realization(&bad),
            Err(Error::Domain { name: "resistance", .. })
        ));
    }

    #[test]
    fn ion_trap_design() {
        let p = ion_trap_realization(&IonTrap::default()).unwrap();
        let d = design_summary(&p);
        assert_relative_eq!(d.chi, 10.0, max_relative = 1e-12);
        assert_relative_eq!(d.quality, 1e3, max_relative = 1e-12);
        let r = feasibility(&d, &p, &FeasibilityThresholds::default());
        assert!(r.cond_separation.passed);
        assert!(r.cond_coherence.passed);
    }

    #[test]
    fn ion_count_scaling() {
        let p1 = ion_trap_realization(&IonTrap::default()).unwrap();
        let p4 = ion_trap_realization(&IonTrap {
            ions: 400,
            ..IonTrap::default()
        })
        .unwrap();
        assert_relative_eq!(p4.chi() / p1.chi(), 0.5, max_relative = 1e-12);
        assert!(ion_trap_realization(&IonTrap {
            ions: 0,
            ..IonTrap::default()
        })
        .is_err());
    }
}
