//! Unit systems and physical constants.
//!
//! The numerical core never hard-codes ħ or k_B: every quantity is carried in
//! the caller's unit system. Natural units (ħ = k_B = 1) are the default for
//! simulation; SI is used by the hardware realizations.

use serde::{Deserialize, Serialize};

/// Reduced Planck constant in J·s (CODATA 2018, exact).
pub const HBAR_SI: f64 = 1.054_571_817e-34;
/// Planck constant in J·s (exact).
pub const PLANCK_SI: f64 = 6.626_070_15e-34;
/// Boltzmann constant in J/K (exact).
pub const BOLTZMANN_SI: f64 = 1.380_649e-23;
/// Elementary charge in C (exact).
pub const ELEMENTARY_CHARGE_SI: f64 = 1.602_176_634e-19;
/// Atomic mass unit in kg.
pub const ATOMIC_MASS_SI: f64 = 1.660_539_066_60e-27;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum UnitKind {
    Natural,
    Si,
    Custom,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UnitSystem {
    pub kind: UnitKind,
    pub hbar: f64,
    pub k_b: f64,
}

impl UnitSystem {
    pub const NATURAL: UnitSystem = UnitSystem {
        kind: UnitKind::Natural,
        hbar: 1.0,
        k_b: 1.0,
    };

    pub const SI: UnitSystem = UnitSystem {
        kind: UnitKind::Si,
        hbar: HBAR_SI,
        k_b: BOLTZMANN_SI,
    };

    pub fn custom(hbar: f64, k_b: f64) -> Self {
        UnitSystem {
            kind: UnitKind::Custom,
            hbar,
            k_b,
        }
    }
}

impl Default for UnitSystem {
    fn default() -> Self {
        UnitSystem::NATURAL
    }
}

/// Which constant plays the role of the flux quantum Φ₀ in the flux-qubit
/// coupling ε = μΦ₀/Λ.
///
/// `HOverTwoE` is the superconducting flux quantum h/2e and gives χ ≈ 4.5 for
/// the default LC circuit. `HbarOverTwoE` is ħ/2e and gives χ ≈ 0.7.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FluxQuantum {
    #[default]
    HOverTwoE,
    HbarOverTwoE,
}

impl FluxQuantum {
    /// Value in webers.
    pub fn value(self) -> f64 {
        match self {
            FluxQuantum::HOverTwoE => PLANCK_SI / (2.0 * ELEMENTARY_CHARGE_SI),
            FluxQuantum::HbarOverTwoE => HBAR_SI / (2.0 * ELEMENTARY_CHARGE_SI),
        }
    }
}
