#![allow(dead_code)]

use macrocoherence::analytic::PhysicalParams;
use macrocoherence::dynamics::{DissipatorKind, IntegratorConfig};

/// m = ħ = ω = 1, χ = 1, n̄ = 0.5, γ set for the requested D₀₁.
pub fn reference(d01: f64) -> PhysicalParams {
    PhysicalParams::natural_reference().with_d01(d01)
}

pub fn config(dissipator: DissipatorKind) -> IntegratorConfig {
    IntegratorConfig {
        dissipator,
        ..IntegratorConfig::default()
    }
}

pub fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}
