use serde::{Deserialize, Serialize};

use super::{DimensionlessDesign, PhysicalParams};

/// Numerical reading of the order-of-magnitude language used to state the
/// design conditions.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FeasibilityThresholds {
    /// "A ≫ B" holds when A/B ≥ this.
    pub much_greater: f64,
    /// "A ∼ B" holds when A/B lies within [1/band, band].
    pub order_band: f64,
    /// "A ≪ B" holds when A/B ≤ this.
    pub much_less: f64,
    /// Under-damped when γ/ω ≤ this.
    pub underdamped: f64,
}

impl Default for FeasibilityThresholds {
    fn default() -> Self {
        FeasibilityThresholds {
            much_greater: 10.0,
            order_band: 10.0,
            much_less: 0.1,
            underdamped: 0.01,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Condition {
    pub ratio: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FeasibilityReport {
    /// Q²/(χn̄)², passes when ≫ 1.
    pub cond_momentum_shift: Condition,
    /// χ, passes when ≥ 1.
    pub cond_separation: Condition,
    /// Q/(χ²n̄), passes when ∼ 1.
    pub cond_coherence: Condition,
    /// k_Bθ/(ħΩ_cut), passes when ≪ 1. Absent without a bath cutoff.
    pub cond_markov: Option<Condition>,
    /// γ/ω.
    pub cond_underdamped: Condition,
}

impl FeasibilityReport {
    pub fn all_passed(&self) -> bool {
        self.cond_momentum_shift.passed
            && self.cond_separation.passed
            && self.cond_coherence.passed
            && self.cond_underdamped.passed
            && self.cond_markov.is_none_or(|c| c.passed)
    }
}

fn safe_div(num: f64, den: f64) -> f64 {
    if den == 0.0 {
        if num == 0.0 {
            f64::NAN
        } else {
            f64::INFINITY
        }
    } else {
        num / den
    }
}

pub fn feasibility(
    design: &DimensionlessDesign,
    params: &PhysicalParams,
    thresholds: &FeasibilityThresholds,
) -> FeasibilityReport {
    let chi_nbar = design.chi * design.nbar;
    let momentum = safe_div(design.quality * design.quality, chi_nbar * chi_nbar);
    let coherence = safe_div(design.quality, design.chi * design.chi * design.nbar);
    let underdamped = params.gamma / params.omega;
    let markov = params.omega_cut.map(|cut| {
        let r = params.units.k_b * params.theta / (params.units.hbar * cut);
        Condition {
            ratio: r,
            passed: r <= thresholds.much_less,
        }
    });
    FeasibilityReport {
        cond_momentum_shift: Condition {
            ratio: momentum,
            passed: momentum >= thresholds.much_greater,
        },
        cond_separation: Condition {
            ratio: design.chi,
            passed: design.chi.abs() >= 1.0,
        },
        cond_coherence: Condition {
            ratio: coherence,
            passed: coherence.is_finite()
                && coherence >= 1.0 / thresholds.order_band
                && coherence <= thresholds.order_band,
        },
        cond_markov: markov,
        cond_underdamped: Condition {
            ratio: underdamped,
            passed: underdamped <= thresholds.underdamped,
        },
    }
}
