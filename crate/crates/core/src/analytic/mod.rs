//! Closed-form model of the two-step protocol: thermal occupation, momentum
//! diffusion, decoherence time, branch amplitudes at half a period, the
//! dimensionless design summary and the analytic joint states.

mod feasibility;
mod realization;

pub use feasibility::{feasibility, Condition, FeasibilityReport, FeasibilityThresholds};
pub use realization::{flux_lc_realization, ion_trap_realization, FluxLcCircuit, IonTrap, BERYLLIUM_9_MASS};

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hilbert::{build_space, CompositeDensity, SpaceDescriptor};
use crate::states::{coherent_state, truncation_adequate, CoherentLabel};
use crate::units::UnitSystem;

/// Physical description of one run: oscillator, coupling, environment.
///
/// `m` is the oscillator mass, or the capacitance in the LC-circuit analogy
/// where flux plays the role of position. `omega` is always an angular
/// frequency.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhysicalParams {
    pub m: f64,
    pub omega: f64,
    pub gamma: f64,
    pub theta: f64,
    /// Coupling ε in H_QA = ε x σ_z.
    pub epsilon: f64,
    /// Qubit energy λ in H_Q = λ σ_z.
    #[serde(default)]
    pub lambda: f64,
    #[serde(default)]
    pub omega_cut: Option<f64>,
    #[serde(default)]
    pub units: UnitSystem,
}

impl PhysicalParams {
    /// Natural units with ħ = k_B = 1 and λ = 0.
    pub fn natural(m: f64, omega: f64, gamma: f64, theta: f64, epsilon: f64) -> Self {
        PhysicalParams {
            m,
            omega,
            gamma,
            theta,
            epsilon,
            lambda: 0.0,
            omega_cut: None,
            units: UnitSystem::NATURAL,
        }
    }

    /// m = ħ = ω = 1, χ = 1, n̄ = 0.5, γ tuned so that D₀₁ = 0.5.
    pub fn natural_reference() -> Self {
        PhysicalParams::natural(1.0, 1.0, 0.0, 0.0, 0.0)
            .with_chi(1.0)
            .with_nbar(0.5)
            .with_d01(0.5)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.m > 0.0) || !self.m.is_finite() {
            return Err(Error::domain("m", self.m, "must be positive"));
        }
        if !(self.omega > 0.0) || !self.omega.is_finite() {
            return Err(Error::domain("omega", self.omega, "must be positive"));
        }
        if !(self.gamma >= 0.0) || !self.gamma.is_finite() {
            return Err(Error::domain("gamma", self.gamma, "must be non-negative"));
        }
        if !(self.theta >= 0.0) || !self.theta.is_finite() {
            return Err(Error::domain("theta", self.theta, "must be non-negative"));
        }
        if !self.epsilon.is_finite() {
            return Err(Error::domain("epsilon", self.epsilon, "must be finite"));
        }
        if !self.lambda.is_finite() {
            return Err(Error::domain("lambda", self.lambda, "must be finite"));
        }
        if let Some(cut) = self.omega_cut {
            if !(cut > 0.0) {
                return Err(Error::domain("omega_cut", cut, "must be positive when given"));
            }
        }
        if !(self.units.hbar > 0.0) || !(self.units.k_b > 0.0) {
            return Err(Error::domain("hbar", self.units.hbar, "unit constants must be positive"));
        }
        Ok(())
    }

    pub fn delta_x(&self) -> f64 {
        (self.units.hbar / (2.0 * self.m * self.omega)).sqrt()
    }

    pub fn delta_p(&self) -> f64 {
        (self.m * self.units.hbar * self.omega / 2.0).sqrt()
    }

    pub fn period(&self) -> f64 {
        2.0 * PI / self.omega
    }

    pub fn nbar(&self) -> f64 {
        nbar(self.omega, self.theta, self.units)
    }

    pub fn chi(&self) -> f64 {
        self.epsilon * self.delta_x() / (self.units.hbar * self.omega)
    }

    /// Δx = 2ε/mω².
    pub fn separation(&self) -> f64 {
        2.0 * self.epsilon / (self.m * self.omega * self.omega)
    }

    pub fn space(&self, fock_dim: usize) -> Result<SpaceDescriptor> {
        build_space(fock_dim, self.m, self.omega, self.units)
    }

    /// Sets θ so that the thermal occupation equals `nbar`.
    pub fn with_nbar(mut self, nbar: f64) -> Self {
        self.theta = theta_for_nbar(self.omega, nbar, self.units);
        self
    }

    /// Sets ε so that χ = εδ_x/ħω equals `chi`.
    pub fn with_chi(mut self, chi: f64) -> Self {
        self.epsilon = chi * self.units.hbar * self.omega / self.delta_x();
        self
    }

    /// Sets γ = ω/Q.
    pub fn with_quality(mut self, quality: f64) -> Self {
        self.gamma = self.omega / quality;
        self
    }

    /// Sets γ so that the analytic decoherence exponent equals `d01`.
    pub fn with_d01(mut self, d01: f64) -> Self {
        let unit = PhysicalParams { gamma: 1.0, ..self };
        let per_gamma = decoherence_exponent(&unit);
        self.gamma = if per_gamma > 0.0 { d01 / per_gamma } else { 0.0 };
        self
    }
}

/// Bose-Einstein occupation n̄ = 1/(e^{ħω/k_Bθ} − 1); exactly 0 at θ = 0.
pub fn nbar(omega: f64, theta: f64, units: UnitSystem) -> f64 {
    if theta <= 0.0 {
        return 0.0;
    }
    let x = units.hbar * omega / (units.k_b * theta);
    1.0 / x.exp_m1()
}

/// Inverse of [`nbar`]: θ = ħω / (k_B ln(1 + 1/n̄)).
pub fn theta_for_nbar(omega: f64, nbar: f64, units: UnitSystem) -> f64 {
    if nbar <= 0.0 {
        return 0.0;
    }
    units.hbar * omega / (units.k_b * (1.0 / nbar).ln_1p())
}

/// D = 2mγħω(n̄ + ½).
pub fn diffusion_coefficient(params: &PhysicalParams) -> f64 {
    2.0 * params.m * params.gamma * params.units.hbar * params.omega * (params.nbar() + 0.5)
}

/// τ_D = ħ²/(D Δx²).
pub fn decoherence_time(diffusion: f64, separation: f64, units: UnitSystem) -> Result<f64> {
    if !(diffusion > 0.0) {
        return Err(Error::domain("D", diffusion, "must be positive"));
    }
    if separation == 0.0 || !separation.is_finite() {
        return Err(Error::domain("delta_x", separation, "must be non-zero"));
    }
    Ok(units.hbar * units.hbar / (diffusion * separation * separation))
}

/// Zero-temperature form τ_D = 1/(2γ|Δα|²).
pub fn zero_temp_decoherence_time(gamma: f64, delta_alpha: f64) -> Result<f64> {
    if !(gamma > 0.0) {
        return Err(Error::domain("gamma", gamma, "must be positive"));
    }
    if delta_alpha == 0.0 || !delta_alpha.is_finite() {
        return Err(Error::domain("delta_alpha", delta_alpha, "must be non-zero"));
    }
    Ok(1.0 / (2.0 * gamma * delta_alpha * delta_alpha))
}

/// Unwanted momentum shift Δp = DΔx/(2ωħ).
pub fn momentum_shift(params: &PhysicalParams) -> f64 {
    diffusion_coefficient(params) * params.separation() / (2.0 * params.omega * params.units.hbar)
}

/// D₀₁ = (DΔx²/ħ²)·(T/2).
pub fn decoherence_exponent(params: &PhysicalParams) -> f64 {
    let hbar = params.units.hbar;
    let dx = params.separation();
    diffusion_coefficient(params) * dx * dx / (hbar * hbar) * (params.period() / 2.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BranchAmplitudes {
    pub alpha0: C64,
    pub alpha1: C64,
    pub alpha0p: C64,
    pub alpha1p: C64,
}

impl BranchAmplitudes {
    /// Largest modulus among the four amplitudes.
    pub fn max_excursion(&self) -> f64 {
        [self.alpha0, self.alpha1, self.alpha0p, self.alpha1p]
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }
}

/// Half-period branch amplitudes α_j = −α + (−1)ʲ Δx/2δ_x and
/// α_j′ = α_j + iΔp/2δ_p.
pub fn branch_amplitudes(alpha: C64, params: &PhysicalParams) -> BranchAmplitudes {
    let shift = params.separation() / (2.0 * params.delta_x());
    let kick = C64::new(0.0, momentum_shift(params) / (2.0 * params.delta_p()));
    let alpha0 = -alpha + shift;
    let alpha1 = -alpha - shift;
    BranchAmplitudes {
        alpha0,
        alpha1,
        alpha0p: alpha0 + kick,
        alpha1p: alpha1 + kick,
    }
}

/// Exact-to-estimate ratios for the order-of-magnitude relations
/// Δx/2δ_x ∼ χ, Δp/2δ_p ∼ χn̄/Q, D₀₁ ∼ χ²n̄/Q. `None` where the estimate vanishes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EstimateRatios {
    pub separation: Option<f64>,
    pub momentum_shift: Option<f64>,
    pub d01: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DimensionlessDesign {
    pub chi: f64,
    /// Q = ω/γ; infinite when γ = 0.
    pub quality: f64,
    pub nbar: f64,
    pub dx_over_2dx: f64,
    pub dp_over_2dp: f64,
    pub d01: f64,
    pub phi01: f64,
    pub estimates: EstimateRatios,
}

fn ratio(exact: f64, estimate: f64) -> Option<f64> {
    (estimate != 0.0 && estimate.is_finite()).then(|| exact / estimate)
}

pub fn design_summary(params: &PhysicalParams) -> DimensionlessDesign {
    let chi = params.chi();
    let quality = if params.gamma > 0.0 {
        params.omega / params.gamma
    } else {
        f64::INFINITY
    };
    let nbar = params.nbar();
    let dx_over_2dx = params.separation() / (2.0 * params.delta_x());
    let dp_over_2dp = momentum_shift(params) / (2.0 * params.delta_p());
    let d01 = decoherence_exponent(params);
    DimensionlessDesign {
        chi,
        quality,
        nbar,
        dx_over_2dx,
        dp_over_2dp,
        d01,
        phi01: -4.0 * PI * d01,
        estimates: EstimateRatios {
            separation: ratio(dx_over_2dx, chi),
            momentum_shift: ratio(dp_over_2dp, chi * nbar / quality),
            d01: ratio(d01, chi * chi * nbar / quality),
        },
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ProtocolTime {
    /// End of step one, t = T/2.
    Half,
    /// End of step two, t = T.
    Full,
}

/// ½(|0⟩⟨0|⊗|α₀⟩⟨α₀| + |1⟩⟨1|⊗|α₁⟩⟨α₁|)
/// + ½e^{−D₀₁}(e^{−iφ₀₁}|0⟩⟨1|⊗|α₀′⟩⟨α₁′| + h.c.)
pub fn branch_superposition_state(
    amps: &BranchAmplitudes,
    d01: f64,
    phi01: f64,
    space: &SpaceDescriptor,
) -> Result<CompositeDensity> {
    let n = space.fock_dim;
    let c0 = coherent_state(CoherentLabel::from(amps.alpha0), space)?.amplitudes;
    let c1 = coherent_state(CoherentLabel::from(amps.alpha1), space)?.amplitudes;
    let c0p = coherent_state(CoherentLabel::from(amps.alpha0p), space)?.amplitudes;
    let c1p = coherent_state(CoherentLabel::from(amps.alpha1p), space)?.amplitudes;
    let mut rho = DMatrix::<C64>::zeros(2 * n, 2 * n);
    let half = C64::new(0.5, 0.0);
    let off = C64::from_polar(0.5 * (-d01).exp(), -phi01);
    rho.view_mut((0, 0), (n, n)).copy_from(&(&c0 * c0.adjoint() * half));
    rho.view_mut((n, n), (n, n)).copy_from(&(&c1 * c1.adjoint() * half));
    let upper = &c0p * c1p.adjoint() * off;
    rho.view_mut((n, 0), (n, n)).copy_from(&upper.adjoint());
    rho.view_mut((0, n), (n, n)).copy_from(&upper);
    CompositeDensity::new(rho, 0.0)
}

/// Closed-form joint state at T/2 or at T for an initial coherent state |α⟩.
pub fn analytic_joint_state(
    at: ProtocolTime,
    alpha: C64,
    params: &PhysicalParams,
    space: &SpaceDescriptor,
) -> Result<CompositeDensity> {
    params.validate()?;
    let design = design_summary(params);
    let period = params.period();
    match at {
        ProtocolTime::Half => {
            let amps = branch_amplitudes(alpha, params);
            if !truncation_adequate(amps.max_excursion(), space.fock_dim) {
                return Err(Error::Truncation {
                    fock_dim: space.fock_dim,
                    what: format!("branch excursion {:.4}", amps.max_excursion()),
                    deficit: 0.0,
                });
            }
            let mut rho = branch_superposition_state(&amps, design.d01, design.phi01, space)?;
            rho.time = period / 2.0;
            Ok(rho)
        }
        ProtocolTime::Full => {
            let n = space.fock_dim;
            let c = coherent_state(CoherentLabel::from(alpha), space)?.amplitudes;
            let osc = &c * c.adjoint();
            let coh = 0.5 * (-2.0 * design.d01).exp();
            let qubit = nalgebra::Matrix2::new(
                C64::new(0.5, 0.0),
                C64::new(coh, 0.0),
                C64::new(coh, 0.0),
                C64::new(0.5, 0.0),
            );
            let mut rho = CompositeDensity::from_product(&qubit, &osc)?;
            debug_assert_eq!(rho.fock_dim(), n);
            rho.time = period;
            Ok(rho)
        }
    }
}

/// |⟨α|β⟩| = e^{−|α−β|²/2}.
pub fn coherent_overlap(a: C64, b: C64) -> f64 {
    (-0.5 * (a - b).norm_sqr()).exp()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hilbert::{partial_trace_oscillator, partial_trace_qubit, trace_distance, coherence_of};
    use crate::units::UnitSystem;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn si(m: f64, omega: f64, gamma: f64, theta: f64, epsilon: f64) -> PhysicalParams {
        PhysicalParams {
            units: UnitSystem::SI,
            ..PhysicalParams::natural(m, omega, gamma, theta, epsilon)
        }
    }

    #[test]
    fn thermal_occupation() {
        assert_eq!(nbar(1e7, 0.0, UnitSystem::SI), 0.0);
        let flux = nbar(1e7, 10e-3, UnitSystem::SI);
        assert!((130.0..132.0).contains(&flux), "{flux}");
        let ion = nbar(1e6, 0.1e-3, UnitSystem::SI);
        assert!((12.0..13.2).contains(&ion), "{ion}");
        // far below ħω the exponential would overflow
        assert_eq!(nbar(1.0, 1e-6, UnitSystem::NATURAL), 0.0);
        let mut last = 0.0;
        for k in 1..50 {
            let v = nbar(1.0, k as f64 * 0.1, UnitSystem::NATURAL);
            assert!(v > last);
            last = v;
        }
        let t = theta_for_nbar(1.0, 0.5, UnitSystem::NATURAL);
        assert_relative_eq!(nbar(1.0, t, UnitSystem::NATURAL), 0.5, max_relative = 1e-13);
    }

    #[test]
    fn diffusion_values() {
        let p = PhysicalParams::natural(1.0, 1.0, 0.0, 2.0, 1.0);
        assert_eq!(diffusion_coefficient(&p), 0.0);
        let p = PhysicalParams::natural(1.0, 1.0, 0.01, 0.0, 1.0);
        assert_relative_eq!(diffusion_coefficient(&p), 0.01, max_relative = 1e-15);
        let p = PhysicalParams::natural(1.0, 1.0, 1e-3, 0.0, 1.0).with_nbar(2.0);
        assert_relative_eq!(diffusion_coefficient(&p), 5e-3, max_relative = 1e-12);
    }

    #[test]
    fn decoherence_time_forms() {
        let u = UnitSystem::NATURAL;
        let t1 = decoherence_time(0.1, 2.0, u).unwrap();
        let t2 = decoherence_time(0.2, 2.0, u).unwrap();
        assert_relative_eq!(t1 / t2, 2.0, max_relative = 1e-15);
        assert_relative_eq!(zero_temp_decoherence_time(0.01, 1.0).unwrap(), 50.0, max_relative = 1e-15);
        assert!(decoherence_time(0.0, 1.0, u).is_err());
        assert!(decoherence_time(1.0, 0.0, u).is_err());
        assert!(zero_temp_decoherence_time(0.0, 1.0).is_err());
        assert!(zero_temp_decoherence_time(1.0, 0.0).is_err());
    }

    #[test]
    fn branch_amplitude_regression() {
        // m = ω = ħ = 1, ε = 1: δ_x = 1/√2, Δx = 2, Δx/2δ_x = √2 = 2χ
        let p = PhysicalParams::natural(1.0, 1.0, 0.0, 0.0, 1.0);
        let b = branch_amplitudes(C64::new(0.0, 0.0), &p);
        let r2 = 2f64.sqrt();
        assert_relative_eq!(b.alpha0.re, r2, max_relative = 1e-15);
        assert_relative_eq!(b.alpha1.re, -r2, max_relative = 1e-15);
        assert_eq!(b.alpha0.im, 0.0);
        assert_eq!(b.alpha0p, b.alpha0);
        assert_relative_eq!(p.separation() / (2.0 * p.delta_x()), 2.0 * p.chi(), max_relative = 1e-15);

        let with_gamma = PhysicalParams { gamma: 0.01, ..p }.with_nbar(1.0);
        let b = branch_amplitudes(C64::new(0.3, -0.2), &with_gamma);
        assert!(b.alpha0p.im > b.alpha0.im);
        assert_relative_eq!((b.alpha0 - b.alpha1).re, 2.0 * r2, max_relative = 1e-14);
        let d = design_summary(&with_gamma);
        assert_relative_eq!((b.alpha0p - b.alpha0).im, d.dp_over_2dp, max_relative = 1e-14);
    }

    #[test]
    fn zero_coupling_branches_coincide() {
        let p = PhysicalParams::natural(1.0, 1.0, 0.02, 1.0, 0.0);
        let b = branch_amplitudes(C64::new(0.7, 0.1), &p);
        assert_eq!(b.alpha0, C64::new(-0.7, -0.1));
        assert_eq!(b.alpha1, b.alpha0);
    }

    #[test]
    fn design_for_undamped_oscillator() {
        let p = PhysicalParams::natural(1.0, 1.0, 0.0, 1.0, 1.0);
        let d = design_summary(&p);
        assert_eq!(d.d01, 0.0);
        assert_eq!(d.phi01, 0.0);
        assert!(d.quality.is_infinite());
        assert_eq!(d.estimates.momentum_shift, None);
    }

    #[test]
    fn design_estimate_ratios_are_reported() {
        let p = PhysicalParams::natural_reference();
        let d = design_summary(&p);
        assert_relative_eq!(d.d01, 0.5, max_relative = 1e-12);
        assert_relative_eq!(d.estimates.separation.unwrap(), 2.0, max_relative = 1e-12);
        // exact D₀₁ = 16π χ²(n̄+½)/Q
        let expected = 16.0 * PI * (d.nbar + 0.5) / d.nbar;
        assert_relative_eq!(d.estimates.d01.unwrap(), expected, max_relative = 1e-12);
        assert_relative_eq!(d.estimates.momentum_shift.unwrap(), 2.0 * (d.nbar + 0.5) / d.nbar, max_relative = 1e-12);
    }

    #[test]
    fn high_temperature_doubling() {
        let base = si(1e-10, 1e7, 5e3, 1.0, 1e-11);
        let hot = PhysicalParams { theta: 2.0, ..base };
        let r = design_summary(&hot).d01 / design_summary(&base).d01;
        assert!((1.99..=2.01).contains(&r), "{r}");
    }

    #[test]
    fn mass_scaling_at_fixed_separation() {
        let p = PhysicalParams::natural(1.0, 1.0, 0.01, 1.5, 0.8);
        let heavy = PhysicalParams {
            m: 2.0,
            epsilon: 1.6,
            ..p
        };
        assert_relative_eq!(heavy.separation(), p.separation(), max_relative = 1e-15);
        let r = decoherence_exponent(&heavy) / decoherence_exponent(&p);
        assert_relative_eq!(r, 2.0, max_relative = 1e-14);
    }

    #[test]
    fn joint_state_undamped_half_period_is_pure() {
        let p = PhysicalParams::natural(1.0, 1.0, 0.0, 0.0, 0.0).with_chi(0.8);
        let space = p.space(40).unwrap();
        let rho = analytic_joint_state(ProtocolTime::Half, C64::new(0.4, 0.2), &p, &space).unwrap();
        assert!((rho.purity() - 1.0).abs() < 1e-8);
        assert!((rho.trace().re - 1.0).abs() < 1e-12);
    }

    #[test]
    fn joint_state_full_period_coherence_and_product_structure() {
        let p = PhysicalParams::natural_reference();
        let space = p.space(32).unwrap();
        let rho = analytic_joint_state(ProtocolTime::Full, C64::new(0.5, -0.3), &p, &space).unwrap();
        let rq = partial_trace_oscillator(&rho).unwrap();
        assert!((coherence_of(&rq) - (-1.0f64).exp()).abs() < 1e-15);
        let ra = partial_trace_qubit(&rho);
        let product = CompositeDensity::from_product(&rq, &ra).unwrap();
        assert!(trace_distance(&rho.matrix, &product.matrix) < 1e-10);
    }

    #[test]
    fn half_period_coherence_two_ways() {
        let p = PhysicalParams::natural(1.0, 1.0, 0.0, 0.0, 0.0)
            .with_chi(0.5)
            .with_nbar(0.5)
            .with_d01(0.5);
        let space = p.space(40).unwrap();
        let rho = analytic_joint_state(ProtocolTime::Half, C64::new(0.0, 0.0), &p, &space).unwrap();
        let b = branch_amplitudes(C64::new(0.0, 0.0), &p);
        let closed = (-0.5f64).exp() * coherent_overlap(b.alpha0p, b.alpha1p);
        assert!((rho.qubit_coherence() - closed).abs() < 1e-6);
    }

    #[test]
    fn ideal_superposition_with_coincident_primed_amplitudes() {
        let space = build_space(24, 1.0, 1.0, UnitSystem::NATURAL).unwrap();
        let a = C64::new(0.6, 0.0);
        let amps = BranchAmplitudes {
            alpha0: a,
            alpha1: -a,
            alpha0p: a,
            alpha1p: a,
        };
        let rho = branch_superposition_state(&amps, 0.7, 0.3, &space).unwrap();
        let c = coherence_of(&partial_trace_oscillator(&rho).unwrap());
        assert!((c - (-0.7f64).exp()).abs() < 1e-12);
        assert!((c - 0.4966).abs() < 1e-4);
    }

    #[test]
    fn joint_state_truncation_error() {
        let p = PhysicalParams::natural(1.0, 1.0, 0.0, 0.0, 0.0).with_chi(3.0);
        let space = p.space(16).unwrap();
        assert!(matches!(
            analytic_joint_state(ProtocolTime::Half, C64::new(0.0, 0.0), &p, &space),
            Err(Error::Truncation { .. })
        ));
    }

    #[test]
    fn with_d01_round_trip() {
        for target in [0.25, 0.5, 1.0] {
            let p = PhysicalParams::natural(1.0, 1.0, 0.0, 0.0, 0.0)
                .with_chi(1.0)
                .with_nbar(0.5)
                .with_d01(target);
            assert_relative_eq!(decoherence_exponent(&p), target, max_relative = 1e-13);
        }
    }

    proptest! {
        #[test]
        fn separation_is_twice_chi(m in 1e-3f64..1e3, omega in 1e-2f64..1e2, eps in -10.0f64..10.0) {
            let p = PhysicalParams::natural(m, omega, 0.0, 0.0, eps);
            let lhs = p.separation() / (2.0 * p.delta_x());
            let rhs = 2.0 * p.chi();
            prop_assert!((lhs - rhs).abs() <= 1e-12 * rhs.abs().max(1e-300));
        }

        #[test]
        fn zero_temperature_forms_agree(m in 1e-2f64..1e2, omega in 1e-1f64..10.0, gamma in 1e-4f64..1.0, dalpha in 0.05f64..5.0) {
            let p = PhysicalParams::natural(m, omega, gamma, 0.0, 0.0);
            let dx = 2.0 * p.delta_x() * dalpha;
            let a = decoherence_time(diffusion_coefficient(&p), dx, p.units).unwrap();
            let b = zero_temp_decoherence_time(gamma, dalpha).unwrap();
            prop_assert!((a - b).abs() <= 1e-12 * b);
        }

        #[test]
        fn d01_linear_in_half_plus_nbar(nbar_a in 0.0f64..20.0, nbar_b in 0.0f64..20.0) {
            let base = PhysicalParams::natural(1.0, 1.0, 0.01, 0.0, 0.7);
            let a = decoherence_exponent(&base.with_nbar(nbar_a));
            let b = decoherence_exponent(&base.with_nbar(nbar_b));
            let expected = (nbar_b + 0.5) / (nbar_a + 0.5);
            prop_assert!((b / a - expected).abs() <= 1e-10 * expected);
        }
    }
}
