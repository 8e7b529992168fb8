//! Markovian master-equation dynamics of the qubit ⊗ oscillator density
//! matrix under H = λσ_z + ħω(a†a + ½) + εxσ_z, with either a
//! quantum-optical Lindblad dissipator or the Caldeira-Leggett form.

mod generator;
mod integrate;
mod observables;

pub use integrate::{evolve, Evolver, Trajectory, TrajectoryMetadata};
pub use observables::{trajectory_observables, ObservableSample, ObservableSeries, TRAJECTORY_COLUMNS};

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::analytic::{diffusion_coefficient, PhysicalParams};
use crate::error::{Error, Result};
use crate::hilbert::{embed_in, identity2, oscillator_operators, sigma_z, CompositeDensity, CompositeOperator, SpaceDescriptor};

use generator::{BlockGenerator, BlockState};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DissipatorKind {
    /// Lindblad form with collapse operators √(2γ(n̄+1))·a and √(2γn̄)·a†.
    #[default]
    QuantumOptical,
    /// −(iγ/ħ)[x, {p, ρ}] − (D/ħ²)[x, [x, ρ]].
    CaldeiraLeggett,
}

impl std::str::FromStr for DissipatorKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "quantum-optical" => Ok(DissipatorKind::QuantumOptical),
            "caldeira-leggett" => Ok(DissipatorKind::CaldeiraLeggett),
            other => Err(Error::Config(format!("unknown dissipator kind `{other}`"))),
        }
    }
}

impl std::fmt::Display for DissipatorKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            DissipatorKind::QuantumOptical => "quantum-optical",
            DissipatorKind::CaldeiraLeggett => "caldeira-leggett",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct IntegratorConfig {
    pub steps_per_period: usize,
    pub dissipator: DissipatorKind,
    /// Allowed |trace − 1| per oscillator period.
    pub trace_tolerance: f64,
    /// Abort when the top Fock level holds more population than this.
    pub leak_threshold: f64,
    /// Record observables every this many steps.
    pub record_stride: usize,
}

impl Default for IntegratorConfig {
    fn default() -> Self {
        IntegratorConfig {
            steps_per_period: 2000,
            dissipator: DissipatorKind::QuantumOptical,
            trace_tolerance: 1e-6,
            leak_threshold: 1e-4,
            record_stride: 100,
        }
    }
}

impl IntegratorConfig {
    pub fn validate(&self) -> Result<()> {
        if self.steps_per_period < 100 {
            return Err(Error::domain(
                "steps_per_period",
                self.steps_per_period as f64,
                "must be at least 100",
            ));
        }
        if !(self.trace_tolerance > 0.0) {
            return Err(Error::domain("trace_tolerance", self.trace_tolerance, "must be positive"));
        }
        if !(self.leak_threshold > 0.0) {
            return Err(Error::domain("leak_threshold", self.leak_threshold, "must be positive"));
        }
        if self.record_stride == 0 {
            return Err(Error::domain("record_stride", 0.0, "must be positive"));
        }
        Ok(())
    }
}

fn check_space(params: &PhysicalParams, space: &SpaceDescriptor) -> Result<()> {
    params.validate()?;
    let dx = params.delta_x();
    if (space.delta_x - dx).abs() > 1e-12 * dx || (space.hbar - params.units.hbar).abs() > 1e-12 * space.hbar {
        return Err(Error::Config(format!(
            "space descriptor (delta_x = {}) does not match the parameters (delta_x = {dx})",
            space.delta_x
        )));
    }
    Ok(())
}

/// λσ_z⊗1 + 1⊗ħω(a†a + ½) + εσ_z⊗x.
pub fn build_hamiltonian(params: &PhysicalParams, space: &SpaceDescriptor) -> Result<CompositeOperator> {
    check_space(params, space)?;
    let ops = oscillator_operators(space);
    let n = space.fock_dim;
    let osc = (&ops.number + DMatrix::<C64>::identity(n, n) * C64::new(0.5, 0.0))
        * C64::new(params.units.hbar * params.omega, 0.0);
    let h = embed_in(space, &identity2(), &osc)?.into_matrix()
        + embed_in(space, &sigma_z(), &DMatrix::identity(n, n))?.into_matrix() * C64::new(params.lambda, 0.0)
        + embed_in(space, &sigma_z(), &ops.x)?.into_matrix() * C64::new(params.epsilon, 0.0);
    CompositeOperator::new(h, true)
}

fn check_state(rho: &CompositeDensity, space: &SpaceDescriptor) -> Result<()> {
    if rho.dim() != space.total_dim() {
        return Err(Error::DimensionMismatch {
            expected: space.total_dim(),
            found: rho.dim(),
        });
    }
    Ok(())
}

/// dρ/dt through the banded block generator.
pub fn master_equation_rhs(
    rho: &CompositeDensity,
    params: &PhysicalParams,
    space: &SpaceDescriptor,
    config: &IntegratorConfig,
) -> Result<DMatrix<C64>> {
    check_space(params, space)?;
    check_state(rho, space)?;
    let gen = BlockGenerator::new(params, space, config.dissipator);
    let n = space.fock_dim;
    let mut out = DMatrix::zeros(2 * n, 2 * n);
    let mut block = vec![C64::new(0.0, 0.0); n * n];
    let mut result = vec![C64::new(0.0, 0.0); n * n];
    let mut s1 = vec![C64::new(0.0, 0.0); n * n];
    let mut s2 = vec![C64::new(0.0, 0.0); n * n];
    for q in 0..2 {
        for r in 0..2 {
            for i in 0..n {
                for c in 0..n {
                    block[i * n + c] = rho.matrix[(q * n + i, r * n + c)];
                }
            }
            gen.apply(q, r, &block, &mut result, &mut s1, &mut s2);
            for i in 0..n {
                for c in 0..n {
                    out[(q * n + i, r * n + c)] = result[i * n + c];
                }
            }
        }
    }
    Ok(out)
}

/// Reference dρ/dt built from full composite matrices. Used to validate the
/// banded path.
pub fn master_equation_rhs_dense(
    rho: &CompositeDensity,
    params: &PhysicalParams,
    space: &SpaceDescriptor,
    config: &IntegratorConfig,
) -> Result<DMatrix<C64>> {
    check_state(rho, space)?;
    let h = build_hamiltonian(params, space)?.into_matrix();
    let ops = oscillator_operators(space);
    let hbar = params.units.hbar;
    let r = &rho.matrix;
    let mut out = (&h * r - r * &h) * C64::new(0.0, -1.0 / hbar);
    match config.dissipator {
        DissipatorKind::QuantumOptical => {
            let nbar = params.nbar();
            let a = embed_in(space, &identity2(), &ops.a)?.into_matrix();
            let a_dag = embed_in(space, &identity2(), &ops.a_dag)?.into_matrix();
            for (l, rate) in [(&a, 2.0 * params.gamma * (nbar + 1.0)), (&a_dag, 2.0 * params.gamma * nbar)] {
                let ld = l.adjoint();
                let ldl = &ld * l;
                out += (l * r * &ld - (&ldl * r + r * &ldl) * C64::new(0.5, 0.0)) * C64::new(rate, 0.0);
            }
        }
        DissipatorKind::CaldeiraLeggett => {
            let x = embed_in(space, &identity2(), &ops.x)?.into_matrix();
            let p = embed_in(space, &identity2(), &ops.p)?.into_matrix();
            let anti = &p * r + r * &p;
            out += (&x * &anti - &anti * &x) * C64::new(0.0, -params.gamma / hbar);
            let comm = &x * r - r * &x;
            out += (&x * &comm - &comm * &x) * C64::new(-diffusion_coefficient(params) / (hbar * hbar), 0.0);
        }
    }
    Ok(out)
}

pub(crate) fn blocks_of(rho: &CompositeDensity) -> BlockState {
    BlockState::from_matrix(&rho.matrix)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hilbert::{embed, expectation, hermitian_eigenvalues, plus_projector};
    use crate::states::{thermal_state, ThermalSpec};
    use crate::units::UnitSystem;
    use rand::{Rng, SeedableRng};

    fn random_state(n: usize, seed: u64) -> CompositeDensity {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let g = DMatrix::from_fn(2 * n, 2 * n, |_, _| C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)));
        let m = &g * g.adjoint();
        let tr = m.trace();
        CompositeDensity::new(m / tr, 0.0).unwrap()
    }

    fn max_abs(m: &DMatrix<C64>) -> f64 {
        m.iter().fold(0.0, |a, z| a.max(z.norm()))
    }

    #[test]
    fn harmonic_spectrum_without_coupling() {
        let p = PhysicalParams::natural(1.0, 1.7, 0.0, 0.0, 0.0);
        let space = p.space(12).unwrap();
        let h = build_hamiltonian(&p, &space).unwrap();
        assert!(h.is_hermitian());
        let vals = hermitian_eigenvalues(h.matrix());
        for k in 0..10 {
            let e = 1.7 * (k as f64 + 0.5);
            assert!((vals[2 * k] - e).abs() < 1e-8);
            assert!((vals[2 * k + 1] - e).abs() < 1e-8);
        }
    }

    #[test]
    fn qubit_energy_splits_ground_doublet() {
        let mut p = PhysicalParams::natural(1.0, 50.0, 0.0, 0.0, 0.0);
        p.lambda = 1.0;
        let space = p.space(6).unwrap();
        let vals = hermitian_eigenvalues(build_hamiltonian(&p, &space).unwrap().matrix());
        assert!((vals[1] - vals[0] - 2.0).abs() < 1e-10);
    }

    #[test]
    fn displaced_branch_ground_energy() {
        // completing the square: ħω/2 − ε²/2mω²
        let p = PhysicalParams::natural(1.3, 0.9, 0.0, 0.0, 0.0).with_chi(1.0);
        let space = p.space(40).unwrap();
        let vals = hermitian_eigenvalues(build_hamiltonian(&p, &space).unwrap().matrix());
        let expected = 0.5 * 0.9 - p.epsilon * p.epsilon / (2.0 * 1.3 * 0.81);
        assert!((vals[0] - expected).abs() < 1e-6);
        assert!((vals[1] - expected).abs() < 1e-6);
    }

    #[test]
    fn banded_and_dense_generators_agree() {
        for kind in [DissipatorKind::QuantumOptical, DissipatorKind::CaldeiraLeggett] {
            let mut p = PhysicalParams::natural(0.8, 1.2, 0.03, 0.0, 0.0)
                .with_chi(0.7)
                .with_nbar(0.8);
            p.lambda = 0.3;
            let space = p.space(9).unwrap();
            let cfg = IntegratorConfig {
                dissipator: kind,
                ..IntegratorConfig::default()
            };
            let rho = random_state(9, 5);
            let fast = master_equation_rhs(&rho, &p, &space, &cfg).unwrap();
            let dense = master_equation_rhs_dense(&rho, &p, &space, &cfg).unwrap();
            assert!(max_abs(&(&fast - &dense)) < 1e-12 * max_abs(&dense), "{kind}");
        }
    }

    #[test]
    fn rhs_is_traceless_and_conserves_sigma_z() {
        let p = PhysicalParams::natural_reference();
        let space = p.space(10).unwrap();
        let sz = embed(&sigma_z(), &DMatrix::identity(10, 10)).unwrap();
        for kind in [DissipatorKind::QuantumOptical, DissipatorKind::CaldeiraLeggett] {
            let cfg = IntegratorConfig {
                dissipator: kind,
                ..IntegratorConfig::default()
            };
            for seed in 0..4 {
                let rho = random_state(10, seed);
                let d = master_equation_rhs(&rho, &p, &space, &cfg).unwrap();
                let norm = max_abs(&d);
                assert!(d.trace().norm() < 1e-10 * norm.max(1.0));
                let dz = CompositeDensity::new(d, 0.0).unwrap();
                assert!(expectation(&sz, &dz).unwrap().norm() < 1e-10);
            }
        }
    }

    #[test]
    fn unitary_limit() {
        let p = PhysicalParams::natural(1.0, 1.0, 0.0, 0.5, 0.3);
        let space = p.space(8).unwrap();
        let rho = random_state(8, 9);
        let d = master_equation_rhs(&rho, &p, &space, &IntegratorConfig::default()).unwrap();
        let h = build_hamiltonian(&p, &space).unwrap().into_matrix();
        let expected = (&h * &rho.matrix - &rho.matrix * &h) * C64::new(0.0, -1.0);
        assert!(max_abs(&(&d - &expected)) < 1e-13);
        assert!(d.trace().norm() < 1e-13);
    }

    #[test]
    fn thermal_state_is_stationary() {
        let p = PhysicalParams::natural(1.0, 1.0, 0.05, 0.0, 0.0).with_nbar(0.7);
        let space = p.space(40).unwrap();
        let osc = thermal_state(ThermalSpec { nbar: 0.7 }, &space).unwrap();
        let rho = CompositeDensity::from_product(&plus_projector(), &osc).unwrap();
        let d = master_equation_rhs(&rho, &p, &space, &IntegratorConfig::default()).unwrap();
        assert!(max_abs(&d) < 1e-8 * max_abs(&rho.matrix));
    }

    #[test]
    fn mismatched_space_is_rejected() {
        let p = PhysicalParams::natural(1.0, 1.0, 0.0, 0.0, 0.0);
        let other = crate::hilbert::build_space(8, 2.0, 1.0, UnitSystem::NATURAL).unwrap();
        assert!(build_hamiltonian(&p, &other).is_err());
        let space = p.space(8).unwrap();
        let rho = random_state(6, 1);
        assert!(matches!(
            master_equation_rhs(&rho, &p, &space, &IntegratorConfig::default()),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn config_validation() {
        let bad = IntegratorConfig {
            steps_per_period: 50,
            ..IntegratorConfig::default()
        };
        assert!(bad.validate().is_err());
        assert!(IntegratorConfig::default().validate().is_ok());
        assert_eq!("caldeira-leggett".parse::<DissipatorKind>().unwrap(), DissipatorKind::CaldeiraLeggett);
        assert!("bogus".parse::<DissipatorKind>().is_err());
    }
}
