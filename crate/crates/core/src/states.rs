//! Initial-state preparation: coherent, thermal and composite protocol inputs,
//! plus Glauber P-function sampling of the thermal state.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64 as C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hilbert::{plus_projector, CompositeDensity, SpaceDescriptor};

/// Identity of the random generator behind every seeded draw.
pub const RNG_ALGORITHM: &str = "ChaCha20 (rand_chacha 0.9)";

/// Largest tolerated thermal tail weight beyond the truncation.
pub const THERMAL_TAIL_LIMIT: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CoherentLabel {
    pub alpha: C64,
}

impl CoherentLabel {
    pub fn new(re: f64, im: f64) -> Self {
        CoherentLabel { alpha: C64::new(re, im) }
    }
}

impl From<C64> for CoherentLabel {
    fn from(alpha: C64) -> Self {
        CoherentLabel { alpha }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThermalSpec {
    pub nbar: f64,
}

/// Mean plus three standard deviations of the Poisson photon-number
/// distribution must fit below the cutoff: |α|² + 3|α| + 3 ≤ fock_dim.
pub fn truncation_adequate(amplitude: f64, fock_dim: usize) -> bool {
    let r = amplitude.abs();
    r * r + 3.0 * r + 3.0 <= fock_dim as f64
}

#[derive(Debug, Clone, PartialEq)]
pub struct CoherentState {
    /// Renormalized Fock amplitudes.
    pub amplitudes: DVector<C64>,
    /// 1 − Σ|c_n|² before renormalization.
    pub norm_deficit: f64,
}

impl CoherentState {
    pub fn projector(&self) -> DMatrix<C64> {
        &self.amplitudes * self.amplitudes.adjoint()
    }
}

/// Raw truncated amplitudes c_n = e^{−|α|²/2} αⁿ/√(n!), without renormalization.
pub fn coherent_amplitudes(alpha: C64, fock_dim: usize) -> DVector<C64> {
    let mut c = DVector::zeros(fock_dim);
    c[0] = C64::new((-0.5 * alpha.norm_sqr()).exp(), 0.0);
    for n in 1..fock_dim {
        c[n] = c[n - 1] * alpha / (n as f64).sqrt();
    }
    c
}

pub fn coherent_state(label: CoherentLabel, space: &SpaceDescriptor) -> Result<CoherentState> {
    let raw = coherent_amplitudes(label.alpha, space.fock_dim);
    let norm_sqr: f64 = raw.iter().map(|z| z.norm_sqr()).sum();
    let norm_deficit = (1.0 - norm_sqr).max(0.0);
    if !truncation_adequate(label.alpha.norm(), space.fock_dim) {
        return Err(Error::Truncation {
            fock_dim: space.fock_dim,
            what: format!("coherent amplitude |alpha| = {:.4}", label.alpha.norm()),
            deficit: norm_deficit,
        });
    }
    let amplitudes = raw / C64::new(norm_sqr.sqrt(), 0.0);
    Ok(CoherentState {
        amplitudes,
        norm_deficit,
    })
}

/// Truncated Bose-Einstein state with weights ∝ (n̄/(n̄+1))ⁿ, renormalized.
pub fn thermal_state(spec: ThermalSpec, space: &SpaceDescriptor) -> Result<DMatrix<C64>> {
    let n = space.fock_dim;
    if !(spec.nbar >= 0.0) || !spec.nbar.is_finite() {
        return Err(Error::domain("nbar", spec.nbar, "must be non-negative"));
    }
    let mut rho = DMatrix::zeros(n, n);
    if spec.nbar == 0.0 {
        rho[(0, 0)] = C64::new(1.0, 0.0);
        return Ok(rho);
    }
    let ratio = spec.nbar / (spec.nbar + 1.0);
    let tail = ratio.powi(n as i32);
    if tail >= THERMAL_TAIL_LIMIT {
        return Err(Error::Truncation {
            fock_dim: n,
            what: format!("thermal occupation nbar = {}", spec.nbar),
            deficit: tail,
        });
    }
    let mut weight = 1.0;
    let mut total = 0.0;
    for k in 0..n {
        rho[(k, k)] = C64::new(weight, 0.0);
        total += weight;
        weight *= ratio;
    }
    Ok(rho / C64::new(total, 0.0))
}

/// Draws α from the Glauber P-function p(α) = e^{−|α|²/n̄}/(πn̄) of a thermal state.
pub fn sample_with<R: Rng + ?Sized>(spec: ThermalSpec, rng: &mut R) -> CoherentLabel {
    if spec.nbar <= 0.0 {
        return CoherentLabel { alpha: C64::new(0.0, 0.0) };
    }
    let normal = Normal::new(0.0, (spec.nbar / 2.0).sqrt()).expect("finite positive std");
    let re = normal.sample(rng);
    let im = normal.sample(rng);
    CoherentLabel { alpha: C64::new(re, im) }
}

pub fn seeded_rng(seed: u64) -> ChaCha20Rng {
    ChaCha20Rng::seed_from_u64(seed)
}

pub fn sample_coherent_label(spec: ThermalSpec, seed: u64) -> CoherentLabel {
    sample_with(spec, &mut seeded_rng(seed))
}

#[derive(Debug, Clone, PartialEq)]
pub enum OscillatorInit {
    Coherent(CoherentLabel),
    Thermal(ThermalSpec),
    Density(DMatrix<C64>),
}

/// |+⟩⟨+|_Q ⊗ ρ_A(0).
pub fn prepare_protocol_input(init: &OscillatorInit, space: &SpaceDescriptor) -> Result<CompositeDensity> {
    let osc = match init {
        OscillatorInit::Coherent(label) => coherent_state(*label, space)?.projector(),
        OscillatorInit::Thermal(spec) => thermal_state(*spec, space)?,
        OscillatorInit::Density(rho) => {
            if rho.nrows() != space.fock_dim || rho.ncols() != space.fock_dim {
                return Err(Error::DimensionMismatch {
                    expected: space.fock_dim,
                    found: rho.nrows(),
                });
            }
            rho.clone()
        }
    };
    let rho = CompositeDensity::from_product(&plus_projector(), &osc)?;
    rho.validate()?;
    Ok(rho)
}
