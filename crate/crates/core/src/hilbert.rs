//! Truncated Fock-space algebra for the composite qubit ⊗ oscillator system.
//!
//! Basis ordering is fixed as qubit ⊗ oscillator: the composite index of
//! |q⟩|n⟩ is `q * fock_dim + n`. The qubit basis is |0⟩, |1⟩ with
//! σ_z|0⟩ = +|0⟩.

use nalgebra::{DMatrix, DVector, Matrix2};
use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::units::UnitSystem;

pub type Qubit2 = Matrix2<C64>;

const ZERO: C64 = C64::new(0.0, 0.0);
const ONE: C64 = C64::new(1.0, 0.0);
const I: C64 = C64::new(0.0, 1.0);

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpaceDescriptor {
    pub fock_dim: usize,
    /// Coherent-state position spread δ_x = √(ħ/2mω).
    pub delta_x: f64,
    /// Coherent-state momentum spread δ_p = √(mħω/2).
    pub delta_p: f64,
    pub hbar: f64,
}

impl SpaceDescriptor {
    pub fn total_dim(&self) -> usize {
        2 * self.fock_dim
    }
}

pub fn build_space(fock_dim: usize, m: f64, omega: f64, units: UnitSystem) -> Result<SpaceDescriptor> {
    if fock_dim < 2 {
        return Err(Error::domain("fock_dim", fock_dim as f64, "must be at least 2"));
    }
    if !(m > 0.0) || !m.is_finite() {
        return Err(Error::domain("m", m, "must be positive"));
    }
    if !(omega > 0.0) || !omega.is_finite() {
        return Err(Error::domain("omega", omega, "must be positive"));
    }
    if !(units.hbar > 0.0) {
        return Err(Error::domain("hbar", units.hbar, "must be positive"));
    }
    Ok(SpaceDescriptor {
        fock_dim,
        delta_x: (units.hbar / (2.0 * m * omega)).sqrt(),
        delta_p: (m * units.hbar * omega / 2.0).sqrt(),
        hbar: units.hbar,
    })
}

/// Oscillator-factor operators on the truncated Fock space.
#[derive(Debug, Clone)]
pub struct OscillatorOperators {
    pub a: DMatrix<C64>,
    pub a_dag: DMatrix<C64>,
    pub x: DMatrix<C64>,
    pub p: DMatrix<C64>,
    pub number: DMatrix<C64>,
}

pub fn oscillator_operators(space: &SpaceDescriptor) -> OscillatorOperators {
    let n = space.fock_dim;
    let a = DMatrix::from_fn(n, n, |i, j| {
        if j == i + 1 {
            C64::new((j as f64).sqrt(), 0.0)
        } else {
            ZERO
        }
    });
    let a_dag = a.adjoint();
    let x = (&a + &a_dag) * C64::new(space.delta_x, 0.0);
    let p = (&a_dag - &a) * (I * space.delta_p);
    let number = DMatrix::from_fn(n, n, |i, j| if i == j { C64::new(i as f64, 0.0) } else { ZERO });
    OscillatorOperators {
        a,
        a_dag,
        x,
        p,
        number,
    }
}

pub fn identity2() -> Qubit2 {
    Qubit2::identity()
}

pub fn sigma_x() -> Qubit2 {
    Qubit2::new(ZERO, ONE, ONE, ZERO)
}

pub fn sigma_y() -> Qubit2 {
    Qubit2::new(ZERO, -I, I, ZERO)
}

pub fn sigma_z() -> Qubit2 {
    Qubit2::new(ONE, ZERO, ZERO, -ONE)
}

/// |+⟩⟨+| with |+⟩ = (|0⟩ + |1⟩)/√2.
pub fn plus_projector() -> Qubit2 {
    Qubit2::from_element(C64::new(0.5, 0.0))
}

fn max_abs(m: &DMatrix<C64>) -> f64 {
    m.iter().fold(0.0_f64, |acc, z| acc.max(z.norm()))
}

/// Largest elementwise deviation `max|M − M†|`.
pub fn hermiticity_error(m: &DMatrix<C64>) -> f64 {
    let n = m.nrows();
    let mut worst = 0.0_f64;
    for j in 0..n {
        for i in 0..=j {
            worst = worst.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    worst
}

#[derive(Debug, Clone, PartialEq)]
pub struct CompositeOperator {
    matrix: DMatrix<C64>,
    hermitian: bool,
}

impl CompositeOperator {
    /// Wraps a matrix. When `hermitian` is claimed it is checked against
    /// `max|M − M†| < 1e-12 · max|M|`.
    pub fn new(matrix: DMatrix<C64>, hermitian: bool) -> Result<Self> {
        if matrix.nrows() != matrix.ncols() {
            return Err(Error::DimensionMismatch {
                expected: matrix.nrows(),
                found: matrix.ncols(),
            });
        }
        if hermitian {
            let deviation = hermiticity_error(&matrix);
            if deviation > 1e-12 * max_abs(&matrix) {
                return Err(Error::NotHermitian { deviation });
            }
        }
        Ok(CompositeOperator { matrix, hermitian })
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.matrix
    }

    pub fn into_matrix(self) -> DMatrix<C64> {
        self.matrix
    }

    pub fn is_hermitian(&self) -> bool {
        self.hermitian
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn compose(&self, other: &CompositeOperator) -> Result<CompositeOperator> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: other.dim(),
            });
        }
        Ok(CompositeOperator {
            matrix: &self.matrix * &other.matrix,
            hermitian: false,
        })
    }
}

/// Kronecker product `qubit_op ⊗ osc_op`, qubit factor first.
pub fn embed(qubit_op: &Qubit2, osc_op: &DMatrix<C64>) -> Result<CompositeOperator> {
    if osc_op.nrows() != osc_op.ncols() {
        return Err(Error::DimensionMismatch {
            expected: osc_op.nrows(),
            found: osc_op.ncols(),
        });
    }
    let matrix = qubit_op.kronecker(osc_op);
    let hermitian = {
        let q = (qubit_op - qubit_op.adjoint()).camax() == 0.0;
        q && hermiticity_error(osc_op) == 0.0
    };
    Ok(CompositeOperator { matrix, hermitian })
}

/// Embeds `osc_op` into the composite space for a given [`SpaceDescriptor`],
/// checking its dimension.
pub fn embed_in(space: &SpaceDescriptor, qubit_op: &Qubit2, osc_op: &DMatrix<C64>) -> Result<CompositeOperator> {
    if osc_op.nrows() != space.fock_dim {
        return Err(Error::DimensionMismatch {
            expected: space.fock_dim,
            found: osc_op.nrows(),
        });
    }
    embed(qubit_op, osc_op)
}

#[derive(Debug, Clone, PartialEq)]
pub struct CompositeDensity {
    pub matrix: DMatrix<C64>,
    pub time: f64,
}

impl CompositeDensity {
    pub fn new(matrix: DMatrix<C64>, time: f64) -> Result<Self> {
        if matrix.nrows() != matrix.ncols() || !matrix.nrows().is_multiple_of(2) {
            return Err(Error::DimensionMismatch {
                expected: matrix.nrows(),
                found: matrix.ncols(),
            });
        }
        Ok(CompositeDensity { matrix, time })
    }

    pub fn from_product(qubit: &Qubit2, osc: &DMatrix<C64>) -> Result<Self> {
        let op = embed(qubit, osc)?;
        CompositeDensity::new(op.into_matrix(), 0.0)
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn fock_dim(&self) -> usize {
        self.matrix.nrows() / 2
    }

    pub fn trace(&self) -> C64 {
        self.matrix.trace()
    }

    /// trace(ρ²), assuming Hermitian ρ.
    pub fn purity(&self) -> f64 {
        self.matrix.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn hermiticity_error(&self) -> f64 {
        hermiticity_error(&self.matrix)
    }

    pub fn min_eigenvalue(&self) -> f64 {
        min_eigenvalue(&self.matrix)
    }

    /// Qubit coherence C = 2|⟨0|ρ_Q|1⟩|.
    pub fn qubit_coherence(&self) -> f64 {
        let n = self.fock_dim();
        let mut off = ZERO;
        for k in 0..n {
            off += self.matrix[(k, n + k)];
        }
        2.0 * off.norm()
    }

    /// Checks the preparation-time state invariants.
    pub fn validate(&self) -> Result<()> {
        let tr = self.trace();
        if (tr - ONE).norm() > 1e-8 {
            return Err(Error::domain("trace", tr.re, "density matrix trace must be 1"));
        }
        let herm = self.hermiticity_error();
        if herm > 1e-10 {
            return Err(Error::NotHermitian { deviation: herm });
        }
        Ok(())
    }
}

/// trace(op · ρ).
pub fn expectation(op: &CompositeOperator, rho: &CompositeDensity) -> Result<C64> {
    if op.dim() != rho.dim() {
        return Err(Error::DimensionMismatch {
            expected: rho.dim(),
            found: op.dim(),
        });
    }
    Ok(trace_of_product(op.matrix(), &rho.matrix))
}

/// trace(A·B) without forming the product.
pub fn trace_of_product(a: &DMatrix<C64>, b: &DMatrix<C64>) -> C64 {
    let n = a.nrows();
    let mut acc = ZERO;
    for i in 0..n {
        for j in 0..n {
            acc += a[(i, j)] * b[(j, i)];
        }
    }
    acc
}

pub fn partial_trace_oscillator(rho: &CompositeDensity) -> Result<Qubit2> {
    if !rho.dim().is_multiple_of(2) || rho.dim() < 4 {
        return Err(Error::DimensionMismatch {
            expected: 4,
            found: rho.dim(),
        });
    }
    let n = rho.fock_dim();
    let mut out = Qubit2::zeros();
    for q in 0..2 {
        for r in 0..2 {
            let mut acc = ZERO;
            for k in 0..n {
                acc += rho.matrix[(q * n + k, r * n + k)];
            }
            out[(q, r)] = acc;
        }
    }
    Ok(out)
}

pub fn partial_trace_qubit(rho: &CompositeDensity) -> DMatrix<C64> {
    let n = rho.fock_dim();
    DMatrix::from_fn(n, n, |i, j| rho.matrix[(i, j)] + rho.matrix[(n + i, n + j)])
}

/// C = 2|⟨0|ρ_Q|1⟩| of a reduced qubit state.
pub fn coherence_of(rho_q: &Qubit2) -> f64 {
    2.0 * rho_q[(0, 1)].norm()
}

/// Eigenvalues of the Hermitian part of `m`, ascending.
pub fn hermitian_eigenvalues(m: &DMatrix<C64>) -> Vec<f64> {
    let h = (m + m.adjoint()) * C64::new(0.5, 0.0);
    let mut vals: Vec<f64> = h.symmetric_eigenvalues().iter().copied().collect();
    vals.sort_by(|a, b| a.total_cmp(b));
    vals
}

pub fn min_eigenvalue(m: &DMatrix<C64>) -> f64 {
    hermitian_eigenvalues(m).first().copied().unwrap_or(0.0)
}

/// ½‖ρ − σ‖₁.
pub fn trace_distance(rho: &DMatrix<C64>, sigma: &DMatrix<C64>) -> f64 {
    let diff = rho - sigma;
    0.5 * hermitian_eigenvalues(&diff).iter().map(|v| v.abs()).sum::<f64>()
}

fn psd_sqrt(m: &DMatrix<C64>) -> DMatrix<C64> {
    let h = (m + m.adjoint()) * C64::new(0.5, 0.0);
    let eig = h.symmetric_eigen();
    let roots = DVector::from_iterator(
        eig.eigenvalues.len(),
        eig.eigenvalues.iter().map(|&v| C64::new(v.max(0.0).sqrt(), 0.0)),
    );
    let v = &eig.eigenvectors;
    v * DMatrix::from_diagonal(&roots) * v.adjoint()
}

/// Uhlmann fidelity F(ρ, σ) = (tr √(√ρ σ √ρ))².
pub fn fidelity(rho: &DMatrix<C64>, sigma: &DMatrix<C64>) -> f64 {
    let s = psd_sqrt(rho);
    let inner = &s * sigma * &s;
    let h = (&inner + inner.adjoint()) * C64::new(0.5, 0.0);
    let t: f64 = h.symmetric_eigenvalues().iter().map(|v| v.max(0.0).sqrt()).sum();
    t * t
}

/// ⟨ψ|ρ|ψ⟩, the fidelity of ρ with a pure state.
pub fn pure_fidelity(psi: &DVector<C64>, rho: &DMatrix<C64>) -> f64 {
    (psi.adjoint() * rho * psi)[(0, 0)].re
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn natural(n: usize, m: f64, w: f64) -> SpaceDescriptor {
        build_space(n, m, w, UnitSystem::NATURAL).unwrap()
    }

    #[test]
    fn spreads_in_natural_units() {
        let s = natural(2, 1.0, 1.0);
        assert_relative_eq!(s.delta_x, 1.0 / 2f64.sqrt(), max_relative = 1e-15);
        assert_relative_eq!(s.delta_p, 1.0 / 2f64.sqrt(), max_relative = 1e-15);

        let s = natural(64, 1.0, 4.0);
        assert_relative_eq!(s.delta_x, 1.0 / (2.0 * 2f64.sqrt()), max_relative = 1e-15);
        assert_relative_eq!(s.delta_p, 2f64.sqrt(), max_relative = 1e-15);
        assert_relative_eq!(s.delta_x * s.delta_p, 0.5, max_relative = 1e-12);
        assert_eq!(s.total_dim(), 128);
    }

    #[test]
    fn flux_spread_of_lc_circuit() {
        // sqrt(hbar / (2 C omega)) evaluated with mpmath at 50 digits.
        let s = build_space(32, 100e-12, 1e7, UnitSystem::SI).unwrap();
        assert_relative_eq!(s.delta_x, 2.296_270_690_706_999e-16, max_relative = 1e-12);
        assert_relative_eq!(s.delta_x * s.delta_p, crate::units::HBAR_SI / 2.0, max_relative = 1e-12);
    }

    #[test]
    fn rejects_bad_space() {
        assert!(matches!(
            build_space(1, 1.0, 1.0, UnitSystem::NATURAL),
            Err(Error::Domain { name: "fock_dim", .. })
        ));
        assert!(matches!(
            build_space(4, 0.0, 1.0, UnitSystem::NATURAL),
            Err(Error::Domain { name: "m", .. })
        ));
        assert!(matches!(
            build_space(4, 1.0, -2.0, UnitSystem::NATURAL),
            Err(Error::Domain { name: "omega", .. })
        ));
    }

    #[test]
    fn ladder_matrix_elements() {
        let ops = oscillator_operators(&natural(2, 1.0, 1.0));
        assert_eq!(ops.a[(0, 1)], ONE);
        assert_eq!(ops.a[(0, 0)], ZERO);
        assert_eq!(ops.a[(1, 0)], ZERO);
        assert_eq!(ops.a[(1, 1)], ZERO);

        let ops = oscillator_operators(&natural(3, 1.0, 1.0));
        assert_relative_eq!(ops.a[(1, 2)].re, 2f64.sqrt(), max_relative = 1e-15);

        let ops = oscillator_operators(&natural(12, 1.0, 1.0));
        let n = &ops.a_dag * &ops.a;
        for i in 0..12 {
            for j in 0..12 {
                let expected = if i == j { i as f64 } else { 0.0 };
                assert!((n[(i, j)] - C64::new(expected, 0.0)).norm() < 1e-14);
            }
        }
        assert_eq!(hermiticity_error(&ops.x), 0.0);
        assert_eq!(hermiticity_error(&ops.p), 0.0);
    }

    #[test]
    fn canonical_commutator_below_truncation() {
        let space = natural(16, 1.0, 1.0);
        let ops = oscillator_operators(&space);
        let comm = &ops.x * &ops.p - &ops.p * &ops.x;
        let mut worst = 0.0_f64;
        for j in 0..15 {
            for k in 0..15 {
                let target = if j == k { I * space.hbar } else { ZERO };
                worst = worst.max((comm[(j, k)] - target).norm());
            }
        }
        assert!(worst < 1e-12, "worst deviation {worst}");
        // the top level carries the truncation artifact
        assert!((comm[(15, 15)] - I).norm() > 1.0);
    }

    #[test]
    fn embed_identity_and_qubit_actions() {
        let space = natural(5, 1.0, 1.0);
        let ops = oscillator_operators(&space);
        let id = embed(&identity2(), &DMatrix::identity(5, 5)).unwrap();
        assert_eq!(id.matrix(), &DMatrix::<C64>::identity(10, 10));
        assert!(id.is_hermitian());

        let zx = embed(&sigma_z(), &ops.x).unwrap();
        for n in 0..5 {
            let mut up = DVector::zeros(10);
            up[n] = ONE;
            let mut down = DVector::zeros(10);
            down[5 + n] = ONE;
            let xu = zx.matrix() * &up;
            let xd = zx.matrix() * &down;
            for m in 0..5 {
                assert_eq!(xu[m], ops.x[(m, n)]);
                assert_eq!(xd[5 + m], -ops.x[(m, n)]);
                assert_eq!(xu[5 + m], ZERO);
                assert_eq!(xd[m], ZERO);
            }
        }

        let swap = embed(&sigma_x(), &DMatrix::identity(5, 5)).unwrap();
        let v = DVector::from_fn(10, |i, _| C64::new(i as f64, -(i as f64)));
        let w = swap.matrix() * &v;
        for k in 0..5 {
            assert_eq!(w[k], v[5 + k]);
            assert_eq!(w[5 + k], v[k]);
        }
    }

    #[test]
    fn embed_is_multiplicative() {
        let space = natural(6, 1.0, 1.0);
        let ops = oscillator_operators(&space);
        let lhs = embed(&sigma_x(), &ops.x)
            .unwrap()
            .compose(&embed(&sigma_y(), &ops.p).unwrap())
            .unwrap();
        let rhs = embed(&(sigma_x() * sigma_y()), &(&ops.x * &ops.p)).unwrap();
        let scale = max_abs(rhs.matrix());
        assert!(max_abs(&(lhs.matrix() - rhs.matrix())) < 1e-12 * scale);
    }

    #[test]
    fn embed_rejects_non_square() {
        let bad = DMatrix::<C64>::zeros(3, 4);
        assert!(matches!(embed(&sigma_z(), &bad), Err(Error::DimensionMismatch { .. })));
        let space = natural(4, 1.0, 1.0);
        assert!(embed_in(&space, &sigma_z(), &DMatrix::identity(5, 5)).is_err());
    }

    #[test]
    fn hermitian_flag_is_checked() {
        let mut m = DMatrix::<C64>::zeros(2, 2);
        m[(0, 1)] = ONE;
        assert!(matches!(CompositeOperator::new(m.clone(), true), Err(Error::NotHermitian { .. })));
        assert!(CompositeOperator::new(m, false).is_ok());
    }

    #[test]
    fn product_state_partial_trace() {
        let mut vac = DMatrix::<C64>::zeros(4, 4);
        vac[(0, 0)] = ONE;
        let rho = CompositeDensity::from_product(&plus_projector(), &vac).unwrap();
        rho.validate().unwrap();
        let rq = partial_trace_oscillator(&rho).unwrap();
        assert!((rq - plus_projector()).camax() < 1e-15);
        assert!((coherence_of(&rq) - 1.0).abs() < 1e-15);
        assert!((rho.qubit_coherence() - 1.0).abs() < 1e-15);

        let id = embed(&identity2(), &DMatrix::identity(4, 4)).unwrap();
        assert!((expectation(&id, &rho).unwrap() - ONE).norm() < 1e-15);
        let wrong = embed(&identity2(), &DMatrix::identity(3, 3)).unwrap();
        assert!(expectation(&wrong, &rho).is_err());
    }

    #[test]
    fn trace_distance_and_fidelity() {
        let mut p0 = DMatrix::<C64>::zeros(2, 2);
        p0[(0, 0)] = ONE;
        let mut p1 = DMatrix::<C64>::zeros(2, 2);
        p1[(1, 1)] = ONE;
        assert!((trace_distance(&p0, &p1) - 1.0).abs() < 1e-12);
        assert!(fidelity(&p0, &p1).abs() < 1e-12);
        assert!((fidelity(&p0, &p0) - 1.0).abs() < 1e-12);
        let mixed = DMatrix::<C64>::identity(2, 2) * C64::new(0.5, 0.0);
        assert!((fidelity(&p0, &mixed) - 0.5).abs() < 1e-12);
        let psi = DVector::from_vec(vec![ONE, ZERO]);
        assert!((pure_fidelity(&psi, &mixed) - 0.5).abs() < 1e-15);
    }
}
