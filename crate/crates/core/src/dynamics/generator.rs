//! Banded fast path for the master-equation generator.
//!
//! Every operator in the model acts on the oscillator factor only, or is
//! diagonal in the qubit basis, so the generator maps each qubit block
//! ρ_jk (an N×N matrix) to itself. Within a block all oscillator operators
//! are tridiagonal, which makes one generator application O(N²).

use num_complex::Complex64 as C64;

use crate::analytic::{diffusion_coefficient, PhysicalParams};
use crate::hilbert::SpaceDescriptor;

use super::DissipatorKind;

const ZERO: C64 = C64::new(0.0, 0.0);

/// Tridiagonal N×N matrix: `upper[i] = T[i][i+1]`, `lower[i] = T[i+1][i]`.
#[derive(Debug, Clone)]
pub(crate) struct Tridiagonal {
    pub diag: Vec<C64>,
    pub upper: Vec<C64>,
    pub lower: Vec<C64>,
}

impl Tridiagonal {
    fn symmetric(diag: Vec<C64>, off: Vec<C64>) -> Self {
        Tridiagonal {
            diag,
            lower: off.iter().map(|z| z.conj()).collect(),
            upper: off,
        }
    }

    pub fn dim(&self) -> usize {
        self.diag.len()
    }
}

/// `out (=|+=) cl · (L B) + cr · (B R)` for row-major N×N blocks.
fn sandwich(l: &Tridiagonal, r: &Tridiagonal, b: &[C64], out: &mut [C64], cl: C64, cr: C64, accumulate: bool) {
    let n = l.dim();
    for i in 0..n {
        let row = &b[i * n..(i + 1) * n];
        let above = (i > 0).then(|| &b[(i - 1) * n..i * n]);
        let below = (i + 1 < n).then(|| &b[(i + 1) * n..(i + 2) * n]);
        let li = if i > 0 { l.lower[i - 1] } else { ZERO };
        let di = l.diag[i];
        let ui = if i + 1 < n { l.upper[i] } else { ZERO };
        let out_row = &mut out[i * n..(i + 1) * n];
        for k in 0..n {
            let mut left = di * row[k];
            if let Some(a) = above {
                left += li * a[k];
            }
            if let Some(bl) = below {
                left += ui * bl[k];
            }
            let mut right = row[k] * r.diag[k];
            if k > 0 {
                right += row[k - 1] * r.upper[k - 1];
            }
            if k + 1 < n {
                right += row[k + 1] * r.lower[k];
            }
            let v = cl * left + cr * right;
            if accumulate {
                out_row[k] += v;
            } else {
                out_row[k] = v;
            }
        }
    }
}

#[derive(Debug, Clone)]
pub(crate) struct BlockGenerator {
    pub n: usize,
    hbar: f64,
    /// H restricted to σ_z = +1 (index 0) and σ_z = −1 (index 1).
    hamiltonian: [Tridiagonal; 2],
    pub x: Tridiagonal,
    pub p: Tridiagonal,
    kind: DissipatorKind,
    rate_down: f64,
    rate_up: f64,
    gamma: f64,
    diffusion: f64,
    sqrt_n: Vec<f64>,
}

impl BlockGenerator {
    pub fn new(params: &PhysicalParams, space: &SpaceDescriptor, kind: DissipatorKind) -> Self {
        let n = space.fock_dim;
        let hbar = params.units.hbar;
        let sqrt_n: Vec<f64> = (0..n).map(|k| (k as f64).sqrt()).collect();
        let ladder: Vec<f64> = (1..n).map(|k| (k as f64).sqrt()).collect();
        let x = Tridiagonal::symmetric(
            vec![ZERO; n],
            ladder.iter().map(|s| C64::new(space.delta_x * s, 0.0)).collect(),
        );
        // p = iδ_p(a† − a): p[i][i+1] = −iδ_p√(i+1)
        let p = Tridiagonal::symmetric(
            vec![ZERO; n],
            ladder.iter().map(|s| C64::new(0.0, -space.delta_p * s)).collect(),
        );
        let branch = |sign: f64| {
            Tridiagonal::symmetric(
                (0..n)
                    .map(|k| C64::new(hbar * params.omega * (k as f64 + 0.5) + sign * params.lambda, 0.0))
                    .collect(),
                ladder
                    .iter()
                    .map(|s| C64::new(sign * params.epsilon * space.delta_x * s, 0.0))
                    .collect(),
            )
        };
        let nbar = params.nbar();
        BlockGenerator {
            n,
            hbar,
            hamiltonian: [branch(1.0), branch(-1.0)],
            x,
            p,
            kind,
            rate_down: 2.0 * params.gamma * (nbar + 1.0),
            rate_up: 2.0 * params.gamma * nbar,
            gamma: params.gamma,
            diffusion: diffusion_coefficient(params),
            sqrt_n,
        }
    }

    /// dρ_jk/dt for the block with qubit row `j` and column `k`.
    pub fn apply(&self, j: usize, k: usize, b: &[C64], out: &mut [C64], scratch: &mut [C64], scratch2: &mut [C64]) {
        let n = self.n;
        let minus_i_over_hbar = C64::new(0.0, -1.0 / self.hbar);
        sandwich(
            &self.hamiltonian[j],
            &self.hamiltonian[k],
            b,
            out,
            minus_i_over_hbar,
            -minus_i_over_hbar,
            false,
        );
        if self.gamma == 0.0 && self.diffusion == 0.0 {
            return;
        }
        match self.kind {
            DissipatorKind::QuantumOptical => {
                let top = n - 1;
                // a a† in the truncated space has diagonal (1, 2, ..., N−1, 0)
                let aad = |i: usize| if i == top { 0.0 } else { i as f64 + 1.0 };
                for i in 0..n {
                    for c in 0..n {
                        let v = b[i * n + c];
                        let mut acc = -0.5 * (self.rate_down * (i + c) as f64 + self.rate_up * (aad(i) + aad(c))) * v;
                        if i < top && c < top {
                            acc += self.rate_down * self.sqrt_n[i + 1] * self.sqrt_n[c + 1] * b[(i + 1) * n + c + 1];
                        }
                        if i > 0 && c > 0 {
                            acc += self.rate_up * self.sqrt_n[i] * self.sqrt_n[c] * b[(i - 1) * n + c - 1];
                        }
                        out[i * n + c] += acc;
                    }
                }
            }
            DissipatorKind::CaldeiraLeggett => {
                let one = C64::new(1.0, 0.0);
                // −(iγ/ħ)[x, {p, ρ}]
                sandwich(&self.p, &self.p, b, scratch, one, one, false);
                let f = C64::new(0.0, -self.gamma / self.hbar);
                sandwich(&self.x, &self.x, scratch, out, f, -f, true);
                // −(D/ħ²)[x, [x, ρ]]
                sandwich(&self.x, &self.x, b, scratch2, one, -one, false);
                let d = C64::new(-self.diffusion / (self.hbar * self.hbar), 0.0);
                sandwich(&self.x, &self.x, scratch2, out, d, -d, true);
            }
        }
    }
}

/// The three independent qubit blocks of a Hermitian composite density:
/// ρ_00, ρ_11 and ρ_01 (ρ_10 = ρ_01†), each row-major N×N.
#[derive(Debug, Clone, PartialEq)]
pub(crate) struct BlockState {
    pub n: usize,
    pub blocks: [Vec<C64>; 3],
}

pub(crate) const BLOCK_INDICES: [(usize, usize); 3] = [(0, 0), (1, 1), (0, 1)];

impl BlockState {
    pub fn zeros(n: usize) -> Self {
        BlockState {
            n,
            blocks: [vec![ZERO; n * n], vec![ZERO; n * n], vec![ZERO; n * n]],
        }
    }

    pub fn from_matrix(m: &nalgebra::DMatrix<C64>) -> Self {
        let n = m.nrows() / 2;
        let mut s = BlockState::zeros(n);
        for (slot, &(q, r)) in BLOCK_INDICES.iter().enumerate() {
            for i in 0..n {
                for c in 0..n {
                    s.blocks[slot][i * n + c] = m[(q * n + i, r * n + c)];
                }
            }
        }
        s
    }

    pub fn to_matrix(&self) -> nalgebra::DMatrix<C64> {
        let n = self.n;
        let mut m = nalgebra::DMatrix::zeros(2 * n, 2 * n);
        for i in 0..n {
            for c in 0..n {
                m[(i, c)] = self.blocks[0][i * n + c];
                m[(n + i, n + c)] = self.blocks[1][i * n + c];
                let off = self.blocks[2][i * n + c];
                m[(i, n + c)] = off;
                m[(n + c, i)] = off.conj();
            }
        }
        m
    }

    /// self = base + h · k
    pub fn set_axpy(&mut self, base: &BlockState, h: f64, k: &BlockState) {
        for slot in 0..3 {
            for ((dst, b), d) in self.blocks[slot].iter_mut().zip(&base.blocks[slot]).zip(&k.blocks[slot]) {
                *dst = b + d * h;
            }
        }
    }

    /// Replaces the diagonal blocks by their Hermitian parts.
    pub fn symmetrize(&mut self) {
        let n = self.n;
        for slot in 0..2 {
            let b = &mut self.blocks[slot];
            for i in 0..n {
                b[i * n + i].im = 0.0;
                for c in (i + 1)..n {
                    let avg = (b[i * n + c] + b[c * n + i].conj()) * 0.5;
                    b[i * n + c] = avg;
                    b[c * n + i] = avg.conj();
                }
            }
        }
    }

    pub fn block_trace(&self, slot: usize) -> C64 {
        let n = self.n;
        (0..n).map(|i| self.blocks[slot][i * n + i]).sum()
    }
}

impl BlockGenerator {
    pub fn apply_state(&self, state: &BlockState, out: &mut BlockState, scratch: &mut [C64], scratch2: &mut [C64]) {
        for (slot, &(j, k)) in BLOCK_INDICES.iter().enumerate() {
            self.apply(j, k, &state.blocks[slot], &mut out.blocks[slot], scratch, scratch2);
        }
    }
}
