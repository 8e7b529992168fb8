use std::io::Write;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use super::generator::{BlockGenerator, BlockState, Tridiagonal};
use super::Trajectory;

/// Column order of the trajectory CSV.
pub const TRAJECTORY_COLUMNS: [&str; 8] = [
    "time",
    "coherence",
    "sigma_z",
    "x_mean",
    "p_mean",
    "purity",
    "trace_dev",
    "top_fock_pop",
];

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ObservableSample {
    pub time: f64,
    /// C = 2|⟨0|ρ_Q|1⟩|.
    pub coherence: f64,
    pub sigma_z: f64,
    pub x_mean: f64,
    pub p_mean: f64,
    pub purity: f64,
    pub trace_dev: f64,
    pub top_fock_pop: f64,
}

/// tr(T·B) for tridiagonal T and a row-major block B.
fn tri_trace(t: &Tridiagonal, b: &[C64], n: usize) -> C64 {
    let mut acc = C64::new(0.0, 0.0);
    for i in 0..n {
        acc += t.diag[i] * b[i * n + i];
        if i + 1 < n {
            // T[i][i+1] B[i+1][i] + T[i+1][i] B[i][i+1]
            acc += t.upper[i] * b[(i + 1) * n + i] + t.lower[i] * b[i * n + i + 1];
        }
    }
    acc
}

impl ObservableSample {
    pub(crate) fn from_blocks(y: &BlockState, gen: &BlockGenerator, time: f64) -> Self {
        let n = y.n;
        let t00 = y.block_trace(0);
        let t11 = y.block_trace(1);
        let t01 = y.block_trace(2);
        let x = tri_trace(&gen.x, &y.blocks[0], n) + tri_trace(&gen.x, &y.blocks[1], n);
        let p = tri_trace(&gen.p, &y.blocks[0], n) + tri_trace(&gen.p, &y.blocks[1], n);
        let sq = |slot: usize| y.blocks[slot].iter().map(|z| z.norm_sqr()).sum::<f64>();
        ObservableSample {
            time,
            coherence: 2.0 * t01.norm(),
            sigma_z: (t00 - t11).re,
            x_mean: x.re,
            p_mean: p.re,
            purity: sq(0) + sq(1) + 2.0 * sq(2),
            trace_dev: (t00 + t11).re - 1.0,
            top_fock_pop: y.blocks[0][n * n - 1].re + y.blocks[1][n * n - 1].re,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ObservableSeries {
    pub samples: Vec<ObservableSample>,
}

impl ObservableSeries {
    pub fn first(&self) -> Option<&ObservableSample> {
        self.samples.first()
    }

    pub fn last(&self) -> Option<&ObservableSample> {
        self.samples.last()
    }

    /// max |⟨σ_z⟩(t) − ⟨σ_z⟩(0)|.
    pub fn sigma_z_drift(&self) -> f64 {
        let Some(first) = self.samples.first() else {
            return 0.0;
        };
        self.samples
            .iter()
            .map(|s| (s.sigma_z - first.sigma_z).abs())
            .fold(0.0, f64::max)
    }

    pub fn max_trace_dev(&self) -> f64 {
        self.samples.iter().map(|s| s.trace_dev.abs()).fold(0.0, f64::max)
    }

    /// Writes the trajectory CSV: one comment line with the schema version,
    /// a header row, then one row per sample.
    pub fn write_csv<W: Write>(&self, mut out: W, comment: &str) -> csv::Result<()> {
        writeln!(out, "# {comment}")?;
        let mut w = csv::Writer::from_writer(out);
        w.write_record(TRAJECTORY_COLUMNS)?;
        for s in &self.samples {
            w.write_record(
                [
                    s.time,
                    s.coherence,
                    s.sigma_z,
                    s.x_mean,
                    s.p_mean,
                    s.purity,
                    s.trace_dev,
                    s.top_fock_pop,
                ]
                .iter()
                .map(|v| format!("{v:e}")),
            )?;
        }
        w.flush()?;
        Ok(())
    }
}

pub fn trajectory_observables(traj: &Trajectory) -> ObservableSeries {
    ObservableSeries {
        samples: traj.samples.clone(),
    }
}
