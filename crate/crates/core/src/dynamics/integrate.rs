use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::analytic::PhysicalParams;
use crate::error::{Error, Result};
use crate::hilbert::{CompositeDensity, SpaceDescriptor};

use super::generator::{BlockGenerator, BlockState};
use super::observables::ObservableSample;
use super::{blocks_of, check_space, check_state, IntegratorConfig};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryMetadata {
    pub params: PhysicalParams,
    pub config: IntegratorConfig,
    pub fock_dim: usize,
    pub seed: Option<u64>,
    pub steps: usize,
    pub dt: f64,
}

#[derive(Debug, Clone)]
pub struct Trajectory {
    /// Observables at every `record_stride`-th step, plus the first and last.
    pub samples: Vec<ObservableSample>,
    pub final_state: CompositeDensity,
    pub metadata: TrajectoryMetadata,
}

/// Fixed-step fourth-order Runge-Kutta integrator for one parameter set.
#[derive(Debug, Clone)]
pub struct Evolver {
    params: PhysicalParams,
    space: SpaceDescriptor,
    config: IntegratorConfig,
    generator: BlockGenerator,
}

struct Workspace {
    k: [BlockState; 4],
    stage: BlockState,
    s1: Vec<C64>,
    s2: Vec<C64>,
}

impl Evolver {
    pub fn new(params: &PhysicalParams, space: &SpaceDescriptor, config: &IntegratorConfig) -> Result<Self> {
        check_space(params, space)?;
        config.validate()?;
        Ok(Evolver {
            params: *params,
            space: *space,
            config: *config,
            generator: BlockGenerator::new(params, space, config.dissipator),
        })
    }

    pub fn config(&self) -> &IntegratorConfig {
        &self.config
    }

    pub fn space(&self) -> &SpaceDescriptor {
        &self.space
    }

    fn step(&self, y: &mut BlockState, dt: f64, ws: &mut Workspace) {
        let g = &self.generator;
        let [k1, k2, k3, k4] = &mut ws.k;
        g.apply_state(y, k1, &mut ws.s1, &mut ws.s2);
        ws.stage.set_axpy(y, 0.5 * dt, k1);
        g.apply_state(&ws.stage, k2, &mut ws.s1, &mut ws.s2);
        ws.stage.set_axpy(y, 0.5 * dt, k2);
        g.apply_state(&ws.stage, k3, &mut ws.s1, &mut ws.s2);
        ws.stage.set_axpy(y, dt, k3);
        g.apply_state(&ws.stage, k4, &mut ws.s1, &mut ws.s2);
        let w = dt / 6.0;
        for slot in 0..3 {
            let dst = &mut y.blocks[slot];
            let (a, b, c, d) = (&k1.blocks[slot], &k2.blocks[slot], &k3.blocks[slot], &k4.blocks[slot]);
            for i in 0..dst.len() {
                dst[i] += (a[i] + (b[i] + c[i]) * 2.0 + d[i]) * w;
            }
        }
        y.symmetrize();
    }

    /// Integrates from `rho0` for a duration `t_end`, snapshotting full states
    /// at the steps nearest to each time in `captures` (measured from
    /// `rho0.time`).
    pub fn evolve_capturing(
        &self,
        rho0: &CompositeDensity,
        t_end: f64,
        captures: &[f64],
    ) -> Result<(Trajectory, Vec<CompositeDensity>)> {
        check_state(rho0, &self.space)?;
        if !(t_end > 0.0) || !t_end.is_finite() {
            return Err(Error::domain("t_end", t_end, "must be positive"));
        }
        let period = self.params.period();
        let nominal_dt = period / self.config.steps_per_period as f64;
        let steps = ((t_end / nominal_dt) - 1e-9).ceil().max(1.0) as usize;
        let dt = t_end / steps as f64;
        let capture_steps: Vec<usize> = captures
            .iter()
            .map(|&t| ((t / dt).round().max(0.0) as usize).min(steps))
            .collect();

        let n = self.space.fock_dim;
        let mut y = blocks_of(rho0);
        y.symmetrize();
        let mut ws = Workspace {
            k: std::array::from_fn(|_| BlockState::zeros(n)),
            stage: BlockState::zeros(n),
            s1: vec![C64::new(0.0, 0.0); n * n],
            s2: vec![C64::new(0.0, 0.0); n * n],
        };
        let mut samples = vec![ObservableSample::from_blocks(&y, &self.generator, rho0.time)];
        let mut snapshots: Vec<Option<CompositeDensity>> = vec![None; captures.len()];
        let snapshot = |y: &BlockState, time: f64| CompositeDensity {
            matrix: y.to_matrix(),
            time,
        };
        for (slot, &s) in capture_steps.iter().enumerate() {
            if s == 0 {
                snapshots[slot] = Some(snapshot(&y, rho0.time));
            }
        }

        for step in 1..=steps {
            self.step(&mut y, dt, &mut ws);
            let elapsed = step as f64 * dt;
            let time = rho0.time + elapsed;

            let top = y.blocks[0][n * n - 1].re + y.blocks[1][n * n - 1].re;
            if !(top <= self.config.leak_threshold) {
                return Err(Error::TruncationLeak {
                    step,
                    population: top,
                    threshold: self.config.leak_threshold,
                });
            }
            let drift = (y.block_trace(0) + y.block_trace(1) - 1.0).norm();
            let allowed = self.config.trace_tolerance * (elapsed / period).max(1.0);
            if !(drift <= allowed) {
                return Err(Error::TraceDrift {
                    step,
                    magnitude: drift,
                    allowed,
                });
            }

            if step % self.config.record_stride == 0 || step == steps {
                samples.push(ObservableSample::from_blocks(&y, &self.generator, time));
            }
            for (slot, &s) in capture_steps.iter().enumerate() {
                if s == step {
                    snapshots[slot] = Some(snapshot(&y, time));
                }
            }
        }

        let final_state = snapshot(&y, rho0.time + t_end);
        let trajectory = Trajectory {
            samples,
            final_state,
            metadata: TrajectoryMetadata {
                params: self.params,
                config: self.config,
                fock_dim: n,
                seed: None,
                steps,
                dt,
            },
        };
        let snapshots = snapshots.into_iter().map(|s| s.expect("every capture step is visited")).collect();
        Ok((trajectory, snapshots))
    }

    pub fn evolve(&self, rho0: &CompositeDensity, t_end: f64) -> Result<Trajectory> {
        self.evolve_capturing(rho0, t_end, &[]).map(|(t, _)| t)
    }
}

/// Integrates the master equation from `rho0` for `t_end` with
/// dt = T/steps_per_period.
pub fn evolve(
    rho0: &CompositeDensity,
    t_end: f64,
    params: &PhysicalParams,
    space: &SpaceDescriptor,
    config: &IntegratorConfig,
) -> Result<Trajectory> {
    Evolver::new(params, space, config)?.evolve(rho0, t_end)
}
