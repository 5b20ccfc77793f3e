//! Time evolution of density matrices and two-time correlations through the
//! quantum regression theorem.

use crate::error::{Error, Result};
use crate::linalg::{dot, trace_functional, ComplexMatrix, Superoperator, C64};
use crate::model::EmitterModel;

/// Uniform time grid `t0, t0+dt, …, t0+(n−1)dt`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeGrid {
    pub t0: f64,
    pub dt: f64,
    pub n: usize,
}

impl TimeGrid {
    pub fn new(t0: f64, dt: f64, n: usize) -> Result<Self> {
        if !(dt.is_finite() && dt > 0.0) {
            return Err(Error::InvalidParameter {
                name: "dt",
                reason: format!("must be finite and positive, got {dt}"),
            });
        }
        if n < 2 {
            return Err(Error::InvalidParameter {
                name: "n",
                reason: format!("a grid needs at least 2 points, got {n}"),
            });
        }
        if !t0.is_finite() {
            return Err(Error::InvalidParameter {
                name: "t0",
                reason: "must be finite".into(),
            });
        }
        Ok(TimeGrid { t0, dt, n })
    }

    /// Grid covering `[0, t_max]` with `intervals` steps.
    pub fn span(t_max: f64, intervals: usize) -> Result<Self> {
        Self::new(0.0, t_max / intervals as f64, intervals + 1)
    }

    pub fn time(&self, i: usize) -> f64 {
        self.t0 + i as f64 * self.dt
    }

    pub fn times(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.time(i)).collect()
    }

    pub fn t_max(&self) -> f64 {
        self.time(self.n - 1)
    }
}

#[derive(Debug, Clone)]
pub struct Trajectory {
    pub grid: TimeGrid,
    pub states: Vec<ComplexMatrix>,
}

impl Trajectory {
    /// Tr[A ρ(t)] at every grid time.
    pub fn expectation(&self, a: &ComplexMatrix) -> Vec<C64> {
        self.states.iter().map(|rho| (a * rho).trace()).collect()
    }

    pub fn population(&self, index: usize) -> Vec<f64> {
        self.states.iter().map(|rho| rho[(index, index)].re).collect()
    }

    pub fn last(&self) -> &ComplexMatrix {
        self.states.last().expect("trajectory is never empty")
    }
}

/// Two-time values `G(t_i, t_i + τ_k)` stored row-major in `(i, k)`.
#[derive(Debug, Clone)]
pub struct CorrelationGrid {
    pub t_grid: TimeGrid,
    pub tau_grid: TimeGrid,
    pub values: Vec<C64>,
}

impl CorrelationGrid {
    pub fn get(&self, i: usize, k: usize) -> C64 {
        self.values[i * self.tau_grid.n + k]
    }

    pub fn row(&self, i: usize) -> &[C64] {
        let n = self.tau_grid.n;
        &self.values[i * n..(i + 1) * n]
    }

    /// The τ = 0 column.
    pub fn diagonal(&self) -> Vec<C64> {
        (0..self.t_grid.n).map(|i| self.get(i, 0)).collect()
    }
}

/// Classical RK4 step `I + hL + (hL)²/2 + (hL)³/6 + (hL)⁴/24` as a matrix.
pub fn rk4_step_matrix(l: &ComplexMatrix, h: f64) -> ComplexMatrix {
    let n = l.dim();
    let hl = l.scale(C64::new(h, 0.0));
    let mut result = ComplexMatrix::identity(n);
    let mut term = ComplexMatrix::identity(n);
    for k in 1..=4 {
        term = (&term * &hl).scale(C64::new(1.0 / k as f64, 0.0));
        result = &result + &term;
    }
    result
}

/// Propagator over one grid step `h`, built from `⌈h/max_step⌉` RK4 substeps.
pub fn grid_propagator(l: &Superoperator, h: f64, max_step: f64) -> ComplexMatrix {
    let m = substeps(h, max_step);
    rk4_step_matrix(l.matrix(), h / m as f64).powi(m)
}

fn substeps(h: f64, max_step: f64) -> u64 {
    if max_step <= 0.0 || !max_step.is_finite() {
        return 1;
    }
    ((h / max_step) * (1.0 - 1e-12)).ceil().max(1.0) as u64
}

#[derive(Debug, Clone, Copy)]
pub struct EvolveOptions {
    /// Largest RK4 substep in ps; the grid step is used when larger.
    pub max_step: f64,
    pub positivity_tol: f64,
    /// Trace drift beyond which the integration is declared unstable.
    pub drift_limit: f64,
}

impl Default for EvolveOptions {
    fn default() -> Self {
        EvolveOptions {
            max_step: f64::INFINITY,
            positivity_tol: 1e-6,
            drift_limit: 1e-6,
        }
    }
}

/// RK4 integration of dρ/dt = Lρ over `grid`, with one step per grid interval.
pub fn evolve(l: &Superoperator, rho0: &ComplexMatrix, grid: &TimeGrid) -> Result<Trajectory> {
    evolve_with(l, rho0, grid, &EvolveOptions::default())
}

pub fn evolve_with(
    l: &Superoperator,
    rho0: &ComplexMatrix,
    grid: &TimeGrid,
    opts: &EvolveOptions,
) -> Result<Trajectory> {
    if rho0.dim() != l.hilbert_dim() {
        return Err(Error::DimensionMismatch {
            expected: l.hilbert_dim(),
            found: rho0.dim(),
        });
    }
    rho0.check_density(opts.positivity_tol)?;
    let p = grid_propagator(l, grid.dt, opts.max_step);
    let mut v = rho0.vectorize();
    let mut states = Vec::with_capacity(grid.n);
    states.push(rho0.clone());
    for i in 1..grid.n {
        v = p.apply(&v);
        let rho = ComplexMatrix::unvectorize(&v)?;
        let drift = (rho.trace() - C64::new(1.0, 0.0)).norm();
        if drift > opts.drift_limit || !drift.is_finite() {
            return Err(Error::StepInstability {
                t: grid.time(i),
                drift,
            });
        }
        let min = rho.min_eigenvalue()?;
        if min < -opts.positivity_tol {
            return Err(Error::PositivityViolation {
                t: grid.time(i),
                min_eigenvalue: min,
                tolerance: opts.positivity_tol,
            });
        }
        states.push(rho);
    }
    Ok(Trajectory {
        grid: *grid,
        states,
    })
}

impl EmitterModel {
    pub fn evolve_options(&self) -> EvolveOptions {
        EvolveOptions {
            max_step: self.max_step,
            positivity_tol: self.positivity_tol,
            drift_limit: 1e-6,
        }
    }

    pub fn evolve(&self, grid: &TimeGrid) -> Result<Trajectory> {
        evolve_with(&self.generator, &self.rho0, grid, &self.evolve_options())
    }

    pub fn g1(&self, traj: &Trajectory, tau_grid: &TimeGrid) -> Result<CorrelationGrid> {
        regression(
            &self.generator,
            traj,
            tau_grid,
            self.max_step,
            &self.sigma,
            |rho| rho * &self.sigma.adjoint(),
        )
    }
}

/// G¹(t, t+τ) = Tr[σ e^{Lτ}(ρ(t)σ†)] on `traj.grid × tau_grid`.
///
/// `tau_grid` must start at τ = 0. Each grid step is a single RK4 step; use
/// [`EmitterModel::g1`] to honour the model's substep limit.
pub fn g1_regression(
    l: &Superoperator,
    sigma: &ComplexMatrix,
    traj: &Trajectory,
    tau_grid: &TimeGrid,
) -> Result<CorrelationGrid> {
    let sd = sigma.adjoint();
    regression(l, traj, tau_grid, f64::INFINITY, sigma, |rho| rho * &sd)
}

/// G¹(t+τ, t) = Tr[σ† e^{Lτ}(σρ(t))], the reversed-argument evaluation.
pub fn g1_reversed_regression(
    l: &Superoperator,
    sigma: &ComplexMatrix,
    traj: &Trajectory,
    tau_grid: &TimeGrid,
) -> Result<CorrelationGrid> {
    regression(l, traj, tau_grid, f64::INFINITY, &sigma.adjoint(), |rho| {
        sigma * rho
    })
}

/// G²(t, t+τ) = Tr[σ†σ e^{Lτ}(σρ(t)σ†)].
pub fn g2_hbt_regression(
    l: &Superoperator,
    sigma: &ComplexMatrix,
    traj: &Trajectory,
    tau_grid: &TimeGrid,
) -> Result<CorrelationGrid> {
    let sd = sigma.adjoint();
    let n_op = &sd * sigma;
    regression(l, traj, tau_grid, f64::INFINITY, &n_op, |rho| {
        &(sigma * rho) * &sd
    })
}

/// Evaluates Tr[A e^{Lτ_k} seed(ρ(t_i))] for every (i, k).
///
/// The read-out functional is propagated backwards once, `q_{k+1} = Pᵀ q_k`,
/// so each entry costs a single inner product.
pub(crate) fn regression(
    l: &Superoperator,
    traj: &Trajectory,
    tau_grid: &TimeGrid,
    max_step: f64,
    readout: &ComplexMatrix,
    seed: impl Fn(&ComplexMatrix) -> ComplexMatrix,
) -> Result<CorrelationGrid> {
    let d = l.hilbert_dim();
    if readout.dim() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            found: readout.dim(),
        });
    }
    if let Some(rho) = traj.states.first() {
        if rho.dim() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                found: rho.dim(),
            });
        }
    }
    if tau_grid.t0 != 0.0 {
        return Err(Error::InvalidParameter {
            name: "tau_grid",
            reason: format!("must start at 0, starts at {}", tau_grid.t0),
        });
    }
    let pt = grid_propagator(l, tau_grid.dt, max_step).transpose();
    let mut functionals = Vec::with_capacity(tau_grid.n);
    let mut q = trace_functional(readout);
    for k in 0..tau_grid.n {
        if k > 0 {
            q = pt.apply(&q);
        }
        functionals.push(q.clone());
    }
    let n_tau = tau_grid.n;
    let mut values = vec![C64::new(0.0, 0.0); traj.states.len() * n_tau];
    for (i, rho) in traj.states.iter().enumerate() {
        let seeded = seed(rho).vectorize();
        let row = &mut values[i * n_tau..(i + 1) * n_tau];
        for (out, q) in row.iter_mut().zip(&functionals) {
            *out = dot(q, &seeded);
        }
    }
    Ok(CorrelationGrid {
        t_grid: traj.grid,
        tau_grid: *tau_grid,
        values,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{EffectiveParams, EmitterModel};

    #[test]
    fn zero_generator_gives_constant_trajectory() {
        let l = Superoperator::zeros(3);
        let rho0 = ComplexMatrix::basis_op(3, 0, 0);
        let traj = evolve(&l, &rho0, &TimeGrid::new(0.0, 0.5, 20).unwrap()).unwrap();
        assert!(traj.states.iter().all(|r| r.max_abs_diff(&rho0) == 0.0));
    }

    #[test]
    fn pure_decay_matches_exponential() {
        let gamma = 1.0 / 55.0;
        let l = Superoperator::lindblad(&ComplexMatrix::basis_op(2, 1, 0), gamma);
        let rho0 = ComplexMatrix::basis_op(2, 0, 0);
        let grid = TimeGrid::new(0.0, 0.2, 2001).unwrap();
        let traj = evolve(&l, &rho0, &grid).unwrap();
        for (i, rho) in traj.states.iter().enumerate() {
            let exact = (-gamma * grid.time(i)).exp();
            assert!((rho[(0, 0)].re - exact).abs() < 1e-8);
        }
    }

    #[test]
    fn grid_rejects_bad_input() {
        assert!(TimeGrid::new(0.0, 0.0, 10).is_err());
        assert!(TimeGrid::new(0.0, 1.0, 1).is_err());
    }

    #[test]
    fn regression_preconditions_checked() {
        let eff = EffectiveParams::new(1.0 / 60.0, 0.0, 0.3, 0.0);
        let m = EmitterModel::eliminated(&eff).unwrap();
        let traj = m.evolve(&TimeGrid::new(0.0, 1.0, 5).unwrap()).unwrap();
        let bad_tau = TimeGrid::new(1.0, 1.0, 5).unwrap();
        assert!(g1_regression(&m.generator, &m.sigma, &traj, &bad_tau).is_err());
        let bad_sigma = ComplexMatrix::zeros(4);
        let tau = TimeGrid::new(0.0, 1.0, 5).unwrap();
        assert!(matches!(
            g1_regression(&m.generator, &bad_sigma, &traj, &tau),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn unstable_step_is_reported() {
        let l = Superoperator::lindblad(&ComplexMatrix::basis_op(2, 1, 0), 10.0);
        let rho0 = ComplexMatrix::basis_op(2, 0, 0);
        let grid = TimeGrid::new(0.0, 1.0, 50).unwrap();
        let err = evolve(&l, &rho0, &grid).unwrap_err();
        assert!(
            matches!(err, Error::PositivityViolation { .. } | Error::StepInstability { .. }),
            "{err:?}"
        );
    }
}
