//! Ensemble integration of the linear Langevin equations.
//!
//! Each step uses the exact transition `u ← Φ u + w`, `w ~ N(0, Q)`, so the
//! time step only sets the sampling density. Trajectory `k` draws from the
//! ChaCha8 stream `k` of the configured seed, which makes serial and
//! parallel runs identical.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use nalgebra::{DMatrix, SymmetricEigen};
use rand_chacha::ChaCha8Rng;
use rand_core::SeedableRng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::gaussian::{stability, CovarianceMatrix, LinearGaussianModel};
use crate::linalg::{discretize_linear_sde, spectral_radius};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimConfig {
    /// Time step, units of 1/γ.
    pub dt: f64,
    /// Discarded relaxation time, units of 1/γ.
    pub burn_in: f64,
    /// Averaging time per trajectory, units of 1/γ.
    pub sample_window: f64,
    pub n_trajectories: usize,
    pub seed: u64,
}

impl Default for SimConfig {
    fn default() -> Self {
        Self {
            dt: 0.02,
            burn_in: 20.0,
            sample_window: 200.0,
            n_trajectories: 200,
            seed: 12345,
        }
    }
}

pub const MIN_TRAJECTORIES: usize = 100;
pub const MAX_DT_RADIUS: f64 = 0.1;

fn bad(reason: alloc::string::String) -> Error {
    Error::InvalidSimConfig { reason }
}

impl SimConfig {
    pub fn validate(&self, model: &LinearGaussianModel) -> Result<()> {
        if !(self.dt.is_finite() && self.dt > 0.0) {
            return Err(bad(format!("dt = {} must be > 0", self.dt)));
        }
        if !(self.burn_in.is_finite() && self.burn_in >= 0.0) {
            return Err(bad(format!("burn_in = {} must be >= 0", self.burn_in)));
        }
        if !(self.sample_window.is_finite() && self.sample_window >= self.dt) {
            return Err(bad(format!("sample_window = {} shorter than dt", self.sample_window)));
        }
        if self.n_trajectories < MIN_TRAJECTORIES {
            return Err(bad(format!(
                "n_trajectories = {} below {MIN_TRAJECTORIES}",
                self.n_trajectories
            )));
        }
        let rho = spectral_radius(model.drift());
        if !(self.dt * rho < MAX_DT_RADIUS) {
            return Err(bad(format!(
                "dt * spectral radius = {} must be < {MAX_DT_RADIUS}",
                self.dt * rho
            )));
        }
        Ok(())
    }

    pub fn burn_in_steps(&self) -> usize {
        libm::ceil(self.burn_in / self.dt) as usize
    }

    pub fn sample_steps(&self) -> usize {
        (libm::round(self.sample_window / self.dt) as usize).max(1)
    }
}

/// One-step transition matrix and noise factor, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Propagator {
    dim: usize,
    phi: Vec<f64>,
    /// `L` with `L Lᵀ = Q`.
    noise: Vec<f64>,
}

impl Propagator {
    pub fn new(model: &LinearGaussianModel, dt: f64) -> Self {
        let (phi, q) = discretize_linear_sde(model.drift(), model.diffusion(), dt);
        let dim = phi.nrows();
        let eig = SymmetricEigen::new(q);
        let root = DMatrix::from_diagonal(&eig.eigenvalues.map(|x| libm::sqrt(x.max(0.0))));
        let l = &eig.eigenvectors * root;
        Self {
            dim,
            phi: row_major(&phi),
            noise: row_major(&l),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    fn step(&self, u: &mut [f64], z: &[f64], scratch: &mut [f64]) {
        let n = self.dim;
        for (i, out) in scratch.iter_mut().enumerate() {
            let (prow, lrow) = (&self.phi[i * n..(i + 1) * n], &self.noise[i * n..(i + 1) * n]);
            let mut acc = 0.0;
            for j in 0..n {
                acc += prow[j] * u[j] + lrow[j] * z[j];
            }
            *out = acc;
        }
        u.copy_from_slice(scratch);
    }
}

fn row_major(m: &DMatrix<f64>) -> Vec<f64> {
    let mut out = Vec::with_capacity(m.len());
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            out.push(m[(i, j)]);
        }
    }
    out
}

/// Time-averaged `u uᵀ` of trajectory `index`, started from `u = 0`.
pub fn trajectory_moments(prop: &Propagator, cfg: &SimConfig, index: u64) -> DMatrix<f64> {
    let n = prop.dim;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    rng.set_stream(index);
    let mut u = vec![0.0; n];
    let mut z = vec![0.0; n];
    let mut scratch = vec![0.0; n];
    let draw = |z: &mut [f64], rng: &mut ChaCha8Rng| {
        for x in z.iter_mut() {
            *x = StandardNormal.sample(rng);
        }
    };
    for _ in 0..cfg.burn_in_steps() {
        draw(&mut z, &mut rng);
        prop.step(&mut u, &z, &mut scratch);
    }
    let steps = cfg.sample_steps();
    let mut acc = vec![0.0; n * n];
    for _ in 0..steps {
        draw(&mut z, &mut rng);
        prop.step(&mut u, &z, &mut scratch);
        for i in 0..n {
            for j in i..n {
                acc[i * n + j] += u[i] * u[j];
            }
        }
    }
    let inv = 1.0 / steps as f64;
    DMatrix::from_fn(n, n, |i, j| {
        let (a, b) = if i <= j { (i, j) } else { (j, i) };
        acc[a * n + b] * inv
    })
}

/// Ensemble estimate of the steady-state covariance.
#[derive(Debug, Clone, PartialEq)]
pub struct SimResult {
    pub covariance: DMatrix<f64>,
    /// Standard error of each entry across trajectories.
    pub std_err: DMatrix<f64>,
    /// Per-trajectory time averages, in trajectory order.
    pub per_trajectory: Vec<DMatrix<f64>>,
}

impl SimResult {
    pub fn covariance_matrix(&self) -> Result<CovarianceMatrix> {
        CovarianceMatrix::new(self.covariance.clone())
    }

    /// Largest `|estimate − reference| / std_err` over the upper triangle.
    pub fn max_z_score(&self, reference: &DMatrix<f64>) -> f64 {
        let n = self.covariance.nrows();
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for j in i..n {
                let z = (self.covariance[(i, j)] - reference[(i, j)]).abs() / self.std_err[(i, j)];
                worst = worst.max(z);
            }
        }
        worst
    }
}

/// Mean and standard error over trajectory estimates.
pub fn reduce_trajectories(per_trajectory: Vec<DMatrix<f64>>) -> SimResult {
    let k = per_trajectory.len();
    let n = per_trajectory[0].nrows();
    let mut mean = DMatrix::zeros(n, n);
    for m in &per_trajectory {
        mean += m;
    }
    mean /= k as f64;
    let mut var = DMatrix::zeros(n, n);
    for m in &per_trajectory {
        let d = m - &mean;
        var += d.component_mul(&d);
    }
    var /= (k - 1) as f64;
    let std_err = var.map(|v| libm::sqrt(v / k as f64));
    SimResult {
        covariance: mean,
        std_err,
        per_trajectory,
    }
}

/// Checks the model and config, returning the propagator for `cfg.dt`.
pub fn prepare(model: &LinearGaussianModel, cfg: &SimConfig) -> Result<Propagator> {
    let report = stability(model);
    if !report.stable {
        return Err(Error::Unstable {
            max_real: report.max_real,
        });
    }
    cfg.validate(model)?;
    Ok(Propagator::new(model, cfg.dt))
}

/// Serial ensemble simulation.
pub fn simulate(model: &LinearGaussianModel, cfg: &SimConfig) -> Result<SimResult> {
    let prop = prepare(model, cfg)?;
    let per = (0..cfg.n_trajectories as u64)
        .map(|k| trajectory_moments(&prop, cfg, k))
        .collect();
    Ok(reduce_trajectories(per))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gaussian::{build_two_mode, BathSpec};

    fn quick() -> SimConfig {
        SimConfig {
            dt: 0.05,
            burn_in: 10.0,
            sample_window: 100.0,
            n_trajectories: 100,
            seed: 7,
        }
    }

    #[test]
    fn config_validation() {
        let m = build_two_mode(1.0, 1.0, BathSpec::thermal(0.0).unwrap()).unwrap();
        assert!(quick().validate(&m).is_ok());
        assert!(SimConfig { n_trajectories: 99, ..quick() }.validate(&m).is_err());
        assert!(SimConfig { dt: 0.2, ..quick() }.validate(&m).is_err());
        assert!(SimConfig { dt: -1.0, ..quick() }.validate(&m).is_err());
        let unstable = build_two_mode(3.0, 1.0, BathSpec::thermal(0.0).unwrap()).unwrap();
        assert!(matches!(simulate(&unstable, &quick()), Err(Error::Unstable { .. })));
    }

    #[test]
    fn free_thermal_mode_variance() {
        let m = build_two_mode(0.0, 1.0, BathSpec::thermal(1.5).unwrap()).unwrap();
        let r = simulate(&m, &quick()).unwrap();
        for (i, expected) in [(0, 2.0), (1, 2.0), (2, 0.5), (3, 0.5)] {
            let z = (r.covariance[(i, i)] - expected).abs() / r.std_err[(i, i)];
            assert!(z < 3.0, "entry {i}: z = {z}");
        }
    }

    #[test]
    fn reproducible_with_seed() {
        let m = build_two_mode(1.0, 1.0, BathSpec::thermal(0.2).unwrap()).unwrap();
        let prop = prepare(&m, &quick()).unwrap();
        let a = trajectory_moments(&prop, &quick(), 3);
        let b = trajectory_moments(&prop, &quick(), 3);
        assert_eq!(a, b);
        let c = trajectory_moments(&prop, &quick(), 4);
        assert_ne!(a, c);
    }
}
