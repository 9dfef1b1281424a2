//! Parallel ensemble runs and their comparison with the Lyapunov solution.

use std::io::{self, Write};

use nalgebra::DMatrix;
use polmech_core::gaussian::{log_negativity, CovarianceMatrix};
use polmech_core::stochastic::{prepare, reduce_trajectories, trajectory_moments};
use polmech_core::{LinearGaussianModel, Result, SimConfig, SimResult};
use rayon::prelude::*;

use crate::report::num;

/// Same result as the serial `simulate`, bit for bit: trajectory `k` always
/// uses stream `k` and the reduction runs in trajectory order.
pub fn simulate_parallel(model: &LinearGaussianModel, cfg: &SimConfig) -> Result<SimResult> {
    let prop = prepare(model, cfg)?;
    let per = (0..cfg.n_trajectories as u64)
        .into_par_iter()
        .map(|k| trajectory_moments(&prop, cfg, k))
        .collect();
    Ok(reduce_trajectories(per))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EntryCheck {
    pub i: usize,
    pub j: usize,
    pub estimate: f64,
    pub std_err: f64,
    pub reference: f64,
}

impl EntryCheck {
    pub fn z(&self) -> f64 {
        (self.estimate - self.reference).abs() / self.std_err
    }
}

/// Upper-triangle entries of the estimate against `reference`.
pub fn compare(result: &SimResult, reference: &DMatrix<f64>) -> Vec<EntryCheck> {
    let n = reference.nrows();
    let mut out = Vec::with_capacity(n * (n + 1) / 2);
    for i in 0..n {
        for j in i..n {
            out.push(EntryCheck {
                i,
                j,
                estimate: result.covariance[(i, j)],
                std_err: result.std_err[(i, j)],
                reference: reference[(i, j)],
            });
        }
    }
    out
}

pub fn write_csv<W: Write>(mut out: W, checks: &[EntryCheck], provenance: &[String]) -> io::Result<()> {
    for line in provenance {
        writeln!(out, "# {line}")?;
    }
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["i", "j", "estimate", "std_err", "lyapunov", "z"])?;
    for c in checks {
        w.write_record([
            c.i.to_string(),
            c.j.to_string(),
            num(c.estimate),
            num(c.std_err),
            num(c.reference),
            num(c.z()),
        ])?;
    }
    w.flush()
}

fn sub4(m: &DMatrix<f64>, (a, b): (usize, usize)) -> DMatrix<f64> {
    let idx = [2 * a, 2 * a + 1, 2 * b, 2 * b + 1];
    DMatrix::from_fn(4, 4, |r, c| m[(idx[r], idx[c])])
}

fn e_n(m: &DMatrix<f64>) -> Result<f64> {
    log_negativity(&CovarianceMatrix::new(m.clone())?)
}

/// E_N of the ensemble-mean covariance for `pair`, with a delta-method
/// standard error from the spread of per-trajectory estimates.
pub fn log_negativity_with_error(result: &SimResult, pair: (usize, usize)) -> Result<(f64, f64)> {
    let mean = sub4(&result.covariance, pair);
    let value = e_n(&mean)?;
    let h = 1e-6;
    let mut grad = DMatrix::zeros(4, 4);
    for r in 0..4 {
        for c in r..4 {
            let mut up = mean.clone();
            let mut dn = mean.clone();
            up[(r, c)] += h;
            dn[(r, c)] -= h;
            if r != c {
                up[(c, r)] += h;
                dn[(c, r)] -= h;
            }
            // Symmetric perturbation: the derivative is shared by (r, c) and (c, r).
            let d = (e_n(&up)? - e_n(&dn)?) / (2.0 * h);
            let w = if r == c { d } else { 0.5 * d };
            grad[(r, c)] = w;
            grad[(c, r)] = w;
        }
    }
    let k = result.per_trajectory.len() as f64;
    let lin: Vec<f64> = result
        .per_trajectory
        .iter()
        .map(|t| (sub4(t, pair) - &mean).component_mul(&grad).sum())
        .collect();
    let var = lin.iter().map(|x| x * x).sum::<f64>() / (k - 1.0);
    Ok((value, (var / k).sqrt()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use polmech_core::{build_two_mode, simulate, BathSpec};

    #[test]
    fn parallel_matches_serial() {
        let m = build_two_mode(1.0, 1.0, BathSpec::thermal(0.3).unwrap()).unwrap();
        let cfg = SimConfig {
            sample_window: 20.0,
            burn_in: 5.0,
            n_trajectories: 100,
            ..SimConfig::default()
        };
        assert_eq!(simulate_parallel(&m, &cfg).unwrap(), simulate(&m, &cfg).unwrap());
    }
}
