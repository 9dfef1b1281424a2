use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;
use polmech_core::gaussian::{build_three_mode, build_two_mode, solve_lyapunov, BathSpec, ThreeModeVariant};
use polmech_core::linalg::discretize_linear_sde;
use polmech_core::{simulate, SimConfig};
use rand_chacha::ChaCha8Rng;
use rand_core::SeedableRng;
use rand_distr::{Distribution, StandardNormal};

fn assert_within_3se(model: &polmech_core::LinearGaussianModel, cfg: &SimConfig) {
    let v = solve_lyapunov(model).unwrap();
    let r = simulate(model, cfg).unwrap();
    let n = v.matrix().nrows();
    for i in 0..n {
        for j in i..n {
            let z = (r.covariance[(i, j)] - v.matrix()[(i, j)]).abs() / r.std_err[(i, j)];
            assert!(z < 3.0, "entry ({i},{j}): z = {z:.2}");
        }
    }
}

#[test]
fn two_mode_vacuum_bath_entries_within_three_se() {
    let m = build_two_mode(1.0, 1.0, BathSpec::thermal(0.0).unwrap()).unwrap();
    assert_within_3se(&m, &SimConfig::default());
}

#[test]
fn squeezed_bath_noise_is_correlated_correctly() {
    let n: f64 = 0.5;
    let bath = BathSpec::squeezed(n, Complex64::from_polar((n * (n + 1.0)).sqrt(), 0.9)).unwrap();
    let m = build_two_mode(1.2, 1.0, bath).unwrap();
    assert_within_3se(&m, &SimConfig { seed: 2024, ..SimConfig::default() });
}

#[test]
fn half_steps_compose_to_a_full_step() {
    let m = build_three_mode(1.0, 3.0, 1.0, BathSpec::thermal(0.2).unwrap(), ThreeModeVariant::A1A2).unwrap();
    let (phi_h, q_h) = discretize_linear_sde(m.drift(), m.diffusion(), 0.01);
    let (phi, q) = discretize_linear_sde(m.drift(), m.diffusion(), 0.02);
    assert!((&phi_h * &phi_h - &phi).amax() < 1e-14);
    assert!((&phi_h * &q_h * phi_h.transpose() + &q_h - &q).amax() < 1e-14);
}

// Symmetric square root factor of a PSD matrix.
fn factor(q: &DMatrix<f64>) -> DMatrix<f64> {
    let e = SymmetricEigen::new(q.clone());
    &e.eigenvectors * DMatrix::from_diagonal(&e.eigenvalues.map(|x| x.max(0.0).sqrt()))
}

#[test]
fn halving_dt_moves_estimates_by_less_than_one_standard_error() {
    // Common random numbers: the dt trajectory is the dt/2 trajectory read
    // at every second step, which has exactly the dt transition law.
    let m = build_three_mode(1.0, 3.0, 1.0, BathSpec::thermal(0.2).unwrap(), ThreeModeVariant::A1A2).unwrap();
    let cfg = SimConfig::default();
    let h = cfg.dt / 2.0;
    let (phi, q) = discretize_linear_sde(m.drift(), m.diffusion(), h);
    let l = factor(&q);
    let dim = phi.nrows();
    let burn = (cfg.burn_in / h).ceil() as usize;
    let steps = (cfg.sample_window / h).round() as usize;
    let mut fine = Vec::new();
    let mut coarse = Vec::new();
    for k in 0..cfg.n_trajectories as u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        rng.set_stream(k);
        let mut u = DVector::zeros(dim);
        let mut acc_f = DMatrix::zeros(dim, dim);
        let mut acc_c = DMatrix::zeros(dim, dim);
        for s in 0..burn + steps {
            let z = DVector::from_fn(dim, |_, _| StandardNormal.sample(&mut rng));
            u = &phi * &u + &l * z;
            if s >= burn {
                let uu = &u * u.transpose();
                if (s - burn) % 2 == 1 {
                    acc_c += &uu;
                }
                acc_f += uu;
            }
        }
        fine.push(acc_f / steps as f64);
        coarse.push(acc_c / (steps / 2) as f64);
    }
    let mean = |v: &[DMatrix<f64>]| v.iter().fold(DMatrix::zeros(dim, dim), |a, b| a + b) / v.len() as f64;
    let (mf, mc) = (mean(&fine), mean(&coarse));
    let kf = fine.len() as f64;
    let se = coarse
        .iter()
        .fold(DMatrix::zeros(dim, dim), |a, b| {
            let d = b - &mc;
            a + d.component_mul(&d)
        })
        .map(|v| (v / (kf - 1.0) / kf).sqrt());
    for i in 0..dim {
        for j in i..dim {
            let shift = (mf[(i, j)] - mc[(i, j)]).abs();
            assert!(shift < se[(i, j)], "entry ({i},{j}): shift {shift:e} vs SE {:e}", se[(i, j)]);
        }
    }
}
