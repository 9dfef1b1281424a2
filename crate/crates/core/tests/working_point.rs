use num_complex::Complex64;
use polmech_core::working_point::{solve_steady_state, DriveParams};
use polmech_core::Error;

// Residuals of the three real steady-state equations for x = (q, Re Ψ, Im Ψ, Re Φ, Im Φ).
fn residuals(p: &DriveParams, x: &[f64; 5]) -> [f64; 5] {
    let om = (p.f1 * p.f1 + p.delta * p.delta).sqrt();
    let cos2 = if om == 0.0 { 0.5 } else { 0.5 + p.delta / (2.0 * om) };
    let (c, s) = (cos2.sqrt(), (1.0 - cos2).sqrt());
    let g = 2.0 * s * c * p.g0;
    let q = x[0];
    let psi = Complex64::new(x[1], x[2]);
    let phi = Complex64::new(x[3], x[4]);
    let i = Complex64::i();
    let dq = p.delta_l - q * p.g0 / 2.0;
    let ot = om - q * p.g0 * (c * c - s * s) / 2.0;
    let r1 = -(p.gamma + i * (dq - ot)) * psi - i * g * q / 2.0 * phi - p.e_l * s;
    let r2 = -(p.gamma + i * (dq + ot)) * phi - i * g * q / 2.0 * psi + p.e_l * c;
    let r3 = q - p.g0 / p.omega_m * (phi * c - psi * s).norm_sqr();
    [r3, r1.re, r1.im, r2.re, r2.im]
}

// Newton iteration with a forward-difference Jacobian and Gaussian elimination.
fn newton(p: &DriveParams, mut x: [f64; 5]) -> [f64; 5] {
    for _ in 0..100 {
        let f = residuals(p, &x);
        if f.iter().map(|v| v.abs()).fold(0.0, f64::max) < 1e-15 {
            break;
        }
        let mut jac = [[0.0; 6]; 5];
        for k in 0..5 {
            let h = 1e-7 * x[k].abs().max(1.0);
            let mut xp = x;
            xp[k] += h;
            let fp = residuals(p, &xp);
            for r in 0..5 {
                jac[r][k] = (fp[r] - f[r]) / h;
            }
        }
        for r in 0..5 {
            jac[r][5] = -f[r];
        }
        for col in 0..5 {
            let piv = (col..5).max_by(|&a, &b| jac[a][col].abs().partial_cmp(&jac[b][col].abs()).unwrap()).unwrap();
            jac.swap(col, piv);
            let pivot = jac[col];
            for row in jac.iter_mut().skip(col + 1) {
                let factor = row[col] / pivot[col];
                for (x, p) in row.iter_mut().zip(pivot).skip(col) {
                    *x -= factor * p;
                }
            }
        }
        let mut dx = [0.0; 5];
        for r in (0..5).rev() {
            let mut acc = jac[r][5];
            for k in r + 1..5 {
                acc -= jac[r][k] * dx[k];
            }
            dx[r] = acc / jac[r][r];
        }
        for k in 0..5 {
            x[k] += dx[k];
        }
    }
    x
}

#[test]
fn agrees_with_newton_root_finder() {
    for (f1, delta, g0, e_l) in [(2.0, 0.0, 0.05, 2.0), (1.5, 0.4, 0.1, 1.0), (3.0, -0.8, 0.02, 4.0)] {
        let p = DriveParams {
            f1,
            delta,
            delta_l: 1.0,
            omega_m: 1.0,
            e_l,
            g0,
            ..Default::default()
        };
        let wp = solve_steady_state(&p).unwrap();
        let x = newton(&p, [0.0, 0.0, 0.0, 0.0, 0.0]);
        assert!((wp.q_s - x[0]).abs() < 1e-9 * x[0].max(1.0), "q: {} vs {}", wp.q_s, x[0]);
        // The solver removes a common phase; compare moduli and the relative phase.
        let (psi, phi) = (Complex64::new(x[1], x[2]), Complex64::new(x[3], x[4]));
        assert!((wp.psi_s.norm() - psi.norm()).abs() < 1e-9);
        assert!((wp.phi_s.norm() - phi.norm()).abs() < 1e-9);
        let rel = phi * psi.conj();
        assert!((wp.phi_s * wp.psi_s.conj() - rel).norm() < 1e-9);
        assert!(wp.residual < 1e-10);
    }
}

#[test]
fn couplings_are_real_after_phase_removal() {
    let p = DriveParams {
        f1: 2.0,
        delta_l: 1.0,
        e_l: 2.0,
        g0: 0.05,
        ..Default::default()
    };
    let wp = solve_steady_state(&p).unwrap();
    let cavity = wp.phi_s * wp.phi.cos() - wp.psi_s * wp.phi.sin();
    assert!(cavity.im.abs() < 1e-14 && cavity.re >= 0.0);
    assert!(wp.g_q >= 0.0 && wp.q_s >= 0.0);
}

#[test]
fn bistable_drive_reports_branches() {
    let p = DriveParams {
        f1: 1.0,
        delta_l: 3.0,
        e_l: 2.0,
        g0: 1.0,
        omega_m: 1.0,
        ..Default::default()
    };
    match solve_steady_state(&p) {
        Err(Error::Multistable { branches }) => {
            assert_eq!(branches.len(), 2, "{branches:?}");
            for (b, x) in branches.iter().zip([0.89588, 3.03112]) {
                assert!((b - x).abs() < 1e-3, "{branches:?}");
            }
            for &b in &branches {
                let root = newton(&p, [b, 0.0, 0.0, 0.0, 0.0]);
                assert!((root[0] - b).abs() < 1e-8);
            }
        }
        other => panic!("expected Multistable, got {other:?}"),
    }
}
