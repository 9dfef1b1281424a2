//! Small dense helpers not covered by nalgebra's `no_std` surface.

use alloc::vec::Vec;

use nalgebra::DMatrix;
use num_complex::Complex64;

/// Matrix exponential by scaling and squaring with a truncated Taylor series.
///
/// Intended for the ≤ 12×12 matrices that appear here; the argument is
/// scaled to 1-norm ≤ 1/2 so 20 Taylor terms reach machine precision.
pub fn expm(a: &DMatrix<f64>) -> DMatrix<f64> {
    assert!(a.is_square(), "expm needs a square matrix");
    let n = a.nrows();
    let norm = one_norm(a);
    let mut squarings = 0u32;
    let mut scale = 1.0;
    while norm * scale > 0.5 {
        scale *= 0.5;
        squarings += 1;
    }
    let x = a * scale;
    let mut term = DMatrix::<f64>::identity(n, n);
    let mut sum = term.clone();
    for k in 1..=20 {
        term = &term * &x / k as f64;
        sum += &term;
    }
    for _ in 0..squarings {
        sum = &sum * &sum;
    }
    sum
}

pub fn one_norm(a: &DMatrix<f64>) -> f64 {
    a.column_iter()
        .map(|c| c.iter().map(|v| v.abs()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// Transition matrix and integrated noise covariance of `du = A u dt + dW`,
/// `E[dW dWᵀ] = D dt`, over one step `h` (Van Loan block exponential).
///
/// Returns `(e^{Ah}, ∫₀ʰ e^{As} D e^{Aᵀs} ds)`.
pub fn discretize_linear_sde(a: &DMatrix<f64>, d: &DMatrix<f64>, h: f64) -> (DMatrix<f64>, DMatrix<f64>) {
    let n = a.nrows();
    let mut block = DMatrix::<f64>::zeros(2 * n, 2 * n);
    block.view_mut((0, 0), (n, n)).copy_from(&(-a * h));
    block.view_mut((0, n), (n, n)).copy_from(&(d * h));
    block.view_mut((n, n), (n, n)).copy_from(&(a.transpose() * h));
    let e = expm(&block);
    let phi = e.view((n, n), (n, n)).transpose();
    let q = &phi * e.view((0, n), (n, n));
    let q = (&q + q.transpose()) * 0.5;
    (phi, q)
}

/// Eigenvalues of a real square matrix.
pub fn eigenvalues(a: &DMatrix<f64>) -> Vec<Complex64> {
    a.clone()
        .complex_eigenvalues()
        .iter()
        .map(|z| Complex64::new(z.re, z.im))
        .collect()
}

/// Largest eigenvalue modulus.
pub fn spectral_radius(a: &DMatrix<f64>) -> f64 {
    eigenvalues(a).iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Symplectic form `⊕ [[0, 1], [-1, 0]]` for `n_modes` modes.
pub fn symplectic_form(n_modes: usize) -> DMatrix<f64> {
    let mut om = DMatrix::zeros(2 * n_modes, 2 * n_modes);
    for k in 0..n_modes {
        om[(2 * k, 2 * k + 1)] = 1.0;
        om[(2 * k + 1, 2 * k)] = -1.0;
    }
    om
}

#[cfg(test)]
mod tests {
    use super::*;
    use libm::{cos, exp, sin};

    #[test]
    fn expm_of_rotation_generator() {
        let t = 2.7;
        let a = DMatrix::from_row_slice(2, 2, &[-0.3, t, -t, -0.3]);
        let e = expm(&a);
        let damp = exp(-0.3);
        let expected = DMatrix::from_row_slice(2, 2, &[damp * cos(t), damp * sin(t), -damp * sin(t), damp * cos(t)]);
        assert!((e - expected).amax() < 1e-13);
    }

    #[test]
    fn expm_nilpotent() {
        let a = DMatrix::from_row_slice(3, 3, &[0.0, 4.0, 1.0, 0.0, 0.0, 2.0, 0.0, 0.0, 0.0]);
        let e = expm(&a);
        let expected = DMatrix::from_row_slice(3, 3, &[1.0, 4.0, 5.0, 0.0, 1.0, 2.0, 0.0, 0.0, 1.0]);
        assert!((e - expected).amax() < 1e-13);
    }

    #[test]
    fn scalar_noise_integral() {
        // ∫₀ʰ e^{-2γs} d ds = d (1 - e^{-2γh}) / 2γ
        let g = 1.3;
        let d = 0.7;
        let h = 0.4;
        let (phi, q) = discretize_linear_sde(
            &DMatrix::from_element(1, 1, -g),
            &DMatrix::from_element(1, 1, d),
            h,
        );
        assert!((phi[(0, 0)] - exp(-g * h)).abs() < 1e-14);
        assert!((q[(0, 0)] - d * (1.0 - exp(-2.0 * g * h)) / (2.0 * g)).abs() < 1e-14);
    }

    #[test]
    fn eigenvalues_of_damped_oscillator() {
        let a = DMatrix::from_row_slice(2, 2, &[-1.0, 3.0, -3.0, -1.0]);
        let mut ev = eigenvalues(&a);
        ev.sort_by(|x, y| x.im.partial_cmp(&y.im).unwrap());
        assert!((ev[0] - Complex64::new(-1.0, -3.0)).norm() < 1e-12);
        assert!((ev[1] - Complex64::new(-1.0, 3.0)).norm() < 1e-12);
        assert!((spectral_radius(&a) - 10f64.sqrt()).abs() < 1e-12);
    }
}
