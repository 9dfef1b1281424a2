//! Drift and diffusion matrices, steady-state covariances and entanglement.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::FRAC_1_SQRT_2;

use libm::{log2, sqrt};
use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

use crate::coherence::MomentSet;
use crate::error::{invalid, Error, Result};
use crate::linalg::{eigenvalues, symplectic_form};

/// Eigenvalue floor for `V + iΩ/2 ⪰ 0`.
pub const PHYSICALITY_TOL: f64 = 1e-10;

/// Stability margin, in units of γ.
pub const STABILITY_EPS: f64 = 1e-9;

const PIVOT_RATIO_MIN: f64 = 1e-14;
const RESIDUAL_TOL: f64 = 1e-12;
const BATH_TOL: f64 = 1e-12;

/// Reservoir of the mechanical mode: thermal occupation and two-photon correlation m.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BathSpec {
    pub n_bar: f64,
    pub m_sq: Complex64,
}

impl BathSpec {
    pub fn thermal(n_bar: f64) -> Result<Self> {
        Self::squeezed(n_bar, Complex64::new(0.0, 0.0))
    }

    pub fn squeezed(n_bar: f64, m_sq: Complex64) -> Result<Self> {
        let bath = Self { n_bar, m_sq };
        bath.validate()?;
        Ok(bath)
    }

    /// Squeezed vacuum with real m = sqrt(n̄(n̄+1)).
    pub fn max_squeezed(n_bar: f64) -> Result<Self> {
        Self::squeezed(n_bar, Complex64::new(sqrt(n_bar * (n_bar + 1.0)), 0.0))
    }

    pub fn bound(&self) -> f64 {
        sqrt(self.n_bar * (self.n_bar + 1.0))
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.n_bar.is_finite() && self.n_bar >= 0.0) {
            return Err(invalid("n_bar", "must be finite and >= 0"));
        }
        if !(self.m_sq.re.is_finite() && self.m_sq.im.is_finite()) {
            return Err(invalid("m_sq", "must be finite"));
        }
        let bound = self.bound();
        if self.m_sq.norm() > bound * (1.0 + BATH_TOL) + BATH_TOL {
            return Err(Error::BathInvariant {
                m_abs: self.m_sq.norm(),
                bound,
            });
        }
        Ok(())
    }
}

/// Symmetrized quadrature noise of the mechanical bath, times the damping `rate`.
pub fn mechanical_diffusion_block(bath: &BathSpec, rate: f64) -> [[f64; 2]; 2] {
    let n = 2.0 * bath.n_bar + 1.0;
    let m = bath.m_sq;
    [
        [(n + 2.0 * m.re) * rate, 2.0 * m.im * rate],
        [2.0 * m.im * rate, (n - 2.0 * m.re) * rate],
    ]
}

/// Linear quantum Langevin system `u̇ = A u + noise`, `E[noise noiseᵀ] = D δ(t−t′)`.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearGaussianModel {
    drift: DMatrix<f64>,
    diffusion: DMatrix<f64>,
    mode_labels: Vec<String>,
    bath: BathSpec,
    gamma: f64,
}

impl LinearGaussianModel {
    pub fn new(
        drift: DMatrix<f64>,
        diffusion: DMatrix<f64>,
        mode_labels: Vec<String>,
        bath: BathSpec,
        gamma: f64,
    ) -> Result<Self> {
        let dim = 2 * mode_labels.len();
        for m in [&drift, &diffusion] {
            if m.nrows() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: m.nrows(),
                });
            }
            if m.ncols() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: m.ncols(),
                });
            }
        }
        if !(gamma.is_finite() && gamma > 0.0) {
            return Err(invalid("gamma", "must be > 0"));
        }
        if drift.iter().chain(diffusion.iter()).any(|v| !v.is_finite()) {
            return Err(invalid("drift/diffusion", "entries must be finite"));
        }
        let scale = diffusion.amax().max(1.0);
        if (&diffusion - diffusion.transpose()).amax() > 1e-14 * scale {
            return Err(invalid("diffusion", "must be symmetric"));
        }
        let min_eig = SymmetricEigen::new(diffusion.clone()).eigenvalues.min();
        if min_eig < -1e-12 * scale {
            return Err(invalid("diffusion", "must be positive semidefinite"));
        }
        bath.validate()?;
        Ok(Self {
            drift,
            diffusion,
            mode_labels,
            bath,
            gamma,
        })
    }

    pub fn drift(&self) -> &DMatrix<f64> {
        &self.drift
    }

    pub fn diffusion(&self) -> &DMatrix<f64> {
        &self.diffusion
    }

    pub fn mode_labels(&self) -> &[String] {
        &self.mode_labels
    }

    pub fn bath(&self) -> &BathSpec {
        &self.bath
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn n_modes(&self) -> usize {
        self.mode_labels.len()
    }

    /// Replaces the mechanical damping (default γ_m = 2γ, i.e. amplitude rate γ).
    ///
    /// Only the mechanical diagonal of A and the mechanical block of D change.
    pub fn with_mechanical_damping(mut self, gamma_m: f64) -> Result<Self> {
        if !(gamma_m.is_finite() && gamma_m > 0.0) {
            return Err(invalid("gamma_m", "must be > 0"));
        }
        let rate = 0.5 * gamma_m;
        self.drift[(0, 0)] = -rate;
        self.drift[(1, 1)] = -rate;
        let block = mechanical_diffusion_block(&self.bath, rate);
        for (i, row) in block.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                self.diffusion[(i, j)] = *v;
            }
        }
        Ok(self)
    }
}

fn check_rate(gamma: f64) -> Result<()> {
    if !(gamma.is_finite() && gamma > 0.0) {
        return Err(invalid("gamma", "must be > 0"));
    }
    Ok(())
}

fn check_finite(name: &'static str, v: f64) -> Result<()> {
    if !v.is_finite() {
        return Err(invalid(name, "must be finite"));
    }
    Ok(())
}

fn standard_diffusion(n_modes: usize, gamma: f64, bath: &BathSpec) -> DMatrix<f64> {
    let mut d = DMatrix::from_diagonal_element(2 * n_modes, 2 * n_modes, gamma);
    let block = mechanical_diffusion_block(bath, gamma);
    for i in 0..2 {
        for j in 0..2 {
            d[(i, j)] = block[i][j];
        }
    }
    d
}

fn labels(names: &[&str]) -> Vec<String> {
    names.iter().map(|s| s.to_string()).collect()
}

/// Degenerate mechanical mode and polariton Ψ, parametric coupling G_Ψ.
pub fn build_two_mode(g_psi: f64, gamma: f64, bath: BathSpec) -> Result<LinearGaussianModel> {
    build_two_colour(g_psi, 0.0, gamma, bath).map(|mut m| {
        m.mode_labels = labels(&["b", "Psi"]);
        m
    })
}

/// Mechanical mode and polariton Θ detuned by U.
pub fn build_two_colour(g_theta: f64, u: f64, gamma: f64, bath: BathSpec) -> Result<LinearGaussianModel> {
    check_rate(gamma)?;
    check_finite("G", g_theta)?;
    check_finite("U", u)?;
    let h = 0.5 * g_theta;
    #[rustfmt::skip]
    let a = DMatrix::from_row_slice(4, 4, &[
        -gamma, 0.0, 0.0, -h,
        0.0, -gamma, -h, 0.0,
        0.0, -h, -gamma, u,
        -h, 0.0, -u, -gamma,
    ]);
    let d = standard_diffusion(2, gamma, &bath);
    LinearGaussianModel::new(a, d, labels(&["b", "Theta"]), bath, gamma)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ThreeModeVariant {
    /// Mechanical mode with both polaritons Θ, Π (G_θ = −G_π = G_t).
    ThetaPi,
    /// Mechanical mode with A₁ = (Θ − Π)/√2 and A₂ = (Θ + Π)/√2.
    A1A2,
}

/// Three-mode system at maximal polariton mixing, G_θ = −G_π = G_t.
pub fn build_three_mode(
    g_t: f64,
    u: f64,
    gamma: f64,
    bath: BathSpec,
    variant: ThreeModeVariant,
) -> Result<LinearGaussianModel> {
    check_rate(gamma)?;
    check_finite("G_t", g_t)?;
    check_finite("U", u)?;
    match variant {
        ThreeModeVariant::ThetaPi => {
            let i = Complex64::i();
            let z = Complex64::new(0.0, 0.0);
            let g = Complex64::new(gamma, 0.0);
            let (g_theta, g_pi) = (g_t, -g_t);
            // Acts on (b†, Θ, Π).
            #[rustfmt::skip]
            let k = DMatrix::from_row_slice(3, 3, &[
                -g, i * (0.5 * g_theta), i * (0.5 * g_pi),
                -i * (0.5 * g_theta), -(g + i * u), z,
                -i * (0.5 * g_pi), z, -(g - i * u),
            ]);
            from_complex_drift(&k, &[true, false, false], gamma, bath, labels(&["b", "Theta", "Pi"]))
        }
        ThreeModeVariant::A1A2 => {
            let s = g_t * FRAC_1_SQRT_2;
            #[rustfmt::skip]
            let a = DMatrix::from_row_slice(6, 6, &[
                -gamma, 0.0, 0.0, -s, 0.0, 0.0,
                0.0, -gamma, -s, 0.0, 0.0, 0.0,
                0.0, -s, -gamma, 0.0, 0.0, u,
                -s, 0.0, 0.0, -gamma, -u, 0.0,
                0.0, 0.0, 0.0, u, -gamma, 0.0,
                0.0, 0.0, -u, 0.0, 0.0, -gamma,
            ]);
            let d = standard_diffusion(3, gamma, &bath);
            LinearGaussianModel::new(a, d, labels(&["b", "A1", "A2"]), bath, gamma)
        }
    }
}

/// Quadrature drift for `ċ = K c` where `c_j` is `b_j` or, if `conjugated[j]`, `b_j†`.
///
/// Quadratures are always those of the annihilation operators `b_j`. Every
/// mode gets vacuum noise at rate γ except the mechanical mode 0, whose
/// block follows the bath.
pub fn from_complex_drift(
    k: &DMatrix<Complex64>,
    conjugated: &[bool],
    gamma: f64,
    bath: BathSpec,
    mode_labels: Vec<String>,
) -> Result<LinearGaussianModel> {
    let n = k.nrows();
    if k.ncols() != n || conjugated.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: conjugated.len(),
        });
    }
    let sign = |j: usize| if conjugated[j] { -1.0 } else { 1.0 };
    let mut a = DMatrix::zeros(2 * n, 2 * n);
    for j in 0..n {
        for l in 0..n {
            let z = k[(j, l)];
            a[(2 * j, 2 * l)] += z.re;
            a[(2 * j, 2 * l + 1)] += -z.im * sign(l);
            a[(2 * j + 1, 2 * l)] += sign(j) * z.im;
            a[(2 * j + 1, 2 * l + 1)] += sign(j) * z.re * sign(l);
        }
    }
    let d = standard_diffusion(n, gamma, &bath);
    LinearGaussianModel::new(a, d, mode_labels, bath, gamma)
}

/// Orthogonal map from (b, Θ, Π) quadratures to (b, A₁, A₂) quadratures.
pub fn a1a2_rotation() -> DMatrix<f64> {
    let mut r = DMatrix::zeros(6, 6);
    r[(0, 0)] = 1.0;
    r[(1, 1)] = 1.0;
    for k in 0..2 {
        r[(2 + k, 2 + k)] = FRAC_1_SQRT_2;
        r[(2 + k, 4 + k)] = -FRAC_1_SQRT_2;
        r[(4 + k, 2 + k)] = FRAC_1_SQRT_2;
        r[(4 + k, 4 + k)] = FRAC_1_SQRT_2;
    }
    r
}

#[derive(Debug, Clone, PartialEq)]
pub struct StabilityReport {
    pub stable: bool,
    /// Set when max Re λ lies within the stability margin of zero.
    pub marginal: bool,
    pub max_real: f64,
    pub eigenvalues: Vec<Complex64>,
}

pub fn stability(model: &LinearGaussianModel) -> StabilityReport {
    let eigenvalues = eigenvalues(&model.drift);
    let max_real = eigenvalues.iter().map(|z| z.re).fold(f64::NEG_INFINITY, f64::max);
    let eps = STABILITY_EPS * model.gamma;
    StabilityReport {
        stable: max_real < -eps,
        marginal: max_real.abs() <= eps,
        max_real,
        eigenvalues,
    }
}

/// Real symmetric covariance matrix with elements `⟨u_i u_j + u_j u_i⟩/2`.
#[derive(Debug, Clone, PartialEq)]
pub struct CovarianceMatrix {
    v: DMatrix<f64>,
}

impl CovarianceMatrix {
    /// Wraps `v` after checking it is square, even-dimensional and symmetric.
    pub fn new(v: DMatrix<f64>) -> Result<Self> {
        if v.nrows() != v.ncols() || !v.nrows().is_multiple_of(2) || v.nrows() == 0 {
            return Err(Error::DimensionMismatch {
                expected: v.nrows() + v.nrows() % 2,
                found: v.ncols(),
            });
        }
        let scale = v.amax().max(1.0);
        if (&v - v.transpose()).amax() > 1e-12 * scale {
            return Err(invalid("covariance", "must be symmetric"));
        }
        Ok(Self {
            v: (&v + v.transpose()) * 0.5,
        })
    }

    pub fn vacuum(n_modes: usize) -> Self {
        Self {
            v: DMatrix::from_diagonal_element(2 * n_modes, 2 * n_modes, 0.5),
        }
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.v
    }

    pub fn into_matrix(self) -> DMatrix<f64> {
        self.v
    }

    pub fn n_modes(&self) -> usize {
        self.v.nrows() / 2
    }

    /// Smallest eigenvalue of `V + iΩ/2`, via its real symmetric embedding.
    pub fn min_physical_eigenvalue(&self) -> f64 {
        let n = self.v.nrows();
        let half_om = symplectic_form(n / 2) * 0.5;
        let mut big = DMatrix::zeros(2 * n, 2 * n);
        big.view_mut((0, 0), (n, n)).copy_from(&self.v);
        big.view_mut((n, n), (n, n)).copy_from(&self.v);
        big.view_mut((0, n), (n, n)).copy_from(&(-&half_om));
        big.view_mut((n, 0), (n, n)).copy_from(&half_om);
        SymmetricEigen::new(big).eigenvalues.min()
    }

    pub fn check_physical(&self) -> Result<()> {
        let min_eigenvalue = self.min_physical_eigenvalue();
        if min_eigenvalue < -PHYSICALITY_TOL {
            return Err(Error::NonPhysical { min_eigenvalue });
        }
        Ok(())
    }

    /// Symplectic eigenvalues in ascending order, one per mode.
    pub fn symplectic_eigenvalues(&self) -> Vec<f64> {
        symplectic_spectrum(&self.v)
    }

    /// Symmetrized variance of `Σ c_i u_i`.
    pub fn variance_of(&self, c: &[f64]) -> Result<f64> {
        if c.len() != self.v.nrows() {
            return Err(Error::DimensionMismatch {
                expected: self.v.nrows(),
                found: c.len(),
            });
        }
        let c = DVector::from_column_slice(c);
        Ok(c.dot(&(&self.v * &c)))
    }
}

fn symplectic_spectrum(v: &DMatrix<f64>) -> Vec<f64> {
    let om = symplectic_form(v.nrows() / 2);
    let mut moduli: Vec<f64> = eigenvalues(&(om * v)).iter().map(|z| z.norm()).collect();
    moduli.sort_by(|a, b| a.partial_cmp(b).unwrap());
    moduli.chunks(2).map(|p| 0.5 * (p[0] + p[1])).collect()
}

/// Residual `max |AV + VAᵀ + D|`.
pub fn lyapunov_residual(a: &DMatrix<f64>, v: &DMatrix<f64>, d: &DMatrix<f64>) -> f64 {
    (a * v + v * a.transpose() + d).amax()
}

/// Solves `AV + VAᵀ = −D` through the vectorized Kronecker system.
///
/// Does not check stability; a singular system is reported with its pivot ratio.
pub fn solve_lyapunov_matrix(a: &DMatrix<f64>, d: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    let n = a.nrows();
    let id = DMatrix::<f64>::identity(n, n);
    let big = id.kronecker(a) + a.kronecker(&id);
    let rhs = DVector::from_iterator(n * n, d.iter().map(|x| -x));
    let lu = big.clone().lu();
    let diag = lu.u().diagonal();
    let max_pivot = diag.amax();
    let min_pivot = diag.iter().map(|x| x.abs()).fold(f64::INFINITY, f64::min);
    let pivot_ratio = if max_pivot > 0.0 { min_pivot / max_pivot } else { 0.0 };
    if !(pivot_ratio > PIVOT_RATIO_MIN) {
        return Err(Error::SingularSystem { pivot_ratio });
    }
    let mut x = lu.solve(&rhs).ok_or(Error::SingularSystem { pivot_ratio })?;
    // One step of iterative refinement.
    let r = &rhs - &big * &x;
    if let Some(dx) = lu.solve(&r) {
        x += dx;
    }
    let v = DMatrix::from_column_slice(n, n, x.as_slice());
    Ok((&v + v.transpose()) * 0.5)
}

/// Steady-state covariance of a stable model.
pub fn solve_lyapunov(model: &LinearGaussianModel) -> Result<CovarianceMatrix> {
    let report = stability(model);
    if !report.stable {
        return Err(Error::Unstable {
            max_real: report.max_real,
        });
    }
    let v = solve_lyapunov_matrix(&model.drift, &model.diffusion)?;
    let residual = lyapunov_residual(&model.drift, &v, &model.diffusion);
    let tolerance = RESIDUAL_TOL * model.diffusion.amax();
    if residual > tolerance {
        return Err(Error::ResidualTooLarge { residual, tolerance });
    }
    Ok(CovarianceMatrix { v })
}

fn check_mode(index: usize, n_modes: usize) -> Result<()> {
    if index >= n_modes {
        return Err(Error::ModeIndexOutOfRange { index, n_modes });
    }
    Ok(())
}

/// Covariance of the two selected modes, in the given order.
pub fn reduce(v: &CovarianceMatrix, modes: (usize, usize)) -> Result<CovarianceMatrix> {
    let n_modes = v.n_modes();
    check_mode(modes.0, n_modes)?;
    check_mode(modes.1, n_modes)?;
    if modes.0 == modes.1 {
        return Err(invalid("modes", "a bipartition needs two distinct modes"));
    }
    let idx = [2 * modes.0, 2 * modes.0 + 1, 2 * modes.1, 2 * modes.1 + 1];
    Ok(CovarianceMatrix {
        v: DMatrix::from_fn(4, 4, |i, j| v.v[(idx[i], idx[j])]),
    })
}

/// Partial transpose of a two-mode covariance: `p₂ → −p₂`.
pub fn partial_transpose(v: &CovarianceMatrix) -> Result<DMatrix<f64>> {
    if v.v.nrows() != 4 {
        return Err(Error::DimensionMismatch {
            expected: 4,
            found: v.v.nrows(),
        });
    }
    let mut t = v.v.clone();
    for k in 0..4 {
        if k != 3 {
            t[(3, k)] = -t[(3, k)];
            t[(k, 3)] = -t[(k, 3)];
        }
    }
    Ok(t)
}

/// Smallest symplectic eigenvalue of the partially transposed covariance.
pub fn min_pt_symplectic_eigenvalue(v: &CovarianceMatrix) -> Result<f64> {
    let t = partial_transpose(v)?;
    Ok(symplectic_spectrum(&t)[0])
}

/// Logarithmic negativity `max{0, −log₂(2ν̃₋)}` of a two-mode covariance.
pub fn log_negativity(v: &CovarianceMatrix) -> Result<f64> {
    if v.v.nrows() != 4 {
        return Err(Error::DimensionMismatch {
            expected: 4,
            found: v.v.nrows(),
        });
    }
    v.check_physical()?;
    let nu = min_pt_symplectic_eigenvalue(v)?;
    Ok((-log2(2.0 * nu)).max(0.0))
}

/// Complex-mode second moments of modes `(a, b)` from quadrature covariances.
pub fn quad_to_complex_moments(v: &CovarianceMatrix, pair: (usize, usize)) -> Result<MomentSet> {
    let r = reduce(v, pair)?;
    let m = &r.v;
    let self_moments = |o: usize| {
        let (qq, pp, qp) = (m[(o, o)], m[(o + 1, o + 1)], m[(o, o + 1)]);
        (0.5 * (qq + pp - 1.0), Complex64::new(0.5 * (qq - pp), qp))
    };
    let (n_a, aa) = self_moments(0);
    let (n_b, bb) = self_moments(2);
    let (qq, pp, qp, pq) = (m[(0, 2)], m[(1, 3)], m[(0, 3)], m[(1, 2)]);
    Ok(MomentSet {
        n_a,
        n_b,
        aa,
        bb,
        adag_b: Complex64::new(0.5 * (qq + pp), 0.5 * (qp - pq)),
        ab: Complex64::new(0.5 * (qq - pp), 0.5 * (qp + pq)),
    })
}

/// Inverse of [`quad_to_complex_moments`] for a single pair.
pub fn complex_moments_to_quad(ms: &MomentSet) -> CovarianceMatrix {
    let mut v = DMatrix::zeros(4, 4);
    for (o, n, s) in [(0, ms.n_a, ms.aa), (2, ms.n_b, ms.bb)] {
        v[(o, o)] = n + 0.5 + s.re;
        v[(o + 1, o + 1)] = n + 0.5 - s.re;
        v[(o, o + 1)] = s.im;
        v[(o + 1, o)] = s.im;
    }
    let plus = ms.adag_b + ms.ab;
    let minus = ms.adag_b - ms.ab;
    let cross = [[plus.re, plus.im], [-minus.im, minus.re]];
    for i in 0..2 {
        for j in 0..2 {
            v[(i, 2 + j)] = cross[i][j];
            v[(2 + j, i)] = cross[i][j];
        }
    }
    CovarianceMatrix { v }
}

/// Variances of a polariton quadrature at phase ψ, of the mechanical `q`,
/// and of their normalized sum and difference.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SumDifferenceVariances {
    pub polariton_x: f64,
    pub q: f64,
    /// Variance of `(X_ψ + q)/√2`.
    pub sum: f64,
    /// Variance of `(X_ψ − q)/√2`.
    pub difference: f64,
}

/// `X_ψ = (c e^{−iψ} + c† e^{iψ})/√2` for polariton mode `polariton`, paired with q of mode 0.
pub fn sum_difference_variances(v: &CovarianceMatrix, polariton: usize, psi: f64) -> Result<SumDifferenceVariances> {
    let n = v.v.nrows();
    check_mode(polariton, v.n_modes())?;
    if polariton == 0 {
        return Err(invalid("polariton", "mode 0 is the mechanical mode"));
    }
    let mut x = vec![0.0; n];
    x[2 * polariton] = libm::cos(psi);
    x[2 * polariton + 1] = libm::sin(psi);
    let mut q = vec![0.0; n];
    q[0] = 1.0;
    let combine = |s: f64| -> Vec<f64> { x.iter().zip(&q).map(|(a, b)| (a + s * b) * FRAC_1_SQRT_2).collect() };
    Ok(SumDifferenceVariances {
        polariton_x: v.variance_of(&x)?,
        q: v.variance_of(&q)?,
        sum: v.variance_of(&combine(1.0))?,
        difference: v.variance_of(&combine(-1.0))?,
    })
}

/// One-line diagnostic for reports.
pub fn describe(model: &LinearGaussianModel) -> String {
    format!(
        "{} modes [{}], gamma = {}, n_bar = {}, m = {}",
        model.n_modes(),
        model.mode_labels.join(", "),
        model.gamma,
        model.bath.n_bar,
        model.bath.m_sq
    )
}
