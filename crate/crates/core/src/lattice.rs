//! Exciton spectrum and exciton–cavity couplings of a finite atomic lattice.
//!
//! This is the only module working in SI units. Everything downstream is
//! dimensionless in units of the polariton damping rate γ; use
//! [`to_units_of_gamma`] to cross over.

use core::f64::consts::PI;

use libm::{cos, sin, sqrt, tan};
use nalgebra::DMatrix;

use crate::error::{invalid, Error, Result};

/// Reduced Planck constant, J·s (CODATA 2018, exact).
pub const HBAR: f64 = 1.054_571_817e-34;

/// Vacuum permittivity, F/m (CODATA 2022).
pub const EPSILON_0: f64 = 8.854_187_818_8e-12;

/// Physical constants of the atomic lattice and the cavity, SI units.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LatticeParams {
    /// Number of lattice sites N.
    pub n_sites: usize,
    /// Site separation d, m.
    pub spacing_d: f64,
    /// Transition dipole moment μ, C·m.
    pub dipole_mu: f64,
    /// Angle α between the dipoles and the lattice axis, rad.
    pub angle_alpha: f64,
    /// Atomic transition frequency ω_a, rad/s.
    pub omega_a: f64,
    /// Cavity frequency ω_c, rad/s.
    pub omega_c: f64,
    /// Cavity mode volume V, m³.
    pub mode_volume_v: f64,
}

impl LatticeParams {
    pub fn validate(&self) -> Result<()> {
        if self.n_sites < 2 {
            return Err(invalid("n_sites", "need at least 2 sites"));
        }
        let positive = [
            ("spacing_d", self.spacing_d),
            ("dipole_mu", self.dipole_mu),
            ("omega_a", self.omega_a),
            ("omega_c", self.omega_c),
            ("mode_volume_V", self.mode_volume_v),
        ];
        for (name, value) in positive {
            if !(value.is_finite() && value > 0.0) {
                return Err(invalid(name, "must be finite and > 0"));
            }
        }
        if !(0.0..=PI).contains(&self.angle_alpha) {
            return Err(invalid("angle_alpha", "must lie in [0, π]"));
        }
        Ok(())
    }

    /// Returns a copy with the cavity tuned to resonance with exciton `k`.
    pub fn with_cavity_on_exciton(mut self, k: usize) -> Result<Self> {
        self.omega_c = exciton_frequency(&self, k)?;
        Ok(self)
    }
}

/// Nearest-neighbour dipole–dipole coupling J_α in rad/s.
pub fn dipole_dipole_j(params: &LatticeParams) -> Result<f64> {
    params.validate()?;
    let c = cos(params.angle_alpha);
    let d3 = params.spacing_d * params.spacing_d * params.spacing_d;
    Ok(params.dipole_mu * params.dipole_mu * (1.0 - 3.0 * c * c) / (4.0 * PI * EPSILON_0 * HBAR * d3))
}

fn check_index(params: &LatticeParams, k: usize) -> Result<()> {
    if k == 0 || k > params.n_sites {
        return Err(Error::ExcitonIndexOutOfRange {
            k,
            n_sites: params.n_sites,
        });
    }
    Ok(())
}

/// Frequency ω_k of the k-th exciton mode (1-based), rad/s.
pub fn exciton_frequency(params: &LatticeParams, k: usize) -> Result<f64> {
    params.validate()?;
    check_index(params, k)?;
    let j = dipole_dipole_j(params)?;
    let n1 = (params.n_sites + 1) as f64;
    Ok(params.omega_a + 2.0 * j * cos(PI * k as f64 / n1))
}

/// Coupling f_k of exciton `k` to the cavity mode, rad/s.
///
/// Only odd `k` couple; even `k` is rejected.
pub fn exciton_cavity_coupling(params: &LatticeParams, k: usize) -> Result<f64> {
    params.validate()?;
    check_index(params, k)?;
    if k.is_multiple_of(2) {
        return Err(Error::EvenExcitonMode { k });
    }
    let n1 = (params.n_sites + 1) as f64;
    let prefactor = sqrt(
        params.omega_c * params.dipole_mu * params.dipole_mu
            / (HBAR * EPSILON_0 * params.mode_volume_v * n1),
    );
    Ok(prefactor / tan(PI * k as f64 / (2.0 * n1)))
}

/// Site-to-exciton transformation, `B_n = Σ_k T[n-1, k-1] C_k`.
///
/// The matrix is real, symmetric and orthogonal.
pub fn site_to_exciton_matrix(n_sites: usize) -> DMatrix<f64> {
    let n1 = (n_sites + 1) as f64;
    let norm = sqrt(2.0 / n1);
    DMatrix::from_fn(n_sites, n_sites, |i, j| {
        norm * sin(PI * ((i + 1) * (j + 1)) as f64 / n1)
    })
}

/// Polariton-model inputs expressed in units of a caller-supplied γ.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DimensionlessCouplings {
    /// δ = (ω_c − ω_1)/2 over γ.
    pub delta: f64,
    /// f_1 over γ.
    pub f1: f64,
    /// Ω = sqrt(f_1² + δ²) over γ.
    pub omega: f64,
}

/// Exports (δ, f₁, Ω) for the k = 1 exciton in units of `gamma` (rad/s).
pub fn to_units_of_gamma(params: &LatticeParams, gamma: f64) -> Result<DimensionlessCouplings> {
    if !(gamma.is_finite() && gamma > 0.0) {
        return Err(invalid("gamma", "must be finite and > 0"));
    }
    let omega_1 = exciton_frequency(params, 1)?;
    let f1 = exciton_cavity_coupling(params, 1)? / gamma;
    let delta = (params.omega_c - omega_1) / (2.0 * gamma);
    Ok(DimensionlessCouplings {
        delta,
        f1,
        omega: sqrt(f1 * f1 + delta * delta),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use libm::acos;

    fn section_vi() -> LatticeParams {
        LatticeParams {
            n_sites: 1000,
            spacing_d: 266e-9,
            dipole_mu: 5e-29,
            angle_alpha: PI / 2.0,
            omega_a: 2.5e15,
            omega_c: 2.5e15,
            mode_volume_v: 1e-10,
        }
    }

    #[test]
    fn magic_angle_zeroes_dipole_coupling() {
        let p = LatticeParams {
            angle_alpha: acos(1.0 / sqrt(3.0)),
            ..section_vi()
        };
        let scale = dipole_dipole_j(&section_vi()).unwrap();
        assert!(dipole_dipole_j(&p).unwrap().abs() < 1e-12 * scale);
        for k in [1, 17, 500, 1000] {
            assert!((exciton_frequency(&p, k).unwrap() - p.omega_a).abs() < 1e-6);
        }
    }

    #[test]
    fn dipole_coupling_scales_as_inverse_cube() {
        let p = section_vi();
        let q = LatticeParams {
            spacing_d: 2.0 * p.spacing_d,
            ..p
        };
        let ratio = dipole_dipole_j(&q).unwrap() / dipole_dipole_j(&p).unwrap();
        assert!((ratio - 0.125).abs() < 1e-14);
    }

    #[test]
    fn dipole_coupling_hand_value() {
        // μ²/(4π ε₀ ħ d³) at α = π/2, evaluated separately:
        // 2.5e-57 / (1.112650056e-10 * 1.054571817e-34 * 1.8821096e-20)
        let j = dipole_dipole_j(&section_vi()).unwrap();
        let expected = 2.5e-57 / (4.0 * PI * 8.8541878188e-12 * 1.054571817e-34 * 266e-9 * 266e-9 * 266e-9);
        assert!((j - expected).abs() / expected < 1e-12);
        assert!((j - 1.1320e7).abs() / 1.1320e7 < 1e-3);
    }

    #[test]
    fn exciton_frequency_n3() {
        let p = LatticeParams {
            n_sites: 3,
            ..section_vi()
        };
        let j = dipole_dipole_j(&p).unwrap();
        let w1 = exciton_frequency(&p, 1).unwrap();
        assert!((w1 - (p.omega_a + 2.0_f64.sqrt() * j)).abs() < 1e-3);
        // k = (N+1)/2 sits on the cosine zero
        assert!((exciton_frequency(&p, 2).unwrap() - p.omega_a).abs() < 1e-3);
        assert!(matches!(
            exciton_frequency(&p, 4),
            Err(Error::ExcitonIndexOutOfRange { k: 4, n_sites: 3 })
        ));
        assert!(exciton_frequency(&p, 0).is_err());
    }

    #[test]
    fn exciton_band_is_bounded() {
        let p = LatticeParams {
            n_sites: 37,
            ..section_vi()
        };
        let j = dipole_dipole_j(&p).unwrap().abs();
        for k in 1..=37 {
            let w = exciton_frequency(&p, k).unwrap();
            assert!(w >= p.omega_a - 2.0 * j && w <= p.omega_a + 2.0 * j);
        }
    }

    #[test]
    fn even_modes_rejected() {
        let p = section_vi();
        assert_eq!(
            exciton_cavity_coupling(&p, 2),
            Err(Error::EvenExcitonMode { k: 2 })
        );
    }

    #[test]
    fn couplings_decrease_with_odd_k() {
        let p = section_vi();
        let mut last = f64::INFINITY;
        for k in (1..60).step_by(2) {
            let f = exciton_cavity_coupling(&p, k).unwrap();
            assert!(f > 0.0 && f < last);
            last = f;
        }
    }

    #[test]
    fn large_n_ratio_approaches_three() {
        let p = LatticeParams {
            n_sites: 1_000_000,
            ..section_vi()
        };
        let r = exciton_cavity_coupling(&p, 1).unwrap() / exciton_cavity_coupling(&p, 3).unwrap();
        assert!((r - 3.0).abs() < 1e-6);
    }

    #[test]
    fn transformation_is_orthogonal() {
        for n in [2, 5, 12] {
            let t = site_to_exciton_matrix(n);
            let id = &t * t.transpose();
            assert!((id - DMatrix::identity(n, n)).amax() < 1e-13);
        }
    }

    #[test]
    fn dimensionless_export() {
        let p = section_vi().with_cavity_on_exciton(1).unwrap();
        let gamma = 1e7;
        let c = to_units_of_gamma(&p, gamma).unwrap();
        assert_eq!(c.delta, 0.0);
        assert!((c.f1 - exciton_cavity_coupling(&p, 1).unwrap() / gamma).abs() < 1e-12);
        assert_eq!(c.omega, c.f1);
        assert!(to_units_of_gamma(&p, 0.0).is_err());
    }

    #[test]
    fn rejects_invalid_params() {
        let mut p = section_vi();
        p.n_sites = 1;
        assert!(p.validate().is_err());
        let mut p = section_vi();
        p.angle_alpha = 4.0;
        assert!(dipole_dipole_j(&p).is_err());
        let mut p = section_vi();
        p.mode_volume_v = -1.0;
        assert!(exciton_cavity_coupling(&p, 1).is_err());
    }
}
