//! Polariton basis, classical steady state and effective couplings.
//!
//! All rates are dimensionless, in the same units as [`DriveParams::gamma`].

use alloc::vec::Vec;
use core::f64::consts::{FRAC_PI_4, SQRT_2};

use libm::{acos, atan2, cos, sin, sqrt};
use num_complex::Complex64;

use crate::error::{invalid, Error, Result};

/// Drive and damping parameters of the cavity–lattice–mirror system.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DriveParams {
    /// Polariton damping γ (γ_a = κ = γ); the unit of all rates.
    pub gamma: f64,
    /// Mechanical damping γ_m.
    pub gamma_m: f64,
    /// δ = (ω_c − ω_1)/2.
    pub delta: f64,
    /// Exciton–cavity coupling f₁.
    pub f1: f64,
    /// Laser detuning Δ_L = ω₀ − ω_L.
    pub delta_l: f64,
    /// Drive amplitude E_L, real and nonnegative.
    pub e_l: f64,
    /// Bare optomechanical coupling G₀.
    pub g0: f64,
    /// Mechanical frequency ω_m.
    pub omega_m: f64,
}

impl Default for DriveParams {
    fn default() -> Self {
        Self {
            gamma: 1.0,
            gamma_m: 2.0,
            delta: 0.0,
            f1: 0.0,
            delta_l: 0.0,
            e_l: 0.0,
            g0: 0.0,
            omega_m: 1.0,
        }
    }
}

impl DriveParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.gamma.is_finite() && self.gamma > 0.0) {
            return Err(invalid("gamma", "must be > 0"));
        }
        if !(self.gamma_m.is_finite() && self.gamma_m > 0.0) {
            return Err(invalid("gamma_m", "must be > 0"));
        }
        if !(self.f1.is_finite() && self.f1 >= 0.0) {
            return Err(invalid("f1", "must be >= 0"));
        }
        if !(self.omega_m.is_finite() && self.omega_m > 0.0) {
            return Err(invalid("omega_m", "must be > 0"));
        }
        if !(self.e_l.is_finite() && self.e_l >= 0.0) {
            return Err(invalid("E_L", "must be real and >= 0"));
        }
        for (name, v) in [("delta", self.delta), ("Delta_L", self.delta_l), ("G0", self.g0)] {
            if !v.is_finite() {
                return Err(invalid(name, "must be finite"));
            }
        }
        Ok(())
    }
}

/// Rotation angle φ ∈ [0, π/2] and splitting Ω of the exciton–cavity polaritons.
///
/// `cos²φ = 1/2 + δ/(2Ω)`, `Ω = sqrt(f₁² + δ²)`. The degenerate point
/// `f₁ = δ = 0` returns φ = π/4.
pub fn polariton_angle(delta: f64, f1: f64) -> (f64, f64) {
    let omega = sqrt(f1 * f1 + delta * delta);
    if omega == 0.0 {
        return (FRAC_PI_4, 0.0);
    }
    (half_angle(delta / omega), omega)
}

// φ ∈ [0, π/2] with cos²φ = (1 + x)/2, i.e. cos 2φ = x.
fn half_angle(x: f64) -> f64 {
    0.5 * acos(x.clamp(-1.0, 1.0))
}

/// Couplings obtained after the second (mechanically induced) rotation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RotatedCouplings {
    pub varphi: f64,
    pub u: f64,
    pub g_theta: f64,
    pub g_pi: f64,
    /// `Some(G_θ)` when φ + φ₂ = π/4, where G_θ = −G_π ≡ G_t.
    pub g_t: Option<f64>,
}

const MAXIMAL_MIXING_TOL: f64 = 1e-9;

/// Second rotation from (Ψ, Φ) to (Θ, Π) for given effective couplings.
///
/// With U = 0 the rotation is the identity (φ₂ = 0).
pub fn rotate_couplings(phi: f64, omega_tilde: f64, g_psi: f64, g_phi: f64, g_q: f64) -> RotatedCouplings {
    let u = sqrt(omega_tilde * omega_tilde + g_q * g_q);
    let varphi = if u == 0.0 { 0.0 } else { half_angle(omega_tilde / u) };
    let (s, c) = (sin(varphi), cos(varphi));
    let g_theta = g_psi * c + g_phi * s;
    let g_pi = g_psi * s - g_phi * c;
    let g_t = ((phi + varphi - FRAC_PI_4).abs() < MAXIMAL_MIXING_TOL).then_some(g_theta);
    RotatedCouplings {
        varphi,
        u,
        g_theta,
        g_pi,
        g_t,
    }
}

/// Classical steady state and the couplings of the linearized fluctuations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WorkingPoint {
    pub phi: f64,
    pub omega: f64,
    pub q_s: f64,
    /// Steady polariton amplitudes with the common phase removed.
    pub psi_s: Complex64,
    pub phi_s: Complex64,
    pub delta_q: f64,
    pub omega_tilde: f64,
    pub g_psi: f64,
    pub g_phi: f64,
    pub g_q: f64,
    pub varphi: f64,
    pub u: f64,
    pub g_theta: f64,
    pub g_pi: f64,
    pub g_t: Option<f64>,
    /// Phase removed from (Ψ_s, Φ_s) to make the couplings real.
    pub common_phase: f64,
    /// arg(Φ_s Ψ_s*) after the common rotation.
    pub relative_phase: f64,
    /// True when the relative phase is 0 or π (or an amplitude vanishes).
    pub real_regime: bool,
    /// Max residual of the three steady-state equations over γ·E_L.
    pub residual: f64,
    pub iterations: usize,
}

/// Controls for the damped fixed-point iteration on q_s.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverOptions {
    pub tolerance: f64,
    /// Relaxation weight λ in `q ← (1−λ) q + λ F(q)`.
    pub damping: f64,
    pub max_iterations: usize,
    /// Additional seeds spread over the admissible q range, used only to
    /// detect coexisting branches.
    pub probe_seeds: usize,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            tolerance: 1e-13,
            damping: 0.5,
            max_iterations: 20_000,
            probe_seeds: 8,
        }
    }
}

const RELATIVE_PHASE_TOL: f64 = 1e-6;

/// Amplitudes (Ψ_s, Φ_s) solving the linear pair of amplitude equations at a fixed q.
pub(crate) fn amplitudes_at(p: &DriveParams, phi: f64, omega: f64, q: f64) -> (Complex64, Complex64) {
    let i = Complex64::i();
    let (s, c) = (sin(phi), cos(phi));
    let g = p.g0 * sin(2.0 * phi);
    let delta_q = p.delta_l - 0.5 * q * p.g0;
    let omega_tilde = omega - 0.5 * q * p.g0 * cos(2.0 * phi);
    let a11 = p.gamma + i * (delta_q - omega_tilde);
    let a22 = p.gamma + i * (delta_q + omega_tilde);
    let off = i * (0.5 * g * q);
    let b1 = Complex64::new(-p.e_l * s, 0.0);
    let b2 = Complex64::new(p.e_l * c, 0.0);
    let det = a11 * a22 - off * off;
    let psi = (b1 * a22 - off * b2) / det;
    let phi_amp = (a11 * b2 - off * b1) / det;
    (psi, phi_amp)
}

fn q_map(p: &DriveParams, phi: f64, omega: f64, q: f64) -> f64 {
    let (psi, phi_amp) = amplitudes_at(p, phi, omega, q);
    let cavity = phi_amp * cos(phi) - psi * sin(phi);
    p.g0 / p.omega_m * cavity.norm_sqr()
}

fn iterate(p: &DriveParams, phi: f64, omega: f64, seed: f64, opts: &SolverOptions) -> Result<(f64, usize)> {
    let mut q = seed;
    let scale = (p.g0.abs() / p.omega_m) * (p.e_l / p.gamma) * (p.e_l / p.gamma);
    let tol = opts.tolerance * scale.max(1.0);
    let mut residual = f64::INFINITY;
    for it in 0..opts.max_iterations {
        let next = q_map(p, phi, omega, q);
        residual = (next - q).abs();
        if residual <= tol {
            return Ok((next, it + 1));
        }
        q = (1.0 - opts.damping) * q + opts.damping * next;
        if !q.is_finite() {
            break;
        }
    }
    Err(Error::NotConverged {
        iterations: opts.max_iterations,
        residual,
    })
}

/// Solves the mean-field steady state and derives every effective coupling.
pub fn solve_steady_state(p: &DriveParams) -> Result<WorkingPoint> {
    solve_steady_state_with(p, &SolverOptions::default())
}

pub fn solve_steady_state_with(p: &DriveParams, opts: &SolverOptions) -> Result<WorkingPoint> {
    p.validate()?;
    if !(opts.damping > 0.0 && opts.damping <= 1.0) {
        return Err(invalid("damping", "must lie in (0, 1]"));
    }
    let (phi, omega) = polariton_angle(p.delta, p.f1);
    let (q_s, iterations) = if p.g0 == 0.0 || p.e_l == 0.0 {
        (0.0, 0)
    } else {
        let (q_s, iterations) = iterate(p, phi, omega, 0.0, opts)?;
        detect_branches(p, phi, omega, q_s, opts)?;
        (q_s, iterations)
    };
    Ok(assemble(p, phi, omega, q_s, iterations))
}

// |(Ψ, Φ)| ≤ E_L/γ because the amplitude system is γI plus an anti-Hermitian part,
// so every fixed point lies between 0 and G₀E_L²/(ω_m γ²).
fn detect_branches(p: &DriveParams, phi: f64, omega: f64, q_s: f64, opts: &SolverOptions) -> Result<()> {
    let bound = p.g0 / p.omega_m * (p.e_l / p.gamma) * (p.e_l / p.gamma);
    let mut branches: Vec<f64> = Vec::new();
    branches.push(q_s);
    let same = |a: f64, b: f64| (a - b).abs() <= 1e-8 * (1.0 + a.abs().max(b.abs()));
    for k in 1..=opts.probe_seeds {
        let seed = bound * k as f64 / opts.probe_seeds as f64;
        if let Ok((q, _)) = iterate(p, phi, omega, seed, opts) {
            if !branches.iter().any(|&b| same(b, q)) {
                branches.push(q);
            }
        }
    }
    if branches.len() > 1 {
        branches.sort_by(|a, b| a.partial_cmp(b).unwrap());
        return Err(Error::Multistable { branches });
    }
    Ok(())
}

fn assemble(p: &DriveParams, phi: f64, omega: f64, q_s: f64, iterations: usize) -> WorkingPoint {
    let (s, c) = (sin(phi), cos(phi));
    let (psi_raw, phi_raw) = amplitudes_at(p, phi, omega, q_s);
    let cavity = phi_raw * c - psi_raw * s;
    let common_phase = if cavity.norm() > 0.0 { cavity.arg() } else { 0.0 };
    let rot = Complex64::from_polar(1.0, -common_phase);
    let (psi_s, phi_s) = (psi_raw * rot, phi_raw * rot);

    let g_s = p.g0 * s * s;
    let g_c = p.g0 * c * c;
    let g = p.g0 * sin(2.0 * phi);
    let g_psi_c = (phi_s * (0.5 * g) - psi_s * g_s) * SQRT_2;
    let g_phi_c = (phi_s * g_c - psi_s * (0.5 * g)) * SQRT_2;
    let g_q = 0.5 * g * q_s;
    let delta_q = p.delta_l - 0.5 * q_s * p.g0;
    let omega_tilde = omega - 0.5 * q_s * p.g0 * cos(2.0 * phi);

    let relative = phi_s * psi_s.conj();
    let relative_phase = if relative.norm() > 0.0 { atan2(relative.im, relative.re) } else { 0.0 };
    let real_regime = relative.norm() == 0.0
        || relative_phase.abs() < RELATIVE_PHASE_TOL
        || (core::f64::consts::PI - relative_phase.abs()) < RELATIVE_PHASE_TOL;

    let residual = steady_state_residual(p, phi, omega, q_s, psi_raw, phi_raw);
    let rc = rotate_couplings(phi, omega_tilde, g_psi_c.re, g_phi_c.re, g_q);
    WorkingPoint {
        phi,
        omega,
        q_s,
        psi_s,
        phi_s,
        delta_q,
        omega_tilde,
        g_psi: g_psi_c.re,
        g_phi: g_phi_c.re,
        g_q,
        varphi: rc.varphi,
        u: rc.u,
        g_theta: rc.g_theta,
        g_pi: rc.g_pi,
        g_t: rc.g_t,
        common_phase,
        relative_phase,
        real_regime,
        residual,
        iterations,
    }
}

/// Max residual of the q_s equation and the two amplitude equations, over γ·E_L.
pub fn steady_state_residual(
    p: &DriveParams,
    phi: f64,
    omega: f64,
    q_s: f64,
    psi_s: Complex64,
    phi_s: Complex64,
) -> f64 {
    let i = Complex64::i();
    let (s, c) = (sin(phi), cos(phi));
    let g = p.g0 * sin(2.0 * phi);
    let delta_q = p.delta_l - 0.5 * q_s * p.g0;
    let omega_tilde = omega - 0.5 * q_s * p.g0 * cos(2.0 * phi);
    let r1 = (p.gamma + i * (delta_q - omega_tilde)) * psi_s + i * (0.5 * g * q_s) * phi_s + p.e_l * s;
    let r2 = (p.gamma + i * (delta_q + omega_tilde)) * phi_s + i * (0.5 * g * q_s) * psi_s - p.e_l * c;
    let cavity = phi_s * c - psi_s * s;
    let r3 = p.omega_m * q_s - p.g0 * cavity.norm_sqr();
    let worst = r1.norm().max(r2.norm()).max(r3.abs());
    let scale = p.gamma * p.e_l;
    if scale > 0.0 {
        worst / scale
    } else {
        worst
    }
}

/// Recomputes the (Θ, Π) rotation from the working point's couplings.
pub fn second_rotation(wp: &WorkingPoint) -> WorkingPoint {
    let rc = rotate_couplings(wp.phi, wp.omega_tilde, wp.g_psi, wp.g_phi, wp.g_q);
    WorkingPoint {
        varphi: rc.varphi,
        u: rc.u,
        g_theta: rc.g_theta,
        g_pi: rc.g_pi,
        g_t: rc.g_t,
        ..*wp
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use core::f64::consts::FRAC_PI_2;

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / a.abs().max(b.abs()).max(1e-300)
    }

    #[test]
    fn angle_resonant_and_far_detuned() {
        let (phi, om) = polariton_angle(0.0, 2.0);
        assert!((phi - FRAC_PI_4).abs() < 1e-15);
        assert_eq!(om, 2.0);
        let (phi, _) = polariton_angle(1e8, 1.0);
        assert!(phi < 1e-7);
        let (phi, _) = polariton_angle(-1e8, 1.0);
        assert!((phi - FRAC_PI_2).abs() < 1e-7);
        assert_eq!(polariton_angle(0.0, 0.0), (FRAC_PI_4, 0.0));
    }

    #[test]
    fn angle_three_four_five() {
        let (phi, om) = polariton_angle(3.0, 4.0);
        assert!((om - 5.0).abs() < 1e-15);
        assert!((cos(phi) * cos(phi) - 0.8).abs() < 1e-14);
    }

    #[test]
    fn no_drive_gives_zero_point() {
        let p = DriveParams {
            f1: 3.0,
            delta: 0.5,
            g0: 0.4,
            delta_l: 1.0,
            ..Default::default()
        };
        let wp = solve_steady_state(&p).unwrap();
        assert_eq!(wp.q_s, 0.0);
        assert_eq!(wp.psi_s, Complex64::new(0.0, 0.0));
        assert_eq!(wp.phi_s, Complex64::new(0.0, 0.0));
        assert_eq!((wp.g_psi, wp.g_phi, wp.g_q), (0.0, 0.0, 0.0));
    }

    #[test]
    fn decoupled_mirror_is_linear_solve() {
        let p = DriveParams {
            f1: 2.0,
            delta: 0.7,
            delta_l: 1.5,
            e_l: 3.0,
            g0: 0.0,
            ..Default::default()
        };
        let wp = solve_steady_state(&p).unwrap();
        assert_eq!(wp.q_s, 0.0);
        assert_eq!(wp.varphi, 0.0);
        // Amplitude equations decouple: Ψ_s = -E sinφ / (γ + i(Δ_L - Ω)).
        let (phi, om) = polariton_angle(p.delta, p.f1);
        let psi = Complex64::new(-p.e_l * sin(phi), 0.0) / Complex64::new(p.gamma, p.delta_l - om);
        let phi_amp = Complex64::new(p.e_l * cos(phi), 0.0) / Complex64::new(p.gamma, p.delta_l + om);
        assert!((wp.psi_s.norm() - psi.norm()).abs() < 1e-14);
        assert!((wp.phi_s.norm() - phi_amp.norm()).abs() < 1e-14);
        assert!(wp.residual < 1e-12);
    }

    #[test]
    fn coupling_identities_hold() {
        let p = DriveParams {
            f1: 2.0,
            delta: 0.6,
            delta_l: 1.2,
            e_l: 1.5,
            g0: 0.05,
            omega_m: 1.2,
            ..Default::default()
        };
        let wp = solve_steady_state(&p).unwrap();
        assert!(wp.q_s > 0.0);
        assert!(wp.residual < 1e-10, "residual {}", wp.residual);
        assert!(rel(wp.g_psi, wp.g_phi * libm::tan(wp.phi)) < 1e-10);
        assert!(rel(wp.g_theta, -wp.g_pi * libm::tan(wp.phi + wp.varphi)) < 1e-10);
        assert!((wp.u - sqrt(wp.omega_tilde * wp.omega_tilde + wp.g_q * wp.g_q)).abs() < 1e-14);
        assert!(wp.varphi >= 0.0 && wp.varphi <= FRAC_PI_4);
    }

    #[test]
    fn second_rotation_limits() {
        let rc = rotate_couplings(0.3, 2.0, 0.4, 0.9, 0.0);
        assert_eq!(rc.varphi, 0.0);
        assert_eq!(rc.g_theta, 0.4);
        assert_eq!(rc.g_pi, -0.9);

        // φ = φ₂ = π/4 (resonant, G_q ≫ Ω̃ limit): G_π vanishes.
        let rc = rotate_couplings(FRAC_PI_4, 0.0, 0.8, 0.8, 3.0);
        assert!((rc.varphi - FRAC_PI_4).abs() < 1e-15);
        assert!(rc.g_pi.abs() < 1e-15);

        // φ + φ₂ = π/4: G_θ = -G_π = G_t.
        let phi = 0.3;
        let target = FRAC_PI_4 - phi;
        let (omega_tilde, g_q) = (cos(2.0 * target), sin(2.0 * target));
        let c = 1.7;
        let rc = rotate_couplings(phi, omega_tilde, c * sin(phi), c * cos(phi), g_q);
        assert!((rc.g_theta + rc.g_pi).abs() < 1e-14);
        let gt = rc.g_t.expect("maximal mixing detected");
        assert!((gt - c / SQRT_2).abs() < 1e-14);
    }

    #[test]
    fn second_rotation_is_recomputable() {
        let p = DriveParams {
            f1: 1.0,
            delta: -0.2,
            delta_l: 0.5,
            e_l: 2.0,
            g0: 0.03,
            ..Default::default()
        };
        let wp = solve_steady_state(&p).unwrap();
        assert_eq!(second_rotation(&wp), wp);
    }

    #[test]
    fn relative_phase_flagged() {
        let p = DriveParams {
            f1: 1.0,
            delta_l: 0.4,
            e_l: 1.0,
            g0: 0.02,
            ..Default::default()
        };
        let wp = solve_steady_state(&p).unwrap();
        // Different detunings Δ_q ∓ Ω̃ give Ψ_s, Φ_s different phases.
        assert!(!wp.real_regime);
        let p = DriveParams { delta_l: 0.0, f1: 0.0, ..p };
        let wp = solve_steady_state(&p).unwrap();
        assert!(wp.real_regime, "phase {}", wp.relative_phase);
    }

    #[test]
    fn rejects_bad_params() {
        let p = DriveParams { gamma: 0.0, ..Default::default() };
        assert!(solve_steady_state(&p).is_err());
        let p = DriveParams { f1: -1.0, ..Default::default() };
        assert!(solve_steady_state(&p).is_err());
        let p = DriveParams { omega_m: 0.0, ..Default::default() };
        assert!(solve_steady_state(&p).is_err());
    }

    #[test]
    fn non_convergence_reported() {
        let p = DriveParams {
            f1: 1.0,
            delta_l: 2.0,
            e_l: 5.0,
            g0: 0.5,
            omega_m: 0.5,
            ..Default::default()
        };
        let opts = SolverOptions {
            max_iterations: 3,
            ..Default::default()
        };
        match solve_steady_state_with(&p, &opts) {
            Err(Error::NotConverged { iterations, residual }) => {
                assert_eq!(iterations, 3);
                assert!(residual > 0.0);
            }
            other => panic!("expected NotConverged, got {other:?}"),
        }
    }
}
