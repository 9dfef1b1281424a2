//! Closed-form steady-state moments, transcribed term by term.
//!
//! These are ground truth for the numerical pipeline and are deliberately
//! left unsimplified. Where a formula contains m it is used as given
//! (complex); where it contains |m| the modulus is used.

use libm::sqrt;
use num_complex::Complex64;

use crate::coherence::MomentSet;
use crate::error::{invalid, Error, Result};
use crate::gaussian::BathSpec;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleInput {
    pub gamma: f64,
    pub n_bar: f64,
    pub m_sq: Complex64,
    /// G_Ψ, G_θ or G_t depending on the formula set.
    pub coupling: f64,
    pub u: f64,
}

impl OracleInput {
    pub fn new(gamma: f64, n_bar: f64, coupling: f64) -> Self {
        Self {
            gamma,
            n_bar,
            m_sq: Complex64::new(0.0, 0.0),
            coupling,
            u: 0.0,
        }
    }

    pub fn with_u(self, u: f64) -> Self {
        Self { u, ..self }
    }

    pub fn with_m(self, m_sq: Complex64) -> Self {
        Self { m_sq, ..self }
    }

    /// B² = U² − G_t²/2.
    pub fn b_squared(&self) -> f64 {
        self.u * self.u - 0.5 * self.coupling * self.coupling
    }

    fn validate(&self) -> Result<()> {
        if !(self.gamma.is_finite() && self.gamma > 0.0) {
            return Err(invalid("gamma", "must be > 0"));
        }
        if !(self.coupling.is_finite() && self.u.is_finite()) {
            return Err(invalid("coupling", "must be finite"));
        }
        BathSpec::squeezed(self.n_bar, self.m_sq).map(|_| ())
    }

    fn require_thermal(&self) -> Result<()> {
        if self.m_sq != Complex64::new(0.0, 0.0) {
            return Err(invalid("m_sq", "formula set is for a thermal bath"));
        }
        Ok(())
    }

    fn two_mode_domain(&self) -> Result<()> {
        if !(self.coupling.abs() < 2.0 * self.gamma) {
            return Err(Error::OutsideStabilityDomain {
                reason: alloc::format!("|G_Psi| = {} >= 2 gamma", self.coupling.abs()),
            });
        }
        Ok(())
    }

    fn three_mode_domain(&self) -> Result<()> {
        if !(self.u > self.coupling.abs() * core::f64::consts::FRAC_1_SQRT_2) {
            return Err(Error::OutsideStabilityDomain {
                reason: alloc::format!("U = {} <= G_t/sqrt(2)", self.u),
            });
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoModeThermal {
    pub var_upsilon_x: f64,
    pub var_lambda_x: f64,
    pub var_psi_x: f64,
    pub var_q: f64,
    pub n_psi: f64,
    pub n_b: f64,
    /// ⟨δΨ δb⟩
    pub psi_b: Complex64,
    /// |η_(Ψ,b)|² from the violation condition.
    pub eta_psi_b_sq: f64,
}

impl TwoModeThermal {
    /// Moments ordered (b, Ψ) as in the pipeline.
    pub fn moments(&self) -> MomentSet {
        MomentSet {
            ab: self.psi_b,
            ..MomentSet::uncorrelated_thermal(self.n_b, self.n_psi)
        }
    }
}

pub fn two_mode_thermal(inp: &OracleInput) -> Result<TwoModeThermal> {
    inp.validate()?;
    inp.require_thermal()?;
    inp.two_mode_domain()?;
    let (g, n, gp) = (inp.gamma, inp.n_bar, inp.coupling);
    let i = Complex64::i();
    Ok(TwoModeThermal {
        var_upsilon_x: g * (n + 1.0) / (2.0 * (g - 0.5 * gp)),
        var_lambda_x: g * (n + 1.0) / (2.0 * (g + 0.5 * gp)),
        var_psi_x: 0.5 * (g * g * (n + 1.0) / (g * g - 0.25 * gp * gp) - n),
        var_q: 0.5 * (g * g * (n + 1.0) / (g * g - 0.25 * gp * gp) + n),
        n_psi: 0.125 * (n + 1.0) * gp * gp / (g * g - 0.25 * gp * gp),
        n_b: 0.5 * ((n - 1.0) + (n + 1.0) * g * g / (g * g - 0.25 * gp * gp)),
        psi_b: -(i / 4.0) * (n + 1.0) * (g * gp / (g * g - 0.25 * gp * gp)),
        eta_psi_b_sq: (n + 1.0) * g * g / (2.0 * n * g * g - 0.25 * (n - 1.0) * gp * gp),
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoModeSqueezed {
    pub n_psi: f64,
    pub n_b: f64,
    pub psi_b: Complex64,
    /// ⟨δΨ† δb⟩
    pub psidag_b: Complex64,
    pub psi_sq: Complex64,
    pub b_sq: Complex64,
    pub gamma1: f64,
    pub eta_psi_psi: f64,
    pub eta_b_b: f64,
}

impl TwoModeSqueezed {
    /// Moments ordered (b, Ψ) as in the pipeline.
    pub fn moments(&self) -> MomentSet {
        MomentSet {
            n_a: self.n_b,
            n_b: self.n_psi,
            aa: self.b_sq,
            bb: self.psi_sq,
            adag_b: self.psidag_b.conj(),
            ab: self.psi_b,
        }
    }
}

/// Two-mode case with the mirror in a squeezed vacuum.
///
/// Occupations and ⟨δΨ δb⟩ are the thermal ones, which the squeezing leaves unchanged.
pub fn two_mode_squeezed(inp: &OracleInput) -> Result<TwoModeSqueezed> {
    inp.validate()?;
    let thermal = two_mode_thermal(&OracleInput {
        m_sq: Complex64::new(0.0, 0.0),
        ..*inp
    })?;
    let (g, n, gp, m) = (inp.gamma, inp.n_bar, inp.coupling, inp.m_sq);
    let i = Complex64::i();
    let x = g * g - 0.25 * gp * gp;
    let den = 2.0 * n * g * g - 0.25 * (n - 1.0) * gp * gp;
    Ok(TwoModeSqueezed {
        n_psi: thermal.n_psi,
        n_b: thermal.n_b,
        psi_b: thermal.psi_b,
        psidag_b: i * g * m * gp / (4.0 * x),
        psi_sq: -0.125 * m * (gp * gp / x),
        b_sq: 0.5 * m * (1.0 + g * g / x),
        gamma1: g * m.norm() / sqrt((n + 1.0) * den),
        eta_psi_psi: m.norm() / (n + 1.0),
        eta_b_b: m.norm() * (2.0 * g * g - 0.25 * gp * gp) / den,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoColour {
    pub n_b: f64,
    /// ⟨δb δΘ⟩
    pub b_theta: Complex64,
    pub n_theta: f64,
    pub eta_b_theta_sq: f64,
}

impl TwoColour {
    /// Moments ordered (b, Θ) as in the pipeline.
    pub fn moments(&self) -> MomentSet {
        MomentSet {
            ab: self.b_theta,
            ..MomentSet::uncorrelated_thermal(self.n_b, self.n_theta)
        }
    }
}

/// Mechanical mode coupled to one polariton detuned by U (thermal bath).
///
/// Domain: U² − G_θ² + 4γ² > 0, where all drift eigenvalues have negative real part.
pub fn two_colour(inp: &OracleInput) -> Result<TwoColour> {
    inp.validate()?;
    inp.require_thermal()?;
    let (g, n, gt, u) = (inp.gamma, inp.n_bar, inp.coupling, inp.u);
    let y = u * u - gt * gt + 4.0 * g * g;
    if !(y > 0.0) {
        return Err(Error::OutsideStabilityDomain {
            reason: alloc::format!("U^2 - G_theta^2 + 4 gamma^2 = {y} <= 0"),
        });
    }
    let i = Complex64::i();
    Ok(TwoColour {
        n_b: n + (n + 1.0) * gt * gt / (2.0 * (u * u - gt * gt + 4.0 * g * g)),
        b_theta: -(i / 2.0) * ((n + 1.0) * (2.0 * g - i * u) * gt) / (u * u - gt * gt + 4.0 * g * g),
        n_theta: (n + 1.0) * gt * gt / (2.0 * (u * u - gt * gt + 4.0 * g * g)),
        eta_b_theta_sq: (n + 1.0) * (4.0 * g * g + u * u)
            / (2.0 * n * (4.0 * g * g + u * u) - (n - 1.0) * gt * gt),
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThreeModeThetaPi {
    pub b_squared: f64,
    /// D = 8(B² + γ²)(B² + 4γ²)
    pub d: f64,
    pub n_b: f64,
    pub n_theta: f64,
    pub n_pi: f64,
    /// ⟨δΘ δb⟩
    pub theta_b: Complex64,
    /// ⟨δΠ δb⟩
    pub pi_b: Complex64,
    /// ⟨δΘ† δΠ⟩
    pub thetadag_pi: Complex64,
    /// ⟨δΘ δΠ⟩, zero for a thermal bath.
    pub theta_pi: Complex64,
    pub theta_sq: Complex64,
    pub pi_sq: Complex64,
    pub gamma1_theta_pi: f64,
    pub eta_theta_pi: f64,
    pub eta_theta_theta: f64,
    pub upsilon_sq: f64,
    pub chi_theta_pi: f64,
}

/// Both polaritons parametrically coupled to the mirror, G_θ = −G_π = G_t.
pub fn three_mode_theta_pi(inp: &OracleInput) -> Result<ThreeModeThetaPi> {
    inp.validate()?;
    inp.three_mode_domain()?;
    let (g, n, gt, u, m) = (inp.gamma, inp.n_bar, inp.coupling, inp.u, inp.m_sq);
    let i = Complex64::i();
    let b2 = inp.b_squared();
    let d = 8.0 * (b2 + g * g) * (b2 + 4.0 * g * g);
    let occupation = (n + 1.0) * (3.0 * gt * gt + 8.0 * (b2 + g * g)) * gt * gt;
    let theta_b = i * (n + 1.0) * (g + i * u) * (3.0 * gt * gt + 4.0 * (b2 - 2.0 * g * g) + 12.0 * i * g * u) * gt / d;
    let m_abs = m.norm();
    let upsilon_sq = 1.0
        - 24.0 * (gt * gt + 2.0 * b2) * (b2 + g * g)
            / ((3.0 * gt * gt + 8.0 * (b2 + g * g)) * (3.0 * gt * gt + 8.0 * (b2 + g * g)));
    let r = m_abs * m_abs / ((n + 1.0) * (n + 1.0));
    let self_anomalous = m * gt * gt / (2.0 * d) * (3.0 * gt * gt + 4.0 * (b2 - 2.0 * g * g) + 12.0 * i * g * u);
    let ratio = (Complex64::new(3.0 * gt * gt + 4.0 * (b2 - 2.0 * g * g), 0.0) + 12.0 * i * g * u).norm()
        / (3.0 * gt * gt + 8.0 * (b2 + g * g));
    let chi_root = 1.0 + (1.0 - upsilon_sq) * (1.0 - r) / (1.0 + upsilon_sq + r);
    Ok(ThreeModeThetaPi {
        b_squared: b2,
        d,
        n_b: n + occupation / d,
        n_theta: occupation / (2.0 * d),
        n_pi: occupation / (2.0 * d),
        theta_b,
        pi_b: theta_b.conj(),
        thetadag_pi: (n + 1.0) * (3.0 * gt * gt + 4.0 * (b2 - 2.0 * g * g) - 12.0 * i * g * u) * gt * gt / (2.0 * d),
        theta_pi: m * gt * gt / (2.0 * d) * (3.0 * gt * gt + 8.0 * (b2 + g * g)),
        theta_sq: self_anomalous,
        pi_sq: self_anomalous,
        gamma1_theta_pi: ratio,
        eta_theta_pi: m_abs / (n + 1.0),
        eta_theta_theta: m_abs / (n + 1.0) * ratio,
        upsilon_sq,
        chi_theta_pi: chi_root * chi_root,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThreeModeA1A2 {
    pub b_squared: f64,
    pub d: f64,
    pub n_b: f64,
    /// ⟨δA₁ δb⟩
    pub a1_b: Complex64,
    /// ⟨δA₂ δb⟩
    pub a2_b: Complex64,
    pub n_a1: f64,
    /// ⟨δA₁† δA₂⟩
    pub a1dag_a2: Complex64,
    pub n_a2: f64,
    /// |η_(A₂,b)|², the entanglement predicate being |η|² > 1.
    pub eta_a2_b_sq: f64,
}

impl ThreeModeA1A2 {
    /// Moments of the pair (b, A₂); its auto-anomalous and first-order moments vanish.
    pub fn pair_b_a2(&self) -> MomentSet {
        MomentSet {
            ab: self.a2_b,
            ..MomentSet::uncorrelated_thermal(self.n_b, self.n_a2)
        }
    }
}

/// Mechanical mode coupled parametrically to A₁, which mixes linearly with A₂.
pub fn three_mode_a1_a2(inp: &OracleInput) -> Result<ThreeModeA1A2> {
    inp.validate()?;
    inp.require_thermal()?;
    inp.three_mode_domain()?;
    let (g, n, gt, u) = (inp.gamma, inp.n_bar, inp.coupling, inp.u);
    let i = Complex64::i();
    let b2 = inp.b_squared();
    let d = 8.0 * (b2 + g * g) * (b2 + 4.0 * g * g);
    let n_b = n + (n + 1.0) * (3.0 * gt * gt + 8.0 * (b2 + g * g)) * gt * gt / d;
    let a2_b = Complex64::new(
        -(sqrt(2.0) * (n + 1.0) * (3.0 * gt * gt + 4.0 * (b2 + g * g)) * u * gt) / d,
        0.0,
    );
    let n_a2 = 6.0 * (n + 1.0) * u * u * gt * gt / d;
    Ok(ThreeModeA1A2 {
        b_squared: b2,
        d,
        n_b,
        a1_b: -2.0 * i * g * (n + 1.0) * (3.0 * gt * gt + 8.0 * (b2 + g * g)) * gt / d,
        a2_b,
        n_a1: (n + 1.0) * (b2 + 4.0 * g * g - 0.5 * gt * gt) * gt * gt / d,
        a1dag_a2: -6.0 * i * (n + 1.0) * g * u * gt * gt / d,
        n_a2,
        eta_a2_b_sq: a2_b.norm_sqr() / (n_a2 * n_b),
    })
}
