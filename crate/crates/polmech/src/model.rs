//! One linearized configuration: variant, bath and couplings in units of γ.

use std::fmt;

use num_complex::Complex64;
use polmech_core::gaussian::{
    build_three_mode, build_two_colour, build_two_mode, BathSpec, LinearGaussianModel, ThreeModeVariant,
};
use polmech_core::working_point::WorkingPoint;
use polmech_core::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
#[value(rename_all = "snake_case")]
pub enum Variant {
    TwoMode,
    TwoColour,
    ThetaPi,
    A1A2,
}

impl Variant {
    pub fn name(self) -> &'static str {
        match self {
            Variant::TwoMode => "two_mode",
            Variant::TwoColour => "two_colour",
            Variant::ThetaPi => "theta_pi",
            Variant::A1A2 => "a1_a2",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        [Variant::TwoMode, Variant::TwoColour, Variant::ThetaPi, Variant::A1A2]
            .into_iter()
            .find(|v| v.name() == s)
    }

    /// Name of the coupling flag this variant reads.
    pub fn coupling_name(self) -> &'static str {
        match self {
            Variant::TwoMode => "Gpsi",
            Variant::TwoColour => "Gtheta",
            Variant::ThetaPi | Variant::A1A2 => "Gt",
        }
    }

    pub fn n_modes(self) -> usize {
        match self {
            Variant::TwoMode | Variant::TwoColour => 2,
            Variant::ThetaPi | Variant::A1A2 => 3,
        }
    }

    /// Pair whose entanglement the figures plot.
    pub fn headline_pair(self) -> (usize, usize) {
        match self {
            Variant::A1A2 => (0, 2),
            _ => (0, 1),
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PointSpec {
    pub variant: Variant,
    pub gamma: f64,
    pub n_bar: f64,
    pub m_sq: Complex64,
    /// G_Ψ, G_θ or G_t depending on the variant.
    pub coupling: f64,
    pub u: f64,
    /// Mechanical damping γ_m; `None` keeps the printed drift, i.e. γ_m = 2γ.
    pub gamma_m: Option<f64>,
}

impl PointSpec {
    pub fn new(variant: Variant, n_bar: f64, coupling: f64, u: f64) -> Self {
        Self {
            variant,
            gamma: 1.0,
            n_bar,
            m_sq: Complex64::new(0.0, 0.0),
            coupling,
            u,
            gamma_m: None,
        }
    }

    /// Couplings taken from a solved working point.
    ///
    /// The three-mode variants need G_θ = −G_π, which holds only at
    /// φ + φ₂ = π/4.
    pub fn from_working_point(variant: Variant, wp: &WorkingPoint, gamma: f64) -> Result<Self> {
        let (coupling, u) = match variant {
            Variant::TwoMode => (wp.g_psi, 0.0),
            Variant::TwoColour => (wp.g_theta, wp.u),
            Variant::ThetaPi | Variant::A1A2 => match wp.g_t {
                Some(gt) => (gt, wp.u),
                None => {
                    return Err(Error::OutsideStabilityDomain {
                        reason: format!(
                            "G_theta = {} and G_pi = {} are not opposite (phi + phi2 = {})",
                            wp.g_theta,
                            wp.g_pi,
                            wp.phi + wp.varphi
                        ),
                    })
                }
            },
        };
        Ok(Self {
            gamma,
            ..Self::new(variant, 0.0, coupling, u)
        })
    }

    pub fn bath(&self) -> Result<BathSpec> {
        BathSpec::squeezed(self.n_bar, self.m_sq)
    }

    pub fn model(&self) -> Result<LinearGaussianModel> {
        let bath = self.bath()?;
        let model = match self.variant {
            Variant::TwoMode => build_two_mode(self.coupling, self.gamma, bath)?,
            Variant::TwoColour => build_two_colour(self.coupling, self.u, self.gamma, bath)?,
            Variant::ThetaPi => build_three_mode(self.coupling, self.u, self.gamma, bath, ThreeModeVariant::ThetaPi)?,
            Variant::A1A2 => build_three_mode(self.coupling, self.u, self.gamma, bath, ThreeModeVariant::A1A2)?,
        };
        match self.gamma_m {
            Some(gm) => model.with_mechanical_damping(gm),
            None => Ok(model),
        }
    }

    pub fn pairs(&self) -> Vec<(usize, usize)> {
        let n = self.variant.n_modes();
        (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect()
    }

    pub fn describe(&self) -> String {
        let mut s = format!(
            "variant={} gamma={} nbar={} msq={}{:+}i {}={}",
            self.variant,
            self.gamma,
            self.n_bar,
            self.m_sq.re,
            self.m_sq.im,
            self.variant.coupling_name(),
            self.coupling
        );
        if self.variant != Variant::TwoMode {
            s.push_str(&format!(" U={}", self.u));
        }
        if let Some(gm) = self.gamma_m {
            s.push_str(&format!(" gamma_m={gm}"));
        }
        s
    }
}
