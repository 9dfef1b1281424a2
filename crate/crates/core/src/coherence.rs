//! First-order coherence, anomalous correlations and the Cauchy-Schwarz parameter.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Occupations below this are treated as zero.
pub const OCCUPATION_FLOOR: f64 = 1e-12;

/// Equal-time second moments of a mode pair (A, B).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentSet {
    pub n_a: f64,
    pub n_b: f64,
    /// ⟨A²⟩
    pub aa: Complex64,
    /// ⟨B²⟩
    pub bb: Complex64,
    /// ⟨A†B⟩
    pub adag_b: Complex64,
    /// ⟨AB⟩
    pub ab: Complex64,
}

impl MomentSet {
    pub fn uncorrelated_thermal(n_a: f64, n_b: f64) -> Self {
        let z = Complex64::new(0.0, 0.0);
        Self {
            n_a,
            n_b,
            aa: z,
            bb: z,
            adag_b: z,
            ab: z,
        }
    }

    /// The same moments with the roles of A and B exchanged.
    pub fn swapped(&self) -> Self {
        Self {
            n_a: self.n_b,
            n_b: self.n_a,
            aa: self.bb,
            bb: self.aa,
            adag_b: self.adag_b.conj(),
            ab: self.ab,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoherenceReport {
    /// |γ_(A,B)|
    pub gamma1: f64,
    pub eta_aa: f64,
    pub eta_bb: f64,
    pub eta_ab: f64,
    pub g2_a: f64,
    pub g2_b: f64,
    pub g2_ab: f64,
    pub chi: f64,
    pub cs_violated: bool,
}

/// Gaussian-state `χ = g²_A g²_B / (g²_AB)²` from the four degrees.
pub fn chi_from_degrees(eta_aa: f64, eta_bb: f64, gamma1: f64, eta_ab: f64) -> f64 {
    let g2_ab = 1.0 + gamma1 * gamma1 + eta_ab * eta_ab;
    (2.0 + eta_aa * eta_aa) * (2.0 + eta_bb * eta_bb) / (g2_ab * g2_ab)
}

pub fn degrees(ms: &MomentSet) -> Result<CoherenceReport> {
    if !(ms.n_a > OCCUPATION_FLOOR) {
        return Err(Error::UndefinedDegree { which: "n_a" });
    }
    if !(ms.n_b > OCCUPATION_FLOOR) {
        return Err(Error::UndefinedDegree { which: "n_b" });
    }
    let norm = libm::sqrt(ms.n_a * ms.n_b);
    let gamma1 = ms.adag_b.norm() / norm;
    let eta_ab = ms.ab.norm() / norm;
    let eta_aa = ms.aa.norm() / ms.n_a;
    let eta_bb = ms.bb.norm() / ms.n_b;
    let g2_a = 2.0 + eta_aa * eta_aa;
    let g2_b = 2.0 + eta_bb * eta_bb;
    let g2_ab = 1.0 + gamma1 * gamma1 + eta_ab * eta_ab;
    let chi = g2_a * g2_b / (g2_ab * g2_ab);
    Ok(CoherenceReport {
        gamma1,
        eta_aa,
        eta_bb,
        eta_ab,
        g2_a,
        g2_b,
        g2_ab,
        chi,
        cs_violated: chi < 1.0,
    })
}

/// Cauchy-Schwarz parameter χ of a mode pair.
pub fn cs_parameter(ms: &MomentSet) -> Result<f64> {
    degrees(ms).map(|r| r.chi)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn thermal_pair() {
        let r = degrees(&MomentSet::uncorrelated_thermal(0.4, 2.0)).unwrap();
        assert_eq!((r.g2_a, r.g2_b, r.g2_ab), (2.0, 2.0, 1.0));
        assert_eq!(r.chi, 4.0);
        assert!(!r.cs_violated);
    }

    #[test]
    fn boundary_value() {
        assert_eq!(chi_from_degrees(0.0, 0.0, 0.0, 1.0), 1.0);
    }

    #[test]
    fn unit_coupling_two_mode_value() {
        // η² = 4 at n̄ = 0, G_Ψ = γ, so χ = 4/25.
        assert!((chi_from_degrees(0.0, 0.0, 0.0, 2.0) - 4.0 / 25.0).abs() < 1e-15);
    }

    #[test]
    fn zero_occupation_is_an_error() {
        let ms = MomentSet::uncorrelated_thermal(0.0, 1.0);
        assert_eq!(degrees(&ms), Err(Error::UndefinedDegree { which: "n_a" }));
        let ms = MomentSet::uncorrelated_thermal(1.0, 1e-14);
        assert_eq!(cs_parameter(&ms), Err(Error::UndefinedDegree { which: "n_b" }));
    }

    #[test]
    fn swap_preserves_degrees() {
        let ms = MomentSet {
            n_a: 0.3,
            n_b: 1.2,
            aa: Complex64::new(0.1, 0.05),
            bb: Complex64::new(-0.2, 0.0),
            adag_b: Complex64::new(0.1, -0.3),
            ab: Complex64::new(0.0, 0.4),
        };
        let (a, b) = (degrees(&ms).unwrap(), degrees(&ms.swapped()).unwrap());
        assert_eq!(a.gamma1, b.gamma1);
        assert_eq!(a.eta_aa, b.eta_bb);
        assert!((a.chi - b.chi).abs() < 1e-15);
    }
}
