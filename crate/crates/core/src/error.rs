use alloc::string::String;
use alloc::vec::Vec;

/// Errors produced by the core computations.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("exciton index k = {k} out of range 1..={n_sites}")]
    ExcitonIndexOutOfRange { k: usize, n_sites: usize },

    #[error("exciton mode k = {k} is even; even-k modes decouple from the cavity")]
    EvenExcitonMode { k: usize },

    #[error("steady-state iteration did not converge after {iterations} iterations (residual {residual:e})")]
    NotConverged { iterations: usize, residual: f64 },

    #[error("multiple steady-state branches found at q_s = {branches:?}")]
    Multistable { branches: Vec<f64> },

    #[error("model is unstable: max Re(eig A) = {max_real:e}")]
    Unstable { max_real: f64 },

    #[error("singular Lyapunov system (pivot ratio {pivot_ratio:e})")]
    SingularSystem { pivot_ratio: f64 },

    #[error("Lyapunov residual {residual:e} exceeds tolerance {tolerance:e}")]
    ResidualTooLarge { residual: f64, tolerance: f64 },

    #[error("covariance matrix is not physical (min eigenvalue of V + iΩ/2 = {min_eigenvalue:e})")]
    NonPhysical { min_eigenvalue: f64 },

    #[error("mode index {index} out of range for {n_modes} modes")]
    ModeIndexOutOfRange { index: usize, n_modes: usize },

    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("degree `{which}` undefined at zero occupation")]
    UndefinedDegree { which: &'static str },

    #[error("outside the stability domain: {reason}")]
    OutsideStabilityDomain { reason: String },

    #[error("bath squeezing |m| = {m_abs} exceeds sqrt(n(n+1)) = {bound}")]
    BathInvariant { m_abs: f64, bound: f64 },

    #[error("invalid simulation config: {reason}")]
    InvalidSimConfig { reason: String },
}

pub type Result<T> = core::result::Result<T, Error>;

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter {
        name,
        reason: reason.into(),
    }
}
