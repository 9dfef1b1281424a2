//! Linearized Gaussian dynamics of a cavity containing an atomic lattice and
//! an oscillating mirror: two exciton–cavity polaritons coupled to one
//! mechanical mode.
//!
//! Everything except [`lattice`] is dimensionless, with rates in units of
//! the polariton damping γ. Quadratures are ordered `(q₁, p₁, q₂, p₂, …)`
//! with `q = (b + b†)/√2`, `p = (b − b†)/(i√2)` and vacuum variance 1/2.
//! The mechanical mode is always mode 0.

#![no_std]
// `!(x > bound)` rejects NaN as well.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

#[cfg(feature = "std")]
extern crate std;

pub mod coherence;
pub mod error;
pub mod gaussian;
pub mod lattice;
pub mod linalg;
pub mod oracles;
pub mod stochastic;
pub mod working_point;

pub use coherence::{cs_parameter, degrees, CoherenceReport, MomentSet};
pub use error::{Error, Result};
pub use gaussian::{
    build_three_mode, build_two_colour, build_two_mode, log_negativity, quad_to_complex_moments, reduce,
    solve_lyapunov, stability, BathSpec, CovarianceMatrix, LinearGaussianModel, StabilityReport,
    ThreeModeVariant,
};
pub use lattice::LatticeParams;
pub use stochastic::{simulate, SimConfig, SimResult};
pub use working_point::{polariton_angle, second_rotation, solve_steady_state, DriveParams, WorkingPoint};
