//! Exact L₂ small-ball asymptotics for Gaussian processes whose covariance is
//! the Green function of a boundary value problem with non-separated
//! boundary conditions.
//!
//! The flow is: [`catalog`] builds the BVP of a named process, [`spectral`]
//! extracts the eigenvalues (characteristic roots, or a Nyström oracle on the
//! covariance kernel), [`constants`] evaluates the distortion constant,
//! [`asymptotics`] assembles `P{‖X‖ ≤ ε} ~ K ε^a exp(−E ε^{−d})`, and
//! [`oracle`] computes the probability itself for comparison.

pub mod asymptotics;
pub mod bvp_algebra;
pub mod catalog;
pub mod constants;
pub mod error;
mod linalg;
pub mod oracle;
pub mod special;
pub mod spectral;
pub mod verify;

pub use error::{Error, Result};
