//! Planar p-elastica toolkit.
//!
//! Evaluates the p-elliptic integrals and functions (`elliptic`), classifies
//! every planar p-elastica from curvature initial data (`classify`), traces
//! all curve families in closed form including flat-core concatenations and
//! closed figure-eights (`curves`), and cross-checks the governing
//! Euler-Lagrange identities with independent numerics (`verify`).

pub mod classify;
pub mod curves;
pub mod elliptic;
mod quad;
mod roots;
pub mod verify;

/// Default absolute tolerance for integral evaluation.
pub const DEFAULT_INTEGRAL_TOL: f64 = 1e-12;
/// Default absolute tolerance for amplitude (inverse integral) solves.
pub const DEFAULT_INVERT_TOL: f64 = 1e-11;

/// Errors shared across the crate.
#[derive(Debug, Clone, thiserror::Error)]
pub enum Error {
    /// Input outside the admissible range of an operation.
    #[error("domain error: {0}")]
    Domain(String),
    /// An iterative scheme failed to reach the requested tolerance.
    #[error("tolerance error: {0}")]
    Tolerance(String),
    /// Initial data alone cannot determine the solution family.
    #[error("ambiguous data: {0}")]
    Ambiguity(String),
    /// A least-squares fit had too few usable samples.
    #[error("fit error: {0}")]
    Fit(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain_err<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
