//! Numerical tolerances shared by every module.
//!
//! Each constant is the default for one kind of comparison. The
//! [`Tolerances`] record bundles the ones a caller may override (the CLI
//! exposes them through `--tol`).

use serde::{Deserialize, Serialize};

/// Absolute tolerance for feasibility and geometric side tests.
pub const ABS: f64 = 1e-9;

/// Relative tolerance for eigen-residuals.
pub const REL: f64 = 1e-10;

/// Jacobi stops once the off-diagonal Frobenius norm falls below this
/// fraction of the total Frobenius norm.
pub const JACOBI_OFF_DIAG: f64 = 1e-15;

/// Maximum number of cyclic Jacobi sweeps.
pub const JACOBI_MAX_SWEEPS: usize = 100;

/// Simplex pivot tolerance.
pub const LP_PIVOT: f64 = 1e-11;

/// Maximum simplex iterations per phase.
pub const LP_MAX_ITER: usize = 50_000;

/// Uniformization truncation: stop once the Poisson tail mass is below this.
pub const UNIFORMIZATION_TAIL: f64 = 1e-14;

/// Positive-eigenvalue threshold factor (times `‖H‖∞`).
pub const POSITIVE_EIGENVALUE: f64 = 1e-8;

/// Top eigenvalue of the scaled Hessian must be 1 within this.
pub const TOP_EIGENVALUE: f64 = 1e-8;

/// Top eigenvector must be parallel to `D^{1/2} 1` within this.
pub const TOP_VECTOR: f64 = 1e-7;

/// Degree entries below this abort with a degeneracy report.
pub const MIN_DEGREE: f64 = 1e-12;

/// Angles closer than this to 0 or π are rejected.
pub const ANGLE: f64 = 1e-12;

/// Top eigenvalue of the rescaled Hessian must be `d − 1` within this.
pub const TILDE_EIGENVALUE: f64 = 1e-6;

/// Chain generator row sums.
pub const GENERATOR_ROW_SUM: f64 = 1e-12;

/// Left stationarity `‖πQ‖∞ ≤ tol·‖Q‖∞`.
pub const STATIONARITY: f64 = 1e-9;

/// Chain spectral gap must be at least `1 - CHAIN_GAP`.
pub const CHAIN_GAP: f64 = 1e-8;

/// Relative slack in the log-concavity check.
pub const LOG_CONCAVITY: f64 = 1e-6;

/// Overridable tolerance record.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Tolerances {
    pub abs: f64,
    pub rel: f64,
    pub positive_eigenvalue: f64,
    pub top_eigenvalue: f64,
    pub top_vector: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            abs: ABS,
            rel: REL,
            positive_eigenvalue: POSITIVE_EIGENVALUE,
            top_eigenvalue: TOP_EIGENVALUE,
            top_vector: TOP_VECTOR,
        }
    }
}

impl Tolerances {
    /// Scale every tolerance by `factor` (used by `--tol`).
    pub fn scaled(factor: f64) -> Self {
        let d = Self::default();
        Self {
            abs: d.abs * factor,
            rel: d.rel * factor,
            positive_eigenvalue: d.positive_eigenvalue * factor,
            top_eigenvalue: d.top_eigenvalue * factor,
            top_vector: d.top_vector * factor,
        }
    }
}
