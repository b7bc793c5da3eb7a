//! Dense numerical kernels: symmetric eigensolver, simplex LP, simplex
//! volumes, Chebyshev polynomials and CTMC uniformization.

mod eigen;
mod lp;
mod matrix;
mod special;

pub use eigen::{eigh, Spectrum};
pub use lp::{solve_lp, LinearProgram, LpOutcome, LpSolution, Sense, VarDomain};
pub use matrix::{
    add, affine_dimension, axpy, det, dot, norm, norm_inf, orthonormal_basis, scale, solve, sub,
    Matrix, SymMatrix,
};
pub use special::{
    ball_volume, chebyshev_t, gram_volume, ln_gamma, sphere_area, uniformized_exp,
};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LinalgError {
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("matrix is not symmetric at ({row}, {col})")]
    NotSymmetric { row: usize, col: usize },
    #[error("Jacobi iteration did not converge after {sweeps} sweeps (residual {residual:e})")]
    NoConvergence { sweeps: usize, residual: f64 },
    #[error("non-finite entry in {0}")]
    NonFinite(&'static str),
    #[error("simplex exceeded {0} iterations")]
    IterationLimit(usize),
}
