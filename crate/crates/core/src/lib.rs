//! Spectral analysis of convex polytopes.
//!
//! Builds the formal Hessian, degree matrix and Laplacian of a polytope's
//! facet complex, certifies their spectral structure, evaluates
//! diameter bounds against exact graph diameters, simulates the
//! associated continuous-time Markov chain on facets, and runs
//! smoothed-model experiments (random perturbations, plane sections,
//! Steiner volumes).

pub mod bounds;
pub mod chain;
pub mod corpus;
pub mod geometry;
pub mod linalg;
pub mod rng;
pub mod smoothed;
pub mod spectral;
pub mod tolerances;

pub use linalg::LinalgError;
pub mod cli;

use thiserror::Error;

use bounds::BoundsError;
use chain::ChainError;
use geometry::io::IoError;
use geometry::GeometryError;
use smoothed::SmoothedError;
use spectral::SpectralError;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Input(#[from] IoError),
    #[error("cannot write {path}: {source}")]
    Output { path: String, source: std::io::Error },
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Spectral(#[from] SpectralError),
    #[error(transparent)]
    Bounds(#[from] BoundsError),
    #[error(transparent)]
    Chain(#[from] ChainError),
    #[error(transparent)]
    Smoothed(#[from] SmoothedError),
}

impl Error {
    /// 1 for bad input or configuration, 3 for numerical failures.
    pub fn exit_code(&self) -> u8 {
        if self.is_input_error() {
            1
        } else {
            3
        }
    }

    fn is_input_error(&self) -> bool {
        match self {
            Error::Usage(_) | Error::Output { .. } => true,
            Error::Input(IoError::Invalid(g)) | Error::Geometry(g) => geometry_input(g),
            Error::Input(_) => true,
            Error::Linalg(_) => false,
            Error::Spectral(e) => spectral_input(e),
            Error::Bounds(BoundsError::OriginNotInterior) => true,
            Error::Bounds(BoundsError::Geometry(g)) => geometry_input(g),
            Error::Bounds(BoundsError::Spectral(e)) => spectral_input(e),
            Error::Bounds(_) => false,
            Error::Chain(e) => chain_input(e),
            Error::Smoothed(SmoothedError::Geometry(g)) => geometry_input(g),
            Error::Smoothed(SmoothedError::Chain(e)) => chain_input(e),
            Error::Smoothed(_) => true,
        }
    }
}

fn geometry_input(e: &GeometryError) -> bool {
    use GeometryError::*;
    matches!(
        e,
        TooFewPoints { .. }
            | NotFullDimensional { .. }
            | ZeroRow(_)
            | Unbounded { .. }
            | Empty
            | OriginNotInterior { .. }
            | RedundantConstraint(_)
            | NonIntegral { .. }
            | Dimension(_)
    )
}

fn spectral_input(e: &SpectralError) -> bool {
    match e {
        SpectralError::NonPositiveOffset(..) => true,
        SpectralError::Geometry(g) => geometry_input(g),
        _ => false,
    }
}

fn chain_input(e: &ChainError) -> bool {
    matches!(e, ChainError::BadPhi(_) | ChainError::NoTrials | ChainError::BadDistribution(_))
}
