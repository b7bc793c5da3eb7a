//! The smoothed unit LP model: constraints `⟨v_j, x⟩ ≤ 1` with
//! `v_j = a_j + g_j`, `‖a_j‖ ≤ 1`, `g_j ~ N(0, σ² I)`. Everything here is
//! computed on the polar body `K = conv(v_j)`.

mod instance;
mod pipeline;
mod planes;
mod steiner;

use thiserror::Error;

pub use instance::{
    check_assumptions, roundedness_trial, sample_instance, sample_two_stage, two_stage_split, AssumptionReport,
    RoundednessReport, SmoothedInstance, TwoStage,
};
pub use pipeline::{end_to_end, shadow_vertex_experiment, EndToEndOptions, EndToEndReport, ShadowLevel};
pub use planes::{
    boundary_surface_estimate, crossing_weight, disc_hit_rate, half_sphere_constant, intersection_constant_check,
    intersection_constant_exact, plane_section, quadrature_perimeter_estimate, random_frame, sample_plane,
    shadow_counts, summarize_counts, DiscHits, Plane, PlaneSource, QuadratureEstimate, Section, ShadowStats,
};
pub use steiner::{
    af_logconcavity_check, parallel_body_volume, steiner_validate, LogConcavity, SteinerCoefficients, SteinerFit,
    SteinerReport, SteinerRow,
};

use crate::chain::ChainError;
use crate::geometry::GeometryError;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SmoothedError {
    #[error("base point {index} has norm {norm} > 1")]
    BaseOutsideBall { index: usize, norm: f64 },
    #[error("sigma must be nonnegative and finite, got {0}")]
    BadSigma(f64),
    #[error("{0}")]
    Shape(String),
    #[error("{0}")]
    BadParameter(String),
    #[error("no usable samples")]
    NoSamples,
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Chain(#[from] ChainError),
}
