//! Polytope representations and their metric and combinatorial data.

mod distance;
mod facets;
pub mod generators;
mod integer;
pub mod io;
mod polytope;

pub use distance::{distance_to_hull, min_norm_point};
pub use facets::{
    codim2_perimeter, dihedral_angle, facet_complex_of_hpolytope, facets_of_vpolytope, hull_volume,
    hyperplane_through, vertices_of_hpolytope, Facet, FacetComplex, FacetPath, HVertices, Ridge,
};
pub use integer::{integer_data, IntegerData};
pub use polytope::{
    containment_check, ContainmentReport, HPolytope, Outer, VPolytope,
};

use thiserror::Error;

use crate::linalg::LinalgError;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeometryError {
    #[error("a polytope in R^{dim} needs at least {need} points, got {got}")]
    TooFewPoints { dim: usize, need: usize, got: usize },
    #[error("points span an affine subspace of dimension {span}, expected {dim}")]
    NotFullDimensional { span: usize, dim: usize },
    #[error("near-degenerate hyperplane through points {subset:?}: a side test fell within {tol:e}")]
    NearDegenerate { subset: Vec<usize>, tol: f64 },
    #[error("constraint row {0} is zero")]
    ZeroRow(usize),
    #[error("polyhedron is unbounded along coordinate {axis}")]
    Unbounded { axis: usize },
    #[error("polytope is empty")]
    Empty,
    #[error("origin is not an interior point (depth {depth:e}); recenter first")]
    OriginNotInterior { depth: f64 },
    #[error("normals of facets {0} and {1} are parallel or antipodal")]
    DegenerateAngle(usize, usize),
    #[error("ridge {vertices:?} is shared by {count} facets")]
    BadRidge { vertices: Vec<usize>, count: usize },
    #[error("facet graph is disconnected")]
    Disconnected,
    #[error("constraint {0} does not define a facet")]
    RedundantConstraint(usize),
    #[error("integer overflow while computing minors; try a smaller instance")]
    Overflow,
    #[error("entry {value} at {location} is not an integer")]
    NonIntegral { value: f64, location: String },
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}
