//! JSON polytope files:
//! `{"kind": "V", "dim": d, "points": [[..], ..]}` or
//! `{"kind": "H", "dim": d, "A": [[..], ..], "b": [..]}`, each with an
//! optional `"labels"` list.

use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::polytope::{HPolytope, VPolytope};
use super::GeometryError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", deny_unknown_fields)]
pub enum PolytopeFile {
    V {
        dim: usize,
        points: Vec<Vec<f64>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        labels: Option<Vec<String>>,
    },
    H {
        dim: usize,
        #[serde(rename = "A")]
        a: Vec<Vec<f64>>,
        b: Vec<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        labels: Option<Vec<String>>,
    },
}

/// A validated polytope in either representation.
#[derive(Debug, Clone, PartialEq)]
pub enum Polytope {
    V(VPolytope),
    H(HPolytope),
}

impl Polytope {
    pub fn dim(&self) -> usize {
        match self {
            Polytope::V(v) => v.dim(),
            Polytope::H(h) => h.dim(),
        }
    }
}

#[derive(Debug, Error)]
pub enum IoError {
    #[error("cannot read {path}: {source}")]
    Read { path: String, source: std::io::Error },
    #[error("malformed polytope file: {0}")]
    Parse(#[from] serde_json::Error),
    #[error("malformed polytope file: {0}")]
    Field(String),
    #[error("invalid polytope: {0}")]
    Invalid(#[from] GeometryError),
}

#[derive(Deserialize)]
enum Kind {
    V,
    H,
}

/// Flat mirror of [`PolytopeFile`]; internally tagged enums lose error
/// positions, this keeps line and column in every message.
#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawFile {
    kind: Kind,
    dim: usize,
    points: Option<Vec<Vec<f64>>>,
    #[serde(rename = "A")]
    a: Option<Vec<Vec<f64>>>,
    b: Option<Vec<f64>>,
    labels: Option<Vec<String>>,
}

pub fn parse(text: &str) -> Result<Polytope, IoError> {
    let raw: RawFile = serde_json::from_str(text)?;
    let missing = |field: &str, kind: &str| IoError::Field(format!("missing field `{field}` for kind {kind}"));
    let stray = |field: &str, kind: &str| IoError::Field(format!("field `{field}` is not allowed for kind {kind}"));
    let dim = raw.dim;
    Ok(match raw.kind {
        Kind::V => {
            if raw.a.is_some() {
                return Err(stray("A", "V"));
            }
            if raw.b.is_some() {
                return Err(stray("b", "V"));
            }
            let points = raw.points.ok_or_else(|| missing("points", "V"))?;
            check_labels(raw.labels.as_deref(), points.len())?;
            Polytope::V(VPolytope::new(dim, points)?)
        }
        Kind::H => {
            if raw.points.is_some() {
                return Err(stray("points", "H"));
            }
            let a = raw.a.ok_or_else(|| missing("A", "H"))?;
            let b = raw.b.ok_or_else(|| missing("b", "H"))?;
            check_labels(raw.labels.as_deref(), a.len())?;
            let h = HPolytope::new(a, b)?;
            if h.dim() != dim {
                return Err(GeometryError::Dimension(format!("rows have {} columns but dim is {dim}", h.dim())).into());
            }
            Polytope::H(h)
        }
    })
}

fn check_labels(labels: Option<&[String]>, n: usize) -> Result<(), IoError> {
    match labels {
        Some(l) if l.len() != n => {
            Err(GeometryError::Dimension(format!("{} labels for {n} entries", l.len())).into())
        }
        _ => Ok(()),
    }
}

pub fn load(path: &Path) -> Result<Polytope, IoError> {
    let text = std::fs::read_to_string(path)
        .map_err(|source| IoError::Read { path: path.display().to_string(), source })?;
    parse(&text)
}

pub fn to_json(p: &Polytope) -> String {
    let file = match p {
        Polytope::V(v) => PolytopeFile::V { dim: v.dim(), points: v.points().to_vec(), labels: None },
        Polytope::H(h) => PolytopeFile::H { dim: h.dim(), a: h.a().to_vec(), b: h.b().to_vec(), labels: None },
    };
    serde_json::to_string_pretty(&file).expect("polytope serializes")
}
