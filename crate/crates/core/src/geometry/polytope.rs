use serde::{Deserialize, Serialize};

use super::GeometryError;
use crate::linalg::{affine_dimension, dot, norm, solve_lp, sub, LinearProgram, LpOutcome, Sense};
use crate::tolerances::ABS;

/// Convex hull of finitely many points.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VPolytope {
    dim: usize,
    points: Vec<Vec<f64>>,
}

/// `{x : A x ≤ b}`, bounded and non-empty.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HPolytope {
    dim: usize,
    a: Vec<Vec<f64>>,
    b: Vec<f64>,
}

impl VPolytope {
    pub fn new(dim: usize, points: Vec<Vec<f64>>) -> Result<Self, GeometryError> {
        if dim == 0 {
            return Err(GeometryError::Dimension("dimension must be positive".into()));
        }
        if let Some(i) = points.iter().position(|p| p.len() != dim) {
            return Err(GeometryError::Dimension(format!(
                "point {i} has {} coordinates, expected {dim}",
                points[i].len()
            )));
        }
        if points.iter().flatten().any(|x| !x.is_finite()) {
            return Err(GeometryError::Dimension("non-finite coordinate".into()));
        }
        if points.len() < dim + 1 {
            return Err(GeometryError::TooFewPoints { dim, need: dim + 1, got: points.len() });
        }
        let refs: Vec<&[f64]> = points.iter().map(Vec::as_slice).collect();
        let span = affine_dimension(&refs, 1e-9);
        if span < dim {
            return Err(GeometryError::NotFullDimensional { span, dim });
        }
        Ok(Self { dim, points })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn points(&self) -> &[Vec<f64>] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn max_norm(&self) -> f64 {
        self.points.iter().map(|p| norm(p)).fold(0.0, f64::max)
    }

    /// Average of the points (an interior point of the hull).
    pub fn centroid(&self) -> Vec<f64> {
        let m = self.points.len() as f64;
        (0..self.dim).map(|k| self.points.iter().map(|p| p[k]).sum::<f64>() / m).collect()
    }

    pub fn translated(&self, shift: &[f64]) -> VPolytope {
        let points = self.points.iter().map(|p| p.iter().zip(shift).map(|(x, s)| x + s).collect()).collect();
        VPolytope { dim: self.dim, points }
    }

    pub fn scaled(&self, t: f64) -> VPolytope {
        let points = self.points.iter().map(|p| p.iter().map(|x| x * t).collect()).collect();
        VPolytope { dim: self.dim, points }
    }

    /// Translate so the point centroid sits at the origin. Returns the
    /// applied shift.
    pub fn recentered(&self) -> (VPolytope, Vec<f64>) {
        let shift: Vec<f64> = self.centroid().iter().map(|x| -x).collect();
        (self.translated(&shift), shift)
    }

    /// Largest `t` such that the origin is a convex combination with every
    /// weight at least `t`. Positive iff the origin is interior.
    pub fn origin_depth(&self) -> Result<f64, GeometryError> {
        let m = self.points.len();
        let d = self.dim;
        let mut a = Vec::new();
        let mut b = Vec::new();
        for k in 0..d {
            let row: Vec<f64> = self.points.iter().map(|p| p[k]).chain([0.0]).collect();
            a.push(row.clone());
            a.push(row.iter().map(|x| -x).collect());
            b.extend([0.0, 0.0]);
        }
        let ones: Vec<f64> = (0..m).map(|_| 1.0).chain([0.0]).collect();
        a.push(ones.clone());
        a.push(ones.iter().map(|x| -x).collect());
        b.extend([1.0, -1.0]);
        for i in 0..m {
            let mut row = vec![0.0; m + 1];
            row[i] = -1.0;
            row[m] = 1.0;
            a.push(row);
            b.push(0.0);
        }
        let mut c = vec![0.0; m + 1];
        c[m] = 1.0;
        match solve_lp(&LinearProgram::new(a, b, c, Sense::Maximize)?)? {
            LpOutcome::Optimal(s) => Ok(s.value),
            _ => Ok(f64::NEG_INFINITY),
        }
    }

    pub fn origin_is_interior(&self) -> Result<bool, GeometryError> {
        Ok(self.origin_depth()? > 1e-10)
    }

    /// `{y : ⟨v_i, y⟩ ≤ 1}`.
    pub fn polar(&self) -> Result<HPolytope, GeometryError> {
        let depth = self.origin_depth()?;
        if depth <= 1e-10 {
            return Err(GeometryError::OriginNotInterior { depth });
        }
        HPolytope::new(self.points.clone(), vec![1.0; self.points.len()])
    }

    /// Largest `s` with `c + s(x − c)` in the hull, `c` the centroid.
    /// `x` is a member iff `s ≥ 1`.
    pub fn gauge_scale(&self, x: &[f64]) -> Result<f64, GeometryError> {
        let c = self.centroid();
        let dir = sub(x, &c);
        let m = self.points.len();
        let mut a = Vec::new();
        let mut b = Vec::new();
        for k in 0..self.dim {
            let row: Vec<f64> = self.points.iter().map(|p| p[k]).chain([-dir[k]]).collect();
            a.push(row.clone());
            a.push(row.iter().map(|v| -v).collect());
            b.extend([c[k], -c[k]]);
        }
        let ones: Vec<f64> = (0..m).map(|_| 1.0).chain([0.0]).collect();
        a.push(ones.clone());
        a.push(ones.iter().map(|v| -v).collect());
        b.extend([1.0, -1.0]);
        for i in 0..m {
            let mut row = vec![0.0; m + 1];
            row[i] = -1.0;
            a.push(row);
            b.push(0.0);
        }
        let mut obj = vec![0.0; m + 1];
        obj[m] = 1.0;
        Ok(match solve_lp(&LinearProgram::new(a, b, obj, Sense::Maximize)?)? {
            LpOutcome::Optimal(s) => s.value,
            LpOutcome::Unbounded => f64::INFINITY,
            LpOutcome::Infeasible => f64::NEG_INFINITY,
        })
    }

    pub fn contains(&self, x: &[f64]) -> Result<bool, GeometryError> {
        Ok(self.gauge_scale(x)? >= 1.0 - ABS)
    }
}

impl HPolytope {
    /// Validates shapes, non-zero rows, non-emptiness and boundedness.
    pub fn new(a: Vec<Vec<f64>>, b: Vec<f64>) -> Result<Self, GeometryError> {
        let p = Self::unchecked(a, b)?;
        p.check_bounded()?;
        Ok(p)
    }

    /// Shape checks only; the caller vouches for boundedness.
    pub(crate) fn unchecked(a: Vec<Vec<f64>>, b: Vec<f64>) -> Result<Self, GeometryError> {
        if a.len() != b.len() {
            return Err(GeometryError::Dimension(format!("{} rows but {} offsets", a.len(), b.len())));
        }
        let dim = a.first().map_or(0, Vec::len);
        if dim == 0 {
            return Err(GeometryError::Dimension("no constraints".into()));
        }
        if let Some(i) = a.iter().position(|r| r.len() != dim) {
            return Err(GeometryError::Dimension(format!("row {i} has {} entries, expected {dim}", a[i].len())));
        }
        if a.iter().flatten().chain(&b).any(|x| !x.is_finite()) {
            return Err(GeometryError::Dimension("non-finite entry".into()));
        }
        if let Some(i) = a.iter().position(|r| r.iter().all(|&x| x == 0.0)) {
            return Err(GeometryError::ZeroRow(i));
        }
        Ok(Self { dim, a, b })
    }

    fn check_bounded(&self) -> Result<(), GeometryError> {
        for axis in 0..self.dim {
            for s in [1.0, -1.0] {
                let mut c = vec![0.0; self.dim];
                c[axis] = s;
                let lp = LinearProgram::new(self.a.clone(), self.b.clone(), c, Sense::Maximize)?;
                match solve_lp(&lp)? {
                    LpOutcome::Optimal(_) => {}
                    LpOutcome::Unbounded => return Err(GeometryError::Unbounded { axis }),
                    LpOutcome::Infeasible => return Err(GeometryError::Empty),
                }
            }
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn a(&self) -> &[Vec<f64>] {
        &self.a
    }

    pub fn b(&self) -> &[f64] {
        &self.b
    }

    pub fn rows(&self) -> usize {
        self.a.len()
    }

    /// `max_i (a_i·x − b_i)/‖a_i‖`; positive outside.
    pub fn max_violation(&self, x: &[f64]) -> f64 {
        self.a
            .iter()
            .zip(&self.b)
            .map(|(r, bi)| (dot(r, x) - bi) / norm(r))
            .fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        self.max_violation(x) <= ABS
    }

    /// Chebyshev center: largest ball `{‖y − x‖ ≤ r}` inside the polytope.
    pub fn inradius(&self) -> Result<(f64, Vec<f64>), GeometryError> {
        let d = self.dim;
        let mut a: Vec<Vec<f64>> = self
            .a
            .iter()
            .map(|r| r.iter().copied().chain([norm(r)]).collect())
            .collect();
        let mut b = self.b.clone();
        let mut neg_r = vec![0.0; d + 1];
        neg_r[d] = -1.0;
        a.push(neg_r);
        b.push(0.0);
        let mut c = vec![0.0; d + 1];
        c[d] = 1.0;
        match solve_lp(&LinearProgram::new(a, b, c, Sense::Maximize)?)? {
            LpOutcome::Optimal(s) => Ok((s.value, s.x[..d].to_vec())),
            LpOutcome::Infeasible => Err(GeometryError::Empty),
            LpOutcome::Unbounded => Err(GeometryError::Unbounded { axis: 0 }),
        }
    }

    /// `conv{a_j / b_j}`; requires `b > 0`.
    pub fn polar(&self) -> Result<VPolytope, GeometryError> {
        let depth = self.b.iter().zip(&self.a).map(|(b, a)| b / norm(a)).fold(f64::INFINITY, f64::min);
        if depth <= ABS {
            return Err(GeometryError::OriginNotInterior { depth });
        }
        let points = self.a.iter().zip(&self.b).map(|(r, bi)| r.iter().map(|x| x / bi).collect()).collect();
        VPolytope::new(self.dim, points)
    }

    /// `P + shift`.
    pub fn translated(&self, shift: &[f64]) -> HPolytope {
        let b = self.a.iter().zip(&self.b).map(|(r, bi)| bi + dot(r, shift)).collect();
        HPolytope { dim: self.dim, a: self.a.clone(), b }
    }

    /// Translate so the Chebyshev center sits at the origin. Returns the
    /// applied shift.
    pub fn recentered(&self) -> Result<(HPolytope, Vec<f64>), GeometryError> {
        let (_, center) = self.inradius()?;
        let shift: Vec<f64> = center.iter().map(|x| -x).collect();
        Ok((self.translated(&shift), shift))
    }
}

/// Outer body for [`containment_check`].
#[derive(Debug, Clone, Copy)]
pub enum Outer<'a> {
    V(&'a VPolytope),
    H(&'a HPolytope),
}

#[derive(Debug, Clone, PartialEq)]
pub struct ContainmentReport {
    pub contained: bool,
    /// H outer: smallest signed slack `(b − a·x)/‖a‖` over vertices and rows.
    /// V outer: smallest `s − 1` where `s` is the gauge scale of a vertex.
    /// Negative means some vertex lies outside.
    pub margin: f64,
    pub worst_vertex: usize,
}

/// Is every point of `inner` a member of `outer`?
pub fn containment_check(inner: &VPolytope, outer: Outer<'_>) -> Result<ContainmentReport, GeometryError> {
    if inner.dim() != match outer {
        Outer::V(v) => v.dim(),
        Outer::H(h) => h.dim(),
    } {
        return Err(GeometryError::Dimension("inner and outer dimensions differ".into()));
    }
    let mut margin = f64::INFINITY;
    let mut worst_vertex = 0;
    for (i, p) in inner.points().iter().enumerate() {
        let m = match outer {
            Outer::H(h) => -h.max_violation(p),
            Outer::V(v) => v.gauge_scale(p)? - 1.0,
        };
        if m < margin {
            margin = m;
            worst_vertex = i;
        }
    }
    Ok(ContainmentReport { contained: margin >= -ABS, margin, worst_vertex })
}
