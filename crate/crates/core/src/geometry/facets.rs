use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};

use itertools::Itertools;
use serde::Serialize;

use super::polytope::{HPolytope, VPolytope};
use super::GeometryError;
use crate::linalg::{dot, gram_volume, norm, orthonormal_basis, solve, sub, Matrix};
use crate::tolerances::{ABS, ANGLE};

/// Which facet enumeration to run on a V-polytope.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FacetPath {
    /// Every facet is a simplex; coplanar candidates abort with a report.
    Simplicial,
    /// Coplanar candidates are merged into one facet.
    General,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Facet {
    /// Indices into [`FacetComplex::points`], ascending.
    pub vertices: Vec<usize>,
    /// Outward unit normal.
    pub normal: Vec<f64>,
    /// `⟨normal, x⟩ = offset` on the facet.
    pub offset: f64,
    /// (d−1)-volume.
    pub volume: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Ridge {
    /// Facet indices, first < second.
    pub facets: (usize, usize),
    pub vertices: Vec<usize>,
    /// (d−2)-volume (1 when d = 2).
    pub volume: f64,
    /// Angle in (0, π) between the outward normals of the two facets.
    pub angle: f64,
}

/// Facets, ridges and the facet adjacency graph of a full-dimensional
/// polytope.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FacetComplex {
    dim: usize,
    points: Vec<Vec<f64>>,
    facets: Vec<Facet>,
    ridges: Vec<Ridge>,
    /// `adjacency[i]` lists `(neighbour facet, ridge index)`, ascending.
    adjacency: Vec<Vec<(usize, usize)>>,
}

impl FacetComplex {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn points(&self) -> &[Vec<f64>] {
        &self.points
    }

    pub fn facets(&self) -> &[Facet] {
        &self.facets
    }

    pub fn ridges(&self) -> &[Ridge] {
        &self.ridges
    }

    pub fn adjacency(&self) -> &[Vec<(usize, usize)>] {
        &self.adjacency
    }

    pub fn n_facets(&self) -> usize {
        self.facets.len()
    }

    pub fn ridge_between(&self, i: usize, j: usize) -> Option<&Ridge> {
        self.adjacency[i].iter().find(|(n, _)| *n == j).map(|&(_, r)| &self.ridges[r])
    }

    pub fn is_simplicial(&self) -> bool {
        self.facets.iter().all(|f| f.vertices.len() == self.dim)
    }

    /// Points lying on at least one facet.
    pub fn boundary_points(&self) -> Vec<usize> {
        let set: BTreeSet<usize> = self.facets.iter().flat_map(|f| f.vertices.iter().copied()).collect();
        set.into_iter().collect()
    }

    pub fn surface_area(&self) -> f64 {
        self.facets.iter().map(|f| f.volume).sum()
    }

    /// `Σ_{S<T} |F_ST| θ_ST`.
    pub fn angle_weighted_ridge_sum(&self) -> f64 {
        self.ridges.iter().map(|r| r.volume * r.angle).sum()
    }

    /// Volume by pyramids from the centroid of the points.
    pub fn volume(&self) -> f64 {
        let m = self.points.len() as f64;
        let c: Vec<f64> = (0..self.dim).map(|k| self.points.iter().map(|p| p[k]).sum::<f64>() / m).collect();
        self.facets.iter().map(|f| f.volume * (f.offset - dot(&f.normal, &c))).sum::<f64>() / self.dim as f64
    }

    /// Smallest facet offset: the radius of the largest origin-centred ball
    /// inside the polytope (negative when the origin is outside).
    pub fn origin_inradius(&self) -> f64 {
        self.facets.iter().map(|f| f.offset).fold(f64::INFINITY, f64::min)
    }

    /// The facet H-representation `{x : ⟨u_S, x⟩ ≤ h_S}`.
    pub fn to_hpolytope(&self) -> Result<HPolytope, GeometryError> {
        HPolytope::unchecked(
            self.facets.iter().map(|f| f.normal.clone()).collect(),
            self.facets.iter().map(|f| f.offset).collect(),
        )
    }

    /// Vertices of the polar body, `u_S / h_S` for each facet.
    pub fn polar_vertices(&self) -> Result<Vec<Vec<f64>>, GeometryError> {
        let depth = self.origin_inradius();
        if depth <= ABS {
            return Err(GeometryError::OriginNotInterior { depth });
        }
        Ok(self.facets.iter().map(|f| f.normal.iter().map(|x| x / f.offset).collect()).collect())
    }

    /// The complex of `t·K` for `t > 0`.
    pub fn scaled(&self, t: f64) -> FacetComplex {
        assert!(t > 0.0);
        let d = self.dim as i32;
        let mut out = self.clone();
        out.points.iter_mut().flatten().for_each(|x| *x *= t);
        for f in &mut out.facets {
            f.offset *= t;
            f.volume *= t.powi(d - 1);
        }
        for r in &mut out.ridges {
            r.volume *= t.powi(d - 2);
        }
        out
    }

    /// Build ridges, angles and adjacency from a facet list.
    fn assemble(dim: usize, points: Vec<Vec<f64>>, facets: Vec<Facet>) -> Result<Self, GeometryError> {
        let mut ridges = Vec::new();
        let mut adjacency = vec![Vec::new(); facets.len()];
        for i in 0..facets.len() {
            let si: BTreeSet<usize> = facets[i].vertices.iter().copied().collect();
            for j in i + 1..facets.len() {
                let shared: Vec<usize> = facets[j].vertices.iter().copied().filter(|v| si.contains(v)).collect();
                if shared.len() + 1 < dim {
                    continue;
                }
                let refs: Vec<&[f64]> = shared.iter().map(|&v| points[v].as_slice()).collect();
                if dim >= 2 && crate::linalg::affine_dimension(&refs, 1e-9) != dim - 2 {
                    continue;
                }
                let angle = dihedral_angle(&facets[i].normal, &facets[j].normal)
                    .map_err(|_| GeometryError::DegenerateAngle(i, j))?;
                let coords: Vec<Vec<f64>> = shared.iter().map(|&v| points[v].clone()).collect();
                let volume = if dim == 2 { 1.0 } else { hull_volume(&coords)? };
                adjacency[i].push((j, ridges.len()));
                adjacency[j].push((i, ridges.len()));
                ridges.push(Ridge { facets: (i, j), vertices: shared, volume, angle });
            }
        }
        for a in &mut adjacency {
            a.sort_unstable();
        }
        let fc = Self { dim, points, facets, ridges, adjacency };
        if !fc.is_connected() {
            return Err(GeometryError::Disconnected);
        }
        Ok(fc)
    }

    fn is_connected(&self) -> bool {
        let n = self.facets.len();
        if n == 0 {
            return false;
        }
        let mut seen = vec![false; n];
        let mut queue = VecDeque::from([0]);
        seen[0] = true;
        let mut count = 1;
        while let Some(u) = queue.pop_front() {
            for &(v, _) in &self.adjacency[u] {
                if !seen[v] {
                    seen[v] = true;
                    count += 1;
                    queue.push_back(v);
                }
            }
        }
        count == n
    }
}

/// Unit normal and offset of the hyperplane through `d` points of `R^d`;
/// `None` if they are affinely dependent.
pub fn hyperplane_through(points: &[&[f64]]) -> Option<(Vec<f64>, f64)> {
    let d = points.first()?.len();
    if points.len() != d {
        return None;
    }
    let diffs: Vec<Vec<f64>> = points[1..].iter().map(|p| sub(p, points[0])).collect();
    let basis = orthonormal_basis(&diffs, 1e-12);
    if basis.len() + 1 != d {
        return None;
    }
    let mut best: Option<Vec<f64>> = None;
    let mut best_norm = 0.0;
    for k in 0..d {
        let mut r = vec![0.0; d];
        r[k] = 1.0;
        for _ in 0..2 {
            for q in &basis {
                let c = dot(&r, q);
                r.iter_mut().zip(q).for_each(|(x, y)| *x -= c * y);
            }
        }
        let n = norm(&r);
        if n > best_norm {
            best_norm = n;
            best = Some(r);
        }
    }
    let normal: Vec<f64> = best?.iter().map(|x| x / best_norm).collect();
    let offset = dot(&normal, points[0]);
    Some((normal, offset))
}

/// Angle between two unit normals, rejecting (anti)parallel pairs.
/// The error's indices refer to argument positions.
pub fn dihedral_angle(u: &[f64], v: &[f64]) -> Result<f64, GeometryError> {
    // 2·atan2(‖u−v‖, ‖u+v‖) equals arccos⟨u,v⟩ for unit vectors and stays
    // accurate near 0 and π.
    let diff = norm(&sub(u, v));
    let sum = norm(&u.iter().zip(v).map(|(a, b)| a + b).collect::<Vec<_>>());
    let theta = 2.0 * diff.atan2(sum);
    if theta < ANGLE || std::f64::consts::PI - theta < ANGLE {
        return Err(GeometryError::DegenerateAngle(0, 1));
    }
    Ok(theta)
}

struct Candidate {
    members: Vec<usize>,
    normal: Vec<f64>,
    offset: f64,
}

/// Supporting hyperplanes through `k`-subsets of full-dimensional points
/// in `R^k`. `strict` rejects any candidate with extra points on it.
fn hull_facets(points: &[Vec<f64>], strict: bool) -> Result<Vec<Candidate>, GeometryError> {
    let k = points[0].len();
    let scale = points.iter().map(|p| norm(p)).fold(0.0, f64::max).max(f64::MIN_POSITIVE);
    let tol = 1e-9 * scale;
    let mut seen: BTreeSet<Vec<usize>> = BTreeSet::new();
    let mut out = Vec::new();
    for subset in (0..points.len()).combinations(k) {
        if !strict && seen.iter().any(|s| subset.iter().all(|i| s.binary_search(i).is_ok())) {
            continue;
        }
        let refs: Vec<&[f64]> = subset.iter().map(|&i| points[i].as_slice()).collect();
        let Some((mut normal, mut offset)) = hyperplane_through(&refs) else { continue };
        let (mut pos, mut neg) = (0usize, 0usize);
        let mut on = Vec::new();
        for (i, p) in points.iter().enumerate() {
            if subset.contains(&i) {
                continue;
            }
            let s = dot(&normal, p) - offset;
            if s > tol {
                pos += 1;
            } else if s < -tol {
                neg += 1;
            } else {
                on.push(i);
            }
            if pos > 0 && neg > 0 {
                break;
            }
        }
        if pos > 0 && neg > 0 {
            continue;
        }
        if strict && !on.is_empty() {
            let mut all = subset.clone();
            all.extend(on);
            all.sort_unstable();
            return Err(GeometryError::NearDegenerate { subset: all, tol });
        }
        if pos > 0 {
            normal.iter_mut().for_each(|x| *x = -*x);
            offset = -offset;
        }
        let mut members = subset;
        members.extend(on);
        members.sort_unstable();
        if seen.insert(members.clone()) {
            out.push(Candidate { members, normal, offset });
        }
    }
    Ok(out)
}

/// Volume of the convex hull of `points` measured in their own affine hull
/// (a k-volume when the points span k dimensions; 1 for a single point).
pub fn hull_volume(points: &[Vec<f64>]) -> Result<f64, GeometryError> {
    let Some(p0) = points.first() else { return Ok(0.0) };
    let diffs: Vec<Vec<f64>> = points[1..].iter().map(|p| sub(p, p0)).collect();
    let basis = orthonormal_basis(&diffs, 1e-9);
    let k = basis.len();
    if k == 0 {
        return Ok(1.0);
    }
    let proj: Vec<Vec<f64>> = points.iter().map(|p| {
        let d = sub(p, p0);
        basis.iter().map(|q| dot(&d, q)).collect()
    }).collect();
    if k == 1 {
        let (lo, hi) = proj.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), p| (lo.min(p[0]), hi.max(p[0])));
        return Ok(hi - lo);
    }
    if proj.len() == k + 1 {
        return Ok(gram_volume(&proj));
    }
    // Pyramids from the lowest-index point over every hull facet.
    let apex = &proj[0];
    let mut vol = 0.0;
    for c in hull_facets(&proj, false)? {
        let height = c.offset - dot(&c.normal, apex);
        if height > 0.0 {
            let face: Vec<Vec<f64>> = c.members.iter().map(|&i| proj[i].clone()).collect();
            vol += height * hull_volume(&face)? / k as f64;
        }
    }
    Ok(vol)
}

/// Facet complex of `conv(points)`.
pub fn facets_of_vpolytope(k: &VPolytope, path: FacetPath) -> Result<FacetComplex, GeometryError> {
    let dim = k.dim();
    let points = k.points().to_vec();
    if dim == 1 {
        let (lo, hi) = (0..points.len()).fold((0, 0), |(lo, hi), i| {
            (if points[i][0] < points[lo][0] { i } else { lo }, if points[i][0] > points[hi][0] { i } else { hi })
        });
        let facets = vec![
            Facet { vertices: vec![lo], normal: vec![-1.0], offset: -points[lo][0], volume: 1.0 },
            Facet { vertices: vec![hi], normal: vec![1.0], offset: points[hi][0], volume: 1.0 },
        ];
        return Ok(FacetComplex {
            dim,
            points,
            facets,
            ridges: Vec::new(),
            adjacency: vec![Vec::new(); 2],
        });
    }
    let strict = path == FacetPath::Simplicial;
    let candidates = hull_facets(&points, strict)?;
    let mut facets = Vec::with_capacity(candidates.len());
    for c in candidates {
        let coords: Vec<Vec<f64>> = c.members.iter().map(|&i| points[i].clone()).collect();
        let volume = if strict { gram_volume(&coords) } else { hull_volume(&coords)? };
        facets.push(Facet { vertices: c.members, normal: c.normal, offset: c.offset, volume });
    }
    if strict {
        let mut count: HashMap<Vec<usize>, usize> = HashMap::new();
        for f in &facets {
            for r in f.vertices.iter().copied().combinations(dim - 1) {
                *count.entry(r).or_default() += 1;
            }
        }
        if let Some((vertices, &count)) = count.iter().find(|(_, &c)| c != 2) {
            return Err(GeometryError::BadRidge { vertices: vertices.clone(), count });
        }
    }
    FacetComplex::assemble(dim, points, facets)
}

/// Vertices of an H-polytope with the constraints tight at each.
#[derive(Debug, Clone, PartialEq)]
pub struct HVertices {
    pub vertices: Vec<Vec<f64>>,
    /// Ascending constraint indices tight at each vertex.
    pub incidence: Vec<Vec<usize>>,
}

impl HVertices {
    /// Every vertex lies on exactly `d` constraints.
    pub fn is_simple(&self, dim: usize) -> bool {
        self.incidence.iter().all(|t| t.len() == dim)
    }

    pub fn to_vpolytope(&self, dim: usize) -> Result<VPolytope, GeometryError> {
        VPolytope::new(dim, self.vertices.clone())
    }

    /// Vertex–edge graph: two vertices are adjacent when the constraints
    /// tight at both have rank d−1.
    pub fn edges(&self, p: &HPolytope) -> Vec<Vec<usize>> {
        let d = p.dim();
        let n = self.vertices.len();
        let mut adj = vec![Vec::new(); n];
        for u in 0..n {
            for v in u + 1..n {
                let common: Vec<Vec<f64>> = self.incidence[u]
                    .iter()
                    .filter(|i| self.incidence[v].binary_search(i).is_ok())
                    .map(|&i| p.a()[i].clone())
                    .collect();
                if common.len() + 1 >= d && orthonormal_basis(&common, 1e-9).len() + 1 == d {
                    adj[u].push(v);
                    adj[v].push(u);
                }
            }
        }
        adj
    }
}

/// Brute force over d-subsets of constraints.
pub fn vertices_of_hpolytope(p: &HPolytope) -> Result<HVertices, GeometryError> {
    let d = p.dim();
    let norms: Vec<f64> = p.a().iter().map(|r| norm(r)).collect();
    let scale = 1.0 + p.b().iter().zip(&norms).map(|(b, n)| (b / n).abs()).fold(0.0, f64::max);
    let tol = ABS * scale;
    let mut vertices: Vec<Vec<f64>> = Vec::new();
    for subset in (0..p.rows()).combinations(d) {
        let m = Matrix::from_fn(d, d, |i, j| p.a()[subset[i]][j] / norms[subset[i]]);
        let rhs: Vec<f64> = subset.iter().map(|&i| p.b()[i] / norms[i]).collect();
        let Some(x) = solve(&m, &rhs, 1e-12) else { continue };
        if p.max_violation(&x) > tol {
            continue;
        }
        if !vertices.iter().any(|v| norm(&sub(v, &x)) <= tol) {
            vertices.push(x);
        }
    }
    if vertices.is_empty() {
        return Err(GeometryError::Empty);
    }
    // Deterministic lexicographic order.
    vertices.sort_by(|a, b| {
        a.iter().zip(b).map(|(x, y)| x.total_cmp(y)).find(|o| o.is_ne()).unwrap_or(std::cmp::Ordering::Equal)
    });
    let incidence = vertices
        .iter()
        .map(|x| {
            (0..p.rows())
                .filter(|&i| ((dot(&p.a()[i], x) - p.b()[i]) / norms[i]).abs() <= tol)
                .collect()
        })
        .collect();
    Ok(HVertices { vertices, incidence })
}

/// Facet complex of an H-polytope whose constraints are all facet-defining;
/// facet `i` corresponds to constraint `i`.
pub fn facet_complex_of_hpolytope(p: &HPolytope) -> Result<(FacetComplex, HVertices), GeometryError> {
    let hv = vertices_of_hpolytope(p)?;
    let d = p.dim();
    let mut facets = Vec::with_capacity(p.rows());
    let mut by_members: BTreeMap<Vec<usize>, usize> = BTreeMap::new();
    for i in 0..p.rows() {
        let members: Vec<usize> = (0..hv.vertices.len()).filter(|&v| hv.incidence[v].binary_search(&i).is_ok()).collect();
        let refs: Vec<&[f64]> = members.iter().map(|&v| hv.vertices[v].as_slice()).collect();
        if members.is_empty() || crate::linalg::affine_dimension(&refs, 1e-9) + 1 != d {
            return Err(GeometryError::RedundantConstraint(i));
        }
        if by_members.insert(members.clone(), i).is_some() {
            return Err(GeometryError::RedundantConstraint(i));
        }
        let nrm = norm(&p.a()[i]);
        let coords: Vec<Vec<f64>> = members.iter().map(|&v| hv.vertices[v].clone()).collect();
        facets.push(Facet {
            vertices: members,
            normal: p.a()[i].iter().map(|x| x / nrm).collect(),
            offset: p.b()[i] / nrm,
            volume: hull_volume(&coords)?,
        });
    }
    let fc = FacetComplex::assemble(d, hv.vertices.clone(), facets)?;
    Ok((fc, hv))
}

/// `Σ_{S<T} |F_ST|`, the codimension-2 perimeter.
pub fn codim2_perimeter(fc: &FacetComplex) -> f64 {
    fc.ridges().iter().map(|r| r.volume).sum()
}
