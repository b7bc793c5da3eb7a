//! Random 2-planes, plane sections of H-polytopes and the estimators
//! built on them.
//!
//! A plane is `W = a + V` with `V` spanned by two Gaussian vectors. For a
//! fixed `a` and a `(d−2)`-dimensional patch at `y` with direction space
//! `U`, `P[W meets the patch] = area · cos θ / (A_{d−2} ρ^{d−2})` where
//! `ρ = ‖y − a‖`, `cos θ = ‖P_{U⊥}(y − a)‖/ρ` and `A_{d−2}` is half the
//! area of the unit `(d−2)`-sphere. Each crossing therefore contributes
//! `A_{d−2} ρ^{d−2} / cos θ` to an unbiased estimate of the total ridge
//! volume.

use rayon::prelude::*;
use serde::Serialize;

use super::SmoothedError;
use crate::geometry::{codim2_perimeter, min_norm_point, FacetComplex, HPolytope, VPolytope};
use crate::linalg::{ball_volume, dot, norm, orthonormal_basis, solve, sphere_area, sub, Matrix};
use crate::rng::{Domain, StreamRng};

/// `W = point + span(frame)` with an importance weight relative to the
/// surface measure of the sampling body.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Plane {
    pub point: Vec<f64>,
    pub frame: [Vec<f64>; 2],
    pub weight: f64,
}

/// Where plane base points come from.
#[derive(Debug, Clone)]
pub enum PlaneSource {
    /// Every plane passes through this point.
    Through(Vec<f64>),
    /// Ray-cast from the centroid of `body` to the boundary of
    /// `body + 2η B`; weighted by `ρ^{d−1}/sin φ`.
    Boundary { body: VPolytope, eta: f64 },
}

/// Two orthonormal vectors from the span of two Gaussian vectors.
pub fn random_frame(d: usize, rng: &mut StreamRng) -> [Vec<f64>; 2] {
    loop {
        let b = orthonormal_basis(&[rng.gaussian_vec(d), rng.gaussian_vec(d)], 1e-10);
        if let [u, v] = b.as_slice() {
            return [u.clone(), v.clone()];
        }
    }
}

fn shifted(points: &[Vec<f64>], x: &[f64]) -> Vec<Vec<f64>> {
    points.iter().map(|p| sub(p, x)).collect()
}

/// Samples a base point on `∂(L₀ + 2ηB)` by ray-casting from the centroid
/// of `L₀` along a uniform direction. Returns `None` when the ray cast
/// fails (the centroid is not inside).
pub fn sample_plane(l0: &VPolytope, eta: f64, rng: &mut StreamRng) -> Result<Option<Plane>, SmoothedError> {
    if !(eta > 0.0) {
        return Err(SmoothedError::BadParameter(format!("eta must be positive, got {eta}")));
    }
    let d = l0.dim();
    let c = l0.centroid();
    let u = rng.unit_vector(d);
    let frame = random_frame(d, rng);
    let pts = l0.points();
    let dist = |t: f64| {
        let x: Vec<f64> = c.iter().zip(&u).map(|(ci, ui)| ci + t * ui).collect();
        norm(&min_norm_point(&shifted(pts, &x)))
    };
    let r = 2.0 * eta;
    if dist(0.0) > r {
        return Ok(None);
    }
    let mut lo = 0.0;
    let mut hi = pts.iter().map(|p| norm(&sub(p, &c))).fold(0.0, f64::max) + r + 1e-9;
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if dist(mid) <= r {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let t = 0.5 * (lo + hi);
    let a: Vec<f64> = c.iter().zip(&u).map(|(ci, ui)| ci + t * ui).collect();
    // Outward normal of the smooth boundary: from the nearest point of L₀.
    let q = min_norm_point(&shifted(pts, &a));
    let qn = norm(&q);
    if qn == 0.0 {
        return Ok(None);
    }
    let sin_phi = (-dot(&q, &u) / qn).abs();
    if sin_phi <= 0.0 {
        return Ok(None);
    }
    let weight = t.powi(d as i32 - 1) / sin_phi;
    Ok(Some(Plane { point: a, frame, weight }))
}

impl PlaneSource {
    pub fn dim(&self) -> usize {
        match self {
            PlaneSource::Through(p) => p.len(),
            PlaneSource::Boundary { body, .. } => body.dim(),
        }
    }

    pub fn sample(&self, rng: &mut StreamRng) -> Result<Option<Plane>, SmoothedError> {
        match self {
            PlaneSource::Through(p) => {
                Ok(Some(Plane { point: p.clone(), frame: random_frame(p.len(), rng), weight: 1.0 }))
            }
            PlaneSource::Boundary { body, eta } => sample_plane(body, *eta, rng),
        }
    }
}

/// `W ∩ P` as a polygon in frame coordinates.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Section {
    pub vertices: Vec<[f64; 2]>,
    /// The two constraints tight at each vertex.
    pub tight: Vec<(usize, usize)>,
    /// Vertices mapped back to `R^d`.
    pub points: Vec<Vec<f64>>,
}

impl Section {
    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }
}

/// Substitutes `x = a + W y` into `Ax ≤ b` and enumerates the vertices of
/// the resulting polygon by pairwise line intersection. Near-coincident
/// vertices are merged, keeping the lexicographically first pair.
pub fn plane_section(plane: &Plane, p: &HPolytope) -> Section {
    let [u, v] = &plane.frame;
    let rows: Vec<([f64; 2], f64, f64)> = p
        .a()
        .iter()
        .zip(p.b())
        .map(|(ai, &bi)| ([dot(ai, u), dot(ai, v)], bi - dot(ai, &plane.point), norm(ai)))
        .collect();
    let scale = 1.0 + plane.point.iter().map(|x| x.abs()).fold(0.0, f64::max);
    let tol = 1e-9 * scale;
    let feasible = |y: [f64; 2]| rows.iter().all(|(g, h, s)| g[0] * y[0] + g[1] * y[1] <= h + tol * s);
    let mut out = Section { vertices: Vec::new(), tight: Vec::new(), points: Vec::new() };
    for i in 0..rows.len() {
        for j in i + 1..rows.len() {
            let (gi, hi, si) = rows[i];
            let (gj, hj, sj) = rows[j];
            let det = gi[0] * gj[1] - gi[1] * gj[0];
            if det.abs() <= 1e-12 * si * sj {
                continue;
            }
            let y = [(hi * gj[1] - hj * gi[1]) / det, (gi[0] * hj - gj[0] * hi) / det];
            if !feasible(y) {
                continue;
            }
            if out.vertices.iter().any(|w| (w[0] - y[0]).abs() <= tol && (w[1] - y[1]).abs() <= tol) {
                continue;
            }
            out.vertices.push(y);
            out.tight.push((i, j));
            out.points.push((0..u.len()).map(|k| plane.point[k] + y[0] * u[k] + y[1] * v[k]).collect());
        }
    }
    out
}

/// `A_{d−2}`: half the area of the unit `(d−2)`-sphere.
pub fn half_sphere_constant(d: usize) -> f64 {
    sphere_area(d - 1) / 2.0
}

/// Contribution of one crossing at `y` of a ridge with orthonormal
/// directions `dirs`, seen from `a`.
pub fn crossing_weight(a: &[f64], y: &[f64], dirs: &[Vec<f64>]) -> f64 {
    let d = a.len();
    let r = sub(y, a);
    let rho = norm(&r);
    let mut perp = r.clone();
    for q in dirs {
        let c = dot(&r, q);
        perp.iter_mut().zip(q).for_each(|(x, qi)| *x -= c * qi);
    }
    let cos = norm(&perp) / rho;
    half_sphere_constant(d) * rho.powi(d as i32 - 2) / cos
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QuadratureEstimate {
    pub planes: usize,
    pub rejected: usize,
    /// Crossings per ridge.
    pub hit_counts: Vec<usize>,
    /// Section vertices whose tight pair is not a ridge (degenerate hits).
    pub unmatched: usize,
    pub estimate: f64,
    pub standard_error: f64,
    pub exact: f64,
    pub ratio: f64,
    pub shadow_mean: f64,
    pub effective_sample_size: f64,
}

/// Estimates `Σ_{S<T} |F_ST|` from plane crossings of the ridges of `fc`.
pub fn quadrature_perimeter_estimate(
    fc: &FacetComplex,
    source: &PlaneSource,
    planes: usize,
    seed: u64,
) -> Result<QuadratureEstimate, SmoothedError> {
    if planes == 0 {
        return Err(SmoothedError::NoSamples);
    }
    let d = fc.dim();
    if d < 3 {
        return Err(SmoothedError::BadParameter("quadrature needs d ≥ 3".into()));
    }
    let h = fc.to_hpolytope()?;
    let dirs: Vec<Vec<Vec<f64>>> = fc
        .ridges()
        .iter()
        .map(|r| {
            let p0 = &fc.points()[r.vertices[0]];
            let diffs: Vec<Vec<f64>> = r.vertices[1..].iter().map(|&k| sub(&fc.points()[k], p0)).collect();
            orthonormal_basis(&diffs, 1e-10)
        })
        .collect();
    struct One {
        value: f64,
        count: usize,
        hits: Vec<usize>,
        unmatched: usize,
        weight: Option<f64>,
    }
    let runs: Vec<One> = (0..planes)
        .into_par_iter()
        .map(|k| {
            let mut rng = StreamRng::new(seed, Domain::Plane, k as u64);
            let Some(plane) = source.sample(&mut rng)? else {
                return Ok(One { value: 0.0, count: 0, hits: vec![], unmatched: 0, weight: None });
            };
            let s = plane_section(&plane, &h);
            let mut value = 0.0;
            let mut hits = Vec::new();
            let mut unmatched = 0;
            for (&(i, j), y) in s.tight.iter().zip(&s.points) {
                match fc.adjacency()[i].iter().find(|&&(n, _)| n == j) {
                    Some(&(_, r)) => {
                        value += crossing_weight(&plane.point, y, &dirs[r]);
                        hits.push(r);
                    }
                    None => unmatched += 1,
                }
            }
            Ok(One { value, count: s.len(), hits, unmatched, weight: Some(plane.weight) })
        })
        .collect::<Result<_, SmoothedError>>()?;
    let accepted: Vec<&One> = runs.iter().filter(|o| o.weight.is_some()).collect();
    let n = accepted.len();
    if n == 0 {
        return Err(SmoothedError::NoSamples);
    }
    let mean = accepted.iter().map(|o| o.value).sum::<f64>() / n as f64;
    let var = accepted.iter().map(|o| (o.value - mean).powi(2)).sum::<f64>() / (n.max(2) - 1) as f64;
    let mut hit_counts = vec![0; fc.ridges().len()];
    accepted.iter().flat_map(|o| &o.hits).for_each(|&r| hit_counts[r] += 1);
    let ws: Vec<f64> = accepted.iter().map(|o| o.weight.unwrap()).collect();
    let ess = ws.iter().sum::<f64>().powi(2) / ws.iter().map(|w| w * w).sum::<f64>();
    let exact = codim2_perimeter(fc);
    Ok(QuadratureEstimate {
        planes,
        rejected: planes - n,
        hit_counts,
        unmatched: accepted.iter().map(|o| o.unmatched).sum(),
        estimate: mean,
        standard_error: (var / n as f64).sqrt(),
        exact,
        ratio: mean / exact,
        shadow_mean: accepted.iter().map(|o| o.count as f64).sum::<f64>() / n as f64,
        effective_sample_size: ess,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ShadowStats {
    pub samples: usize,
    pub mean: f64,
    pub standard_error: f64,
    pub max: usize,
}

/// Vertex counts of `W ∩ P` over sampled planes.
pub fn shadow_counts(p: &HPolytope, source: &PlaneSource, planes: usize, seed: u64) -> Result<Vec<usize>, SmoothedError> {
    (0..planes)
        .into_par_iter()
        .map(|k| {
            let mut rng = StreamRng::new(seed, Domain::Plane, k as u64);
            Ok(source.sample(&mut rng)?.map(|w| plane_section(&w, p).len()))
        })
        .filter_map(|r| r.transpose())
        .collect()
}

pub fn summarize_counts(counts: &[usize]) -> ShadowStats {
    let n = counts.len();
    let mean = counts.iter().sum::<usize>() as f64 / n.max(1) as f64;
    let var = counts.iter().map(|&c| (c as f64 - mean).powi(2)).sum::<f64>() / (n.max(2) - 1) as f64;
    ShadowStats {
        samples: n,
        mean,
        standard_error: (var / n.max(1) as f64).sqrt(),
        max: counts.iter().copied().max().unwrap_or(0),
    }
}

/// Surface area of `∂(L₀ + 2ηB)` as `|S^{d−1}| · E[ρ^{d−1}/sin φ]` over
/// uniform ray directions; returns `(estimate, standard error, rejected)`.
pub fn boundary_surface_estimate(
    l0: &VPolytope,
    eta: f64,
    samples: usize,
    seed: u64,
) -> Result<(f64, f64, usize), SmoothedError> {
    let ws: Vec<Option<f64>> = (0..samples)
        .into_par_iter()
        .map(|k| {
            let mut rng = StreamRng::new(seed, Domain::Plane, k as u64);
            Ok(sample_plane(l0, eta, &mut rng)?.map(|p| p.weight))
        })
        .collect::<Result<_, SmoothedError>>()?;
    let ok: Vec<f64> = ws.iter().flatten().copied().collect();
    let n = ok.len() as f64;
    let area = sphere_area(l0.dim());
    let mean = ok.iter().sum::<f64>() / n;
    let var = ok.iter().map(|w| (w - mean).powi(2)).sum::<f64>() / (n - 1.0);
    Ok((area * mean, area * (var / n).sqrt(), samples - ok.len()))
}

/// Hit statistics of random planes through `a` against the disc of
/// radius `radius` centred at `center` in the affine space spanned by the
/// orthonormal `dirs` (`d−2` of them).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DiscHits {
    pub samples: usize,
    pub hits: usize,
    pub rate: f64,
    /// Planes meeting the disc's affine hull in more than one point.
    pub multi: usize,
    /// `area · cos θ / (A_{d−2} ρ^{d−2})` at the centre.
    pub predicted: f64,
}

pub fn disc_hit_rate(
    a: &[f64],
    center: &[f64],
    dirs: &[Vec<f64>],
    radius: f64,
    samples: usize,
    seed: u64,
) -> DiscHits {
    let d = a.len();
    let k = dirs.len();
    let out: Vec<(bool, bool)> = (0..samples)
        .into_par_iter()
        .map(|s| {
            let mut rng = StreamRng::new(seed, Domain::Plane, s as u64);
            let [u, v] = random_frame(d, &mut rng);
            // a + s₁u + s₂v = center + Σ tᵢ dirᵢ.
            let m = Matrix::from_fn(d, 2 + k, |i, j| match j {
                0 => u[i],
                1 => v[i],
                _ => -dirs[j - 2][i],
            });
            let rhs = sub(center, a);
            match solve(&m, &rhs, 1e-13) {
                Some(x) => (norm(&x[2..]) <= radius, false),
                None => (false, true),
            }
        })
        .collect();
    let hits = out.iter().filter(|o| o.0).count();
    let multi = out.iter().filter(|o| o.1).count();
    let area = ball_volume(k) * radius.powi(k as i32);
    DiscHits {
        samples,
        hits,
        rate: hits as f64 / samples as f64,
        multi,
        predicted: area / crossing_weight(a, center, dirs),
    }
}

/// `√d · E|⟨x, e₁⟩|` for `x` uniform on the sphere; returns the estimate
/// and its standard error.
pub fn intersection_constant_check(d: usize, samples: usize, seed: u64) -> (f64, f64) {
    let xs: Vec<f64> = (0..samples)
        .into_par_iter()
        .map(|s| StreamRng::new(seed, Domain::MonteCarlo, s as u64).unit_vector(d)[0].abs())
        .collect();
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    let sd = (d as f64).sqrt();
    (sd * mean, sd * (var / n).sqrt())
}

/// `√d · E|x₁| = √d · 2V_{d−1}/(d V_d)`.
pub fn intersection_constant_exact(d: usize) -> f64 {
    (d as f64).sqrt() * 2.0 * ball_volume(d - 1) / (d as f64 * ball_volume(d))
}
