//! Diameter bounds from spectral gaps, compared against exact BFS
//! diameters.
//!
//! All logarithms are natural.

use std::collections::VecDeque;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::geometry::{
    facets_of_vpolytope, integer_data, vertices_of_hpolytope, FacetComplex, FacetPath, GeometryError,
    HPolytope, IntegerData,
};
use crate::linalg::{chebyshev_t, eigh, LinalgError, SymMatrix};
use crate::spectral::{SpectralBundle, SpectralError};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum BoundsError {
    #[error("graph is disconnected")]
    Disconnected,
    #[error("bound parameters must be positive (g = {g}, v_min = {v_min})")]
    NonPositive { g: f64, v_min: f64 },
    #[error("spectrum precondition violated: {0}")]
    Spectrum(String),
    #[error("offsets must be positive so the origin is interior; recenter first")]
    OriginNotInterior,
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Spectral(#[from] SpectralError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

fn eccentricity(adj: &[Vec<usize>], s: usize) -> Option<usize> {
    let mut dist = vec![usize::MAX; adj.len()];
    dist[s] = 0;
    let mut q = VecDeque::from([s]);
    let mut far = 0;
    let mut seen = 1;
    while let Some(u) = q.pop_front() {
        for &v in &adj[u] {
            if dist[v] == usize::MAX {
                dist[v] = dist[u] + 1;
                far = far.max(dist[v]);
                seen += 1;
                q.push_back(v);
            }
        }
    }
    (seen == adj.len()).then_some(far)
}

/// BFS distances from `s` (`usize::MAX` when unreachable).
pub fn bfs_distances(adj: &[Vec<usize>], s: usize) -> Vec<usize> {
    let mut dist = vec![usize::MAX; adj.len()];
    dist[s] = 0;
    let mut q = VecDeque::from([s]);
    while let Some(u) = q.pop_front() {
        for &v in &adj[u] {
            if dist[v] == usize::MAX {
                dist[v] = dist[u] + 1;
                q.push_back(v);
            }
        }
    }
    dist
}

/// Exact diameter of a connected graph given by adjacency lists.
pub fn graph_diameter(adj: &[Vec<usize>]) -> Result<usize, BoundsError> {
    if adj.is_empty() {
        return Err(BoundsError::Disconnected);
    }
    (0..adj.len())
        .into_par_iter()
        .map(|s| eccentricity(adj, s).ok_or(BoundsError::Disconnected))
        .try_reduce(|| 0, |a, b| Ok(a.max(b)))
}

pub fn facet_graph(fc: &FacetComplex) -> Vec<Vec<usize>> {
    fc.adjacency().iter().map(|a| a.iter().map(|&(n, _)| n).collect()).collect()
}

/// Diameter of the facet adjacency graph.
pub fn facet_diameter(fc: &FacetComplex) -> Result<usize, BoundsError> {
    graph_diameter(&facet_graph(fc))
}

/// Diameter of the vertex–edge graph of an H-polytope.
pub fn vertex_diameter(p: &HPolytope) -> Result<usize, BoundsError> {
    let hv = vertices_of_hpolytope(p)?;
    graph_diameter(&hv.edges(p))
}

/// `−max_i Σ_j |M_ij|`, a lower bound on the smallest eigenvalue.
pub fn gershgorin_lower(m: &SymMatrix) -> f64 {
    -m.norm_inf()
}

/// `2 log(2N / v_min²) / √g`.
pub fn chebyshev_diameter_apriori(n: usize, g: f64, v_min: f64) -> Result<f64, BoundsError> {
    if !(g > 0.0 && v_min > 0.0) {
        return Err(BoundsError::NonPositive { g, v_min });
    }
    Ok(2.0 * (2.0 * n as f64 / (v_min * v_min)).ln() / g.sqrt())
}

/// Same formula with `ln v_min` supplied directly, for lower bounds that
/// underflow.
fn apriori_from_log(n: f64, g: f64, ln_v_min: f64) -> f64 {
    2.0 * ((2.0 * n).ln() - 2.0 * ln_v_min) / g.sqrt()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChebyshevCertificate {
    /// Smallest `k` with `v_min² T_k(1+g) > N`.
    pub k: usize,
    pub g: f64,
    pub v_min: f64,
}

/// Verify that `a` has one eigenvalue `1+g > 1` and the rest in `[−1, 1]`,
/// then return the smallest `k` for which the entrywise witness
/// `v_min² T_k(1+g) > N` holds.
pub fn chebyshev_diameter_certified(a: &SymMatrix, tol: f64) -> Result<ChebyshevCertificate, BoundsError> {
    let s = eigh(a)?;
    let n = a.n();
    let top = s.max();
    let g = top - 1.0;
    if g <= tol {
        return Err(BoundsError::Spectrum(format!("top eigenvalue {top} is not above 1")));
    }
    if n >= 2 && (s.values[n - 2] > 1.0 + tol || s.values[0] < -1.0 - tol) {
        return Err(BoundsError::Spectrum(format!(
            "remaining eigenvalues span [{}, {}], outside [−1, 1]",
            s.values[0],
            s.values[n - 2]
        )));
    }
    let v_min = s.vectors[n - 1].iter().map(|x| x.abs()).fold(f64::INFINITY, f64::min);
    if v_min <= 0.0 {
        return Err(BoundsError::NonPositive { g, v_min });
    }
    let target = n as f64 / (v_min * v_min);
    let mut k = 0u32;
    while chebyshev_t(k, 1.0 + g) <= target {
        k += 1;
    }
    Ok(ChebyshevCertificate { k: k as usize, g, v_min })
}

/// `θ₀ = min over ridges of min(θ, π − θ)`.
pub fn theta_min(fc: &FacetComplex) -> f64 {
    fc.ridges()
        .iter()
        .map(|r| r.angle.min(std::f64::consts::PI - r.angle))
        .fold(std::f64::consts::FRAC_PI_2, f64::min)
}

/// Spectral data of the polar fed into the diameter bounds.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AngleBound {
    pub n: usize,
    pub theta_min: f64,
    /// `sin²(θ₀/2)`.
    pub g: f64,
    /// Smallest entry of `D^{1/2}1/‖D^{1/2}1‖`.
    pub v_min_exact: f64,
    /// `sin²θ₀/(4N^{3/2}) · min F / max F`.
    pub v_min_worst: f64,
    /// Apriori bound with the exact `v_min`.
    pub apriori_exact: f64,
    /// Apriori bound with the worst-case `v_min` (the proof's chain).
    pub bound: f64,
    pub certified: ChebyshevCertificate,
    /// Gershgorin lower bound of `D^{-1}H` versus `−csc²(θ₀/2)`.
    pub gershgorin: f64,
}

/// Diameter bounds for the facet graph of `fc` via the shifted matrix
/// `(D^{-1/2}HD^{-1/2} + c I)/c`, `c = csc²(θ₀/2)`.
pub fn angle_bound(fc: &FacetComplex) -> Result<AngleBound, BoundsError> {
    let b = SpectralBundle::build(fc)?;
    let n = b.n;
    let t0 = theta_min(fc);
    let g = (t0 / 2.0).sin().powi(2);
    let c = 1.0 / g;
    let m = b.scaled.affine(1.0 / c, 1.0);
    let certified = chebyshev_diameter_certified(&m, 1e-8)?;
    let v_min_exact = b.top_direction().iter().copied().fold(f64::INFINITY, f64::min);
    let (fmin, fmax) = fc
        .ridges()
        .iter()
        .fold((f64::INFINITY, 0.0f64), |(lo, hi), r| (lo.min(r.volume), hi.max(r.volume)));
    let v_min_worst = t0.sin().powi(2) / (4.0 * (n as f64).powf(1.5)) * fmin / fmax;
    // Row sums of the non-symmetric D^{-1}H.
    let gersh = -(0..n)
        .map(|i| (0..n).map(|j| (b.h.get(i, j) / b.d[i]).abs()).sum::<f64>())
        .fold(0.0, f64::max);
    Ok(AngleBound {
        n,
        theta_min: t0,
        g,
        v_min_exact,
        v_min_worst,
        apriori_exact: chebyshev_diameter_apriori(n, g, v_min_exact)?,
        bound: chebyshev_diameter_apriori(n, g, v_min_worst)?,
        certified,
        gershgorin: gersh,
    })
}

/// Analytic volume and angle envelopes for integral data alongside the
/// actual values of the polar's facet complex.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WorstCase {
    /// `1/(d! ‖b‖∞^{2d})`.
    pub min_ridge_lb: f64,
    /// `(√d ‖A‖∞)^d`.
    pub max_ridge_ub: f64,
    /// `2 d Δ ‖A‖∞`.
    pub csc_ub: f64,
    pub min_ridge: f64,
    pub max_ridge: f64,
    pub max_csc: f64,
    pub holds: bool,
}

pub fn worst_case_estimates(polar_fc: &FacetComplex, data: &IntegerData) -> WorstCase {
    let d = polar_fc.dim() as i32;
    let fact: f64 = (1..=d).map(f64::from).product();
    let min_ridge_lb = 1.0 / (fact * (data.norm_b as f64).powi(2 * d));
    let max_ridge_ub = ((d as f64).sqrt() * data.norm_a as f64).powi(d);
    let csc_ub = 2.0 * d as f64 * data.delta as f64 * data.norm_a as f64;
    let (min_ridge, max_ridge, max_csc) = polar_fc.ridges().iter().fold(
        (f64::INFINITY, 0.0f64, 0.0f64),
        |(lo, hi, c), r| (lo.min(r.volume), hi.max(r.volume), c.max(1.0 / r.angle.sin())),
    );
    let holds = min_ridge >= min_ridge_lb * (1.0 - 1e-12)
        && max_ridge <= max_ridge_ub * (1.0 + 1e-12)
        && max_csc <= csc_ub * (1.0 + 1e-12);
    WorstCase { min_ridge_lb, max_ridge_ub, csc_ub, min_ridge, max_ridge, max_csc, holds }
}

/// Integer-data bounds.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IntegerBound {
    pub data: IntegerData,
    /// `C d² Δ ‖A‖∞ log(m ‖A‖∞ ‖b‖∞ Δ)`; not certified.
    pub headline: f64,
    pub constant: f64,
    /// Apriori bound evaluated only from integer data: `csc θ₀ ≤ 2dΔ‖A‖∞`,
    /// ridge volumes within the analytic envelopes and `N ≤ C(m, d)`.
    pub certified: f64,
}

fn ln_binomial(m: usize, d: usize) -> f64 {
    (0..d).map(|i| ((m - i) as f64).ln() - ((i + 1) as f64).ln()).sum()
}

pub fn integer_bound(m: usize, d: usize, data: &IntegerData, constant: f64) -> IntegerBound {
    let (delta, na, nb) = (data.delta as f64, data.norm_a as f64, data.norm_b as f64);
    let headline = constant * (d * d) as f64 * delta * na * (m as f64 * na * nb * delta).ln();
    let csc_ub = 2.0 * d as f64 * delta * na;
    // sin θ₀ ≥ 1/csc_ub and sin(θ₀/2) ≥ sin(θ₀)/2.
    let ln_sin = -csc_ub.ln();
    let g = (0.5 / csc_ub).powi(2);
    let ln_fact: f64 = (1..=d).map(|i| (i as f64).ln()).sum();
    let ln_fmin = -ln_fact - 2.0 * d as f64 * nb.ln();
    let ln_fmax = d as f64 * ((d as f64).sqrt() * na).ln();
    let ln_n = ln_binomial(m, d);
    let ln_v = 2.0 * ln_sin - 4f64.ln() - 1.5 * ln_n + ln_fmin - ln_fmax;
    let certified = apriori_from_log(ln_n.exp(), g, ln_v);
    IntegerBound { data: data.clone(), headline, constant, certified }
}

/// Every bound for one H-polytope next to the exact vertex diameter.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DiameterReport {
    pub dim: usize,
    pub constraints: usize,
    /// Number of vertices of `P` (facets of the polar).
    pub n: usize,
    pub exact_diameter: usize,
    pub chebyshev_apriori: f64,
    pub chebyshev_certified: usize,
    pub angle_bound: f64,
    pub integer_bound: Option<IntegerBound>,
    pub worst_case: Option<WorstCase>,
    pub gap_used: f64,
    pub v_min_used: f64,
    pub v_min_worst: f64,
    pub theta_min: f64,
    /// Soundness failures (a bound below the exact diameter, or a broken
    /// chain of inequalities). Empty on success.
    pub violations: Vec<String>,
}

/// Vertex-diameter bounds for `P = {Ax ≤ b}` with `b > 0`. Integer-data
/// bounds are included when `A` and `b` are integral.
pub fn diameter_report(p: &HPolytope, constant: f64) -> Result<DiameterReport, BoundsError> {
    if p.b().iter().any(|&x| x <= 0.0) {
        return Err(BoundsError::OriginNotInterior);
    }
    let polar = p.polar()?;
    let fc = facets_of_vpolytope(&polar, FacetPath::General)?;
    let exact = vertex_diameter(p)?;
    let t = angle_bound(&fc)?;
    let (th11, wc) = match integer_data(p.a(), p.b()) {
        Ok(data) => {
            let wc = worst_case_estimates(&fc, &data);
            (Some(integer_bound(p.rows(), p.dim(), &data, constant)), Some(wc))
        }
        Err(GeometryError::NonIntegral { .. }) => (None, None),
        Err(e) => return Err(e.into()),
    };
    let mut violations = Vec::new();
    let mut check = |name: &str, bound: f64| {
        if bound < exact as f64 {
            violations.push(format!("{name} = {bound} < exact diameter {exact}"));
        }
    };
    check("chebyshev_certified", t.certified.k as f64);
    check("chebyshev_apriori", t.apriori_exact);
    check("angle_bound", t.bound);
    if let Some(th) = &th11 {
        check("integer_headline", th.headline);
        check("integer_certified", th.certified);
    }
    if t.certified.k as f64 > t.apriori_exact.ceil() {
        violations.push(format!("certified k {} exceeds ceil(apriori) {}", t.certified.k, t.apriori_exact.ceil()));
    }
    if let Some(w) = &wc {
        if !w.holds {
            violations.push(format!("worst-case envelopes fail: {w:?}"));
        }
    }
    Ok(DiameterReport {
        dim: p.dim(),
        constraints: p.rows(),
        n: t.n,
        exact_diameter: exact,
        chebyshev_apriori: t.apriori_exact,
        chebyshev_certified: t.certified.k,
        angle_bound: t.bound,
        integer_bound: th11,
        worst_case: wc,
        gap_used: t.g,
        v_min_used: t.v_min_exact,
        v_min_worst: t.v_min_worst,
        theta_min: t.theta_min,
        violations,
    })
}
