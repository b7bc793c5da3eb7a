use itertools::Itertools;
use serde::Serialize;

use super::SmoothedError;
use crate::geometry::{facets_of_vpolytope, hyperplane_through, FacetComplex, FacetPath, VPolytope};
use crate::linalg::{dot, norm, orthonormal_basis, sub};
use crate::rng::{Domain, StreamRng};

/// Base points `a_j` (in the unit ball), their Gaussian perturbations
/// `g_j` and the perturbed points `v_j = a_j + g_j`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SmoothedInstance {
    pub dim: usize,
    pub base: Vec<Vec<f64>>,
    pub sigma: f64,
    pub noise: Vec<Vec<f64>>,
    pub points: Vec<Vec<f64>>,
    pub seed: u64,
}

impl SmoothedInstance {
    pub fn m(&self) -> usize {
        self.base.len()
    }

    /// `K = conv(v_j)`.
    pub fn body(&self) -> Result<VPolytope, SmoothedError> {
        Ok(VPolytope::new(self.dim, self.points.clone())?)
    }

    /// `K₀ = conv(a_j)`.
    pub fn base_body(&self) -> Result<VPolytope, SmoothedError> {
        Ok(VPolytope::new(self.dim, self.base.clone())?)
    }

    pub fn facet_complex(&self) -> Result<FacetComplex, SmoothedError> {
        Ok(facets_of_vpolytope(&self.body()?, FacetPath::General)?)
    }
}

fn check_base(base: &[Vec<f64>]) -> Result<usize, SmoothedError> {
    let d = base.first().map_or(0, Vec::len);
    for (j, a) in base.iter().enumerate() {
        if a.len() != d {
            return Err(SmoothedError::Shape(format!("base point {j} has length {}, expected {d}", a.len())));
        }
        let n = norm(a);
        if n > 1.0 + 1e-12 {
            return Err(SmoothedError::BaseOutsideBall { index: j, norm: n });
        }
    }
    Ok(d)
}

/// Point `j` of trial `t` draws from stream `(t << 32) | j`.
fn perturb(base: &[Vec<f64>], sigma: f64, seed: u64, domain: Domain, trial: u64) -> Vec<Vec<f64>> {
    base.iter()
        .enumerate()
        .map(|(j, a)| {
            let mut r = StreamRng::new(seed, domain, (trial << 32) | j as u64);
            r.gaussian_vec(a.len()).into_iter().map(|z| sigma * z).collect()
        })
        .collect()
}

/// Perturbs every base point by `N(0, σ² I)`; point `j` uses its own stream.
pub fn sample_instance(base: Vec<Vec<f64>>, sigma: f64, seed: u64) -> Result<SmoothedInstance, SmoothedError> {
    sample_with_domain(base, sigma, seed, Domain::Instance)
}

fn sample_with_domain(
    base: Vec<Vec<f64>>,
    sigma: f64,
    seed: u64,
    domain: Domain,
) -> Result<SmoothedInstance, SmoothedError> {
    if !(sigma >= 0.0) {
        return Err(SmoothedError::BadSigma(sigma));
    }
    let dim = check_base(&base)?;
    let noise = perturb(&base, sigma, seed, domain, 0);
    let points = base.iter().zip(&noise).map(|(a, g)| a.iter().zip(g).map(|(x, y)| x + y).collect()).collect();
    Ok(SmoothedInstance { dim, base, sigma, noise, points, seed })
}

/// `(σ₁, σ₂)` with `σ₁ = m^e σ₂` and `σ₁² + σ₂² = σ²`.
pub fn two_stage_split(sigma: f64, m: usize, exponent: f64) -> Result<(f64, f64), SmoothedError> {
    if !(sigma > 0.0) {
        return Err(SmoothedError::BadSigma(sigma));
    }
    let ratio = (m as f64).powf(exponent);
    let sigma2 = sigma / ratio.hypot(1.0);
    Ok((ratio * sigma2, sigma2))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AssumptionReport {
    /// Largest `r` with `rB ⊂ conv(a_i : i ≠ j)` for every `j` (0 when some
    /// sub-hull misses the origin or is flat).
    pub r_best: f64,
    /// `6σ sqrt(d ln m)`.
    pub alpha: f64,
    pub satisfies_r: bool,
    pub satisfies_s: bool,
    /// `ln ε = −5d ln m`.
    pub ln_epsilon: f64,
    /// `ln` of the smallest distance from some `v_j` to the affine hull of
    /// `d` other perturbed points.
    pub ln_min_distance: f64,
    pub event_b: bool,
    pub max_noise: f64,
    pub event_c: bool,
}

/// Radius of the largest origin-centred ball inside `conv(points)`.
fn origin_ball_radius(dim: usize, points: Vec<Vec<f64>>) -> f64 {
    let Ok(p) = VPolytope::new(dim, points) else { return 0.0 };
    match facets_of_vpolytope(&p, FacetPath::General) {
        Ok(fc) => fc.origin_inradius().max(0.0),
        Err(_) => 0.0,
    }
}

/// Distance from `x` to the affine hull of `pts` (assumed `d` affinely
/// independent points in `R^d`).
fn distance_to_affine_hull(pts: &[&[f64]], x: &[f64]) -> f64 {
    if let Some((n, off)) = hyperplane_through(pts) {
        return (dot(&n, x) - off).abs();
    }
    // Degenerate subset: project onto the span of the available directions.
    let dirs: Vec<Vec<f64>> = pts[1..].iter().map(|p| sub(p, pts[0])).collect();
    let basis = orthonormal_basis(&dirs, 1e-12);
    let mut r = sub(x, pts[0]);
    for q in &basis {
        let c = dot(&r, q);
        r.iter_mut().zip(q).for_each(|(a, b)| *a -= c * b);
    }
    norm(&r)
}

pub fn check_assumptions(inst: &SmoothedInstance) -> AssumptionReport {
    let (m, d) = (inst.m(), inst.dim);
    let r_best = (0..m)
        .map(|j| {
            let pts = inst.base.iter().enumerate().filter(|&(i, _)| i != j).map(|(_, a)| a.clone()).collect();
            origin_ball_radius(d, pts)
        })
        .fold(f64::INFINITY, f64::min);
    let r_best = if r_best.is_finite() { r_best } else { 0.0 };
    let alpha = 6.0 * inst.sigma * (d as f64 * (m as f64).ln()).sqrt();
    let ln_epsilon = -5.0 * d as f64 * (m as f64).ln();
    let mut min_dist = f64::INFINITY;
    for s in (0..m).combinations(d) {
        let pts: Vec<&[f64]> = s.iter().map(|&i| inst.points[i].as_slice()).collect();
        for j in (0..m).filter(|j| !s.contains(j)) {
            min_dist = min_dist.min(distance_to_affine_hull(&pts, &inst.points[j]));
        }
    }
    let ln_min_distance = min_dist.ln();
    let max_noise = inst.noise.iter().map(|g| norm(g)).fold(0.0, f64::max);
    AssumptionReport {
        r_best,
        alpha,
        satisfies_r: r_best > 0.0,
        satisfies_s: alpha < r_best / (d * d) as f64,
        ln_epsilon,
        ln_min_distance,
        event_b: ln_min_distance >= ln_epsilon,
        max_noise,
        event_c: max_noise <= alpha,
    }
}

/// Empirical inradius distribution of `conv(a_j + g_j)` with
/// `g_j ~ N(0, σ₁² I)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RoundednessReport {
    pub trials: usize,
    /// `(q, quantile of r_in/σ₁)` for `q` in 0, 0.01, 0.05, 0.25, 0.5.
    pub quantiles: Vec<(f64, f64)>,
    /// Fraction with `r_in < σ₁ m^{−5}`.
    pub below_m5: f64,
    /// Fraction with `r_in < σ₁ m^{−4}/(d+1)`.
    pub below_m4: f64,
    /// Draws that were not full-dimensional.
    pub flat: usize,
}

pub fn roundedness_trial(
    base: &[Vec<f64>],
    sigma1: f64,
    trials: usize,
    seed: u64,
) -> Result<RoundednessReport, SmoothedError> {
    use rayon::prelude::*;
    let d = base.first().map_or(0, Vec::len);
    let m = base.len();
    if m < d + 1 {
        return Err(SmoothedError::Shape(format!("need at least {} points, got {m}", d + 1)));
    }
    if trials == 0 {
        return Err(SmoothedError::NoSamples);
    }
    let radii: Vec<Option<f64>> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let noise = perturb(base, sigma1, seed, Domain::Roundedness, t as u64);
            let pts: Vec<Vec<f64>> =
                base.iter().zip(&noise).map(|(a, g)| a.iter().zip(g).map(|(x, y)| x + y).collect()).collect();
            let k = VPolytope::new(d, pts).ok()?;
            let fc = facets_of_vpolytope(&k, FacetPath::General).ok()?;
            fc.to_hpolytope().ok()?.inradius().ok().map(|(r, _)| r)
        })
        .collect();
    let flat = radii.iter().filter(|r| r.is_none()).count();
    let mut ratios: Vec<f64> = radii.iter().map(|r| r.unwrap_or(0.0) / sigma1).collect();
    ratios.sort_by(f64::total_cmp);
    let q = |p: f64| ratios[((p * (trials - 1) as f64).round() as usize).min(trials - 1)];
    let quantiles = [0.0, 0.01, 0.05, 0.25, 0.5].iter().map(|&p| (p, q(p))).collect();
    let frac = |thr: f64| ratios.iter().filter(|&&x| x < thr).count() as f64 / trials as f64;
    let mf = m as f64;
    Ok(RoundednessReport {
        trials,
        quantiles,
        below_m5: frac(mf.powi(-5)),
        below_m4: frac(mf.powi(-4) / (d + 1) as f64),
        flat,
    })
}

/// Output of the two-stage construction: stage one perturbs with `σ₁`,
/// the result is scaled into the unit ball and becomes the base for
/// stage two with `σ₂`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TwoStage {
    pub sigma1: f64,
    pub sigma2: f64,
    pub exponent: f64,
    /// Divisor applied after stage one (2 unless a point left `2B`).
    pub shrink: f64,
    pub within_2b: bool,
    pub instance: SmoothedInstance,
}

pub fn sample_two_stage(
    base: Vec<Vec<f64>>,
    sigma: f64,
    exponent: f64,
    seed: u64,
) -> Result<TwoStage, SmoothedError> {
    let (sigma1, sigma2) = two_stage_split(sigma, base.len(), exponent)?;
    let stage1 = sample_instance(base, sigma1, seed)?;
    let max_norm = stage1.points.iter().map(|p| norm(p)).fold(0.0, f64::max);
    let within_2b = max_norm <= 2.0;
    let shrink = if within_2b { 2.0 } else { max_norm };
    let base2 = stage1.points.iter().map(|p| p.iter().map(|x| x / shrink).collect()).collect();
    let instance = sample_with_domain(base2, sigma2, seed, Domain::InstanceStage2)?;
    Ok(TwoStage { sigma1, sigma2, exponent, shrink, within_2b, instance })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::generators::{cross_polytope, random_sphere};

    #[test]
    fn zero_sigma_keeps_base() {
        let base = random_sphere(10, 3, 1).points().to_vec();
        let inst = sample_instance(base.clone(), 0.0, 4).unwrap();
        assert_eq!(inst.points, base);
        let rep = check_assumptions(&inst);
        assert!(rep.event_c);
        assert_eq!(rep.alpha, 0.0);
    }

    #[test]
    fn noise_is_recorded() {
        let base = random_sphere(10, 3, 1).points().to_vec();
        let inst = sample_instance(base, 0.1, 4).unwrap();
        for j in 0..10 {
            for k in 0..3 {
                assert_eq!(inst.base[j][k] + inst.noise[j][k], inst.points[j][k]);
            }
        }
        let other = sample_instance(inst.base.clone(), 0.1, 5).unwrap();
        assert_ne!(inst.points, other.points);
    }

    #[test]
    fn base_outside_ball_rejected() {
        let r = sample_instance(vec![vec![1.5, 0.0], vec![0.0, 1.0], vec![-1.0, 0.0]], 0.1, 0);
        assert!(matches!(r, Err(SmoothedError::BaseOutsideBall { index: 0, .. })));
    }

    #[test]
    fn per_coordinate_variance() {
        let base = vec![vec![0.0; 4]; 25_000];
        let sigma = 0.3;
        let inst = sample_instance(base, sigma, 11).unwrap();
        let xs: Vec<f64> = inst.noise.iter().flatten().copied().collect();
        let n = xs.len() as f64;
        let var = xs.iter().map(|x| x * x).sum::<f64>() / n;
        // Var of the estimator of σ² is 2σ⁴/n.
        let se = (2.0 * sigma.powi(4) / n).sqrt();
        assert!((var - sigma * sigma).abs() < 4.0 * se, "var {var}");
    }

    #[test]
    fn split_examples() {
        let (s1, s2) = two_stage_split(1.0, 2, 1.0).unwrap();
        assert!((s2 - 1.0 / 5f64.sqrt()).abs() < 1e-15);
        assert!((s1 - 2.0 * s2).abs() < 1e-15);
        let (a, b) = two_stage_split(0.7, 30, 0.0).unwrap();
        assert!((a - 0.7 / 2f64.sqrt()).abs() < 1e-15 && a == b);
        for (sigma, m, e) in [(0.1, 30, 8.0), (0.5, 7, 2.5), (1e-3, 100, 1.0)] {
            let (s1, s2) = two_stage_split(sigma, m, e).unwrap();
            assert!(((s1 * s1 + s2 * s2).sqrt() - sigma).abs() <= 1e-15 * sigma.max(1.0));
        }
        assert!(two_stage_split(0.0, 3, 1.0).is_err());
    }

    #[test]
    fn cross_polytope_subhulls() {
        let base = cross_polytope(3).points().to_vec();
        let inst = sample_instance(base, 0.0, 0).unwrap();
        let rep = check_assumptions(&inst);
        // Removing e1 leaves a square pyramid whose base ±e2, ±e3 passes
        // through the origin, so no origin-centred ball fits; the sub-hull
        // is still full-dimensional with a positive Chebyshev inradius.
        assert_eq!(rep.r_best, 0.0);
        assert!(!rep.satisfies_r);
        let sub: Vec<Vec<f64>> = inst.base[1..].to_vec();
        let fc = facets_of_vpolytope(&VPolytope::new(3, sub).unwrap(), FacetPath::General).unwrap();
        let (r, _) = fc.to_hpolytope().unwrap().inradius().unwrap();
        assert!(r > 0.1);
    }

    #[test]
    fn alpha_formula() {
        let base = random_sphere(10, 3, 2).points().to_vec();
        let rep = check_assumptions(&sample_instance(base, 0.1, 0).unwrap());
        assert!((rep.alpha - 0.6 * (3.0 * 10f64.ln()).sqrt()).abs() < 1e-12);
        assert!((rep.alpha - 1.577).abs() < 1e-3);
        assert!((rep.ln_epsilon + 15.0 * 10f64.ln()).abs() < 1e-12);
        assert!(rep.event_b);
    }

    #[test]
    fn roundedness_of_simplex_draws() {
        let base = vec![vec![0.0; 3]; 4];
        let rep = roundedness_trial(&base, 0.5, 200, 3).unwrap();
        assert_eq!(rep.flat, 0);
        assert!(rep.quantiles[0].1 > 0.0);
        // At zero base the distribution of r_in/σ₁ does not depend on σ₁.
        let rep2 = roundedness_trial(&base, 2.0, 200, 3).unwrap();
        for (a, b) in rep.quantiles.iter().zip(&rep2.quantiles) {
            assert!((a.1 - b.1).abs() < 1e-6 * a.1.max(1.0));
        }
    }

    #[test]
    fn two_stage_is_in_ball() {
        let base = random_sphere(12, 3, 8).points().to_vec();
        let ts = sample_two_stage(base, 0.1, 1.0, 5).unwrap();
        assert!(ts.instance.base.iter().all(|a| norm(a) <= 1.0 + 1e-12));
        assert!((ts.sigma1.hypot(ts.sigma2) - 0.1).abs() < 1e-15);
    }
}
