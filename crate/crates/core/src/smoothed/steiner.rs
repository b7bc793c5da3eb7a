//! Steiner polynomial `Vol(K + εB) = Σ_j c_j ε^j` from the facet complex,
//! checked against Monte Carlo volumes of the parallel body.
//!
//! `c_0 = Vol(K)`, `c_1 = Σ_S |F_S|`, `c_2 = Σ_{S<T} |F_ST| θ_ST / 2` and
//! `c_d = Vol(B)`. In `d = 3` these are all the coefficients.

use rayon::prelude::*;
use serde::Serialize;

use super::SmoothedError;
use crate::geometry::{distance_to_hull, FacetComplex};
use crate::linalg::{ball_volume, dot, solve, Matrix};
use crate::rng::{Domain, StreamRng};
use crate::tolerances::LOG_CONCAVITY;

const CHUNK: usize = 1 << 16;

/// Coefficients `c_0, c_1, c_2` and `c_d` of the Steiner polynomial.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SteinerCoefficients {
    pub dim: usize,
    pub volume: f64,
    pub surface: f64,
    /// `Σ_{S<T} |F_ST| θ_ST / 2`.
    pub mean_width_term: f64,
    pub ball: f64,
}

impl SteinerCoefficients {
    pub fn of(fc: &FacetComplex) -> Self {
        Self {
            dim: fc.dim(),
            volume: fc.volume(),
            surface: fc.surface_area(),
            mean_width_term: fc.angle_weighted_ridge_sum() / 2.0,
            ball: ball_volume(fc.dim()),
        }
    }

    /// The full polynomial in `d = 3`.
    pub fn volume_at(&self, eps: f64) -> Option<f64> {
        (self.dim == 3).then(|| self.volume + eps * (self.surface + eps * (self.mean_width_term + eps * self.ball)))
    }

    /// `W_j = c_j / C(3, j)` in `d = 3`.
    pub fn quermass(&self) -> Option<[f64; 4]> {
        (self.dim == 3).then(|| [self.volume, self.surface / 3.0, self.mean_width_term / 3.0, self.ball])
    }
}

/// Monte Carlo volume of `K + εB` from uniform points in the padded
/// bounding box; returns `(estimate, standard error)`.
pub fn parallel_body_volume(fc: &FacetComplex, eps: f64, points: usize, seed: u64) -> (f64, f64) {
    let d = fc.dim();
    let pts = fc.points();
    let lo: Vec<f64> = (0..d).map(|k| pts.iter().map(|p| p[k]).fold(f64::INFINITY, f64::min) - eps).collect();
    let hi: Vec<f64> = (0..d).map(|k| pts.iter().map(|p| p[k]).fold(f64::NEG_INFINITY, f64::max) + eps).collect();
    let box_volume: f64 = lo.iter().zip(&hi).map(|(a, b)| b - a).product();
    let facets = fc.facets();
    let inside = |x: &[f64]| -> bool {
        let mut worst = f64::NEG_INFINITY;
        let mut violated = 0;
        let mut which = 0;
        for (i, f) in facets.iter().enumerate() {
            let v = dot(&f.normal, x) - f.offset;
            if v > 0.0 {
                violated += 1;
                which = i;
            }
            worst = worst.max(v);
        }
        if worst <= 0.0 {
            return true;
        }
        if worst > eps {
            return false;
        }
        if violated == 1 {
            // The projection onto the single violated facet plane is the
            // nearest point when it lands in K.
            let f = &facets[which];
            let p: Vec<f64> = x.iter().zip(&f.normal).map(|(xi, ni)| xi - worst * ni).collect();
            if facets.iter().all(|g| dot(&g.normal, &p) - g.offset <= 1e-12) {
                return true;
            }
        }
        distance_to_hull(pts, x) <= eps
    };
    let chunks = points.div_ceil(CHUNK);
    let hits: usize = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = StreamRng::new(seed, Domain::MonteCarlo, c as u64);
            let n = CHUNK.min(points - c * CHUNK);
            let mut x = vec![0.0; d];
            let mut count = 0;
            for _ in 0..n {
                for k in 0..d {
                    x[k] = lo[k] + (hi[k] - lo[k]) * rng.uniform();
                }
                count += inside(&x) as usize;
            }
            count
        })
        .sum();
    let p = hits as f64 / points as f64;
    (box_volume * p, box_volume * (p * (1.0 - p) / points as f64).sqrt())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SteinerRow {
    pub eps: f64,
    pub polynomial: Option<f64>,
    pub monte_carlo: f64,
    pub standard_error: f64,
    /// `(monte_carlo − polynomial) / standard_error`.
    pub z: Option<f64>,
}

/// Weighted least-squares estimates of `c_1 .. c_{d−1}` with `c_0` and
/// `c_d` held at their exact values.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SteinerFit {
    pub coefficients: Vec<f64>,
    pub standard_errors: Vec<f64>,
    /// `(c_1 − Σ|F_S|) / se_1`.
    pub z_surface: f64,
    /// `(c_2 − Σ|F_ST|θ_ST/2) / se_2`; `None` in `d = 2`.
    pub z_ridge: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SteinerReport {
    pub coefficients: SteinerCoefficients,
    pub rows: Vec<SteinerRow>,
    pub fit: Option<SteinerFit>,
    /// Set when the fit was requested but the design was singular.
    pub ill_conditioned: bool,
}

pub fn steiner_validate(
    fc: &FacetComplex,
    eps_list: &[f64],
    mc_points: usize,
    seed: u64,
) -> Result<SteinerReport, SmoothedError> {
    if mc_points == 0 || eps_list.is_empty() {
        return Err(SmoothedError::NoSamples);
    }
    let coefficients = SteinerCoefficients::of(fc);
    let rows: Vec<SteinerRow> = eps_list
        .iter()
        .enumerate()
        .map(|(i, &eps)| {
            let (mc, se) = parallel_body_volume(fc, eps, mc_points, seed.wrapping_add(i as u64));
            let polynomial = coefficients.volume_at(eps);
            let z = polynomial.map(|p| if se > 0.0 { (mc - p) / se } else { 0.0 });
            SteinerRow { eps, polynomial, monte_carlo: mc, standard_error: se, z }
        })
        .collect();
    let d = fc.dim();
    let k = d - 1;
    let usable: Vec<&SteinerRow> = rows.iter().filter(|r| r.eps > 0.0 && r.standard_error > 0.0).collect();
    let (fit, ill_conditioned) = if usable.len() >= k {
        match fit_coefficients(&coefficients, &usable, k) {
            Some(f) => (Some(f), false),
            None => (None, true),
        }
    } else {
        (None, false)
    };
    Ok(SteinerReport { coefficients, rows, fit, ill_conditioned })
}

fn fit_coefficients(c: &SteinerCoefficients, rows: &[&SteinerRow], k: usize) -> Option<SteinerFit> {
    let d = c.dim as i32;
    let mut xtx = Matrix::zeros(k, k);
    let mut xty = vec![0.0; k];
    for r in rows {
        let w = 1.0 / (r.standard_error * r.standard_error);
        let y = r.monte_carlo - c.volume - c.ball * r.eps.powi(d);
        let x: Vec<f64> = (1..=k).map(|j| r.eps.powi(j as i32)).collect();
        for a in 0..k {
            xty[a] += w * x[a] * y;
            for b in 0..k {
                xtx[(a, b)] += w * x[a] * x[b];
            }
        }
    }
    let coefficients = solve(&xtx, &xty, 1e-14)?;
    let standard_errors: Vec<f64> = (0..k)
        .map(|j| {
            let mut e = vec![0.0; k];
            e[j] = 1.0;
            solve(&xtx, &e, 1e-14).map(|col| col[j].max(0.0).sqrt())
        })
        .collect::<Option<_>>()?;
    let z_surface = (coefficients[0] - c.surface) / standard_errors[0];
    let z_ridge = (k >= 2).then(|| (coefficients[1] - c.mean_width_term) / standard_errors[1]);
    Some(SteinerFit { coefficients, standard_errors, z_surface, z_ridge })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LogConcavity {
    pub values: Vec<f64>,
    /// `W_j² / (W_{j−1} W_{j+1})` for interior `j`.
    pub ratios: Vec<f64>,
    pub passed: bool,
}

/// `W_j² ≥ W_{j−1} W_{j+1}` up to the relative tolerance.
pub fn af_logconcavity_check(w: &[f64]) -> LogConcavity {
    let ratios: Vec<f64> = (1..w.len().saturating_sub(1)).map(|j| w[j] * w[j] / (w[j - 1] * w[j + 1])).collect();
    let passed = ratios.iter().all(|&r| r >= 1.0 - LOG_CONCAVITY);
    LogConcavity { values: w.to_vec(), ratios, passed }
}
