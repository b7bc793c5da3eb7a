//! Formal Hessian, degree matrix and facet Laplacian of a polytope, with
//! certificates for their spectral structure.
//!
//! For facets `i ≠ j` sharing a ridge of volume `F_ij` at normal angle
//! `θ_ij`:
//!
//! * `H_ij = F_ij csc θ_ij`, `H_ii = −Σ_k F_ik cot θ_ik`
//! * `D_ii = Σ_k F_ik tan(θ_ik / 2)`
//! * `L_ij = −F_ij csc θ_ij`, `L_ii = −Σ_{k≠i} L_ik`
//!
//! so that `H = −L + D`. `H` has exactly one positive eigenvalue and
//! `D^{-1/2} H D^{-1/2}` has top eigenvalue 1 with eigenvector `D^{1/2}1`.

use serde::Serialize;
use thiserror::Error;

use crate::geometry::{facet_complex_of_hpolytope, FacetComplex, GeometryError, HPolytope};
use crate::linalg::{dot, eigh, norm, solve_lp, LinalgError, LinearProgram, LpOutcome, Sense, Spectrum, SymMatrix};
use crate::rng::{Domain, StreamRng};
use crate::tolerances::{Tolerances, ANGLE, MIN_DEGREE, TILDE_EIGENVALUE};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SpectralError {
    #[error("ridge between facets {0} and {1} has angle {2} too close to 0 or π")]
    DegenerateAngle(usize, usize, f64),
    #[error("degree of facet {facet} is {value:e}; the facet graph is degenerate")]
    SmallDegree { facet: usize, value: f64 },
    #[error("offsets must be positive (origin interior); constraint {0} has b = {1}")]
    NonPositiveOffset(usize, f64),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

fn checked_angle(fc: &FacetComplex, r: usize) -> Result<f64, SpectralError> {
    let ridge = &fc.ridges()[r];
    let t = ridge.angle;
    if !(t > ANGLE && t < std::f64::consts::PI - ANGLE) {
        return Err(SpectralError::DegenerateAngle(ridge.facets.0, ridge.facets.1, t));
    }
    Ok(t)
}

/// The formal Hessian `H(K)`.
pub fn build_hessian(fc: &FacetComplex) -> Result<SymMatrix, SpectralError> {
    let n = fc.n_facets();
    let mut h = SymMatrix::zeros(n);
    let mut diag = vec![0.0; n];
    for (r, ridge) in fc.ridges().iter().enumerate() {
        let t = checked_angle(fc, r)?;
        let (i, j) = ridge.facets;
        h.set(i, j, ridge.volume / t.sin());
        let c = ridge.volume / t.tan();
        diag[i] -= c;
        diag[j] -= c;
    }
    for (i, v) in diag.into_iter().enumerate() {
        h.set(i, i, v);
    }
    Ok(h)
}

/// Diagonal of `D(K)`.
pub fn build_degree(fc: &FacetComplex) -> Result<Vec<f64>, SpectralError> {
    let mut d = vec![0.0; fc.n_facets()];
    for (r, ridge) in fc.ridges().iter().enumerate() {
        let t = checked_angle(fc, r)?;
        let w = ridge.volume * (t / 2.0).tan();
        d[ridge.facets.0] += w;
        d[ridge.facets.1] += w;
    }
    Ok(d)
}

/// The weighted facet Laplacian; rows sum to zero exactly.
pub fn build_laplacian(fc: &FacetComplex) -> Result<SymMatrix, SpectralError> {
    let n = fc.n_facets();
    let mut l = SymMatrix::zeros(n);
    for (r, ridge) in fc.ridges().iter().enumerate() {
        let t = checked_angle(fc, r)?;
        let (i, j) = ridge.facets;
        l.set(i, j, -ridge.volume / t.sin());
    }
    for i in 0..n {
        let s: f64 = (0..n).filter(|&j| j != i).map(|j| l.get(i, j)).sum();
        l.set(i, i, -s);
    }
    Ok(l)
}

/// `H`, `D`, `L`, the scaled Hessian and their spectra.
#[derive(Debug, Clone)]
pub struct SpectralBundle {
    pub n: usize,
    pub h: SymMatrix,
    pub d: Vec<f64>,
    pub l: SymMatrix,
    /// `D^{-1/2} H D^{-1/2}`.
    pub scaled: SymMatrix,
    pub spectrum_h: Spectrum,
    pub spectrum_scaled: Spectrum,
}

impl SpectralBundle {
    pub fn build(fc: &FacetComplex) -> Result<Self, SpectralError> {
        let h = build_hessian(fc)?;
        let d = build_degree(fc)?;
        let l = build_laplacian(fc)?;
        let inv_sqrt = inv_sqrt_degree(&d)?;
        let scaled = h.congruence_diag(&inv_sqrt);
        Ok(Self {
            n: fc.n_facets(),
            spectrum_h: eigh(&h)?,
            spectrum_scaled: eigh(&scaled)?,
            h,
            d,
            l,
            scaled,
        })
    }

    /// `D^{1/2}1 / ‖D^{1/2}1‖`.
    pub fn top_direction(&self) -> Vec<f64> {
        let w: Vec<f64> = self.d.iter().map(|x| x.sqrt()).collect();
        let n = norm(&w);
        w.iter().map(|x| x / n).collect()
    }

    /// Largest entrywise deviation of `H + L − diag(D)`.
    pub fn identity_defect(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for i in 0..self.n {
            for j in 0..self.n {
                let dij = if i == j { self.d[i] } else { 0.0 };
                worst = worst.max((self.h.get(i, j) + self.l.get(i, j) - dij).abs());
            }
        }
        worst
    }
}

pub(crate) fn inv_sqrt_degree(d: &[f64]) -> Result<Vec<f64>, SpectralError> {
    d.iter()
        .enumerate()
        .map(|(i, &x)| {
            if x < MIN_DEGREE {
                Err(SpectralError::SmallDegree { facet: i, value: x })
            } else {
                Ok(1.0 / x.sqrt())
            }
        })
        .collect()
}

/// Outcome of the one-positive-eigenvalue certification.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GapCertificate {
    pub n: usize,
    pub top_eigenvalue: f64,
    pub second_eigenvalue: f64,
    /// `‖S w − w‖∞` for `S` the scaled Hessian and `w = D^{1/2}1/‖D^{1/2}1‖`.
    pub top_vector_residual: f64,
    /// `1 − |⟨v_top, w⟩|`.
    pub top_vector_misalignment: f64,
    /// Eigenvalues of `H` above `ε_pos = positive_eigenvalue·‖H‖∞`.
    pub positive_count: usize,
    pub eigensolver_residual: f64,
    pub passed: bool,
    /// Ascending spectrum of the scaled Hessian.
    pub spectrum: Vec<f64>,
}

pub fn certify_bundle(b: &SpectralBundle, tol: &Tolerances) -> GapCertificate {
    let s = &b.spectrum_scaled;
    let n = b.n;
    let top = s.max();
    let second = if n >= 2 { s.values[n - 2] } else { f64::NEG_INFINITY };
    let w = b.top_direction();
    let sw = b.scaled.mul_vec(&w);
    let residual = sw.iter().zip(&w).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    let misalignment = 1.0 - dot(&s.vectors[n - 1], &w).abs();
    let eps_pos = tol.positive_eigenvalue * b.h.norm_inf();
    let positive_count = b.spectrum_h.values.iter().filter(|&&x| x > eps_pos).count();
    let passed = (top - 1.0).abs() <= tol.top_eigenvalue
        && second <= tol.top_eigenvalue
        && positive_count == 1
        && residual <= tol.top_vector
        && misalignment <= tol.top_vector;
    GapCertificate {
        n,
        top_eigenvalue: top,
        second_eigenvalue: second,
        top_vector_residual: residual,
        top_vector_misalignment: misalignment,
        positive_count,
        eigensolver_residual: s.residual.max(b.spectrum_h.residual),
        passed,
        spectrum: s.values.clone(),
    }
}

/// Certify that `H` has exactly one positive eigenvalue and that the
/// scaled Hessian has top pair `(1, D^{1/2}1)` with the rest `≤ 0`.
pub fn certify_gap(fc: &FacetComplex, tol: &Tolerances) -> Result<GapCertificate, SpectralError> {
    Ok(certify_bundle(&SpectralBundle::build(fc)?, tol))
}

/// `R^{1/2} H R^{1/2}` with `R = diag(h_i/|F_i|)`, `h_i` the facet offsets.
pub fn tilde_hessian(fc: &FacetComplex) -> Result<SymMatrix, SpectralError> {
    let h = build_hessian(fc)?;
    let r: Vec<f64> = fc
        .facets()
        .iter()
        .enumerate()
        .map(|(i, f)| {
            if f.offset <= 0.0 {
                Err(SpectralError::NonPositiveOffset(i, f.offset))
            } else {
                Ok((f.offset / f.volume).sqrt())
            }
        })
        .collect::<Result<_, _>>()?;
    Ok(h.congruence_diag(&r))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum TildeCheck {
    Checked { top: f64, expected: f64, positive_count: usize, passed: bool },
    /// The identity is stated for simple polytopes only.
    SkippedNotSimple { top: f64, positive_count: usize },
}

/// Top eigenvalue of `H̃` for an H-polytope with the origin inside; checked
/// against `d − 1` when every vertex lies on exactly `d` facets.
pub fn tilde_hessian_check(p: &HPolytope) -> Result<TildeCheck, SpectralError> {
    if let Some(i) = p.b().iter().position(|&b| b <= 0.0) {
        return Err(SpectralError::NonPositiveOffset(i, p.b()[i]));
    }
    let (fc, hv) = facet_complex_of_hpolytope(p)?;
    let ht = tilde_hessian(&fc)?;
    let s = eigh(&ht)?;
    let top = s.max();
    let eps = 1e-8 * ht.norm_inf();
    let positive_count = s.values.iter().filter(|&&x| x > eps).count();
    let d = p.dim();
    Ok(if hv.is_simple(d) {
        let expected = (d - 1) as f64;
        Checked {
            top,
            expected,
            positive_count,
            passed: (top - expected).abs() <= TILDE_EIGENVALUE && positive_count == 1,
        }
    } else {
        SkippedNotSimple { top, positive_count }
    })
}

use TildeCheck::{Checked, SkippedNotSimple};

/// For each constraint, the largest slack `t` such that some point makes it
/// tight while every other constraint has normalized slack at least `t`.
/// The system is minimal iff all values are positive.
pub fn minimality_slacks(p: &HPolytope) -> Result<Vec<f64>, SpectralError> {
    let d = p.dim();
    let norms: Vec<f64> = p.a().iter().map(|r| norm(r)).collect();
    let mut out = Vec::with_capacity(p.rows());
    for i in 0..p.rows() {
        let mut a = Vec::new();
        let mut b = Vec::new();
        for j in 0..p.rows() {
            let row: Vec<f64> = p.a()[j].iter().map(|x| x / norms[j]).collect();
            let bj = p.b()[j] / norms[j];
            if j == i {
                a.push(row.iter().copied().chain([0.0]).collect());
                b.push(bj);
                a.push(row.iter().map(|x| -x).chain([0.0]).collect());
                b.push(-bj);
            } else {
                a.push(row.iter().copied().chain([1.0]).collect());
                b.push(bj);
            }
        }
        // Cap t so the LP stays bounded for single-constraint systems.
        let mut cap = vec![0.0; d + 1];
        cap[d] = 1.0;
        a.push(cap);
        b.push(1e6);
        let mut c = vec![0.0; d + 1];
        c[d] = 1.0;
        let t = match solve_lp(&LinearProgram::new(a, b, c, Sense::Maximize)?)? {
            LpOutcome::Optimal(s) => s.value,
            _ => f64::NEG_INFINITY,
        };
        out.push(t);
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProbeLevel {
    pub delta: f64,
    pub trials: usize,
    pub simple_fraction: f64,
    /// Largest `|H̃(c) − H̃(c + δu)|` entry over the trials.
    pub max_drift: f64,
    /// Largest `|top eigenvalue of H̃(c + δu) − (d−1)|` over simple trials.
    pub max_top_deviation: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProbeReport {
    pub levels: Vec<ProbeLevel>,
    /// Drift does not grow as δ halves (within 1e-12 slack).
    pub drift_monotone: bool,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ProbeError {
    #[error("constraint {0} is redundant (the system is not minimal)")]
    NotMinimal(usize),
    #[error(transparent)]
    Spectral(#[from] SpectralError),
}

/// Perturb offsets `c ↦ c + δu` with `u` uniform in `[0,1)^m` over a
/// δ-halving ladder, recording how often the result is simple and how far
/// `H̃` moves.
pub fn perturbation_continuity_probe(
    p: &HPolytope,
    delta: f64,
    levels: usize,
    trials: usize,
    seed: u64,
) -> Result<ProbeReport, ProbeError> {
    let slacks = minimality_slacks(p)?;
    if let Some(i) = slacks.iter().position(|&t| t <= 1e-9) {
        return Err(ProbeError::NotMinimal(i));
    }
    let base_fc = facet_complex_of_hpolytope(p).map_err(SpectralError::from)?.0;
    let base = tilde_hessian(&base_fc)?;
    let n = p.rows();
    let d = p.dim();
    let mut out = Vec::with_capacity(levels);
    for level in 0..levels {
        let dl = delta / 2f64.powi(level as i32);
        let mut simple = 0;
        let mut drift: f64 = 0.0;
        let mut top_dev: f64 = 0.0;
        for t in 0..trials {
            // The same u across levels isolates the effect of δ.
            let mut r = StreamRng::new(seed, Domain::Probe, t as u64);
            let u: Vec<f64> = (0..n).map(|_| r.uniform()).collect();
            let b: Vec<f64> = p.b().iter().zip(&u).map(|(b, u)| b + dl * u).collect();
            let q = HPolytope::new(p.a().to_vec(), b).map_err(SpectralError::from)?;
            let (fc, hv) = facet_complex_of_hpolytope(&q).map_err(SpectralError::from)?;
            let ht = tilde_hessian(&fc)?;
            for i in 0..n {
                for j in 0..n {
                    drift = drift.max((ht.get(i, j) - base.get(i, j)).abs());
                }
            }
            if hv.is_simple(d) {
                simple += 1;
                let top = eigh(&ht).map_err(SpectralError::from)?.max();
                top_dev = top_dev.max((top - (d - 1) as f64).abs());
            }
        }
        out.push(ProbeLevel {
            delta: dl,
            trials,
            simple_fraction: if trials == 0 { 1.0 } else { simple as f64 / trials as f64 },
            max_drift: drift,
            max_top_deviation: top_dev,
        });
    }
    let drift_monotone = out.windows(2).all(|w| w[1].max_drift <= w[0].max_drift + 1e-12);
    Ok(ProbeReport { levels: out, drift_monotone })
}
