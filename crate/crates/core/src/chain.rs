//! Continuous-time Markov chain on facets with generator `Q = −D^{-1}L`.
//!
//! Per facet `S`, summing over neighbours `T`:
//!
//! * `π(S) = Σ F_ST tan(θ_ST/2)` (the degree, stationary up to scale)
//! * `χ₂(S) = Σ F_ST θ_ST`
//! * `δ(S) = Σ F_ST csc θ_ST`
//!
//! The chain leaves `S` at rate `δ(S)/π(S)` and jumps to `T` with
//! probability proportional to `F_ST csc θ_ST`.

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::bounds::{bfs_distances, facet_graph};
use crate::geometry::FacetComplex;
use crate::linalg::{eigh, norm_inf, uniformized_exp, LinalgError, Matrix, Spectrum, SymMatrix};
use crate::rng::{Domain, StreamRng};
use crate::spectral::{inv_sqrt_degree, SpectralBundle, SpectralError};
use crate::tolerances::{ANGLE, CHAIN_GAP, GENERATOR_ROW_SUM, STATIONARITY};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ChainError {
    #[error("ridge between facets {0} and {1} has angle {2} too close to 0 or π")]
    DegenerateAngle(usize, usize, f64),
    #[error("phi must lie in (0, 1), got {0}")]
    BadPhi(f64),
    #[error("trial count must be positive")]
    NoTrials,
    #[error("no trajectory stayed under the jump cutoff; try at least {suggested_trials} trials")]
    EmptyComponent { suggested_trials: usize },
    #[error("start distribution is invalid: {0}")]
    BadDistribution(String),
    #[error(transparent)]
    Spectral(#[from] SpectralError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

#[derive(Debug, Clone, Serialize)]
pub struct ChainModel {
    pub n: usize,
    #[serde(skip)]
    pub q: Matrix,
    pub pi: Vec<f64>,
    pub pi_bar: Vec<f64>,
    pub chi2: Vec<f64>,
    pub delta: Vec<f64>,
    /// `Σδ / Σπ`, the stationary jump rate.
    pub j_avg: f64,
    /// `(neighbour, F csc θ)` per facet.
    #[serde(skip)]
    pub jumps: Vec<Vec<(usize, f64)>>,
    #[serde(skip)]
    pub graph: Vec<Vec<usize>>,
}

impl ChainModel {
    pub fn exit_rate(&self, s: usize) -> f64 {
        self.delta[s] / self.pi[s]
    }

    pub fn pi_bar_min(&self) -> f64 {
        self.pi_bar.iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// `Σ_S χ₂(S)`, which counts each ridge twice.
    pub fn chi2_total(&self) -> f64 {
        self.chi2.iter().sum()
    }

    /// `Σ_{S<T} F_ST θ_ST`.
    pub fn chi2_pairs(&self) -> f64 {
        self.chi2_total() / 2.0
    }

    /// `max_i |Σ_j Q_ij|`.
    pub fn row_sum_defect(&self) -> f64 {
        (0..self.n).map(|i| self.q.row(i).iter().sum::<f64>().abs()).fold(0.0, f64::max)
    }

    /// `‖π̄Q‖∞ / ‖Q‖∞`.
    pub fn stationarity_defect(&self) -> f64 {
        norm_inf(&self.q.vec_mul(&self.pi_bar)) / self.q.norm_inf()
    }

    /// `Σ_S π̄(S) δ(S)/π(S)`, equal to `j_avg`.
    pub fn stationary_jump_rate(&self) -> f64 {
        (0..self.n).map(|s| self.pi_bar[s] * self.exit_rate(s)).sum()
    }

    pub fn distribution_at(&self, p: &[f64], t: f64) -> Vec<f64> {
        uniformized_exp(&self.q, p, t)
    }
}

pub fn build_chain(fc: &FacetComplex) -> Result<ChainModel, ChainError> {
    let n = fc.n_facets();
    let mut pi = vec![0.0; n];
    let mut chi2 = vec![0.0; n];
    let mut delta = vec![0.0; n];
    let mut jumps = vec![Vec::new(); n];
    for r in fc.ridges() {
        let t = r.angle;
        let (i, j) = r.facets;
        if !(t > ANGLE && t < std::f64::consts::PI - ANGLE) {
            return Err(ChainError::DegenerateAngle(i, j, t));
        }
        let w = r.volume / t.sin();
        for (a, b) in [(i, j), (j, i)] {
            pi[a] += r.volume * (t / 2.0).tan();
            chi2[a] += r.volume * t;
            delta[a] += w;
            jumps[a].push((b, w));
        }
    }
    for row in &mut jumps {
        row.sort_by_key(|&(b, _)| b);
    }
    let mut q = Matrix::zeros(n, n);
    for s in 0..n {
        for &(t, w) in &jumps[s] {
            q[(s, t)] = w / pi[s];
        }
        // Exact zero row sums: the diagonal is the negated off-diagonal sum.
        q[(s, s)] = -jumps[s].iter().map(|&(t, _)| q[(s, t)]).sum::<f64>();
    }
    let total: f64 = pi.iter().sum();
    let pi_bar = pi.iter().map(|x| x / total).collect();
    let j_avg = delta.iter().sum::<f64>() / total;
    Ok(ChainModel { n, q, pi, pi_bar, chi2, delta, j_avg, jumps, graph: facet_graph(fc) })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChainGap {
    /// Ascending eigenvalues of `D^{-1/2} L D^{-1/2}`.
    pub values: Vec<f64>,
    pub gap: f64,
    pub zero_count: usize,
    pub passed: bool,
}

/// Spectrum of `D^{-1/2} L D^{-1/2}` (similar to `−Q`): one zero, the rest
/// at least 1.
pub fn spectral_gap_of_chain(b: &SpectralBundle) -> Result<ChainGap, ChainError> {
    let s = inv_sqrt_degree(&b.d)?;
    let eig = eigh(&b.l.congruence_diag(&s))?;
    let values = eig.values;
    let zero_count = values.iter().filter(|v| v.abs() <= CHAIN_GAP).count();
    let gap = values.get(1).copied().unwrap_or(f64::INFINITY);
    let passed = zero_count == 1 && gap >= 1.0 - CHAIN_GAP;
    Ok(ChainGap { values, gap, zero_count, passed })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Trajectory {
    pub facets: Vec<usize>,
    /// Holding times of every state left before the horizon.
    pub holding: Vec<f64>,
    pub total_time: f64,
    pub jumps: usize,
}

impl Trajectory {
    pub fn endpoint(&self) -> usize {
        *self.facets.last().expect("trajectory is never empty")
    }
}

fn step(model: &ChainModel, s: usize, rng: &mut StreamRng) -> usize {
    let row = &model.jumps[s];
    let total = model.delta[s];
    let mut u = rng.uniform() * total;
    for &(t, w) in row {
        if u < w {
            return t;
        }
        u -= w;
    }
    row.last().expect("facet without neighbours").0
}

/// Gillespie simulation on `[0, t]`.
pub fn simulate(model: &ChainModel, start: usize, t: f64, rng: &mut StreamRng) -> Trajectory {
    let mut facets = vec![start];
    let mut holding = Vec::new();
    let mut clock = 0.0;
    let mut s = start;
    loop {
        let h = rng.exponential(model.exit_rate(s));
        if clock + h > t {
            break;
        }
        clock += h;
        holding.push(h);
        s = step(model, s, rng);
        facets.push(s);
    }
    let jumps = holding.len();
    Trajectory { facets, holding, total_time: t, jumps }
}

/// Jump count and endpoint of one trajectory.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct TrialOutcome {
    pub trial: usize,
    pub jumps: usize,
    pub endpoint: usize,
}

fn run_one(model: &ChainModel, start: usize, t: f64, mut rng: StreamRng, trial: usize) -> TrialOutcome {
    let mut s = start;
    let mut clock = 0.0;
    let mut jumps = 0;
    loop {
        clock += rng.exponential(model.exit_rate(s));
        if clock > t {
            break;
        }
        s = step(model, s, &mut rng);
        jumps += 1;
    }
    TrialOutcome { trial, jumps, endpoint: s }
}

/// `trials` independent runs from `start`; trial `k` uses stream
/// `(domain, (start << 32) | k)`.
pub fn run_trials(
    model: &ChainModel,
    start: usize,
    t: f64,
    trials: usize,
    seed: u64,
    domain: Domain,
) -> Vec<TrialOutcome> {
    (0..trials)
        .into_par_iter()
        .map(|k| {
            let rng = StreamRng::new(seed, domain, ((start as u64) << 32) | k as u64);
            run_one(model, start, t, rng, k)
        })
        .collect()
}

/// Runs started from `π̄`; returns the outcomes (for end-state histograms
/// and jump counts).
pub fn run_stationary(model: &ChainModel, t: f64, trials: usize, seed: u64) -> Vec<TrialOutcome> {
    (0..trials)
        .into_par_iter()
        .map(|k| {
            let mut rng = StreamRng::new(seed, Domain::Trajectory, (1 << 63) | k as u64);
            let start = rng.categorical(&model.pi_bar);
            run_one(model, start, t, rng, k)
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MixingResult {
    pub warmness: f64,
    pub tau: f64,
    pub t: f64,
    pub tv: f64,
    pub passed: bool,
}

pub fn total_variation(p: &[f64], q: &[f64]) -> f64 {
    0.5 * p.iter().zip(q).map(|(a, b)| (a - b).abs()).sum::<f64>()
}

/// Evaluates `p P(t)` at `t = 2 log(M/τ)` where `M = max p/π̄`.
pub fn mixing_check(model: &ChainModel, p: &[f64], tau: f64) -> Result<MixingResult, ChainError> {
    if p.len() != model.n || p.iter().any(|&x| x < 0.0) || (p.iter().sum::<f64>() - 1.0).abs() > 1e-9 {
        return Err(ChainError::BadDistribution(format!("need {} nonnegative entries summing to 1", model.n)));
    }
    let warmness = p.iter().zip(&model.pi_bar).map(|(a, b)| a / b).fold(0.0, f64::max);
    let t = (2.0 * (warmness / tau).ln()).max(0.0);
    let tv = total_variation(&model.distribution_at(p, t), &model.pi_bar);
    Ok(MixingResult { warmness, tau, t, tv, passed: tv <= tau })
}

/// `p P(t)` through the symmetric form `S = D^{1/2} Q D^{-1/2}`:
/// `P(t) = D^{-1/2} exp(tS) D^{1/2}`. One eigendecomposition serves every
/// start and time, so it is the fast path when `Λt` is large.
#[derive(Debug, Clone)]
pub struct Propagator {
    sqrt_pi: Vec<f64>,
    spectrum: Spectrum,
}

impl Propagator {
    pub fn new(model: &ChainModel) -> Result<Self, ChainError> {
        let sqrt_pi: Vec<f64> = model.pi.iter().map(|x| x.sqrt()).collect();
        let s = SymMatrix::from_upper(model.n, |i, j| sqrt_pi[i] * model.q[(i, j)] / sqrt_pi[j]);
        Ok(Self { spectrum: eigh(&s)?, sqrt_pi })
    }

    pub fn distribution_at(&self, p: &[f64], t: f64) -> Vec<f64> {
        let n = self.sqrt_pi.len();
        // p P(t) = (p D^{-1/2}) V e^{tΛ} Vᵀ D^{1/2}.
        let u: Vec<f64> = p.iter().zip(&self.sqrt_pi).map(|(a, s)| a / s).collect();
        let mut out = vec![0.0; n];
        for (lambda, v) in self.spectrum.values.iter().zip(&self.spectrum.vectors) {
            let c = (t * lambda).exp() * u.iter().zip(v).map(|(a, b)| a * b).sum::<f64>();
            out.iter_mut().zip(v).for_each(|(o, x)| *o += c * x);
        }
        let mut out: Vec<f64> = out.iter().zip(&self.sqrt_pi).map(|(o, s)| (o * s).max(0.0)).collect();
        let total: f64 = out.iter().sum();
        out.iter_mut().for_each(|x| *x /= total);
        out
    }
}

/// `mixing_check` from every point mass, sharing one propagator.
pub fn mixing_check_point_masses(model: &ChainModel, tau: f64) -> Result<Vec<MixingResult>, ChainError> {
    let prop = Propagator::new(model)?;
    Ok((0..model.n)
        .into_par_iter()
        .map(|i| {
            let mut p = vec![0.0; model.n];
            p[i] = 1.0;
            let warmness = 1.0 / model.pi_bar[i];
            let t = (2.0 * (warmness / tau).ln()).max(0.0);
            let tv = total_variation(&prop.distribution_at(&p, t), &model.pi_bar);
            MixingResult { warmness, tau, t, tv, passed: tv <= tau }
        })
        .collect())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GiantComponentOptions {
    pub phi: f64,
    pub trials: usize,
    /// Trajectories per facet when estimating `E J_F^T`.
    pub source_trials: usize,
    pub horizon_override: Option<f64>,
    /// Retain trajectories with at most `threshold · mean / φ` jumps.
    pub threshold: f64,
}

impl Default for GiantComponentOptions {
    fn default() -> Self {
        Self { phi: 0.25, trials: 4000, source_trials: 200, horizon_override: None, threshold: 2.0 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GiantComponentResult {
    pub source: usize,
    pub horizon: f64,
    pub phi: f64,
    pub trials: usize,
    pub mean_jumps: f64,
    pub cutoff: f64,
    pub retained: usize,
    /// Sorted facet indices.
    pub component: Vec<usize>,
    pub pi_mass: f64,
    pub chi2_mass: f64,
    /// `1 − φ − 3·sqrt(φ(1−φ)/trials)`.
    pub pi_mass_floor: f64,
    pub bfs_diameter: usize,
    pub max_source_distance: usize,
    /// `2 · cutoff`.
    pub certified_bound: f64,
    pub violations: Vec<String>,
    #[serde(skip)]
    pub outcomes: Vec<TrialOutcome>,
}

/// Extracts a high-mass facet set `G` whose members are all reached from a
/// common source within the jump cutoff.
pub fn giant_component(
    model: &ChainModel,
    opts: &GiantComponentOptions,
    seed: u64,
) -> Result<GiantComponentResult, ChainError> {
    let phi = opts.phi;
    if !(phi > 0.0 && phi < 1.0) {
        return Err(ChainError::BadPhi(phi));
    }
    if opts.trials == 0 || opts.source_trials == 0 {
        return Err(ChainError::NoTrials);
    }
    let pmin = model.pi_bar_min();
    // Mixing from a point mass (M = 1/π̄_min) to τ = π̄_min/2.
    let horizon = opts.horizon_override.unwrap_or_else(|| 2.0 * (2.0 / (pmin * pmin)).ln());

    let estimates: Vec<f64> = (0..model.n)
        .map(|s| {
            let runs = run_trials(model, s, horizon, opts.source_trials, seed, Domain::SourceEstimate);
            runs.iter().map(|o| o.jumps as f64).sum::<f64>() / runs.len() as f64
        })
        .collect();
    let average: f64 = estimates.iter().zip(&model.pi_bar).map(|(e, p)| e * p).sum();
    let source = estimates
        .iter()
        .position(|&e| e <= average)
        .expect("the π̄-average is at least the minimum estimate");

    let outcomes = run_trials(model, source, horizon, opts.trials, seed, Domain::Trajectory);
    let mean_jumps = outcomes.iter().map(|o| o.jumps as f64).sum::<f64>() / outcomes.len() as f64;
    let cutoff = opts.threshold * mean_jumps / phi;
    let mut in_g = vec![false; model.n];
    let mut retained = 0;
    for o in &outcomes {
        if o.jumps as f64 <= cutoff {
            in_g[o.endpoint] = true;
            retained += 1;
        }
    }
    if retained == 0 {
        let suggested_trials = (opts.trials * 10).max((10.0 / phi).ceil() as usize);
        return Err(ChainError::EmptyComponent { suggested_trials });
    }
    let component: Vec<usize> = (0..model.n).filter(|&s| in_g[s]).collect();
    let pi_mass: f64 = component.iter().map(|&s| model.pi_bar[s]).sum();
    let chi2_mass = component.iter().map(|&s| model.chi2[s]).sum::<f64>() / model.chi2_total();

    let from_source = bfs_distances(&model.graph, source);
    let max_source_distance = component.iter().map(|&s| from_source[s]).max().unwrap_or(0);
    let bfs_diameter = component
        .par_iter()
        .map(|&s| {
            let d = bfs_distances(&model.graph, s);
            component.iter().map(|&t| d[t]).max().unwrap_or(0)
        })
        .max()
        .unwrap_or(0);
    let certified_bound = 2.0 * cutoff;
    let pi_mass_floor = 1.0 - phi - 3.0 * (phi * (1.0 - phi) / opts.trials as f64).sqrt();

    let mut violations = Vec::new();
    if pi_mass < pi_mass_floor {
        violations.push(format!("π̄(G) = {pi_mass} below {pi_mass_floor}"));
    }
    if max_source_distance as f64 > cutoff {
        violations.push(format!("distance {max_source_distance} from the source exceeds cutoff {cutoff}"));
    }
    if bfs_diameter as f64 > certified_bound {
        violations.push(format!("diameter of G {bfs_diameter} exceeds 2·cutoff {certified_bound}"));
    }
    Ok(GiantComponentResult {
        source,
        horizon,
        phi,
        trials: opts.trials,
        mean_jumps,
        cutoff,
        retained,
        component,
        pi_mass,
        chi2_mass,
        pi_mass_floor,
        bfs_diameter,
        max_source_distance,
        certified_bound,
        violations,
        outcomes,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NondegeneracyReport {
    pub pi_min_actual: f64,
    /// `ln(m^{−2d²} r²/d³)`, the worst-case bound with unit constant.
    pub ln_pi_min_bound: f64,
    /// `π(Ω) / Σ|F_S|`.
    pub surface_ratio: f64,
    /// `χ₂(S)/π(S)` per facet.
    pub chi2_pi_ratios: Vec<f64>,
    /// Smallest `π − θ` over all ridges.
    pub min_exterior_gap: f64,
    /// `2 asin(r / (2R))` with `R` the largest vertex norm.
    pub regime_threshold: f64,
    /// Facets with a ridge whose `π − θ` is below the regime threshold.
    pub regime_flagged: Vec<usize>,
    /// Facets with `χ₂(S)/2 > π(S)`.
    pub violations: Vec<usize>,
}

/// Reports how far `π̄` is from degenerate. `r` is the roundedness of the
/// model (the body contains `(r/2)B`), `m` the number of generating points.
pub fn nondegeneracy_report(model: &ChainModel, fc: &FacetComplex, r: f64, m: usize) -> NondegeneracyReport {
    let d = fc.dim() as f64;
    let ln_pi_min_bound = -2.0 * d * d * (m as f64).ln() + 2.0 * r.ln() - 3.0 * d.ln();
    let big_r = fc.points().iter().map(|p| crate::linalg::norm(p)).fold(0.0, f64::max);
    let regime_threshold = 2.0 * (r / (2.0 * big_r)).min(1.0).asin();
    let mut min_gap = std::f64::consts::PI;
    let mut flagged = vec![false; model.n];
    for ridge in fc.ridges() {
        let g = std::f64::consts::PI - ridge.angle;
        min_gap = min_gap.min(g);
        if g < regime_threshold {
            flagged[ridge.facets.0] = true;
            flagged[ridge.facets.1] = true;
        }
    }
    // tan(x) ≥ x on (0, π/2), so χ₂/2 ≤ π holds for every facet.
    let violations = (0..model.n).filter(|&s| model.chi2[s] / 2.0 > model.pi[s] * (1.0 + 1e-12)).collect();
    NondegeneracyReport {
        pi_min_actual: model.pi_bar_min(),
        ln_pi_min_bound,
        surface_ratio: model.pi.iter().sum::<f64>() / fc.surface_area(),
        chi2_pi_ratios: (0..model.n).map(|s| model.chi2[s] / model.pi[s]).collect(),
        min_exterior_gap: min_gap,
        regime_threshold,
        regime_flagged: (0..model.n).filter(|&s| flagged[s]).collect(),
        violations,
    }
}

/// Structural checks used across the suite: zero row sums, left
/// stationarity and the jump-rate identity.
pub fn structure_ok(model: &ChainModel) -> bool {
    model.row_sum_defect() <= GENERATOR_ROW_SUM * model.q.norm_inf()
        && model.stationarity_defect() <= STATIONARITY
        && (model.stationary_jump_rate() - model.j_avg).abs() <= 1e-12 * model.j_avg.max(1.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::generators::{cube, random_sphere, regular_simplex};
    use crate::geometry::{facets_of_vpolytope, FacetPath};

    fn cube_chain() -> (FacetComplex, ChainModel) {
        let fc = facets_of_vpolytope(&cube(3), FacetPath::General).unwrap();
        let m = build_chain(&fc).unwrap();
        (fc, m)
    }

    #[test]
    fn cube_measures() {
        let (_, m) = cube_chain();
        for s in 0..6 {
            // Four ridges of length 2 at angle π/2.
            assert!((m.pi[s] - 8.0).abs() < 1e-12);
            assert!((m.delta[s] - 8.0).abs() < 1e-12);
            assert!((m.chi2[s] - 4.0 * std::f64::consts::PI).abs() < 1e-12);
            assert!((m.q[(s, s)] + 1.0).abs() < 1e-12);
            for &(t, _) in &m.jumps[s] {
                assert!((m.q[(s, t)] - 0.25).abs() < 1e-12);
            }
        }
        assert!((m.j_avg - 1.0).abs() < 1e-12);
        assert!(structure_ok(&m));
    }

    #[test]
    fn cube_chain_spectrum() {
        let (fc, _) = cube_chain();
        let b = SpectralBundle::build(&fc).unwrap();
        let g = spectral_gap_of_chain(&b).unwrap();
        let expect = [0.0, 1.0, 1.0, 1.0, 1.5, 1.5];
        for (v, e) in g.values.iter().zip(expect) {
            assert!((v - e).abs() < 1e-8, "{:?}", g.values);
        }
        assert!(g.passed);
    }

    #[test]
    fn tetrahedron_uniform() {
        let fc = facets_of_vpolytope(&regular_simplex(3, 1.0), FacetPath::Simplicial).unwrap();
        let m = build_chain(&fc).unwrap();
        for s in 1..4 {
            assert!((m.pi_bar[s] - 0.25).abs() < 1e-12);
            assert!((m.chi2[s] - m.chi2[0]).abs() < 1e-12);
            assert!((m.delta[s] - m.delta[0]).abs() < 1e-12);
        }
        let b = SpectralBundle::build(&fc).unwrap();
        assert!(spectral_gap_of_chain(&b).unwrap().gap >= 1.0 - 1e-8);
        let g = giant_component(&m, &GiantComponentOptions { phi: 0.5, trials: 500, ..Default::default() }, 3).unwrap();
        assert_eq!(g.component, vec![0, 1, 2, 3]);
        assert_eq!(g.bfs_diameter, 1);
    }

    #[test]
    fn zero_horizon() {
        let (_, m) = cube_chain();
        let mut rng = StreamRng::new(1, Domain::Trajectory, 0);
        let t = simulate(&m, 2, 0.0, &mut rng);
        assert_eq!(t.facets, vec![2]);
        assert_eq!(t.jumps, 0);
    }

    #[test]
    fn trajectories_follow_edges() {
        let (fc, m) = cube_chain();
        let mut rng = StreamRng::new(5, Domain::Trajectory, 0);
        let t = simulate(&m, 0, 20.0, &mut rng);
        assert_eq!(t.jumps + 1, t.facets.len());
        assert!(t.holding.iter().all(|&h| h > 0.0));
        for w in t.facets.windows(2) {
            assert!(fc.ridge_between(w[0], w[1]).is_some());
        }
    }

    #[test]
    fn run_trials_is_reproducible() {
        let (_, m) = cube_chain();
        let a = run_trials(&m, 0, 3.0, 50, 9, Domain::Trajectory);
        let b = run_trials(&m, 0, 3.0, 50, 9, Domain::Trajectory);
        assert_eq!(a, b);
        let c = run_trials(&m, 0, 3.0, 50, 10, Domain::Trajectory);
        assert_ne!(a, c);
    }

    #[test]
    fn mixing_from_point_mass() {
        let (_, m) = cube_chain();
        let mut p = vec![0.0; 6];
        p[0] = 1.0;
        let r = mixing_check(&m, &p, 1e-3).unwrap();
        assert!((r.warmness - 6.0).abs() < 1e-12);
        assert!((r.t - 2.0 * 6000f64.ln()).abs() < 1e-12);
        assert!(r.passed);
        let r2 = mixing_check(&m, &p, 5e-4).unwrap();
        assert!((r2.t - r.t - 2.0 * 2f64.ln()).abs() < 1e-12);
        assert!(r2.passed);
        let s = mixing_check(&m, &m.pi_bar.clone(), 1e-3).unwrap();
        assert!(s.tv < 1e-12);
    }

    #[test]
    fn propagator_matches_uniformization() {
        let fc = facets_of_vpolytope(&random_sphere(12, 3, 4), FacetPath::General).unwrap();
        let m = build_chain(&fc).unwrap();
        let prop = Propagator::new(&m).unwrap();
        let mut p = vec![0.0; m.n];
        p[3] = 1.0;
        for t in [0.0, 0.05, 0.7, 4.0] {
            let a = prop.distribution_at(&p, t);
            let b = m.distribution_at(&p, t);
            assert!(total_variation(&a, &b) < 1e-9, "t = {t}");
        }
        let all = mixing_check_point_masses(&m, 1e-3).unwrap();
        assert_eq!(all.len(), m.n);
        let one = mixing_check(&m, &p, 1e-3).unwrap();
        assert!((all[3].t - one.t).abs() < 1e-12 && (all[3].tv - one.tv).abs() < 1e-9);
    }

    #[test]
    fn cube_giant_component() {
        let (_, m) = cube_chain();
        let opts = GiantComponentOptions { phi: 0.5, trials: 10_000, ..Default::default() };
        let g = giant_component(&m, &opts, 7).unwrap();
        assert!(g.pi_mass >= 0.5);
        assert!(g.bfs_diameter <= 2);
        assert!(g.violations.is_empty(), "{:?}", g.violations);
    }

    #[test]
    fn bad_phi_rejected() {
        let (_, m) = cube_chain();
        let opts = GiantComponentOptions { phi: 1.0, ..Default::default() };
        assert_eq!(giant_component(&m, &opts, 0).unwrap_err(), ChainError::BadPhi(1.0));
    }

    #[test]
    fn cube_nondegeneracy() {
        let (fc, m) = cube_chain();
        let r = nondegeneracy_report(&m, &fc, 2.0, 8);
        for x in &r.chi2_pi_ratios {
            assert!((x - std::f64::consts::FRAC_PI_2).abs() < 1e-12);
        }
        assert!(r.violations.is_empty());
        // π(Ω) = 48, surface area 24.
        assert!((r.surface_ratio - 2.0).abs() < 1e-12);
    }
}
