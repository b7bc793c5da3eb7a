//! Acceptance suite: one PASS/FAIL line per criterion. Runs as a plain
//! binary so the lines are always printed.

use std::f64::consts::PI;
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use polygap::bounds::{diameter_report, facet_diameter};
use polygap::chain::{build_chain, mixing_check_point_masses, run_stationary, run_trials, spectral_gap_of_chain, ChainModel};
use polygap::corpus::{random_integral_family, random_simple_family, random_simplicial, standard, CorpusEntry};
use polygap::geometry::generators::{cross_polytope, cube, cube_h, random_sphere, regular_simplex, unit_cube};
use polygap::geometry::io::Polytope;
use polygap::geometry::{facets_of_vpolytope, FacetComplex, FacetPath, VPolytope};
use polygap::rng::Domain;
use polygap::smoothed::{
    af_logconcavity_check, end_to_end, intersection_constant_check, intersection_constant_exact,
    parallel_body_volume, quadrature_perimeter_estimate, shadow_vertex_experiment, EndToEndOptions, PlaneSource,
    SteinerCoefficients,
};
use polygap::spectral::{certify_gap, tilde_hessian_check, SpectralBundle, TildeCheck};
use polygap::tolerances::Tolerances;

const SEED: u64 = 20240611;

type Outcome = Result<String, String>;

fn fc_of(v: &VPolytope) -> FacetComplex {
    facets_of_vpolytope(v, FacetPath::General).expect("facet complex")
}

fn corpus() -> Vec<CorpusEntry> {
    let mut c = standard();
    c.extend(random_simplicial(100, SEED));
    c
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within_budget(start: Instant, budget: Duration) -> Result<(), String> {
    let t = start.elapsed();
    ensure(t <= budget, || format!("took {t:.1?}, budget {budget:?}"))
}

fn c1_one_positive_eigenvalue() -> Outcome {
    let start = Instant::now();
    let tol = Tolerances::default();
    let mut bodies = vec![("cube".to_string(), cube(3)), ("cross".into(), cross_polytope(3)), ("simplex".into(), regular_simplex(3, 1.0))];
    for e in random_simplicial(100, SEED) {
        let Polytope::V(v) = e.polytope else { unreachable!() };
        bodies.push((e.name, v));
    }
    for (name, v) in &bodies {
        let cert = certify_gap(&fc_of(v), &tol).map_err(|e| format!("{name}: {e}"))?;
        ensure(cert.passed, || format!("{name}: {cert:?}"))?;
    }
    let cert = certify_gap(&fc_of(&cube(3)), &tol).unwrap();
    let expect = [-0.5, -0.5, 0.0, 0.0, 0.0, 1.0];
    let err = cert.spectrum.iter().zip(expect).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    ensure(err <= 1e-8, || format!("cube spectrum {:?}", cert.spectrum))?;
    within_budget(start, Duration::from_secs(10))?;
    Ok(format!("{} polytopes certified; cube spectrum error {err:.1e}", bodies.len()))
}

fn c2_rescaled_hessian() -> Outcome {
    let start = Instant::now();
    let mut cases = vec![("cube".to_string(), cube_h(3), 2.0), ("square".into(), cube_h(2), 1.0)];
    for e in random_simple_family(50, SEED) {
        let Polytope::H(h) = e.polytope else { unreachable!() };
        let d = h.dim() as f64;
        cases.push((e.name, h, d - 1.0));
    }
    let mut worst: f64 = 0.0;
    for (name, h, want) in &cases {
        match tilde_hessian_check(h).map_err(|e| format!("{name}: {e}"))? {
            TildeCheck::Checked { top, passed, .. } => {
                worst = worst.max((top - want).abs());
                ensure(passed && (top - want).abs() <= 1e-6, || format!("{name}: top {top}, want {want}"))?;
            }
            TildeCheck::SkippedNotSimple { .. } => return Err(format!("{name} is not simple")),
        }
    }
    within_budget(start, Duration::from_secs(30))?;
    Ok(format!("{} simple polytopes; max deviation {worst:.1e}", cases.len()))
}

fn stationarity_with_pi(m: &ChainModel) -> f64 {
    let n = m.n;
    let row: Vec<f64> = (0..n).map(|j| (0..n).map(|i| m.pi[i] * m.q[(i, j)]).sum::<f64>()).collect();
    let q_inf = (0..n).map(|i| (0..n).map(|j| m.q[(i, j)].abs()).sum::<f64>()).fold(0.0, f64::max);
    row.iter().fold(0.0, |a: f64, x| a.max(x.abs())) / q_inf
}

fn c3_chain_structure() -> Outcome {
    let entries = corpus();
    let mut worst_stat: f64 = 0.0;
    let mut worst_gap = f64::INFINITY;
    for e in &entries {
        let fc = e.facet_complex().map_err(|err| format!("{}: {err}", e.name))?;
        let m = build_chain(&fc).map_err(|err| format!("{}: {err}", e.name))?;
        let s = stationarity_with_pi(&m);
        worst_stat = worst_stat.max(s);
        ensure(s <= 1e-9, || format!("{}: ‖πQ‖∞/‖Q‖∞ = {s:e}", e.name))?;
        let gap = spectral_gap_of_chain(&SpectralBundle::build(&fc).unwrap()).unwrap();
        worst_gap = worst_gap.min(gap.gap);
        ensure(gap.zero_count == 1 && gap.gap >= 1.0 - 1e-8, || format!("{}: {:?}", e.name, gap.values))?;
    }
    let fc = fc_of(&cube(3));
    let gap = spectral_gap_of_chain(&SpectralBundle::build(&fc).unwrap()).unwrap();
    let expect = [0.0, 1.0, 1.0, 1.0, 1.5, 1.5];
    let err = gap.values.iter().zip(expect).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    ensure(err <= 1e-8, || format!("cube chain spectrum {:?}", gap.values))?;
    Ok(format!("{} instances; max stationarity {worst_stat:.1e}; min gap {worst_gap:.6}", entries.len()))
}

fn c4_diameter_soundness() -> Outcome {
    let start = Instant::now();
    let cube_report = diameter_report(&cube_h(3), 1.0).map_err(|e| e.to_string())?;
    ensure(cube_report.exact_diameter == 3, || format!("cube vertex diameter {}", cube_report.exact_diameter))?;
    ensure(cube_report.violations.is_empty(), || format!("cube: {:?}", cube_report.violations))?;
    let fd_cube = facet_diameter(&fc_of(&cube(3))).map_err(|e| e.to_string())?;
    let fd_oct = facet_diameter(&fc_of(&cross_polytope(3))).map_err(|e| e.to_string())?;
    ensure(fd_cube == 2 && fd_oct == 3, || format!("facet diameters cube {fd_cube}, octahedron {fd_oct}"))?;
    let mut checked = 0;
    for e in random_integral_family(100, SEED) {
        let Polytope::H(h) = &e.polytope else { unreachable!() };
        let r = diameter_report(h, 1.0).map_err(|err| format!("{}: {err}", e.name))?;
        let exact = r.exact_diameter as f64;
        let th = r.integer_bound.as_ref().ok_or_else(|| format!("{}: no integer bound", e.name))?;
        let bounds = [r.chebyshev_certified as f64, r.angle_bound, th.headline, th.certified];
        ensure(r.violations.is_empty() && bounds.iter().all(|&b| b >= exact), || {
            format!("{}: exact {exact}, bounds {bounds:?}, {:?}", e.name, r.violations)
        })?;
        checked += 1;
    }
    within_budget(start, Duration::from_secs(120))?;
    Ok(format!("cube exact 3, facet diameters 2/3; {checked} integral instances, 0 violations"))
}

fn c5_envelopes() -> Outcome {
    let mut n = 0;
    for e in random_integral_family(100, SEED) {
        let Polytope::H(h) = &e.polytope else { unreachable!() };
        let r = diameter_report(h, 1.0).map_err(|err| format!("{}: {err}", e.name))?;
        let w = r.worst_case.as_ref().ok_or_else(|| format!("{}: no envelopes", e.name))?;
        ensure(w.holds, || format!("{}: {w:?}", e.name))?;
        n += 1;
    }
    let r = diameter_report(&cube_h(3), 1.0).map_err(|e| e.to_string())?;
    let w = r.worst_case.unwrap();
    let checks = [
        (w.min_ridge, 2f64.sqrt(), "min edge"),
        (w.max_ridge, 2f64.sqrt(), "max edge"),
        (w.min_ridge_lb, 1.0 / 6.0, "edge lower envelope"),
        (w.max_csc, 3.0 / 8f64.sqrt(), "csc"),
        (w.csc_ub, 6.0, "csc envelope"),
    ];
    let bad: Vec<String> = checks
        .iter()
        .filter(|(got, want, _)| (got - want).abs() > 1e-12)
        .map(|(got, want, what)| format!("cube {what} = {got}, expected {want}"))
        .collect();
    let delta = r.integer_bound.as_ref().map_or(f64::NAN, |t| t.data.delta as f64);
    ensure(bad.is_empty() && w.holds, || {
        format!("{}; envelopes hold: {}; Δ = {delta} from the [A|b] minors", bad.join(", "), w.holds)
    })?;
    Ok(format!("{n} integral instances enveloped; cube edge √2 ≥ 1/6, csc 3/√8 ≤ 6"))
}

fn c6_steiner() -> Outcome {
    let start = Instant::now();
    let fc = fc_of(&unit_cube(3));
    let c = SteinerCoefficients::of(&fc);
    ensure((c.mean_width_term - 3.0 * PI).abs() <= 1e-12, || format!("ε² coefficient {}", c.mean_width_term))?;
    let v = c.volume_at(0.1).unwrap();
    let formula = 1.0 + 6.0 * 0.1 + 3.0 * PI * 0.01 + 4.0 * PI / 3.0 * 0.001;
    ensure((v - formula).abs() <= 1e-12, || format!("Vol = {v}, hand expansion {formula}"))?;
    let (mc, se) = parallel_body_volume(&fc, 0.1, 10_000_000, SEED);
    let z = (mc - v) / se;
    ensure(z.abs() <= 3.0, || format!("Monte Carlo {mc} ± {se}, z = {z:.2}"))?;
    within_budget(start, Duration::from_secs(60))?;
    let target = 1.698430;
    ensure((v - target).abs() <= 1e-6, || {
        format!(
            "Vol = {v:.7} equals the hand expansion but is {:.1e} from {target}; MC {mc:.5} ± {se:.1e} (z = {z:.2})",
            (v - target).abs()
        )
    })?;
    Ok(format!("Vol = {v:.7}; MC {mc:.5} ± {se:.1e}, z = {z:.2}"))
}

fn c7_log_concavity() -> Outcome {
    let mut n = 0;
    let mut worst = f64::INFINITY;
    for e in corpus() {
        let fc = e.facet_complex().map_err(|err| format!("{}: {err}", e.name))?;
        let Some(w) = SteinerCoefficients::of(&fc).quermass() else { continue };
        let lc = af_logconcavity_check(&w);
        worst = lc.ratios.iter().copied().fold(worst, f64::min);
        ensure(lc.passed, || format!("{}: ratios {:?}", e.name, lc.ratios))?;
        n += 1;
    }
    Ok(format!("{n} three-dimensional instances; min W_j²/(W_(j-1)W_(j+1)) = {worst:.4}"))
}

fn c8_semigroup() -> Outcome {
    let model = build_chain(&fc_of(&cube(3))).map_err(|e| e.to_string())?;
    ensure((model.j_avg - 1.0).abs() <= 1e-12, || format!("cube J_avg {}", model.j_avg))?;
    let trials = 100_000;
    let mut worst_z: f64 = 0.0;
    for (k, t) in [0.1, 1.0, 10.0].into_iter().enumerate() {
        let outcomes = run_trials(&model, 0, t, trials, SEED + k as u64, Domain::Trajectory);
        let mut hist = vec![0usize; model.n];
        for o in &outcomes {
            hist[o.endpoint] += 1;
        }
        let mut e0 = vec![0.0; model.n];
        e0[0] = 1.0;
        let p = model.distribution_at(&e0, t);
        for (s, (&h, &ps)) in hist.iter().zip(&p).enumerate() {
            let mean = trials as f64 * ps;
            let sd = (trials as f64 * ps * (1.0 - ps)).sqrt();
            let z = if sd > 0.0 { (h as f64 - mean) / sd } else { h as f64 - mean };
            worst_z = worst_z.max(z.abs());
            ensure(z.abs() <= 4.0, || format!("T = {t}, state {s}: {h} vs {mean:.1}, z = {z:.2}"))?;
        }
        let jumps: Vec<f64> = run_stationary(&model, t, trials, SEED + 10 + k as u64).iter().map(|o| o.jumps as f64).collect();
        let mean = jumps.iter().sum::<f64>() / trials as f64;
        let var = jumps.iter().map(|j| (j - mean).powi(2)).sum::<f64>() / (trials - 1) as f64;
        let z = (mean - t * model.j_avg) / (var / trials as f64).sqrt();
        worst_z = worst_z.max(z.abs());
        ensure(z.abs() <= 4.0, || format!("T = {t}: mean jumps {mean} vs {}, z = {z:.2}", t * model.j_avg))?;
    }
    Ok(format!("cube, T ∈ {{0.1, 1, 10}}, 10⁵ trajectories; max |z| = {worst_z:.2}"))
}

fn c9_mixing() -> Outcome {
    let tau = 1e-3;
    let mut starts = 0;
    let mut worst: f64 = 0.0;
    for e in corpus() {
        let fc = e.facet_complex().map_err(|err| format!("{}: {err}", e.name))?;
        if fc.n_facets() > 200 {
            continue;
        }
        let model = build_chain(&fc).map_err(|err| format!("{}: {err}", e.name))?;
        let results = mixing_check_point_masses(&model, tau).map_err(|err| format!("{}: {err}", e.name))?;
        for (i, r) in results.iter().enumerate() {
            worst = worst.max(r.tv);
            ensure(r.passed, || format!("{} from facet {i}: TV {} at t = {}", e.name, r.tv, r.t))?;
            starts += 1;
        }
    }
    Ok(format!("{starts} point-mass starts; max TV {worst:.2e} ≤ {tau}"))
}

fn c10_giant_component() -> Outcome {
    let start = Instant::now();
    let opts = EndToEndOptions { sigma: 0.1, planes: 0, ..Default::default() };
    let mut min_mass = f64::INFINITY;
    for k in 0..10u64 {
        let seed = SEED + k;
        let base = random_sphere(30, 3, seed).points().to_vec();
        let r = end_to_end(base, &opts, seed).map_err(|e| format!("seed {seed}: {e}"))?;
        let g = &r.giant;
        min_mass = min_mass.min(g.pi_mass);
        ensure(g.pi_mass >= g.pi_mass_floor, || format!("seed {seed}: π̄(G) = {} < {}", g.pi_mass, g.pi_mass_floor))?;
        ensure(g.bfs_diameter as f64 <= 2.0 * g.cutoff, || {
            format!("seed {seed}: diam(G) = {} > 2·{}", g.bfs_diameter, g.cutoff)
        })?;
        ensure(r.violations.is_empty(), || format!("seed {seed}: {:?}", r.violations))?;
    }
    within_budget(start, Duration::from_secs(600))?;
    Ok(format!("10 instances (m = 30, d = 3, σ = 0.1, φ = 0.25); min π̄(G) = {min_mass:.4}"))
}

fn c11_quadrature() -> Outcome {
    let fc = fc_of(&cube(3));
    let q = quadrature_perimeter_estimate(&fc, &PlaneSource::Through(vec![0.0; 3]), 100_000, SEED)
        .map_err(|e| e.to_string())?;
    let z = (q.estimate - 24.0) / q.standard_error;
    ensure(q.exact == 24.0 && z.abs() <= 3.0, || format!("estimate {} ± {}, z = {z:.2}", q.estimate, q.standard_error))?;
    let want = 3f64.sqrt() / 2.0;
    let (c3, _) = intersection_constant_check(3, 1_000_000, SEED);
    let rel = (c3 / want - 1.0).abs();
    ensure(rel <= 0.02 && (intersection_constant_exact(3) - want).abs() <= 1e-12, || format!("C_3 = {c3}, want {want}"))?;
    Ok(format!("perimeter {:.3} ± {:.3} (z = {z:.2}); C_3 = {c3:.4} ({:.2}% off)", q.estimate, q.standard_error, 100.0 * rel))
}

fn c12_shadow_trend() -> Outcome {
    let m = 30;
    let base = random_sphere(m, 3, SEED).points().to_vec();
    let sigmas = [0.05, 0.1, 0.2, 0.5];
    let levels = shadow_vertex_experiment(&base, &sigmas, 10, 200, 0.05, SEED).map_err(|e| e.to_string())?;
    for l in &levels {
        ensure(l.stats.mean.is_finite() && l.stats.max <= m, || format!("σ = {}: {:?}", l.sigma, l.stats))?;
    }
    for w in levels.windows(2) {
        let slack = 2.0 * w[0].stats.standard_error.hypot(w[1].stats.standard_error);
        ensure(w[1].stats.mean <= w[0].stats.mean + slack, || {
            format!("mean rose from {} (σ = {}) to {} (σ = {})", w[0].stats.mean, w[0].sigma, w[1].stats.mean, w[1].sigma)
        })?;
    }
    let means: Vec<String> = levels.iter().map(|l| format!("{:.2}", l.stats.mean)).collect();
    Ok(format!("means over σ ∈ {{0.05, 0.1, 0.2, 0.5}}: {}", means.join(", ")))
}

fn c13_determinism() -> Outcome {
    let bin = env!("CARGO_BIN_EXE_polygap");
    let runs: [&[&str]; 7] = [
        &["analyze", "--polytope", "cube:3"],
        &["bound", "--polytope", "integral:7:3:4"],
        &["bound", "--corpus", "10", "--seed", "3"],
        &["chain", "--polytope", "sphere:20:3:2", "--seed", "5", "--trials", "500", "--source-trials", "40"],
        &["smoothed", "--base", "sphere:30:3:1", "--seed", "9", "--seeds", "2", "--trials", "500", "--planes", "50"],
        &["quadrature", "--polytope", "cube:3", "--planes", "5000", "--seed", "2", "--constant-dim", "3"],
        &["steiner", "--polytope", "cube:3", "--points", "200000", "--seed", "4"],
    ];
    for args in runs {
        let once = || Command::new(bin).args(args).output().map_err(|e| e.to_string());
        let (a, b) = (once()?, once()?);
        ensure(a.status.success(), || format!("{args:?} exited with {}", a.status))?;
        ensure(!a.stdout.is_empty() && a.stdout == b.stdout, || format!("{args:?} output differs between runs"))?;
    }
    Ok(format!("{} invocations byte-identical across reruns", runs.len()))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 13] = [
        ("one positive eigenvalue", c1_one_positive_eigenvalue),
        ("rescaled Hessian top eigenvalue d-1", c2_rescaled_hessian),
        ("chain structure", c3_chain_structure),
        ("diameter bound soundness", c4_diameter_soundness),
        ("ridge and csc envelopes", c5_envelopes),
        ("Steiner polynomial", c6_steiner),
        ("quermassintegral log-concavity", c7_log_concavity),
        ("semigroup consistency", c8_semigroup),
        ("warm-start mixing", c9_mixing),
        ("giant component soundness", c10_giant_component),
        ("quadrature consistency", c11_quadrature),
        ("shadow-vertex trend", c12_shadow_trend),
        ("determinism", c13_determinism),
    ];
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let label = format!("{:>2} {name}", i + 1);
        if !filter.is_empty() && !filter.iter().any(|p| label.contains(p.as_str())) {
            continue;
        }
        let t = Instant::now();
        let outcome = std::panic::catch_unwind(f).unwrap_or_else(|_| Err("panicked".into()));
        match outcome {
            Ok(msg) => println!("PASS {label}: {msg} [{:.1?}]", t.elapsed()),
            Err(msg) => {
                failed += 1;
                println!("FAIL {label}: {msg} [{:.1?}]", t.elapsed());
            }
        }
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    } else {
        ExitCode::SUCCESS
    }
}
