//! Command-line harness. Every subcommand writes one deterministic report
//! (JSON for single runs, CSV for sweeps) to `--out` or standard output.
//! Wall time and the assertion list go to the optional `--manifest` file so
//! reruns with the same flags produce byte-identical reports.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use crate::bounds::{diameter_report, DiameterReport};
use crate::chain::{build_chain, giant_component, spectral_gap_of_chain, structure_ok, ChainGap, GiantComponentOptions};
use crate::corpus::{facet_complex_of, generate, random_integral_family};
use crate::geometry::io::{load, Polytope};
use crate::geometry::{FacetComplex, HPolytope, VPolytope};
use crate::smoothed::{
    af_logconcavity_check, end_to_end, intersection_constant_check, intersection_constant_exact,
    quadrature_perimeter_estimate, steiner_validate, EndToEndOptions, LogConcavity, PlaneSource, QuadratureEstimate,
    SteinerReport,
};
use crate::spectral::{certify_bundle, tilde_hessian_check, GapCertificate, SpectralBundle, TildeCheck};
use crate::tolerances::Tolerances;
use crate::Error;

#[derive(Debug, Parser, Serialize)]
#[command(name = "polygap", version, about = "Spectral gaps, diameter bounds and facet random walks on polytopes")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct Common {
    /// Report file; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Run manifest (config echo, version, wall time, assertions).
    #[arg(long)]
    pub manifest: Option<PathBuf>,
    /// Multiply every numerical tolerance by this factor.
    #[arg(long, default_value_t = 1.0, value_parser = positive_f64)]
    pub tol: f64,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(tag = "subcommand", rename_all = "snake_case")]
pub enum Command {
    /// Hessian spectrum, gap certificate and chain summary for one polytope.
    Analyze {
        /// Polytope JSON file or generator string (e.g. `cube:3`, `sphere:20:3:1`).
        #[arg(long)]
        polytope: String,
        /// Accepted for uniformity; the analysis is deterministic.
        #[arg(long)]
        seed: Option<u64>,
        #[command(flatten)]
        common: Common,
    },
    /// Diameter bounds against the exact vertex diameter.
    Bound {
        /// H-polytope with positive offsets, or a V-polytope (its polar is used).
        #[arg(long, required_unless_present = "corpus", conflicts_with = "corpus")]
        polytope: Option<String>,
        /// Sweep this many random integral polytopes and emit CSV.
        #[arg(long, requires = "seed", value_parser = positive_usize)]
        corpus: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        /// Constant in the integer-data headline bound.
        #[arg(long, default_value_t = 1.0)]
        constant: f64,
        /// Also write a one-row CSV for a single polytope.
        #[arg(long, conflicts_with = "corpus")]
        csv: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
    /// Facet random walk and giant component extraction.
    Chain {
        #[arg(long)]
        polytope: String,
        #[command(flatten)]
        walk: WalkArgs,
        #[arg(long)]
        seed: u64,
        /// Per-trial CSV (trial, jumps, endpoint).
        #[arg(long)]
        csv: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
    /// End-to-end smoothed-model pipeline, one CSV row per seed.
    Smoothed {
        /// Base points (V-polytope file) or generator string, all in the unit ball.
        #[arg(long)]
        base: String,
        #[arg(long, default_value_t = 0.1)]
        sigma: f64,
        /// Split the noise as `σ₁ = m^e σ₂`.
        #[arg(long, default_value_t = 8.0, conflicts_with = "no_split")]
        split_exponent: f64,
        /// Perturb once with the full `σ`.
        #[arg(long)]
        no_split: bool,
        /// Planes for the shadow-vertex mean; 0 skips it.
        #[arg(long, default_value_t = 200)]
        planes: usize,
        #[arg(long, default_value_t = 0.05, value_parser = positive_f64)]
        plane_eta: f64,
        #[command(flatten)]
        walk: WalkArgs,
        /// First seed.
        #[arg(long)]
        seed: u64,
        /// Number of consecutive seeds.
        #[arg(long, default_value_t = 1, value_parser = positive_usize)]
        seeds: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Plane-section estimate of the codimension-2 perimeter.
    Quadrature {
        #[arg(long)]
        polytope: String,
        #[arg(long, default_value_t = 100_000, value_parser = positive_usize)]
        planes: usize,
        /// Sample planes through the boundary of the body inflated by `2η`
        /// instead of through the centroid.
        #[arg(long, value_parser = positive_f64)]
        eta: Option<f64>,
        /// Also estimate the intersection constant in this dimension.
        #[arg(long)]
        constant_dim: Option<usize>,
        #[arg(long, default_value_t = 1_000_000, value_parser = positive_usize)]
        constant_samples: usize,
        #[arg(long)]
        seed: u64,
        #[command(flatten)]
        common: Common,
    },
    /// Steiner polynomial against Monte Carlo parallel-body volumes.
    Steiner {
        #[arg(long)]
        polytope: String,
        #[arg(long, value_delimiter = ',', default_value = "0.1,0.2,0.5")]
        eps: Vec<f64>,
        #[arg(long, default_value_t = 1_000_000, value_parser = positive_usize)]
        points: usize,
        #[arg(long)]
        seed: u64,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct WalkArgs {
    #[arg(long, default_value_t = 0.25)]
    pub phi: f64,
    #[arg(long, default_value_t = 4000, value_parser = positive_usize)]
    pub trials: usize,
    /// Trajectories per facet for the source estimate.
    #[arg(long, default_value_t = 200, value_parser = positive_usize)]
    pub source_trials: usize,
    #[arg(long, value_parser = positive_f64)]
    pub horizon_override: Option<f64>,
    /// Jump cutoff multiplier.
    #[arg(long, default_value_t = 2.0, value_parser = positive_f64)]
    pub threshold: f64,
}

impl WalkArgs {
    fn options(&self) -> GiantComponentOptions {
        GiantComponentOptions {
            phi: self.phi,
            trials: self.trials,
            source_trials: self.source_trials,
            horizon_override: self.horizon_override,
            threshold: self.threshold,
        }
    }
}

fn positive_usize(s: &str) -> Result<usize, String> {
    match s.parse::<usize>() {
        Ok(0) => Err("must be at least 1".into()),
        Ok(n) => Ok(n),
        Err(e) => Err(e.to_string()),
    }
}

fn positive_f64(s: &str) -> Result<f64, String> {
    match s.parse::<f64>() {
        Ok(x) if x > 0.0 && x.is_finite() => Ok(x),
        Ok(x) => Err(format!("must be positive and finite, got {x}")),
        Err(e) => Err(e.to_string()),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AssertionRecord {
    pub name: String,
    pub passed: bool,
    #[serde(skip_serializing_if = "String::is_empty")]
    pub detail: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct RunManifest {
    pub config: serde_json::Value,
    pub version: &'static str,
    pub wall_time_seconds: f64,
    pub assertions: Vec<AssertionRecord>,
    pub passed: usize,
    pub failed: usize,
}

/// Soundness assertions executed during one run.
#[derive(Debug, Default)]
pub struct Tally(Vec<AssertionRecord>);

impl Tally {
    pub fn check(&mut self, name: impl Into<String>, passed: bool, detail: impl Into<String>) {
        self.0.push(AssertionRecord { name: name.into(), passed, detail: detail.into() });
    }

    pub fn failed(&self) -> usize {
        self.0.iter().filter(|a| !a.passed).count()
    }

    pub fn records(&self) -> &[AssertionRecord] {
        &self.0
    }
}

/// Parse `args`, run, and map the outcome to an exit code.
pub fn main_with<I, T>(args: I) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let start = Instant::now();
    let mut tally = Tally::default();
    let result = run(&cli.command, &mut tally);
    let manifest_path = common(&cli.command).manifest.clone();
    if let Some(path) = manifest_path {
        let manifest = RunManifest {
            config: serde_json::to_value(&cli).expect("config serializes"),
            version: env!("CARGO_PKG_VERSION"),
            wall_time_seconds: start.elapsed().as_secs_f64(),
            passed: tally.0.len() - tally.failed(),
            failed: tally.failed(),
            assertions: tally.0.clone(),
        };
        let text = serde_json::to_string_pretty(&manifest).expect("manifest serializes") + "\n";
        if let Err(e) = write_to(Some(&path), text.as_bytes()) {
            eprintln!("error: {e}");
            return ExitCode::from(e.exit_code());
        }
    }
    match result {
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
        Ok(()) => {
            let failed = tally.failed();
            eprintln!("assertions: {} passed, {failed} failed", tally.0.len() - failed);
            for a in tally.0.iter().filter(|a| !a.passed) {
                eprintln!("FAILED {}: {}", a.name, a.detail);
            }
            ExitCode::from(if failed > 0 { 2 } else { 0 })
        }
    }
}

fn common(c: &Command) -> &Common {
    match c {
        Command::Analyze { common, .. }
        | Command::Bound { common, .. }
        | Command::Chain { common, .. }
        | Command::Smoothed { common, .. }
        | Command::Quadrature { common, .. }
        | Command::Steiner { common, .. } => common,
    }
}

/// Execute one subcommand, recording soundness assertions in `tally`.
pub fn run(command: &Command, tally: &mut Tally) -> Result<(), Error> {
    let out = common(command).out.as_deref();
    let tol = Tolerances::scaled(common(command).tol);
    match command {
        Command::Analyze { polytope, .. } => {
            let p = resolve(polytope)?;
            let report = analyze(&p, &tol, tally)?;
            write_json(out, &report)
        }
        Command::Bound { polytope: Some(src), constant, csv, .. } => {
            let p = as_hpolytope(resolve(src)?)?;
            let report = diameter_report(&p, *constant)?;
            record_bound(tally, src, &report);
            if let Some(path) = csv {
                write_csv(Some(path), &[BoundRow::new(src, &report)])?;
            }
            write_json(out, &report)
        }
        Command::Bound { polytope: None, corpus, seed, constant, .. } => {
            let (count, seed) = (corpus.expect("clap requires --corpus"), seed.expect("clap requires --seed"));
            let rows = random_integral_family(count, seed)
                .into_iter()
                .map(|e| {
                    let p = as_hpolytope(e.polytope)?;
                    let report = diameter_report(&p, *constant)?;
                    record_bound(tally, &e.name, &report);
                    Ok(BoundRow::new(&e.name, &report))
                })
                .collect::<Result<Vec<_>, Error>>()?;
            write_csv(out, &rows)
        }
        Command::Chain { polytope, walk, seed, csv, .. } => {
            let fc = facet_complex_of(&resolve(polytope)?)?;
            let model = build_chain(&fc)?;
            tally.check("chain structure", structure_ok(&model), "");
            let giant = giant_component(&model, &walk.options(), *seed)?;
            tally.check("giant component", giant.violations.is_empty(), giant.violations.join("; "));
            if let Some(path) = csv {
                write_csv(Some(path), &giant.outcomes)?;
            }
            write_json(out, &ChainReport { facets: model.n, j_avg: model.j_avg, giant })
        }
        Command::Smoothed {
            base,
            sigma,
            split_exponent,
            no_split,
            planes,
            plane_eta,
            walk,
            seed,
            seeds,
            ..
        } => {
            let base = match resolve(base)? {
                Polytope::V(v) => v.points().to_vec(),
                Polytope::H(_) => return Err(Error::Usage("--base must be a point set (V-polytope)".into())),
            };
            let opts = EndToEndOptions {
                sigma: *sigma,
                split_exponent: (!no_split).then_some(*split_exponent),
                chain: walk.options(),
                planes: *planes,
                plane_eta: *plane_eta,
            };
            let mut rows = Vec::with_capacity(*seeds);
            for s in (0..*seeds as u64).map(|k| seed.wrapping_add(k)) {
                let r = end_to_end(base.clone(), &opts, s)?;
                tally.check(format!("seed {s}"), r.violations.is_empty(), r.violations.join("; "));
                rows.push(SmoothedRow {
                    seed: s,
                    m: r.m,
                    d: r.d,
                    sigma: r.sigma,
                    alpha: r.assumptions.alpha,
                    r_best: r.assumptions.r_best,
                    event_b: r.assumptions.event_b,
                    event_c: r.assumptions.event_c,
                    j_avg: r.j_avg,
                    pi_mass_g: r.giant.pi_mass,
                    chi2_mass_g: r.giant.chi2_mass,
                    diam_g: r.giant.bfs_diameter,
                    certified_cutoff: r.giant.certified_bound,
                    shadow_mean: r.shadow.map(|s| s.mean),
                });
            }
            write_csv(out, &rows)
        }
        Command::Quadrature { polytope, planes, eta, constant_dim, constant_samples, seed, .. } => {
            let fc = facet_complex_of(&resolve(polytope)?)?;
            let source = match eta {
                Some(eta) => PlaneSource::Boundary { body: hull_of(&fc)?, eta: *eta },
                None => PlaneSource::Through(hull_of(&fc)?.centroid()),
            };
            let perimeter = quadrature_perimeter_estimate(&fc, &source, *planes, *seed)?;
            tally.check(
                "perimeter estimate finite",
                perimeter.estimate.is_finite() && perimeter.estimate >= 0.0,
                format!("{}", perimeter.estimate),
            );
            let intersection_constant = match *constant_dim {
                Some(d) if d < 2 => return Err(Error::Usage("--constant-dim must be at least 2".into())),
                Some(d) => {
                    let (estimate, standard_error) = intersection_constant_check(d, *constant_samples, *seed);
                    Some(ConstantEstimate { dim: d, estimate, standard_error, exact: intersection_constant_exact(d) })
                }
                None => None,
            };
            write_json(out, &QuadratureReport { perimeter, intersection_constant })
        }
        Command::Steiner { polytope, eps, points, seed, .. } => {
            if eps.iter().any(|&e| !(e >= 0.0 && e.is_finite())) {
                return Err(Error::Usage("--eps values must be nonnegative".into()));
            }
            let fc = facet_complex_of(&resolve(polytope)?)?;
            let report = steiner_validate(&fc, eps, *points, *seed)?;
            let log_concavity = report.coefficients.quermass().map(|w| af_logconcavity_check(&w));
            if let Some(lc) = &log_concavity {
                tally.check("quermassintegral log-concavity", lc.passed, format!("{:?}", lc.ratios));
            }
            write_json(out, &SteinerOutput { report, log_concavity })
        }
    }
}

/// A file path if one exists, otherwise a generator string.
pub fn resolve(src: &str) -> Result<Polytope, Error> {
    if Path::new(src).exists() {
        return Ok(load(Path::new(src))?);
    }
    generate(src).map_err(|g| Error::Usage(format!("`{src}` is neither a readable file nor a generator ({g})")))
}

fn as_hpolytope(p: Polytope) -> Result<HPolytope, Error> {
    Ok(match p {
        Polytope::H(h) => h,
        Polytope::V(v) => v.polar()?,
    })
}

fn hull_of(fc: &FacetComplex) -> Result<VPolytope, Error> {
    let pts: Vec<Vec<f64>> = fc.boundary_points().into_iter().map(|i| fc.points()[i].clone()).collect();
    Ok(VPolytope::new(fc.dim(), pts)?)
}

#[derive(Debug, Serialize)]
pub struct AnalyzeReport {
    pub dim: usize,
    pub facets: usize,
    pub ridges: usize,
    pub certificate: GapCertificate,
    /// Largest entry of `|H + L − D|`.
    pub identity_defect: f64,
    pub j_avg: f64,
    pub chi2_total: f64,
    pub row_sum_defect: f64,
    pub stationarity_defect: f64,
    pub chain_gap: ChainGap,
    /// Only for H-polytope input.
    pub tilde: Option<TildeCheck>,
}

pub fn analyze(p: &Polytope, tol: &Tolerances, tally: &mut Tally) -> Result<AnalyzeReport, Error> {
    let fc = facet_complex_of(p)?;
    let bundle = SpectralBundle::build(&fc)?;
    let certificate = certify_bundle(&bundle, tol);
    tally.check("one positive eigenvalue", certificate.passed, format!("{:?}", certificate.spectrum));
    let identity_defect = bundle.identity_defect();
    let scale = bundle.d.iter().fold(1.0, |a: f64, &b| a.max(b));
    tally.check("H + L = D", identity_defect <= tol.rel * 1e3 * scale, format!("{identity_defect:e}"));
    let model = build_chain(&fc)?;
    tally.check("chain structure", structure_ok(&model), "");
    let chain_gap = spectral_gap_of_chain(&bundle)?;
    tally.check("chain spectrum in {0} ∪ [1, ∞)", chain_gap.passed, format!("{:?}", chain_gap.values));
    let tilde = match p {
        Polytope::H(h) => {
            let t = tilde_hessian_check(h)?;
            if let TildeCheck::Checked { passed, top, expected, .. } = &t {
                tally.check("rescaled Hessian top eigenvalue", *passed, format!("{top} vs {expected}"));
            }
            Some(t)
        }
        Polytope::V(_) => None,
    };
    Ok(AnalyzeReport {
        dim: fc.dim(),
        facets: fc.n_facets(),
        ridges: fc.ridges().len(),
        certificate,
        identity_defect,
        j_avg: model.j_avg,
        chi2_total: model.chi2_total(),
        row_sum_defect: model.row_sum_defect(),
        stationarity_defect: model.stationarity_defect(),
        chain_gap,
        tilde,
    })
}

fn record_bound(tally: &mut Tally, name: &str, r: &DiameterReport) {
    tally.check(format!("{name}: bounds ≥ exact diameter {}", r.exact_diameter), r.violations.is_empty(), r.violations.join("; "));
}

#[derive(Debug, Serialize)]
#[serde(rename_all = "camelCase")]
struct BoundRow {
    name: String,
    dim: usize,
    constraints: usize,
    vertices: usize,
    exact_diameter: usize,
    chebyshev_apriori: f64,
    chebyshev_certified: usize,
    angle_bound: f64,
    integer_headline: Option<f64>,
    integer_certified: Option<f64>,
    violations: usize,
}

impl BoundRow {
    fn new(name: &str, r: &DiameterReport) -> Self {
        Self {
            name: name.to_string(),
            dim: r.dim,
            constraints: r.constraints,
            vertices: r.n,
            exact_diameter: r.exact_diameter,
            chebyshev_apriori: r.chebyshev_apriori,
            chebyshev_certified: r.chebyshev_certified,
            angle_bound: r.angle_bound,
            integer_headline: r.integer_bound.as_ref().map(|t| t.headline),
            integer_certified: r.integer_bound.as_ref().map(|t| t.certified),
            violations: r.violations.len(),
        }
    }
}

#[derive(Debug, Serialize)]
struct ChainReport {
    facets: usize,
    j_avg: f64,
    giant: crate::chain::GiantComponentResult,
}

#[derive(Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct SmoothedRow {
    pub seed: u64,
    pub m: usize,
    pub d: usize,
    pub sigma: f64,
    pub alpha: f64,
    pub r_best: f64,
    pub event_b: bool,
    pub event_c: bool,
    pub j_avg: f64,
    pub pi_mass_g: f64,
    pub chi2_mass_g: f64,
    pub diam_g: usize,
    pub certified_cutoff: f64,
    pub shadow_mean: Option<f64>,
}

#[derive(Debug, Serialize)]
struct ConstantEstimate {
    dim: usize,
    estimate: f64,
    standard_error: f64,
    exact: f64,
}

#[derive(Debug, Serialize)]
struct QuadratureReport {
    perimeter: QuadratureEstimate,
    intersection_constant: Option<ConstantEstimate>,
}

#[derive(Debug, Serialize)]
struct SteinerOutput {
    report: SteinerReport,
    log_concavity: Option<LogConcavity>,
}

fn write_to(path: Option<&Path>, bytes: &[u8]) -> Result<(), Error> {
    let fail = |source, path: &Path| Error::Output { path: path.display().to_string(), source };
    match path {
        Some(p) => std::fs::write(p, bytes).map_err(|e| fail(e, p)),
        None => std::io::stdout().lock().write_all(bytes).map_err(|e| fail(e, Path::new("<stdout>"))),
    }
}

fn write_json<T: Serialize>(path: Option<&Path>, value: &T) -> Result<(), Error> {
    let text = serde_json::to_string_pretty(value).expect("report serializes") + "\n";
    write_to(path, text.as_bytes())
}

fn write_csv<T: Serialize>(path: Option<&Path>, rows: &[T]) -> Result<(), Error> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r).map_err(|e| Error::Usage(format!("csv: {e}")))?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Usage(format!("csv: {e}")))?;
    write_to(path, &bytes)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> (Result<(), Error>, Tally) {
        let cli = Cli::try_parse_from(std::iter::once("polygap").chain(args.iter().copied())).unwrap();
        let mut tally = Tally::default();
        let r = run(&cli.command, &mut tally);
        (r, tally)
    }

    #[test]
    fn analyze_cube() {
        let p = generate("cube:3").unwrap();
        let mut tally = Tally::default();
        let r = analyze(&p, &Tolerances::default(), &mut tally).unwrap();
        assert!(r.certificate.passed);
        assert!((r.j_avg - 1.0).abs() < 1e-12);
        assert_eq!(tally.failed(), 0);
        assert_eq!(tally.records().len(), 4);
    }

    #[test]
    fn analyze_h_input_checks_tilde() {
        let dir = tempfile::tempdir().unwrap();
        let out = dir.path().join("a.json");
        let (r, tally) = run_args(&["analyze", "--polytope", "simple:10:3:1", "--out", out.to_str().unwrap()]);
        r.unwrap();
        assert_eq!(tally.records().len(), 5);
        assert_eq!(tally.failed(), 0);
        assert!(std::fs::read_to_string(out).unwrap().contains("\"checked\""));
    }

    #[test]
    fn zero_trials_rejected() {
        let e = Cli::try_parse_from(["polygap", "chain", "--polytope", "cube:3", "--seed", "1", "--trials", "0"]);
        assert!(e.is_err());
    }

    #[test]
    fn stochastic_subcommands_need_seed() {
        assert!(Cli::try_parse_from(["polygap", "chain", "--polytope", "cube:3"]).is_err());
        assert!(Cli::try_parse_from(["polygap", "analyze", "--polytope", "cube:3"]).is_ok());
        assert!(Cli::try_parse_from(["polygap", "bound", "--corpus", "3"]).is_err());
    }

    #[test]
    fn malformed_file_names_field() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("bad.json");
        std::fs::write(&path, "{\"kind\": \"V\", \"dim\": 2, \"pointz\": []}").unwrap();
        let e = resolve(path.to_str().unwrap()).unwrap_err();
        assert!(e.to_string().contains("pointz"), "{e}");
        assert_eq!(e.exit_code(), 1);
    }

    #[test]
    fn bound_corpus_rows() {
        let dir = tempfile::tempdir().unwrap();
        let out = dir.path().join("b.csv");
        let (r, tally) = run_args(&["bound", "--corpus", "5", "--seed", "2", "--out", out.to_str().unwrap()]);
        r.unwrap();
        assert_eq!(tally.records().len(), 5);
        assert_eq!(tally.failed(), 0);
        assert_eq!(std::fs::read_to_string(out).unwrap().lines().count(), 6);
    }

    #[test]
    fn simplex_bound() {
        let p = as_hpolytope(generate("simplex:3").unwrap()).unwrap();
        let r = diameter_report(&p, 1.0).unwrap();
        assert_eq!(r.exact_diameter, 1);
    }
}
