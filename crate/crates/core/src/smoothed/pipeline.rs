use serde::Serialize;

use super::instance::{check_assumptions, sample_instance, sample_two_stage, AssumptionReport};
use super::planes::{shadow_counts, summarize_counts, PlaneSource, ShadowStats};
use super::SmoothedError;
use crate::chain::{build_chain, giant_component, nondegeneracy_report, GiantComponentOptions, GiantComponentResult};
use crate::geometry::{facets_of_vpolytope, FacetPath, VPolytope};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EndToEndOptions {
    pub sigma: f64,
    /// `Some(e)` splits the noise as `σ₁ = m^e σ₂`; `None` perturbs once.
    pub split_exponent: Option<f64>,
    pub chain: GiantComponentOptions,
    /// Planes for the shadow-vertex mean; 0 skips it.
    pub planes: usize,
    /// Offset of the plane-sampling surface from the base hull.
    pub plane_eta: f64,
}

impl Default for EndToEndOptions {
    fn default() -> Self {
        Self {
            sigma: 0.1,
            split_exponent: Some(8.0),
            chain: GiantComponentOptions::default(),
            planes: 200,
            plane_eta: 0.05,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EndToEndReport {
    pub seed: u64,
    pub m: usize,
    pub d: usize,
    pub sigma: f64,
    /// `(σ₁, σ₂, shrink)` when the two-stage split was used.
    pub stages: Option<(f64, f64, f64)>,
    /// Assumptions for the final stage (base and noise actually fed to `K`).
    pub assumptions: AssumptionReport,
    pub facets: usize,
    pub j_avg: f64,
    pub giant: GiantComponentResult,
    /// `2 π(Ω∖G) / χ₂(Ω)`, an upper bound on `1 − χ₂(G)/χ₂(Ω)` when
    /// `χ₂/2 ≤ π` holds per facet.
    pub chi2_deficit_bound: f64,
    pub shadow: Option<ShadowStats>,
    pub violations: Vec<String>,
}

/// Sample `K`, check the model assumptions, build the facet chain and
/// extract the giant component. Assumption failures are reported, not
/// fatal; soundness failures land in `violations`.
pub fn end_to_end(base: Vec<Vec<f64>>, opts: &EndToEndOptions, seed: u64) -> Result<EndToEndReport, SmoothedError> {
    let (inst, stages) = match opts.split_exponent {
        Some(e) => {
            let ts = sample_two_stage(base, opts.sigma, e, seed)?;
            (ts.instance, Some((ts.sigma1, ts.sigma2, ts.shrink)))
        }
        None => (sample_instance(base, opts.sigma, seed)?, None),
    };
    let assumptions = check_assumptions(&inst);
    let fc = inst.facet_complex()?;
    let model = build_chain(&fc)?;
    let giant = giant_component(&model, &opts.chain, seed)?;

    let mut violations = giant.violations.clone();
    let nd = nondegeneracy_report(&model, &fc, assumptions.r_best, inst.m());
    if !nd.violations.is_empty() {
        violations.push(format!("χ₂/2 > π on facets {:?}", nd.violations));
    }
    let pi_total: f64 = model.pi.iter().sum();
    let pi_outside = pi_total - giant.component.iter().map(|&s| model.pi[s]).sum::<f64>();
    let chi2_deficit_bound = 2.0 * pi_outside / model.chi2_total();
    if 1.0 - giant.chi2_mass > chi2_deficit_bound + 1e-12 {
        violations.push(format!(
            "χ₂ deficit {} exceeds 2π(Ω∖G)/χ₂(Ω) = {chi2_deficit_bound}",
            1.0 - giant.chi2_mass
        ));
    }
    if !(0.0..=1.0 + 1e-12).contains(&giant.pi_mass) || !(0.0..=1.0 + 1e-12).contains(&giant.chi2_mass) {
        violations.push("mass outside [0, 1]".into());
    }

    let shadow = if opts.planes > 0 {
        let h = fc.to_hpolytope()?;
        let src = PlaneSource::Boundary { body: inst.base_body()?, eta: opts.plane_eta };
        let counts = shadow_counts(&h, &src, opts.planes, seed)?;
        if let Some(&c) = counts.iter().find(|&&c| c > fc.n_facets()) {
            violations.push(format!("section with {c} vertices exceeds {} facets", fc.n_facets()));
        }
        Some(summarize_counts(&counts))
    } else {
        None
    };

    Ok(EndToEndReport {
        seed,
        m: inst.m(),
        d: inst.dim,
        sigma: opts.sigma,
        stages,
        assumptions,
        facets: fc.n_facets(),
        j_avg: model.j_avg,
        giant,
        chi2_deficit_bound,
        shadow,
        violations,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ShadowLevel {
    pub sigma: f64,
    pub stats: ShadowStats,
    /// Largest section count relative to `m`.
    pub max_over_m: f64,
}

/// Mean plane-section vertex count of `conv(a_j + g_j)` for each `σ`,
/// averaged over `instances` perturbations and `planes` planes each.
/// Planes pass through the boundary of `conv(a_j) + 2ηB`.
pub fn shadow_vertex_experiment(
    base: &[Vec<f64>],
    sigmas: &[f64],
    instances: usize,
    planes: usize,
    eta: f64,
    seed: u64,
) -> Result<Vec<ShadowLevel>, SmoothedError> {
    let d = base.first().map_or(0, Vec::len);
    let body = VPolytope::new(d, base.to_vec())?;
    let src = PlaneSource::Boundary { body, eta };
    sigmas
        .iter()
        .map(|&sigma| {
            let mut counts = Vec::new();
            for i in 0..instances {
                let inst = sample_instance(base.to_vec(), sigma, seed.wrapping_add(i as u64))?;
                let fc = facets_of_vpolytope(&inst.body()?, FacetPath::General)?;
                let h = fc.to_hpolytope()?;
                counts.extend(shadow_counts(&h, &src, planes, seed.wrapping_add(i as u64))?);
            }
            let stats = summarize_counts(&counts);
            let max_over_m = stats.max as f64 / base.len() as f64;
            Ok(ShadowLevel { sigma, stats, max_over_m })
        })
        .collect()
}
