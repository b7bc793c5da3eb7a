//! Named test instances shared by the integration suites and the CLI
//! `--polytope` generator syntax.

use crate::geometry::generators::{cross_polytope, cube, random_integral, random_sphere, regular_simplex, square_pyramid};
use crate::geometry::io::Polytope;
use crate::geometry::{facet_complex_of_hpolytope, facets_of_vpolytope, FacetComplex, FacetPath, GeometryError, HPolytope};
use crate::rng::{Domain, StreamRng};

#[derive(Debug, Clone, PartialEq)]
pub struct CorpusEntry {
    pub name: String,
    pub polytope: Polytope,
}

impl CorpusEntry {
    fn new(name: impl Into<String>, polytope: Polytope) -> Self {
        Self { name: name.into(), polytope }
    }

    /// V-polytopes use their hull; H-polytopes with the origin inside use
    /// their own facets.
    pub fn facet_complex(&self) -> Result<FacetComplex, GeometryError> {
        facet_complex_of(&self.polytope)
    }
}

pub fn facet_complex_of(p: &Polytope) -> Result<FacetComplex, GeometryError> {
    match p {
        Polytope::V(v) => facets_of_vpolytope(v, FacetPath::General),
        Polytope::H(h) => Ok(facet_complex_of_hpolytope(h)?.0),
    }
}

/// Hand-checkable instances plus a few random ones in `d = 3`.
pub fn standard() -> Vec<CorpusEntry> {
    let mut out = vec![
        CorpusEntry::new("square", Polytope::V(cube(2))),
        CorpusEntry::new("cube3", Polytope::V(cube(3))),
        CorpusEntry::new("cube4", Polytope::V(cube(4))),
        CorpusEntry::new("cross3", Polytope::V(cross_polytope(3))),
        CorpusEntry::new("cross4", Polytope::V(cross_polytope(4))),
        CorpusEntry::new("simplex3", Polytope::V(regular_simplex(3, 1.0))),
        CorpusEntry::new("simplex4", Polytope::V(regular_simplex(4, 1.0))),
        CorpusEntry::new("pyramid", Polytope::H(square_pyramid())),
    ];
    for (m, seed) in [(8, 1), (12, 2), (20, 3), (30, 4)] {
        out.push(CorpusEntry::new(format!("sphere-{m}-3-{seed}"), Polytope::V(random_sphere(m, 3, seed))));
    }
    for seed in 0..3 {
        out.push(CorpusEntry::new(format!("simple-12-3-{seed}"), Polytope::H(random_simple(12, 3, seed))));
    }
    out
}

/// `count` simplicial polytopes with `3 ≤ d ≤ 5` and `d + 1 ≤ m ≤ 20`.
pub fn random_simplicial(count: usize, seed: u64) -> Vec<CorpusEntry> {
    let mut r = StreamRng::new(seed, Domain::Corpus, 1);
    (0..count)
        .map(|i| {
            let d = 3 + r.below(3);
            let m = d + 1 + r.below(20 - d);
            let s = seed.wrapping_mul(1000).wrapping_add(i as u64);
            CorpusEntry::new(format!("sphere-{m}-{d}-{s}"), Polytope::V(random_sphere(m, d, s)))
        })
        .collect()
}

/// Polar of `m` random unit vectors, redrawn until the origin is interior.
/// Simple with probability one.
pub fn random_simple(m: usize, d: usize, seed: u64) -> HPolytope {
    (0u64..)
        .find_map(|k| random_sphere(m, d, seed.wrapping_add(k << 32)).polar().ok())
        .expect("some draw contains the origin")
}

/// `count` simple polytopes with `2 ≤ d ≤ 4` and `2d + 1 ≤ m ≤ 2d + 8`.
pub fn random_simple_family(count: usize, seed: u64) -> Vec<CorpusEntry> {
    let mut r = StreamRng::new(seed, Domain::Corpus, 2);
    (0..count)
        .map(|i| {
            let d = 2 + r.below(3);
            let m = 2 * d + 1 + r.below(8);
            let s = seed.wrapping_mul(1000).wrapping_add(i as u64);
            CorpusEntry::new(format!("simple-{m}-{d}-{s}"), Polytope::H(random_simple(m, d, s)))
        })
        .collect()
}

/// `count` integral H-polytopes with `2 ≤ d ≤ 4`, `d + 1 ≤ m ≤ d + 6`,
/// entries in `[−5, 5]`.
pub fn random_integral_family(count: usize, seed: u64) -> Vec<CorpusEntry> {
    let mut r = StreamRng::new(seed, Domain::Corpus, 3);
    (0..count)
        .map(|i| {
            let d = 2 + r.below(3);
            let m = d + 1 + r.below(6);
            let s = seed.wrapping_mul(1000).wrapping_add(i as u64);
            CorpusEntry::new(format!("integral-{m}-{d}-{s}"), Polytope::H(random_integral(m, d, s)))
        })
        .collect()
}

/// Parse a generator string such as `cube:3`, `cross:4`, `simplex:3`,
/// `pyramid`, `sphere:30:3:7`, `simple:12:3:0` or `integral:6:3:2`
/// (`name:m:d:seed` for the random families).
pub fn generate(desc: &str) -> Result<Polytope, String> {
    let parts: Vec<&str> = desc.split(':').collect();
    let num = |i: usize| -> Result<u64, String> {
        parts
            .get(i)
            .ok_or_else(|| format!("generator `{desc}` needs argument {i}"))?
            .parse()
            .map_err(|_| format!("generator `{desc}`: argument {i} is not a nonnegative integer"))
    };
    let arity = |n: usize| {
        if parts.len() == n + 1 {
            Ok(())
        } else {
            Err(format!("generator `{}` takes {n} arguments, got {}", parts[0], parts.len() - 1))
        }
    };
    let dim = |i: usize| -> Result<usize, String> {
        let d = num(i)? as usize;
        if d == 0 {
            Err(format!("generator `{desc}`: dimension must be positive"))
        } else {
            Ok(d)
        }
    };
    Ok(match parts[0] {
        "cube" => {
            arity(1)?;
            Polytope::V(cube(dim(1)?))
        }
        "cross" => {
            arity(1)?;
            Polytope::V(cross_polytope(dim(1)?))
        }
        "simplex" => {
            arity(1)?;
            Polytope::V(regular_simplex(dim(1)?, 1.0))
        }
        "pyramid" => {
            arity(0)?;
            Polytope::H(square_pyramid())
        }
        "sphere" | "simple" | "integral" => {
            arity(3)?;
            let (m, d, seed) = (num(1)? as usize, dim(2)?, num(3)?);
            let need = if parts[0] == "simple" { 2 * d } else { d + 1 };
            if m < need {
                return Err(format!("generator `{desc}` needs m ≥ {need}"));
            }
            match parts[0] {
                "sphere" => Polytope::V(random_sphere(m, d, seed)),
                "simple" => Polytope::H(random_simple(m, d, seed)),
                _ => Polytope::H(random_integral(m, d, seed)),
            }
        }
        other => return Err(format!("unknown generator `{other}`")),
    })
}
