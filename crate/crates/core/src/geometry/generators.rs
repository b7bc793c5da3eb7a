//! Canonical and seeded random polytopes.

use super::polytope::{HPolytope, VPolytope};
use crate::linalg::orthonormal_basis;
use crate::rng::{Domain, StreamRng};

/// Vertices `{±1}^d`.
pub fn cube(d: usize) -> VPolytope {
    let points = (0..1usize << d)
        .map(|mask| (0..d).map(|k| if mask >> (d - 1 - k) & 1 == 1 { 1.0 } else { -1.0 }).collect())
        .collect();
    VPolytope::new(d, points).expect("cube is full-dimensional")
}

/// `{x : ±x_i ≤ 1}`.
pub fn cube_h(d: usize) -> HPolytope {
    let mut a = Vec::with_capacity(2 * d);
    for i in 0..d {
        for s in [1.0, -1.0] {
            let mut row = vec![0.0; d];
            row[i] = s;
            a.push(row);
        }
    }
    HPolytope::new(a, vec![1.0; 2 * d]).expect("cube is bounded")
}

/// The unit cube `[0,1]^d` as a V-polytope.
pub fn unit_cube(d: usize) -> VPolytope {
    cube(d).translated(&vec![1.0; d]).scaled(0.5)
}

/// `conv(±e_i)`.
pub fn cross_polytope(d: usize) -> VPolytope {
    let mut points = Vec::with_capacity(2 * d);
    for i in 0..d {
        for s in [1.0, -1.0] {
            let mut p = vec![0.0; d];
            p[i] = s;
            points.push(p);
        }
    }
    VPolytope::new(d, points).expect("cross-polytope is full-dimensional")
}

/// Regular simplex with the given edge length, centred at the origin.
pub fn regular_simplex(d: usize, edge: f64) -> VPolytope {
    // e_1..e_{d+1} have pairwise distance √2; express them in an
    // orthonormal basis of the hyperplane Σx = 0 after centring.
    let n = d + 1;
    let centred: Vec<Vec<f64>> = (0..n)
        .map(|i| (0..n).map(|k| if k == i { 1.0 } else { 0.0 } - 1.0 / n as f64).collect())
        .collect();
    let basis = orthonormal_basis(&centred[..d], 1e-12);
    let s = edge / 2f64.sqrt();
    let points = centred
        .iter()
        .map(|p| basis.iter().map(|q| s * p.iter().zip(q).map(|(x, y)| x * y).sum::<f64>()).collect())
        .collect();
    VPolytope::new(d, points).expect("simplex is full-dimensional")
}

/// `{x : x ≥ 0, Σx ≤ 1}`.
pub fn simplex_h(d: usize) -> HPolytope {
    let mut a: Vec<Vec<f64>> = (0..d)
        .map(|i| (0..d).map(|k| if k == i { -1.0 } else { 0.0 }).collect())
        .collect();
    a.push(vec![1.0; d]);
    let mut b = vec![0.0; d];
    b.push(1.0);
    HPolytope::new(a, b).expect("simplex is bounded")
}

/// `{x : x_i ≥ −1, Σx ≤ 1}`: an integral simplex with the origin inside.
pub fn simplex_h_centered(d: usize) -> HPolytope {
    let mut a: Vec<Vec<f64>> = (0..d)
        .map(|i| (0..d).map(|k| if k == i { -1.0 } else { 0.0 }).collect())
        .collect();
    a.push(vec![1.0; d]);
    HPolytope::new(a, vec![1.0; d + 1]).expect("simplex is bounded")
}

/// Square pyramid over `[−1,1]²` at height −1 with apex `(0,0,1)`; the
/// apex lies on four facets, so the polytope is not simple.
pub fn square_pyramid() -> HPolytope {
    HPolytope::new(
        vec![
            vec![2.0, 0.0, 1.0],
            vec![-2.0, 0.0, 1.0],
            vec![0.0, 2.0, 1.0],
            vec![0.0, -2.0, 1.0],
            vec![0.0, 0.0, -1.0],
        ],
        vec![1.0; 5],
    )
    .expect("pyramid is bounded")
}

/// `m` independent uniform points on the unit sphere of `R^d`.
///
/// Panics if the draw is not full-dimensional (probability zero for
/// `m ≥ d + 1`).
pub fn random_sphere(m: usize, d: usize, seed: u64) -> VPolytope {
    let mut r = StreamRng::new(seed, Domain::Generator, ((m as u64) << 8) | d as u64);
    let points = (0..m).map(|_| r.unit_vector(d)).collect();
    VPolytope::new(d, points).expect("random sphere points span R^d")
}

/// Random integral H-polytope: entries of `A` in `[−5, 5]`, `b` in `[1, 5]`,
/// redrawn until bounded. The origin is interior because `b > 0`.
pub fn random_integral(m: usize, d: usize, seed: u64) -> HPolytope {
    for attempt in 0u64.. {
        let mut r = StreamRng::new(seed, Domain::Generator, (1 << 32) | (attempt << 16) | ((m as u64) << 8) | d as u64);
        let a: Vec<Vec<f64>> = (0..m)
            .map(|_| loop {
                let row: Vec<f64> = (0..d).map(|_| r.below(11) as f64 - 5.0).collect();
                if row.iter().any(|&x| x != 0.0) {
                    break row;
                }
            })
            .collect();
        let b: Vec<f64> = (0..m).map(|_| 1.0 + r.below(5) as f64).collect();
        if let Ok(p) = HPolytope::new(a, b) {
            return p;
        }
    }
    unreachable!()
}
