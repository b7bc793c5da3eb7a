use super::matrix::{norm, sub, Matrix};
use crate::tolerances::UNIFORMIZATION_TAIL;

/// k-dimensional volume of the simplex on `k+1` points,
/// `sqrt(det(MᵀM))/k!` with `M = [p₁−p₀ … p_k−p₀]`. Affinely dependent
/// input yields 0.
pub fn gram_volume<P: AsRef<[f64]>>(points: &[P]) -> f64 {
    let Some(p0) = points.first() else { return 0.0 };
    let p0 = p0.as_ref();
    let k = points.len() - 1;
    // Gram–Schmidt on the edge vectors: sqrt(det(MᵀM)) = Π ‖rᵢ‖.
    let mut basis: Vec<Vec<f64>> = Vec::with_capacity(k);
    let mut vol = 1.0;
    for (i, p) in points[1..].iter().enumerate() {
        let e = sub(p.as_ref(), p0);
        let n0 = norm(&e);
        let mut r = e;
        for _ in 0..2 {
            for q in &basis {
                let c: f64 = r.iter().zip(q).map(|(x, y)| x * y).sum();
                r.iter_mut().zip(q).for_each(|(x, y)| *x -= c * y);
            }
        }
        let nr = norm(&r);
        if n0 == 0.0 || nr <= 1e-12 * n0 {
            return 0.0;
        }
        vol *= nr / (i + 1) as f64;
        basis.push(r.iter().map(|x| x / nr).collect());
    }
    vol
}

/// Chebyshev polynomial of the first kind by the three-term recurrence.
pub fn chebyshev_t(k: u32, x: f64) -> f64 {
    match k {
        0 => 1.0,
        1 => x,
        _ => {
            let (mut prev, mut cur) = (1.0, x);
            for _ in 1..k {
                let next = 2.0 * x * cur - prev;
                prev = cur;
                cur = next;
            }
            cur
        }
    }
}

/// Volume of the unit ball in `R^d`.
pub fn ball_volume(d: usize) -> f64 {
    match d {
        0 => 1.0,
        1 => 2.0,
        _ => ball_volume(d - 2) * std::f64::consts::TAU / d as f64,
    }
}

/// Surface area of the unit sphere `S^{d−1} ⊂ R^d`.
pub fn sphere_area(d: usize) -> f64 {
    d as f64 * ball_volume(d)
}

/// `log Γ(x)` for `x > 0` (Lanczos, g = 7). Used for Poisson weights.
pub fn ln_gamma(x: f64) -> f64 {
    const G: f64 = 7.0;
    const C: [f64; 9] = [
        0.999_999_999_999_809_9,
        676.520_368_121_885_1,
        -1_259.139_216_722_402_8,
        771.323_428_777_653_1,
        -176.615_029_162_140_6,
        12.507_343_278_686_905,
        -0.138_571_095_265_720_12,
        9.984_369_578_019_572e-6,
        1.505_632_735_149_311_6e-7,
    ];
    if x < 0.5 {
        let pi = std::f64::consts::PI;
        return (pi / (pi * x).sin()).ln() - ln_gamma(1.0 - x);
    }
    let x = x - 1.0;
    let mut a = C[0];
    let t = x + G + 0.5;
    for (i, c) in C.iter().enumerate().skip(1) {
        a += c / (x + i as f64);
    }
    0.5 * (std::f64::consts::TAU).ln() + (x + 0.5) * t.ln() - t + a.ln()
}

/// `p · exp(tQ)` for a CTMC generator `Q` by uniformization: with
/// `Λ = max |Q_ii|` and `P = I + Q/Λ`, `p·exp(tQ) = Σ_k Pois(k; Λt) p Pᵏ`.
/// The series is cut once the Poisson tail is below the truncation
/// tolerance and the result is renormalized by the retained weight.
pub fn uniformized_exp(q: &Matrix, p: &[f64], t: f64) -> Vec<f64> {
    let n = q.rows();
    assert_eq!(n, q.cols());
    assert_eq!(n, p.len());
    let lambda = (0..n).map(|i| q[(i, i)].abs()).fold(0.0, f64::max);
    if t == 0.0 || lambda == 0.0 {
        return p.to_vec();
    }
    let mut step = q.clone();
    for i in 0..n {
        for j in 0..n {
            step[(i, j)] = q[(i, j)] / lambda + if i == j { 1.0 } else { 0.0 };
        }
        // Remove rounding drift so rows of P sum to one and stay nonnegative.
        step[(i, i)] = 1.0 - (0..n).filter(|&j| j != i).map(|j| step[(i, j)]).sum::<f64>();
        if step[(i, i)] < 0.0 {
            step[(i, i)] = 0.0;
        }
    }
    let lt = lambda * t;
    let ln_lt = lt.ln();
    let max_terms = (lt + 60.0 * lt.sqrt() + 200.0) as usize;
    let mut v = p.to_vec();
    let mut acc = vec![0.0; n];
    let mut total_weight = 0.0;
    for k in 0..=max_terms {
        let w = (-lt + k as f64 * ln_lt - ln_gamma(k as f64 + 1.0)).exp();
        if w > 0.0 {
            acc.iter_mut().zip(&v).for_each(|(a, x)| *a += w * x);
            total_weight += w;
        }
        if k as f64 > lt {
            // Tail beyond k is at most w·r/(1−r) with r = Λt/(k+1).
            let r = lt / (k as f64 + 1.0);
            if w * r / (1.0 - r) < UNIFORMIZATION_TAIL {
                break;
            }
        }
        v = step.vec_mul(&v);
    }
    acc.iter().map(|x| (x / total_weight).max(0.0)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn gram_volume_examples() {
        let s = gram_volume(&[vec![1.0, 0.0, 0.0], vec![0.0, 1.0, 0.0], vec![0.0, 0.0, 1.0]]);
        assert!((s - 3f64.sqrt() / 2.0).abs() < 1e-15);
        assert_eq!(gram_volume(&[vec![0.0, 0.0], vec![1.0, 0.0]]), 1.0);
        assert_eq!(gram_volume(&[vec![0.0, 0.0], vec![1.0, 0.0], vec![2.0, 0.0]]), 0.0);
        assert_eq!(gram_volume(&[vec![5.0, 1.0]]), 1.0);
    }

    #[test]
    fn gram_volume_matches_determinant() {
        // Full-dimensional simplex: |det M| / d!.
        let pts = [vec![0.3, 0.1, -0.2], vec![1.2, 0.4, 0.0], vec![0.1, 1.7, 0.3], vec![-0.2, 0.5, 2.1]];
        let m = Matrix::from_fn(3, 3, |i, j| pts[j + 1][i] - pts[0][i]);
        let want = super::super::matrix::det(&m).abs() / 6.0;
        assert!((gram_volume(&pts) - want).abs() < 1e-14);
    }

    #[test]
    fn chebyshev_examples() {
        for k in 0..20 {
            assert_eq!(chebyshev_t(k, 1.0), 1.0);
        }
        assert_eq!(chebyshev_t(3, 2.0), 26.0);
        assert!((chebyshev_t(2, 0.5) + 0.5).abs() < 1e-15);
    }

    #[test]
    fn ball_and_sphere_constants() {
        let pi = std::f64::consts::PI;
        assert!((ball_volume(2) - pi).abs() < 1e-15);
        assert!((ball_volume(3) - 4.0 * pi / 3.0).abs() < 1e-15);
        assert!((sphere_area(3) - 4.0 * pi).abs() < 1e-14);
        assert!((sphere_area(2) - 2.0 * pi).abs() < 1e-15);
    }

    #[test]
    fn ln_gamma_at_integers_and_half() {
        let mut f = 1.0f64;
        for n in 1..30 {
            assert!((ln_gamma(n as f64) - f.ln()).abs() < 1e-12 * f.ln().abs().max(1.0), "{n}");
            f *= n as f64;
        }
        assert!((ln_gamma(0.5) - std::f64::consts::PI.sqrt().ln()).abs() < 1e-13);
    }

    fn two_state() -> Matrix {
        Matrix::from_rows(&[vec![-1.0, 1.0], vec![1.0, -1.0]]).unwrap()
    }

    #[test]
    fn two_state_closed_form() {
        let q = two_state();
        assert_eq!(uniformized_exp(&q, &[1.0, 0.0], 0.0), vec![1.0, 0.0]);
        for &t in &[0.1, 0.5, 1.0, 3.0, 50.0] {
            let p = uniformized_exp(&q, &[1.0, 0.0], t);
            let e = (-2.0 * t).exp();
            assert!((p[0] - (1.0 + e) / 2.0).abs() < 1e-12, "t={t}");
            assert!((p[1] - (1.0 - e) / 2.0).abs() < 1e-12, "t={t}");
        }
        let p = uniformized_exp(&q, &[1.0, 0.0], 40.0);
        assert!((p[0] - 0.5).abs() < 1e-8);
    }

    #[test]
    fn long_horizon_does_not_underflow() {
        let q = two_state();
        let p = uniformized_exp(&q, &[1.0, 0.0], 2000.0);
        assert!((p[0] - 0.5).abs() < 1e-10 && (p[1] - 0.5).abs() < 1e-10);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn chebyshev_is_cosine(k in 0u32..40, theta in 0.0f64..std::f64::consts::PI) {
            prop_assert!((chebyshev_t(k, theta.cos()) - (k as f64 * theta).cos()).abs() < 1e-10);
        }

        #[test]
        fn uniformization_preserves_mass(n in 2usize..7, seed in 0u64..10_000, t in 0.0f64..20.0) {
            let mut r = crate::rng::StreamRng::new(seed, crate::rng::Domain::Probe, 1);
            let mut q = Matrix::from_fn(n, n, |i, j| if i == j { 0.0 } else { r.uniform() * 3.0 });
            for i in 0..n {
                let s: f64 = (0..n).map(|j| q[(i, j)]).sum();
                q[(i, i)] = -s;
            }
            let mut p: Vec<f64> = (0..n).map(|_| r.uniform()).collect();
            let s: f64 = p.iter().sum();
            p.iter_mut().for_each(|x| *x /= s);
            let out = uniformized_exp(&q, &p, t);
            prop_assert!(out.iter().all(|&x| x >= 0.0));
            prop_assert!((out.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        }

        #[test]
        fn stationary_start_is_fixed(n in 2usize..6, seed in 0u64..10_000, t in 0.0f64..20.0) {
            // Symmetric rates make the uniform distribution stationary.
            let mut r = crate::rng::StreamRng::new(seed, crate::rng::Domain::Probe, 2);
            let mut q = Matrix::zeros(n, n);
            for i in 0..n {
                for j in i + 1..n {
                    let w = r.uniform();
                    q[(i, j)] = w;
                    q[(j, i)] = w;
                }
            }
            for i in 0..n {
                let s: f64 = (0..n).filter(|&j| j != i).map(|j| q[(i, j)]).sum();
                q[(i, i)] = -s;
            }
            let p = vec![1.0 / n as f64; n];
            let out = uniformized_exp(&q, &p, t);
            for x in out {
                prop_assert!((x - 1.0 / n as f64).abs() < 1e-10);
            }
        }
    }
}
