use crate::linalg::{dot, norm, solve, Matrix};

/// Weights summing to one that minimise `‖Σ μ_i p_i‖` over the affine hull
/// of the selected points.
fn affine_minimizer(points: &[Vec<f64>], idx: &[usize]) -> Option<Vec<f64>> {
    let k = idx.len();
    let m = Matrix::from_fn(k + 1, k + 1, |i, j| match (i < k, j < k) {
        (true, true) => dot(&points[idx[i]], &points[idx[j]]),
        (true, false) | (false, true) => 1.0,
        (false, false) => 0.0,
    });
    let mut rhs = vec![0.0; k + 1];
    rhs[k] = 1.0;
    let sol = solve(&m, &rhs, 1e-14)?;
    Some(sol[..k].to_vec())
}

fn combine(points: &[Vec<f64>], idx: &[usize], w: &[f64]) -> Vec<f64> {
    let d = points[0].len();
    let mut x = vec![0.0; d];
    for (&i, &wi) in idx.iter().zip(w) {
        x.iter_mut().zip(&points[i]).for_each(|(a, b)| *a += wi * b);
    }
    x
}

/// Point of smallest norm in `conv(points)` (Wolfe's algorithm).
pub fn min_norm_point(points: &[Vec<f64>]) -> Vec<f64> {
    assert!(!points.is_empty());
    let scale = points.iter().map(|p| dot(p, p)).fold(0.0, f64::max).max(f64::MIN_POSITIVE);
    let tol = 1e-12 * scale;
    let eps = 1e-12;
    let start = (0..points.len()).min_by(|&i, &j| dot(&points[i], &points[i]).total_cmp(&dot(&points[j], &points[j]))).unwrap();
    let mut active = vec![start];
    let mut lambda = vec![1.0];
    let mut x = points[start].clone();
    for _ in 0..10 * points.len() + 100 {
        let xx = dot(&x, &x);
        let (j, v) = (0..points.len())
            .map(|j| (j, dot(&x, &points[j])))
            .min_by(|a, b| a.1.total_cmp(&b.1))
            .unwrap();
        if v >= xx - tol || active.contains(&j) {
            break;
        }
        active.push(j);
        lambda.push(0.0);
        loop {
            let Some(mu) = affine_minimizer(points, &active) else {
                // Affinely dependent active set: drop the newest point.
                active.pop();
                lambda.pop();
                return combine(points, &active, &lambda);
            };
            if mu.iter().all(|&m| m > eps) {
                lambda = mu;
                break;
            }
            let theta = lambda
                .iter()
                .zip(&mu)
                .filter(|(_, &m)| m <= eps)
                .map(|(&l, &m)| if l - m > 0.0 { l / (l - m) } else { 0.0 })
                .fold(1.0, f64::min);
            for (l, m) in lambda.iter_mut().zip(&mu) {
                *l = (1.0 - theta) * *l + theta * m;
            }
            let keep: Vec<bool> = lambda.iter().map(|&l| l > eps).collect();
            let mut k = 0;
            active.retain(|_| {
                k += 1;
                keep[k - 1]
            });
            lambda.retain(|&l| l > eps);
            let s: f64 = lambda.iter().sum();
            lambda.iter_mut().for_each(|l| *l /= s);
            if active.len() == 1 {
                lambda = vec![1.0];
                break;
            }
        }
        x = combine(points, &active, &lambda);
    }
    x
}

/// Euclidean distance from `x` to `conv(points)`.
pub fn distance_to_hull(points: &[Vec<f64>], x: &[f64]) -> f64 {
    let shifted: Vec<Vec<f64>> = points.iter().map(|p| p.iter().zip(x).map(|(a, b)| a - b).collect()).collect();
    norm(&min_norm_point(&shifted))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::generators::cube;
    use proptest::prelude::*;

    fn cube_distance(x: &[f64]) -> f64 {
        x.iter().map(|v| (v.abs() - 1.0).max(0.0).powi(2)).sum::<f64>().sqrt()
    }

    #[test]
    fn inside_is_zero() {
        let c = cube(3);
        assert!(distance_to_hull(c.points(), &[0.2, -0.3, 0.9]) < 1e-12);
    }

    #[test]
    fn segment() {
        let pts = vec![vec![0.0, 0.0], vec![2.0, 0.0]];
        assert!((distance_to_hull(&pts, &[1.0, 3.0]) - 3.0).abs() < 1e-12);
        assert!((distance_to_hull(&pts, &[-3.0, 4.0]) - 5.0).abs() < 1e-12);
    }

    proptest! {
        #[test]
        fn matches_cube_closed_form(x in -3.0f64..3.0, y in -3.0f64..3.0, z in -3.0f64..3.0) {
            let c = cube(3);
            let got = distance_to_hull(c.points(), &[x, y, z]);
            prop_assert!((got - cube_distance(&[x, y, z])).abs() < 1e-9);
        }
    }
}
