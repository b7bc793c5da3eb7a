use super::matrix::{norm_inf, SymMatrix};
use super::LinalgError;
use crate::tolerances::{JACOBI_MAX_SWEEPS, JACOBI_OFF_DIAG, REL};

/// Eigen-decomposition of a symmetric matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    /// Ascending.
    pub values: Vec<f64>,
    /// `vectors[i]` is the unit eigenvector for `values[i]`.
    pub vectors: Vec<Vec<f64>>,
    /// `max_i ‖M v_i − λ_i v_i‖∞ / ‖M‖∞` (0 for the zero matrix).
    pub residual: f64,
}

impl Spectrum {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn max(&self) -> f64 {
        *self.values.last().expect("non-empty spectrum")
    }

    pub fn min(&self) -> f64 {
        self.values[0]
    }
}

/// Symmetric eigensolver by cyclic Jacobi rotations.
pub fn eigh(m: &SymMatrix) -> Result<Spectrum, LinalgError> {
    let n = m.n();
    if n == 0 {
        return Err(LinalgError::Shape("empty matrix".into()));
    }
    if (0..n).any(|i| m.row(i).iter().any(|x| !x.is_finite())) {
        return Err(LinalgError::NonFinite("eigh input"));
    }
    let mut a: Vec<f64> = (0..n).flat_map(|i| m.row(i).to_vec()).collect();
    let mut v = vec![0.0; n * n];
    for i in 0..n {
        v[i * n + i] = 1.0;
    }
    let total: f64 = a.iter().map(|x| x * x).sum::<f64>().sqrt();
    let mut converged = total == 0.0;
    let mut sweeps = 0;
    while !converged && sweeps < JACOBI_MAX_SWEEPS {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[i * n + j] * a[i * n + j])
            .sum::<f64>()
            .sqrt();
        if off <= JACOBI_OFF_DIAG * total {
            converged = true;
            break;
        }
        sweeps += 1;
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[p * n + q];
                if apq == 0.0 {
                    continue;
                }
                let app = a[p * n + p];
                let aqq = a[q * n + q];
                let theta = (aqq - app) / (2.0 * apq);
                let t = if theta.is_finite() {
                    theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
                } else {
                    0.0
                };
                if t == 0.0 {
                    // |apq| is negligible against the diagonal gap.
                    a[p * n + q] = 0.0;
                    a[q * n + p] = 0.0;
                    continue;
                }
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[k * n + p];
                    let akq = a[k * n + q];
                    a[k * n + p] = c * akp - s * akq;
                    a[k * n + q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p * n + k];
                    let aqk = a[q * n + k];
                    a[p * n + k] = c * apk - s * aqk;
                    a[q * n + k] = s * apk + c * aqk;
                }
                a[p * n + q] = 0.0;
                a[q * n + p] = 0.0;
                for k in 0..n {
                    let vkp = v[k * n + p];
                    let vkq = v[k * n + q];
                    v[k * n + p] = c * vkp - s * vkq;
                    v[k * n + q] = s * vkp + c * vkq;
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[i * n + i].total_cmp(&a[j * n + j]));
    let values: Vec<f64> = order.iter().map(|&i| a[i * n + i]).collect();
    let vectors: Vec<Vec<f64>> =
        order.iter().map(|&j| (0..n).map(|k| v[k * n + j]).collect()).collect();

    let scale = m.norm_inf();
    let residual = if scale == 0.0 {
        0.0
    } else {
        values
            .iter()
            .zip(&vectors)
            .map(|(&l, x)| {
                let mx = m.mul_vec(x);
                norm_inf(&mx.iter().zip(x).map(|(y, xi)| y - l * xi).collect::<Vec<_>>())
            })
            .fold(0.0, f64::max)
            / scale
    };
    if !converged || residual > REL {
        return Err(LinalgError::NoConvergence { sweeps, residual });
    }
    Ok(Spectrum { values, vectors, residual })
}
