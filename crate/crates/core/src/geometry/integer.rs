use itertools::Itertools;
use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::Serialize;

use super::GeometryError;

/// Integer-data parameters of `{x : A x ≤ b}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IntegerData {
    /// Largest absolute d×d minor of `[A | b]`.
    pub delta: u64,
    /// Largest absolute entry of `A`.
    pub norm_a: u64,
    /// Largest absolute entry of `b`.
    pub norm_b: u64,
    /// Largest absolute (d−1)×(d−1) minor of `A`.
    pub delta_d_minus_1: u64,
}

fn to_integer(x: f64, location: impl FnOnce() -> String) -> Result<i64, GeometryError> {
    if x.fract() != 0.0 || !x.is_finite() || x.abs() > 2f64.powi(53) {
        return Err(GeometryError::NonIntegral { value: x, location: location() });
    }
    Ok(x as i64)
}

/// Exact determinant by fraction-free (Bareiss) elimination.
fn bareiss(mut m: Vec<Vec<BigInt>>) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::from(1);
    }
    let mut sign = 1;
    let mut prev = BigInt::from(1);
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            let Some(p) = (k + 1..n).find(|&i| !m[i][k].is_zero()) else { return BigInt::zero() };
            m.swap(k, p);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                m[i][j] = v / &prev;
            }
        }
        prev = m[k][k].clone();
    }
    m[n - 1][n - 1].clone() * sign
}

fn max_minor(rows: &[Vec<i64>], size: usize) -> BigInt {
    let cols = rows.first().map_or(0, Vec::len);
    let mut best = BigInt::zero();
    if size == 0 {
        return BigInt::from(1);
    }
    for r in (0..rows.len()).combinations(size) {
        for c in (0..cols).combinations(size) {
            let m: Vec<Vec<BigInt>> =
                r.iter().map(|&i| c.iter().map(|&j| BigInt::from(rows[i][j])).collect()).collect();
            let v = bareiss(m).abs();
            if v > best {
                best = v;
            }
        }
    }
    best
}

/// Δ, ‖A‖∞, ‖b‖∞ and Δ_{d−1} by exhaustive minors.
pub fn integer_data(a: &[Vec<f64>], b: &[f64]) -> Result<IntegerData, GeometryError> {
    let d = a.first().map_or(0, Vec::len);
    let mut ai = Vec::with_capacity(a.len());
    let mut abi = Vec::with_capacity(a.len());
    for (i, row) in a.iter().enumerate() {
        let r: Vec<i64> = row
            .iter()
            .enumerate()
            .map(|(j, &x)| to_integer(x, || format!("A[{i}][{j}]")))
            .collect::<Result<_, _>>()?;
        let bi = to_integer(b[i], || format!("b[{i}]"))?;
        let mut rb = r.clone();
        rb.push(bi);
        ai.push(r);
        abi.push(rb);
    }
    let to_u64 = |x: BigInt| x.to_u64().ok_or(GeometryError::Overflow);
    let norm_a = ai.iter().flatten().map(|x| x.unsigned_abs()).max().unwrap_or(0);
    let norm_b = abi.iter().map(|r| r[d].unsigned_abs()).max().unwrap_or(0);
    Ok(IntegerData {
        delta: to_u64(max_minor(&abi, d))?,
        norm_a,
        norm_b,
        delta_d_minus_1: to_u64(max_minor(&ai, d.saturating_sub(1)))?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::generators::cube_h;
    use crate::linalg::{det, Matrix};
    use proptest::prelude::*;

    #[test]
    fn cube_data() {
        let c = cube_h(3);
        let data = integer_data(c.a(), c.b()).unwrap();
        // Rows e1, −e1, e2 on columns (x1, x2, b): [[1,0,1],[−1,0,1],[0,1,1]]
        // has determinant −2; no 3×3 minor is larger.
        assert_eq!(data, IntegerData { delta: 2, norm_a: 1, norm_b: 1, delta_d_minus_1: 1 });
    }

    #[test]
    fn diagonal_example() {
        let data = integer_data(&[vec![2.0, 0.0], vec![0.0, 3.0]], &[1.0, 1.0]).unwrap();
        assert_eq!(data.delta, 6);
        assert_eq!(data.delta_d_minus_1, 3);
    }

    #[test]
    fn non_integral_rejected() {
        assert!(matches!(
            integer_data(&[vec![0.5]], &[1.0]),
            Err(GeometryError::NonIntegral { .. })
        ));
    }

    #[test]
    fn overflow_reported() {
        let big = 2f64.powi(40);
        let a = vec![vec![big, 0.0], vec![0.0, big]];
        assert!(matches!(integer_data(&a, &[1.0, 1.0]), Err(GeometryError::Overflow)));
    }

    proptest! {
        #[test]
        fn bareiss_matches_float_determinant(entries in proptest::collection::vec(-9i64..=9, 16)) {
            let m: Vec<Vec<BigInt>> = entries.chunks(4).map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
            let f = Matrix::from_fn(4, 4, |i, j| entries[4 * i + j] as f64);
            let exact = bareiss(m).to_f64().unwrap();
            prop_assert!((exact - det(&f)).abs() < 1e-6);
        }

        #[test]
        fn scaling_b_scales_delta_at_most_linearly(k in 1i64..6, seed in 0u64..200) {
            let p = crate::geometry::generators::random_integral(6, 3, seed);
            let d1 = integer_data(p.a(), p.b()).unwrap().delta;
            let b2: Vec<f64> = p.b().iter().map(|x| x * k as f64).collect();
            let d2 = integer_data(p.a(), &b2).unwrap().delta;
            prop_assert!(d2 >= d1 && d2 <= k as u64 * d1);
        }
    }
}
