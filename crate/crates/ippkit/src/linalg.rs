//! Dense vector helpers and the spectral-norm estimate.

use ndarray::{Array1, Array2};

/// Dense real vector.
pub type Vector = Array1<f64>;
/// Dense real matrix.
pub type Matrix = Array2<f64>;

/// Euclidean norm.
pub fn norm(x: &Vector) -> f64 {
    x.dot(x).sqrt()
}

/// Squared Euclidean distance.
pub fn dist_sq(x: &Vector, y: &Vector) -> f64 {
    x.iter().zip(y.iter()).map(|(a, b)| (a - b) * (a - b)).sum()
}

/// Euclidean distance.
pub fn dist(x: &Vector, y: &Vector) -> f64 {
    dist_sq(x, y).sqrt()
}

/// Relative stopping tolerance of [`spectral_norm`] on successive Rayleigh quotients.
pub const POWER_TOL: f64 = 1e-12;
/// Iteration cap of [`spectral_norm`].
pub const POWER_MAX_ITERS: usize = 10_000;

/// Largest singular value of `a` by power iteration on the smaller Gram matrix.
///
/// The start vector is a fixed pseudo-random sequence so the estimate is
/// reproducible. Returns 0 for an all-zero matrix.
pub fn spectral_norm(a: &Matrix) -> f64 {
    let (m, n) = a.dim();
    if m == 0 || n == 0 {
        return 0.0;
    }
    let transpose = m < n;
    let dim = if transpose { m } else { n };
    let mut state = 0x9E37_79B9_7F4A_7C15_u64;
    let mut v = Vector::from_shape_fn(dim, |_| {
        state = state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^= z >> 31;
        0.5 + (z >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    });
    let nv = norm(&v);
    v /= nv;
    let mut prev = 0.0;
    for _ in 0..POWER_MAX_ITERS {
        let w = if transpose {
            a.dot(&a.t().dot(&v))
        } else {
            a.t().dot(&a.dot(&v))
        };
        let rayleigh = v.dot(&w);
        let nw = norm(&w);
        if nw == 0.0 {
            return 0.0;
        }
        v = w / nw;
        if (rayleigh - prev).abs() <= POWER_TOL * rayleigh {
            return rayleigh.sqrt();
        }
        prev = rayleigh;
    }
    prev.sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::array;

    #[test]
    fn spectral_norm_of_diagonal() {
        let a = array![[3.0, 0.0], [0.0, -5.0], [0.0, 0.0]];
        assert!((spectral_norm(&a) - 5.0).abs() < 1e-8);
    }

    #[test]
    fn spectral_norm_of_zero() {
        assert_eq!(spectral_norm(&Matrix::zeros((3, 4))), 0.0);
    }

    #[test]
    fn spectral_norm_of_row_vector() {
        let a = array![[1.0, 1.0]];
        assert!((spectral_norm(&a) - 2f64.sqrt()).abs() < 1e-12);
    }
}
