//! Seeded LASSO and linearly constrained QP generators.

use std::sync::Arc;

use super::rng::SplitMix64;
use crate::error::{OptError, Result};
use crate::linalg::{Matrix, Vector, spectral_norm};
use crate::problem::{CompositeProblem, ConstrainedProblem, LeastSquares, Quadratic};
use crate::prox::ProxKind;

/// Half-width of the LCQP box `[−10, 10]ⁿ`.
pub const BOX_BOUND: f64 = 10.0;

/// `min ½‖Ax − b‖² + γ‖x‖₁` with sparse Gaussian `A` and uniform `b`.
#[derive(Clone, Debug, PartialEq)]
pub struct LassoInstance {
    /// Design matrix (`m × n`).
    pub a: Matrix,
    /// Observations, uniform on `[0, 1]`.
    pub b: Vector,
    /// Weight of the ℓ₁ term.
    pub gamma: f64,
    /// Target density of `A`.
    pub density: f64,
    /// Generator seed.
    pub seed: u64,
}

impl LassoInstance {
    /// Number of variables.
    pub fn n(&self) -> usize {
        self.a.ncols()
    }

    /// Number of observations.
    pub fn m(&self) -> usize {
        self.a.nrows()
    }

    /// Composite problem with `L_f = ‖A‖²`.
    pub fn problem(&self) -> Result<CompositeProblem> {
        let f = LeastSquares::new(self.a.clone(), self.b.clone())?;
        CompositeProblem::new(Arc::new(f), Arc::new(ProxKind::l1(self.gamma)?))
    }

    /// Start point used by all solvers (the origin).
    pub fn start(&self) -> Vector {
        Vector::zeros(self.n())
    }
}

/// Draws a LASSO instance: each entry of `A` is nonzero with probability
/// `density` and then standard normal; `b` is uniform on `[0, 1]`.
pub fn gen_lasso(n: usize, m: usize, density: f64, gamma: f64, seed: u64) -> Result<LassoInstance> {
    if n == 0 || m == 0 {
        return Err(OptError::Dimension(format!("LASSO needs n, m >= 1, got n={n}, m={m}")));
    }
    if !(0.0..=1.0).contains(&density) {
        return Err(OptError::Parameter(format!("density must lie in [0,1], got {density}")));
    }
    if !(gamma >= 0.0) {
        return Err(OptError::Parameter(format!("gamma must be nonnegative, got {gamma}")));
    }
    let mut rng = SplitMix64::new(seed);
    let a = Matrix::from_shape_simple_fn((m, n), || if rng.bernoulli(density) { rng.normal() } else { 0.0 });
    let b = Vector::from_shape_simple_fn(m, || rng.uniform());
    Ok(LassoInstance { a, b, gamma, density, seed })
}

/// `min ½xᵀMx + cᵀx` s.t. `Ax = b`, `x ∈ [−10, 10]ⁿ`.
#[derive(Clone, Debug, PartialEq)]
pub struct LcqpInstance {
    /// Normalized low-rank Hessian `M` (`n × n`, `‖M‖ = 1`).
    pub m_mat: Matrix,
    /// Linear term.
    pub c: Vector,
    /// Constraint matrix (`m × n`).
    pub a: Matrix,
    /// Constraint right-hand side.
    pub b: Vector,
    /// Rank of `M`.
    pub rank: usize,
    /// Bernoulli density of `A`.
    pub density: f64,
    /// Generator seed.
    pub seed: u64,
}

impl LcqpInstance {
    /// Number of variables.
    pub fn n(&self) -> usize {
        self.c.len()
    }

    /// Number of constraints.
    pub fn m(&self) -> usize {
        self.b.len()
    }

    /// Diameter `D = √n(x_u − x_ℓ) = 20√n` of the box.
    pub fn diameter(&self) -> f64 {
        (self.n() as f64).sqrt() * 2.0 * BOX_BOUND
    }

    /// Constrained problem with `L_f = ‖M‖` and the box as `h`.
    pub fn problem(&self) -> Result<ConstrainedProblem> {
        let f = Quadratic::new(self.m_mat.clone(), self.c.clone())?;
        let h = ProxKind::uniform_box(self.n(), -BOX_BOUND, BOX_BOUND)?;
        let base = CompositeProblem::new(Arc::new(f), Arc::new(h))?;
        ConstrainedProblem::new(base, self.a.clone(), self.b.clone(), self.diameter())
    }

    /// Start point used by all solvers (the origin, inside the box).
    pub fn start(&self) -> Vector {
        Vector::zeros(self.n())
    }
}

/// Draws an LCQP instance: `M = RRᵀ/‖RRᵀ‖` with Gaussian `R ∈ ℝ^{n×r}`,
/// Gaussian `c` and `b`, and `A` with Bernoulli(`density`)·Gaussian entries.
/// Rows of `A` that come out identically zero are redrawn.
pub fn gen_lcqp(n: usize, m: usize, rank: usize, density: f64, seed: u64) -> Result<LcqpInstance> {
    if rank == 0 || m == 0 || n < rank.max(m) {
        return Err(OptError::Parameter(format!("need n >= max(r, m) and r, m >= 1, got n={n}, m={m}, r={rank}")));
    }
    if !(density > 0.0 && density <= 1.0) {
        return Err(OptError::Parameter(format!("density must lie in (0,1], got {density}")));
    }
    let mut rng = SplitMix64::new(seed);
    let r = Matrix::from_shape_simple_fn((n, rank), || rng.normal());
    let rrt = r.dot(&r.t());
    let scale = spectral_norm(&rrt);
    let m_mat = rrt / scale;
    let c = Vector::from_shape_simple_fn(n, || rng.normal());
    let mut a = Matrix::zeros((m, n));
    for mut row in a.rows_mut() {
        while row.iter().all(|&v| v == 0.0) {
            row.map_inplace(|v| *v = if rng.bernoulli(density) { rng.normal() } else { 0.0 });
        }
    }
    let b = Vector::from_shape_simple_fn(m, || rng.normal());
    Ok(LcqpInstance { m_mat, c, a, b, rank, density, seed })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lasso_is_deterministic_and_sparse() {
        let p = gen_lasso(200, 100, 0.2, 0.5, 3).unwrap();
        assert_eq!(p, gen_lasso(200, 100, 0.2, 0.5, 3).unwrap());
        let nnz = p.a.iter().filter(|v| **v != 0.0).count() as f64;
        assert!((nnz / 20_000.0 - 0.2).abs() < 0.02);
        assert!(p.b.iter().all(|v| (0.0..1.0).contains(v)));
    }

    #[test]
    fn zero_density_gives_zero_matrix() {
        let p = gen_lasso(5, 3, 0.0, 0.5, 1).unwrap();
        assert!(p.a.iter().all(|v| *v == 0.0));
    }

    #[test]
    fn lcqp_normalization() {
        let p = gen_lcqp(30, 10, 5, 0.1, 9).unwrap();
        assert!((spectral_norm(&p.m_mat) - 1.0).abs() < 1e-6);
        assert!((p.diameter() - 20.0 * 30f64.sqrt()).abs() < 1e-12);
        assert!(p.a.rows().into_iter().all(|r| r.iter().any(|v| *v != 0.0)));
        assert!(gen_lcqp(4, 5, 2, 0.1, 1).is_err());
    }
}
