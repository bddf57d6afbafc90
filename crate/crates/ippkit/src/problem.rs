//! Problem model: smooth oracles, composite and linearly constrained problems,
//! the gradient mapping, and KKT certificates.

use std::sync::Arc;

use crate::error::{OptError, Result, check_nonnegative, check_positive};
use crate::linalg::{Matrix, Vector, norm, spectral_norm};
use crate::prox::{ExtValue, ProxOracle};

/// A convex differentiable function with `μ`-strong convexity and `L`-Lipschitz gradient.
pub trait SmoothOracle: Send + Sync {
    /// Dimension of the domain.
    fn dim(&self) -> usize;
    /// Value and gradient at `x`.
    fn eval(&self, x: &Vector) -> (f64, Vector);
    /// Value at `x`; override when cheaper than [`SmoothOracle::eval`].
    fn value(&self, x: &Vector) -> f64 {
        self.eval(x).0
    }
    /// Gradient at `x`.
    fn gradient(&self, x: &Vector) -> Vector {
        self.eval(x).1
    }
    /// Smoothness constant `L`.
    fn lipschitz(&self) -> f64;
    /// Strong convexity modulus `μ`.
    fn strong_convexity(&self) -> f64;
}

impl<S: SmoothOracle + ?Sized> SmoothOracle for &S {
    fn dim(&self) -> usize {
        (**self).dim()
    }
    fn eval(&self, x: &Vector) -> (f64, Vector) {
        (**self).eval(x)
    }
    fn value(&self, x: &Vector) -> f64 {
        (**self).value(x)
    }
    fn gradient(&self, x: &Vector) -> Vector {
        (**self).gradient(x)
    }
    fn lipschitz(&self) -> f64 {
        (**self).lipschitz()
    }
    fn strong_convexity(&self) -> f64 {
        (**self).strong_convexity()
    }
}

fn check_moduli(l: f64, mu: f64) -> Result<()> {
    check_nonnegative("L", l)?;
    check_nonnegative("mu", mu)?;
    if mu > l {
        return Err(OptError::Parameter(format!("strong convexity {mu} exceeds smoothness {l}")));
    }
    Ok(())
}

/// `f(x) = ½xᵀQx + cᵀx` with symmetric positive semidefinite `Q`.
#[derive(Clone, Debug)]
pub struct Quadratic {
    q: Matrix,
    c: Vector,
    l: f64,
    mu: f64,
}

impl Quadratic {
    /// Builds the quadratic with `L = ‖Q‖` and `μ = 0`.
    pub fn new(q: Matrix, c: Vector) -> Result<Self> {
        let l = spectral_norm(&q);
        Self::with_moduli(q, c, l, 0.0)
    }

    /// Builds the quadratic with caller-supplied moduli.
    pub fn with_moduli(q: Matrix, c: Vector, l: f64, mu: f64) -> Result<Self> {
        let (r, k) = q.dim();
        if r != k || k != c.len() {
            return Err(OptError::Dimension(format!("Q is {r}x{k}, c has length {}", c.len())));
        }
        check_moduli(l, mu)?;
        Ok(Self { q, c, l, mu })
    }

    /// The Hessian `Q`.
    pub fn hessian(&self) -> &Matrix {
        &self.q
    }

    /// The linear term `c`.
    pub fn linear(&self) -> &Vector {
        &self.c
    }
}

impl SmoothOracle for Quadratic {
    fn dim(&self) -> usize {
        self.c.len()
    }
    fn eval(&self, x: &Vector) -> (f64, Vector) {
        let qx = self.q.dot(x);
        let value = 0.5 * x.dot(&qx) + self.c.dot(x);
        (value, qx + &self.c)
    }
    fn lipschitz(&self) -> f64 {
        self.l
    }
    fn strong_convexity(&self) -> f64 {
        self.mu
    }
}

/// `f(x) = ½‖Ax − b‖²` with `L = ‖A‖²`.
#[derive(Clone, Debug)]
pub struct LeastSquares {
    a: Matrix,
    b: Vector,
    l: f64,
}

impl LeastSquares {
    /// Builds the least-squares loss, estimating `‖A‖` by power iteration.
    pub fn new(a: Matrix, b: Vector) -> Result<Self> {
        if a.nrows() != b.len() {
            return Err(OptError::Dimension(format!("A has {} rows, b has length {}", a.nrows(), b.len())));
        }
        let s = spectral_norm(&a);
        Ok(Self { a, b, l: s * s })
    }

    /// The design matrix.
    pub fn matrix(&self) -> &Matrix {
        &self.a
    }

    /// The observations.
    pub fn rhs(&self) -> &Vector {
        &self.b
    }
}

impl SmoothOracle for LeastSquares {
    fn dim(&self) -> usize {
        self.a.ncols()
    }
    fn eval(&self, x: &Vector) -> (f64, Vector) {
        let r = self.a.dot(x) - &self.b;
        (0.5 * r.dot(&r), self.a.t().dot(&r))
    }
    fn value(&self, x: &Vector) -> f64 {
        let r = self.a.dot(x) - &self.b;
        0.5 * r.dot(&r)
    }
    fn lipschitz(&self) -> f64 {
        self.l
    }
    fn strong_convexity(&self) -> f64 {
        0.0
    }
}

/// `f(x) + (κ/2)‖x − center‖²`.
pub struct ProximalTerm<S> {
    inner: S,
    weight: f64,
    center: Vector,
}

impl<S: SmoothOracle> ProximalTerm<S> {
    /// Adds `(weight/2)‖· − center‖²` to `inner`.
    pub fn new(inner: S, weight: f64, center: Vector) -> Result<Self> {
        check_nonnegative("weight", weight)?;
        if center.len() != inner.dim() {
            return Err(OptError::Dimension(format!("center has length {}, oracle has {}", center.len(), inner.dim())));
        }
        Ok(Self { inner, weight, center })
    }

    /// The wrapped oracle.
    pub fn inner(&self) -> &S {
        &self.inner
    }

    /// The regularization weight `κ`.
    pub fn weight(&self) -> f64 {
        self.weight
    }

    /// The regularization center.
    pub fn center(&self) -> &Vector {
        &self.center
    }
}

impl<S: SmoothOracle> SmoothOracle for ProximalTerm<S> {
    fn dim(&self) -> usize {
        self.inner.dim()
    }
    fn eval(&self, x: &Vector) -> (f64, Vector) {
        let (v, g) = self.inner.eval(x);
        let d = x - &self.center;
        (v + 0.5 * self.weight * d.dot(&d), g + &(d * self.weight))
    }
    fn value(&self, x: &Vector) -> f64 {
        let d = x - &self.center;
        self.inner.value(x) + 0.5 * self.weight * d.dot(&d)
    }
    fn lipschitz(&self) -> f64 {
        self.inner.lipschitz() + self.weight
    }
    fn strong_convexity(&self) -> f64 {
        self.inner.strong_convexity() + self.weight
    }
}

/// A smooth oracle given by a closure returning value and gradient.
pub struct FnSmooth<F> {
    eval: F,
    dim: usize,
    l: f64,
    mu: f64,
}

impl<F> FnSmooth<F>
where
    F: Fn(&Vector) -> (f64, Vector) + Send + Sync,
{
    /// Wraps `eval` with the given dimension and moduli.
    pub fn new(dim: usize, l: f64, mu: f64, eval: F) -> Result<Self> {
        check_moduli(l, mu)?;
        Ok(Self { eval, dim, l, mu })
    }
}

impl<F> SmoothOracle for FnSmooth<F>
where
    F: Fn(&Vector) -> (f64, Vector) + Send + Sync,
{
    fn dim(&self) -> usize {
        self.dim
    }
    fn eval(&self, x: &Vector) -> (f64, Vector) {
        (self.eval)(x)
    }
    fn lipschitz(&self) -> f64 {
        self.l
    }
    fn strong_convexity(&self) -> f64 {
        self.mu
    }
}

/// `min φ(x) = f(x) + h(x)`.
#[derive(Clone)]
pub struct CompositeProblem {
    f: Arc<dyn SmoothOracle>,
    h: Arc<dyn ProxOracle>,
    n: usize,
}

impl CompositeProblem {
    /// Combines a smooth and a proximable term.
    pub fn new(f: Arc<dyn SmoothOracle>, h: Arc<dyn ProxOracle>) -> Result<Self> {
        let n = f.dim();
        if n == 0 {
            return Err(OptError::Dimension("problem dimension must be at least 1".into()));
        }
        check_moduli(f.lipschitz(), f.strong_convexity())?;
        Ok(Self { f, h, n })
    }

    /// The smooth term.
    pub fn f(&self) -> &dyn SmoothOracle {
        self.f.as_ref()
    }

    /// The nonsmooth term.
    pub fn h(&self) -> &dyn ProxOracle {
        self.h.as_ref()
    }

    /// Shared handle to the smooth term.
    pub fn f_arc(&self) -> Arc<dyn SmoothOracle> {
        Arc::clone(&self.f)
    }

    /// Shared handle to the nonsmooth term.
    pub fn h_arc(&self) -> Arc<dyn ProxOracle> {
        Arc::clone(&self.h)
    }

    /// Dimension `n`.
    pub fn dim(&self) -> usize {
        self.n
    }

    /// `φ(x)`.
    pub fn value(&self, x: &Vector) -> ExtValue {
        composite_value(self.f(), self.h(), x)
    }

    /// Gradient mapping of `φ` at `x` with step `η`.
    pub fn gradient_mapping(&self, x: &Vector, eta: f64) -> Result<(Vector, Vector)> {
        gradient_mapping(self.f(), self.h(), x, eta)
    }
}

/// `f(x) + h(x)` as an extended real.
pub fn composite_value(f: &dyn SmoothOracle, h: &dyn ProxOracle, x: &Vector) -> ExtValue {
    h.value(x).plus(f.value(x))
}

/// Returns `(G, x⁺)` with `x⁺ = prox_{ηh}(x − η∇f(x))` and `G = (x − x⁺)/η`.
pub fn gradient_mapping(f: &dyn SmoothOracle, h: &dyn ProxOracle, x: &Vector, eta: f64) -> Result<(Vector, Vector)> {
    check_positive("eta", eta)?;
    let grad = f.gradient(x);
    Ok(gradient_mapping_from_grad(h, x, &grad, eta))
}

pub(crate) fn gradient_mapping_from_grad(h: &dyn ProxOracle, x: &Vector, grad: &Vector, eta: f64) -> (Vector, Vector) {
    let x_plus = h.prox(&(x - &(grad * eta)), eta);
    let g = (x - &x_plus) / eta;
    (g, x_plus)
}

/// `min φ(x)` subject to `Ax = b`, with `dom h` of diameter `D`.
#[derive(Clone)]
pub struct ConstrainedProblem {
    base: CompositeProblem,
    a: Matrix,
    b: Vector,
    diameter: f64,
    op_norm_a: f64,
}

impl ConstrainedProblem {
    /// Builds the problem and caches `‖A‖` by power iteration.
    pub fn new(base: CompositeProblem, a: Matrix, b: Vector, diameter: f64) -> Result<Self> {
        let (m, n) = a.dim();
        if n != base.dim() || m != b.len() {
            return Err(OptError::Dimension(format!(
                "A is {m}x{n}, b has length {}, problem dimension {}",
                b.len(),
                base.dim()
            )));
        }
        if m > n {
            return Err(OptError::Dimension(format!("more constraints ({m}) than variables ({n})")));
        }
        if !(diameter >= 1.0 && diameter.is_finite()) {
            return Err(OptError::Parameter(format!("diameter must be at least 1, got {diameter}")));
        }
        let op_norm_a = spectral_norm(&a);
        Ok(Self { base, a, b, diameter, op_norm_a })
    }

    /// The unconstrained composite part.
    pub fn base(&self) -> &CompositeProblem {
        &self.base
    }

    /// Constraint matrix `A`.
    pub fn a(&self) -> &Matrix {
        &self.a
    }

    /// Right-hand side `b`.
    pub fn b(&self) -> &Vector {
        &self.b
    }

    /// Diameter `D` of `dom h`.
    pub fn diameter(&self) -> f64 {
        self.diameter
    }

    /// Cached spectral norm `‖A‖`.
    pub fn op_norm_a(&self) -> f64 {
        self.op_norm_a
    }

    /// Number of constraints `m`.
    pub fn num_constraints(&self) -> usize {
        self.b.len()
    }

    /// `Ax − b`.
    pub fn residual(&self, x: &Vector) -> Vector {
        self.a.dot(x) - &self.b
    }

    /// `‖Ax − b‖`.
    pub fn feasibility(&self, x: &Vector) -> f64 {
        norm(&self.residual(x))
    }

    /// `φ(x)`.
    pub fn objective(&self, x: &Vector) -> ExtValue {
        self.base.value(x)
    }

    /// Lagrangian `φ(x) + ⟨λ, Ax − b⟩`.
    pub fn lagrangian(&self, x: &Vector, lambda: &Vector) -> ExtValue {
        self.base.value(x).plus(lambda.dot(&self.residual(x)))
    }

    /// `M_ρ = L_f + ρ‖A‖²`.
    pub fn m_rho(&self, rho: f64) -> f64 {
        self.base.f().lipschitz() + rho * self.op_norm_a * self.op_norm_a
    }

    /// Smooth part `Ψ_λ` of the augmented Lagrangian with penalty `ρ`.
    pub fn augmented_lagrangian_oracle(&self, lambda: &Vector, rho: f64) -> Result<AugmentedLagrangian<'_>> {
        augmented_lagrangian_oracle(self, lambda, rho)
    }
}

/// `Ψ_λ(x) = f(x) + ⟨λ, Ax − b⟩ + (ρ/2)‖Ax − b‖²` with `L = M_ρ`.
pub struct AugmentedLagrangian<'a> {
    problem: &'a ConstrainedProblem,
    lambda: Vector,
    rho: f64,
}

impl AugmentedLagrangian<'_> {
    /// Multiplier `λ`.
    pub fn multiplier(&self) -> &Vector {
        &self.lambda
    }

    /// Penalty `ρ`.
    pub fn rho(&self) -> f64 {
        self.rho
    }
}

impl SmoothOracle for AugmentedLagrangian<'_> {
    fn dim(&self) -> usize {
        self.problem.base.dim()
    }
    fn eval(&self, x: &Vector) -> (f64, Vector) {
        let (fv, fg) = self.problem.base.f().eval(x);
        let r = self.problem.residual(x);
        let weighted = &self.lambda + &(&r * self.rho);
        let value = fv + self.lambda.dot(&r) + 0.5 * self.rho * r.dot(&r);
        (value, fg + &self.problem.a.t().dot(&weighted))
    }
    fn value(&self, x: &Vector) -> f64 {
        let r = self.problem.residual(x);
        self.problem.base.f().value(x) + self.lambda.dot(&r) + 0.5 * self.rho * r.dot(&r)
    }
    fn lipschitz(&self) -> f64 {
        self.problem.m_rho(self.rho)
    }
    fn strong_convexity(&self) -> f64 {
        self.problem.base.f().strong_convexity()
    }
}

/// Builds `Ψ_λ` for penalty `ρ > 0`.
pub fn augmented_lagrangian_oracle<'a>(
    problem: &'a ConstrainedProblem,
    lambda: &Vector,
    rho: f64,
) -> Result<AugmentedLagrangian<'a>> {
    check_positive("rho", rho)?;
    if lambda.len() != problem.num_constraints() {
        return Err(OptError::Dimension(format!(
            "multiplier has length {}, problem has {} constraints",
            lambda.len(),
            problem.num_constraints()
        )));
    }
    Ok(AugmentedLagrangian { problem, lambda: lambda.clone(), rho })
}

/// Explicit ε-primal-dual certificate for the linearly constrained problem.
#[derive(Clone, Debug)]
pub struct KktCertificate {
    /// Subgradient of `L(·, λ)` at `x`.
    pub v: Vector,
    /// `‖v‖`.
    pub v_norm: f64,
    /// `‖Ax − b‖`.
    pub feas: f64,
    /// Certified primal point.
    pub x: Vector,
    /// Certified multiplier.
    pub lambda: Vector,
    /// Point at which the gradient mapping was taken.
    pub x_tilde: Vector,
    /// Step of the gradient mapping.
    pub eta: f64,
    /// Norm of the gradient mapping at `x_tilde`.
    pub grad_map_norm: f64,
}

impl KktCertificate {
    /// True iff `‖v‖ ≤ ε` and `‖Ax − b‖ ≤ ε`.
    pub fn is_eps_primal_dual(&self, eps: f64) -> bool {
        self.v_norm <= eps && self.feas <= eps
    }
}

/// Relative slack allowed when checking `η ≤ 1/L`.
const STEP_SLACK: f64 = 1e-12;

/// Builds the Lagrangian subgradient certificate from one gradient-mapping step.
///
/// `smooth` is the (possibly perturbed) augmented-Lagrangian smooth part used by
/// the caller. With `x⁺ = prox_{ηh}(x̃ − η∇smooth(x̃))` and `λ⁺ = λ + ρ(Ax⁺ − b)`,
/// the vector `(x̃ − x⁺)/η − ∇smooth(x̃)` lies in `∂h(x⁺)`; adding
/// `∇f(x⁺) + Aᵀλ⁺` gives `v ∈ ∂ₓL(x⁺, λ⁺)`. When `smooth = Ψ_λ` this equals
/// `(x̃ − x⁺)/η − ∇smooth(x̃) + ∇smooth(x⁺)` and `‖v‖ ≤ 2‖G‖`.
pub fn kkt_certificate(
    problem: &ConstrainedProblem,
    x_tilde: &Vector,
    lambda: &Vector,
    eta: f64,
    rho: f64,
    smooth: &dyn SmoothOracle,
) -> Result<(KktCertificate, Vector)> {
    check_positive("eta", eta)?;
    check_positive("rho", rho)?;
    if eta > (1.0 + STEP_SLACK) / smooth.lipschitz() {
        return Err(OptError::Parameter(format!(
            "step {eta} exceeds 1/L = {}",
            1.0 / smooth.lipschitz()
        )));
    }
    let grad = smooth.gradient(x_tilde);
    let (g, x_plus) = gradient_mapping_from_grad(problem.base.h(), x_tilde, &grad, eta);
    Ok(certificate_from_step(problem, x_tilde, lambda, eta, rho, &grad, g, x_plus))
}

#[allow(clippy::too_many_arguments)]
pub(crate) fn certificate_from_step(
    problem: &ConstrainedProblem,
    x_tilde: &Vector,
    lambda: &Vector,
    eta: f64,
    rho: f64,
    grad_smooth_at_tilde: &Vector,
    g: Vector,
    x_plus: Vector,
) -> (KktCertificate, Vector) {
    let r = problem.residual(&x_plus);
    let lambda_plus = lambda + &(&r * rho);
    let h_sub = &g - grad_smooth_at_tilde;
    let v = h_sub + &problem.base.f().gradient(&x_plus) + &problem.a.t().dot(&lambda_plus);
    let cert = KktCertificate {
        v_norm: norm(&v),
        v,
        feas: norm(&r),
        x: x_plus,
        lambda: lambda_plus.clone(),
        x_tilde: x_tilde.clone(),
        eta,
        grad_map_norm: norm(&g),
    };
    (cert, lambda_plus)
}

/// Bounds on the primal gap of an ε-primal-dual pair `(x, λ)`.
///
/// `φ(x) − φ_* ≤ ε(‖λ‖ + D)` always; with an optimal multiplier norm `‖λ_*‖`
/// the absolute gap obeys `|φ(x) − φ_*| ≤ ε·max{‖λ_*‖, ‖λ‖ + D}`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PrimalGapBound {
    /// Bound on `φ(x) − φ_*`.
    pub upper: f64,
    /// Bound on `|φ(x) − φ_*|`, when `‖λ_*‖` is known.
    pub absolute: Option<f64>,
}

/// Evaluates [`PrimalGapBound`] for accuracy `eps`, `‖λ‖`, diameter `D`, and optionally `‖λ_*‖`.
pub fn primal_gap_bound(eps: f64, lambda_norm: f64, diameter: f64, dual_opt_norm: Option<f64>) -> PrimalGapBound {
    let upper = eps * (lambda_norm + diameter);
    PrimalGapBound { upper, absolute: dual_opt_norm.map(|d| upper.max(eps * d)) }
}
