//! Accelerated composite gradient method with lower-model bookkeeping.
//!
//! Minimizes `ψ = g + h` where `g` is `μ`-strongly convex and `(L + μ)`-smooth.
//! Besides the iterates, every step aggregates an affine-plus-quadratic lower
//! model `Θ_j ≤ ψ` whose minimizer and residual `s_j` drive the restart test.
//!
//! Each step costs one proximal evaluation and two smooth-oracle evaluations:
//! value and gradient at `x̃_j`, and the value at `ỹ_{j+1}` used to pick `y_{j+1}`.

use crate::error::{OptError, Result, check_nonnegative, check_positive};
use crate::linalg::{Vector, dist, dist_sq, norm};
use crate::problem::{SmoothOracle, composite_value};
use crate::prox::{ExtValue, ProxOracle};
pub use crate::trace::RunStatus;

/// Scalar sequences `a_j`, `A_j`, `τ_j`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AcgScalars {
    /// Most recent step weight `a_{j-1}` (zero before the first step).
    pub a: f64,
    /// Accumulated weight `A_j`.
    pub big_a: f64,
    /// `τ_j = 1 + μA_j`.
    pub tau: f64,
    /// Smoothness parameter `L`.
    pub l: f64,
    /// Strong convexity parameter `μ`.
    pub mu: f64,
}

impl AcgScalars {
    /// `A_0 = 0`, `τ_0 = 1`.
    pub fn new(l: f64, mu: f64) -> Result<Self> {
        check_positive("L", l)?;
        check_nonnegative("mu", mu)?;
        Ok(Self { a: 0.0, big_a: 0.0, tau: 1.0, l, mu })
    }

    /// `a_j = (τ_j + √(τ_j² + 8τ_jA_jL)) / (4L)`.
    pub fn next_a(&self) -> f64 {
        let t = self.tau;
        (t + (t * t + 8.0 * t * self.big_a * self.l).sqrt()) / (4.0 * self.l)
    }

    /// Advances to `(a_j, A_{j+1}, τ_{j+1})`.
    pub fn advance(&mut self) {
        let a = self.next_a();
        self.a = a;
        self.big_a += a;
        self.tau += self.mu * a;
    }
}

/// `Θ(x) = constant + ⟨lin, x⟩ + (curvature/2)‖x‖²`.
#[derive(Clone, Debug, PartialEq)]
pub struct QuadraticLowerModel {
    /// Constant term.
    pub constant: f64,
    /// Linear coefficient.
    pub lin: Vector,
    /// Curvature (equals `μ` after the first aggregation).
    pub curvature: f64,
}

impl QuadraticLowerModel {
    /// The zero function on `ℝⁿ`.
    pub fn zero(n: usize) -> Self {
        Self { constant: 0.0, lin: Vector::zeros(n), curvature: 0.0 }
    }

    /// `Θ(x)`.
    pub fn value(&self, x: &Vector) -> f64 {
        self.constant + self.lin.dot(x) + 0.5 * self.curvature * x.dot(x)
    }

    /// `∇Θ(x)`.
    pub fn gradient(&self, x: &Vector) -> Vector {
        &self.lin + &(x * self.curvature)
    }

    /// Unconstrained minimizer `-lin/curvature`; `None` when the curvature is zero.
    pub fn minimizer(&self) -> Option<Vector> {
        (self.curvature > 0.0).then(|| &self.lin * (-1.0 / self.curvature))
    }

    /// Minimum value; `None` when the curvature is zero.
    pub fn min_value(&self) -> Option<f64> {
        (self.curvature > 0.0).then(|| self.constant - self.lin.dot(&self.lin) / (2.0 * self.curvature))
    }

    /// `K + ⟨u, x − c⟩ + (μ/2)‖x − c‖²` in expanded form.
    pub fn anchored(k: f64, u: &Vector, center: &Vector, mu: f64) -> Self {
        Self {
            constant: k - u.dot(center) + 0.5 * mu * center.dot(center),
            lin: u - &(center * mu),
            curvature: mu,
        }
    }

    /// Replaces `self` by `w_self·self + w_other·other`.
    pub fn combine(&mut self, w_self: f64, other: &Self, w_other: f64) {
        self.constant = w_self * self.constant + w_other * other.constant;
        self.lin *= w_self;
        self.lin.scaled_add(w_other, &other.lin);
        self.curvature = w_self * self.curvature + w_other * other.curvature;
    }
}

/// Full iterate state of the method.
#[derive(Clone, Debug)]
pub struct AcgState {
    /// Initial point `x_0`.
    pub x0: Vector,
    /// Auxiliary sequence `x_j` (minimizer of `A_jΘ_j + ½‖· − x_0‖²`).
    pub x: Vector,
    /// Best point `y_j`.
    pub y: Vector,
    /// Latest proximal point `ỹ_j`.
    pub y_tilde: Vector,
    /// Latest extrapolated point `x̃_{j-1}`.
    pub x_tilde: Vector,
    /// `u_j = 2L(x̃_{j-1} − ỹ_j)`.
    pub u: Vector,
    /// `s_j = (x_0 − x_j)/A_j`.
    pub s: Vector,
    /// Scalar sequences.
    pub scalars: AcgScalars,
    /// Aggregated lower model `Θ_j`.
    pub model: QuadraticLowerModel,
    /// `ψ(y_j)`.
    pub psi_y: f64,
    /// `ψ(ỹ_j)`.
    pub psi_y_tilde: ExtValue,
    /// `g(x̃_{j-1})`.
    pub g_x_tilde: f64,
    /// `∇g(x̃_{j-1})`.
    pub grad_x_tilde: Vector,
    /// Iteration counter `j`.
    pub iter: usize,
    /// Proximal evaluations.
    pub prox_count: usize,
    /// Smooth-oracle evaluations.
    pub grad_count: usize,
}

impl AcgState {
    /// `2L + μ`, the inverse proximal step.
    pub fn inv_step(&self) -> f64 {
        2.0 * self.scalars.l + self.scalars.mu
    }

    /// `‖G_ψ(x̃_{j-1})‖ = (2L + μ)‖x̃_{j-1} − ỹ_j‖`, zero before the first step.
    pub fn grad_map_norm(&self) -> f64 {
        if self.iter == 0 { 0.0 } else { self.inv_step() * dist(&self.x_tilde, &self.y_tilde) }
    }

    /// Restarts at the best point: `x_0 = x = y`, `A = 0`, `τ = 1`, `Θ ≡ 0`.
    ///
    /// Counters and the cached `ψ(y)` are kept, so no oracle call is needed.
    pub fn reset(&mut self) {
        let n = self.y.len();
        self.scalars = AcgScalars { a: 0.0, big_a: 0.0, tau: 1.0, l: self.scalars.l, mu: self.scalars.mu };
        self.x0.assign(&self.y);
        self.x.assign(&self.y);
        self.s = Vector::zeros(n);
        self.model = QuadraticLowerModel::zero(n);
    }

    /// `Θ_j(x)`.
    pub fn theta(&self, x: &Vector) -> f64 {
        self.model.value(x)
    }

    /// `Γ_{j-1}(u) = g(x̃) + ⟨∇g(x̃), u − x̃⟩ + h(u) + ((2L + μ)/2)‖u − x̃‖²` for the last step.
    pub fn gamma(&self, h: &dyn ProxOracle, u: &Vector) -> ExtValue {
        let d = u - &self.x_tilde;
        h.value(u).plus(self.g_x_tilde + self.grad_x_tilde.dot(&d) + 0.5 * self.inv_step() * d.dot(&d))
    }
}

/// Starts the method at `x0`: `A_0 = 0`, `τ_0 = 1`, `y_0 = x_0`, `Θ_0 ≡ 0`.
pub fn acg_init(g: &dyn SmoothOracle, h: &dyn ProxOracle, x0: &Vector, l: f64, mu: f64) -> Result<AcgState> {
    let scalars = AcgScalars::new(l, mu)?;
    if x0.len() != g.dim() {
        return Err(OptError::Dimension(format!("x0 has length {}, oracle has {}", x0.len(), g.dim())));
    }
    let psi = composite_value(g, h, x0)
        .finite()
        .ok_or_else(|| OptError::Domain("initial point has h(x0) = +inf".into()))?;
    let n = x0.len();
    Ok(AcgState {
        x0: x0.clone(),
        x: x0.clone(),
        y: x0.clone(),
        y_tilde: x0.clone(),
        x_tilde: x0.clone(),
        u: Vector::zeros(n),
        s: Vector::zeros(n),
        scalars,
        model: QuadraticLowerModel::zero(n),
        psi_y: psi,
        psi_y_tilde: ExtValue::Finite(psi),
        g_x_tilde: 0.0,
        grad_x_tilde: Vector::zeros(n),
        iter: 0,
        prox_count: 0,
        grad_count: 1,
    })
}

/// One iteration of the method, updating iterates, lower model, and counters.
pub fn acg_step(state: &mut AcgState, g: &dyn SmoothOracle, h: &dyn ProxOracle) -> Result<()> {
    let AcgScalars { big_a, l, mu, .. } = state.scalars;
    let a = state.scalars.next_a();
    let big_a_next = big_a + a;
    let inv_step = 2.0 * l + mu;

    let mut x_tilde = &state.y * (big_a / big_a_next);
    x_tilde.scaled_add(a / big_a_next, &state.x);
    let (g_val, g_grad) = g.eval(&x_tilde);
    let y_tilde = h.prox(&(&x_tilde - &(&g_grad / inv_step)), 1.0 / inv_step);
    let h_yt = h
        .value(&y_tilde)
        .finite()
        .ok_or_else(|| OptError::Numerical("proximal point left dom h".into()))?;
    let psi_yt = g.value(&y_tilde) + h_yt;
    state.prox_count += 1;
    state.grad_count += 2;
    if !psi_yt.is_finite() || !g_val.is_finite() {
        return Err(OptError::Numerical(format!("non-finite objective at iteration {}", state.iter)));
    }

    let d = &y_tilde - &x_tilde;
    let d_sq = d.dot(&d);
    let u = &d * (-2.0 * l);

    let mut x_next = &y_tilde * (inv_step * a);
    x_next.scaled_add(-2.0 * big_a * a * l / big_a_next, &state.y);
    x_next /= big_a_next * mu + 1.0;

    let gamma_yt = g_val + g_grad.dot(&d) + h_yt + 0.5 * inv_step * d_sq;
    let theta = QuadraticLowerModel::anchored(gamma_yt - l * d_sq, &u, &y_tilde, mu);
    state.model.combine(big_a / big_a_next, &theta, a / big_a_next);

    if psi_yt <= state.psi_y {
        state.y.assign(&y_tilde);
        state.psi_y = psi_yt;
    }
    state.scalars.advance();
    state.s = (&state.x0 - &x_next) / big_a_next;
    state.x = x_next;
    state.x_tilde = x_tilde;
    state.y_tilde = y_tilde;
    state.u = u;
    state.psi_y_tilde = ExtValue::Finite(psi_yt);
    state.g_x_tilde = g_val;
    state.grad_x_tilde = g_grad;
    state.iter += 1;
    Ok(())
}

/// Left and right sides of `‖λs_j‖² + 2λ[ψ(y_j) − Θ_j(x_j)] ≤ σ‖y_j − x_0‖²`.
pub fn restart_certificate_sides(state: &AcgState, lambda: f64, sigma: f64) -> Result<(f64, f64)> {
    check_positive("lambda", lambda)?;
    if !(sigma > 0.0 && sigma < 1.0) {
        return Err(OptError::Parameter(format!("sigma must lie in (0,1), got {sigma}")));
    }
    if state.scalars.big_a <= 0.0 {
        return Err(OptError::Precondition("restart certificate needs A_j > 0".into()));
    }
    let lhs = lambda * lambda * state.s.dot(&state.s) + 2.0 * lambda * (state.psi_y - state.theta(&state.x));
    let rhs = sigma * dist_sq(&state.y, &state.x0);
    Ok((lhs, rhs))
}

/// True iff the relative-error restart certificate holds at the current iterate.
pub fn restart_certificate(state: &AcgState, lambda: f64, sigma: f64) -> Result<bool> {
    let (lhs, rhs) = restart_certificate_sides(state, lambda, sigma)?;
    Ok(lhs <= rhs)
}

/// Stopping rule for [`run_acg`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Termination {
    /// Run exactly this many iterations.
    MaxIters(usize),
    /// Stop once `(2L + μ)‖x̃_{j-1} − ỹ_j‖ ≤ eps`.
    GradMapTol {
        /// Target gradient-mapping norm.
        eps: f64,
        /// Iteration budget.
        max_iters: usize,
    },
    /// Stop once the restart certificate with `(lambda, sigma)` holds.
    Restart {
        /// Prox-center weight.
        lambda: f64,
        /// Relative error tolerance in `(0, 1)`.
        sigma: f64,
        /// Iteration budget.
        max_iters: usize,
    },
}

/// Per-iteration trace entry of [`run_acg`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AcgTraceRow {
    /// Iteration `j`.
    pub iter: usize,
    /// `A_j`.
    pub big_a: f64,
    /// `ψ(y_j)`.
    pub psi_y: f64,
    /// `(2L + μ)‖x̃_{j-1} − ỹ_j‖`.
    pub grad_map_norm: f64,
    /// Proximal evaluations so far.
    pub prox_count: usize,
}

/// Result of [`run_acg`].
#[derive(Clone, Debug)]
pub struct AcgRun {
    /// Final state.
    pub state: AcgState,
    /// One row per iteration, starting with `j = 0`.
    pub trace: Vec<AcgTraceRow>,
    /// Whether the stopping rule fired.
    pub status: RunStatus,
}

fn trace_row(state: &AcgState) -> AcgTraceRow {
    AcgTraceRow {
        iter: state.iter,
        big_a: state.scalars.big_a,
        psi_y: state.psi_y,
        grad_map_norm: state.grad_map_norm(),
        prox_count: state.prox_count,
    }
}

/// Iterates [`acg_step`] until the termination rule fires or the budget runs out.
pub fn run_acg(
    g: &dyn SmoothOracle,
    h: &dyn ProxOracle,
    x0: &Vector,
    l: f64,
    mu: f64,
    termination: Termination,
) -> Result<AcgRun> {
    let mut state = acg_init(g, h, x0, l, mu)?;
    let mut trace = vec![trace_row(&state)];
    let max_iters = match termination {
        Termination::MaxIters(k) => k,
        Termination::GradMapTol { eps, max_iters } => {
            check_positive("eps", eps)?;
            max_iters
        }
        Termination::Restart { lambda, sigma, max_iters } => {
            check_positive("lambda", lambda)?;
            if !(sigma > 0.0 && sigma < 1.0) {
                return Err(OptError::Parameter(format!("sigma must lie in (0,1), got {sigma}")));
            }
            max_iters
        }
    };
    while state.iter < max_iters {
        acg_step(&mut state, g, h)?;
        trace.push(trace_row(&state));
        let done = match termination {
            Termination::MaxIters(_) => false,
            Termination::GradMapTol { eps, .. } => state.grad_map_norm() <= eps,
            Termination::Restart { lambda, sigma, .. } => restart_certificate(&state, lambda, sigma)?,
        };
        if done {
            return Ok(AcgRun { state, trace, status: RunStatus::Converged });
        }
    }
    let status = match termination {
        Termination::MaxIters(_) => RunStatus::Converged,
        _ => RunStatus::BudgetExhausted,
    };
    Ok(AcgRun { state, trace, status })
}

/// `‖y_j − x_0‖`, the relative scale used by the restart test.
pub fn displacement(state: &AcgState) -> f64 {
    norm(&(&state.y - &state.x0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::Matrix;
    use crate::problem::Quadratic;
    use crate::prox::ProxKind;
    use ndarray::array;

    #[test]
    fn first_scalars_by_hand() {
        let mut s = AcgScalars::new(1.0, 0.0).unwrap();
        s.advance();
        assert!((s.a - 0.5).abs() < 1e-15 && (s.big_a - 0.5).abs() < 1e-15);
        s.advance();
        let a1 = (1.0 + 5f64.sqrt()) / 4.0;
        assert!((s.a - a1).abs() < 1e-15);
        assert!((s.big_a - (0.5 + a1)).abs() < 1e-15);
        assert!(AcgScalars::new(0.0, 0.0).is_err());
        assert!(AcgScalars::new(1.0, -1.0).is_err());
    }

    #[test]
    fn init_is_prescribed() {
        let f = Quadratic::with_moduli(Matrix::eye(2), Vector::zeros(2), 1.0, 1.0).unwrap();
        let st = acg_init(&f, &ProxKind::Zero, &array![1.0, 2.0], 1.0, 0.0).unwrap();
        assert_eq!(st.scalars.big_a, 0.0);
        assert_eq!(st.scalars.tau, 1.0);
        assert_eq!(st.y, array![1.0, 2.0]);
        let boxed = ProxKind::uniform_box(2, -1.0, 1.0).unwrap();
        assert!(matches!(acg_init(&f, &boxed, &array![1.0, 2.0], 1.0, 0.0), Err(OptError::Domain(_))));
    }

    #[test]
    fn zero_budget_returns_initial_state() {
        let f = Quadratic::with_moduli(Matrix::eye(1), Vector::zeros(1), 1.0, 1.0).unwrap();
        let run = run_acg(&f, &ProxKind::Zero, &array![3.0], 1.0, 0.0, Termination::MaxIters(0)).unwrap();
        assert_eq!(run.state.iter, 0);
        assert_eq!(run.state.y, array![3.0]);
        assert_eq!(run.trace.len(), 1);
    }

    #[test]
    fn restart_certificate_needs_a_step() {
        let f = Quadratic::with_moduli(Matrix::eye(1), Vector::zeros(1), 1.0, 1.0).unwrap();
        let st = acg_init(&f, &ProxKind::Zero, &array![3.0], 1.0, 0.0).unwrap();
        assert!(matches!(restart_certificate(&st, 1.0, 0.5), Err(OptError::Precondition(_))));
    }

    #[test]
    fn auxiliary_sequence_matches_model_minimizer() {
        let f = Quadratic::with_moduli(array![[2.0, 0.5], [0.5, 1.0]], array![1.0, -1.0], 2.5, 0.5).unwrap();
        let h = ProxKind::l1(0.3).unwrap();
        let (l, mu) = (2.0, 0.5);
        let mut st = acg_init(&f, &h, &array![4.0, -3.0], l, mu).unwrap();
        for _ in 0..30 {
            let (tau_prev, x_prev) = (st.scalars.tau, st.x.clone());
            let a = st.scalars.next_a();
            acg_step(&mut st, &f, &h).unwrap();
            let from_model = (&st.x0 - &(&st.model.lin * st.scalars.big_a)) / st.scalars.tau;
            assert!(dist(&from_model, &st.x) < 1e-9);
            let alt = (&x_prev * tau_prev - &(&st.u * a) + &(&st.y_tilde * (mu * a))) / st.scalars.tau;
            assert!(dist(&alt, &st.x) < 1e-9);
        }
    }
}
