//! Doubly accelerated restarted ACG and the heuristic restart baselines.
//!
//! The restarted method runs an accelerated outer loop over proximal
//! subproblems `min φ(·) + ‖· − ṽ_k‖²/(2λ)`, each solved by [`crate::acg`]
//! until its relative-error certificate holds. The baselines run plain ACG
//! and reset its momentum by the gradient or speed heuristics.

use crate::acg::{AcgState, QuadraticLowerModel, Termination, acg_init, acg_step, run_acg};
use crate::error::{OptError, Result, check_nonnegative, check_positive};
use crate::linalg::{Vector, dist_sq, norm};
use crate::problem::{ProximalTerm, SmoothOracle, gradient_mapping};
use crate::prox::ProxOracle;
use crate::trace::{RunStatus, RunTrace, SolverOutput, Stopwatch, TraceRow, gap};

/// Outer acceleration sequences `b_k`, `B_k`, `τ_k` with weight `λ` and modulus `μ`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OuterScalars {
    /// Most recent step weight `b_{k-1}` (zero before the first step).
    pub b: f64,
    /// Accumulated weight `B_k`.
    pub big_b: f64,
    /// `τ_k = 1 + μB_k`.
    pub tau: f64,
    /// Prox weight `λ`.
    pub lambda: f64,
    /// Strong convexity modulus `μ`.
    pub mu: f64,
}

impl OuterScalars {
    /// `B_0 = 0`, `τ_0 = 1`.
    pub fn new(lambda: f64, mu: f64) -> Result<Self> {
        check_positive("lambda", lambda)?;
        check_nonnegative("mu", mu)?;
        Ok(Self { b: 0.0, big_b: 0.0, tau: 1.0, lambda, mu })
    }

    /// `b_k = (τ_kλ + √(τ_k²λ² + 4τ_kλB_k)) / 2`.
    pub fn next_b(&self) -> f64 {
        let tl = self.tau * self.lambda;
        (tl + (tl * tl + 4.0 * tl * self.big_b).sqrt()) / 2.0
    }

    /// Advances to `(b_k, B_{k+1}, τ_{k+1})`.
    pub fn advance(&mut self) {
        let b = self.next_b();
        self.b = b;
        self.big_b += b;
        self.tau += b * self.mu;
    }
}

/// Parameters of the restarted method.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RacgParams {
    /// Smoothness `L_f` of `f`.
    pub l_f: f64,
    /// Strong convexity `μ_f` of `f`.
    pub mu_f: f64,
    /// Prox weight `λ`.
    pub lambda: f64,
    /// Relative error tolerance `σ ∈ (0, 1)`.
    pub sigma: f64,
    /// ACG iterations allowed per subproblem.
    pub inner_budget: usize,
}

impl RacgParams {
    /// Checks `σ ∈ (0,1)`, `L_f > μ_f ≥ 0`, and `λ ≥ 1/(L_f − μ_f)`.
    pub fn validate(&self) -> Result<()> {
        check_nonnegative("mu_f", self.mu_f)?;
        check_positive("L_f - mu_f", self.l_f - self.mu_f)?;
        check_positive("lambda", self.lambda)?;
        if !(self.sigma > 0.0 && self.sigma < 1.0) {
            return Err(OptError::Parameter(format!("sigma must lie in (0,1), got {}", self.sigma)));
        }
        let lower = 1.0 / (self.l_f - self.mu_f);
        if self.lambda < lower * (1.0 - 1e-12) {
            return Err(OptError::Parameter(format!("lambda = {} is below 1/(L_f - mu_f) = {lower}", self.lambda)));
        }
        if self.inner_budget == 0 {
            return Err(OptError::Parameter("inner budget must be positive".into()));
        }
        Ok(())
    }
}

/// Final quantities of one inner ACG call.
#[derive(Clone, Debug)]
pub struct InnerSummary {
    /// Subproblem center `ṽ_k` (the ACG start point).
    pub center: Vector,
    /// `y_j`.
    pub y: Vector,
    /// `x_j`.
    pub x: Vector,
    /// `s_j`.
    pub s: Vector,
    /// `A_j`.
    pub big_a: f64,
    /// Inner iterations `j`.
    pub iters: usize,
    /// Subproblem value `ψ(y_j)`.
    pub psi_y: f64,
    /// `φ(y_j)`.
    pub phi_y: f64,
    /// Lower model `Θ_j`.
    pub model: QuadraticLowerModel,
    /// Whether the certificate fired within the budget.
    pub status: RunStatus,
}

/// Outer state of the restarted method.
#[derive(Clone, Debug)]
pub struct RestartState {
    /// Best point `w_k`.
    pub w: Vector,
    /// Auxiliary point `v_k`.
    pub v: Vector,
    /// Latest subproblem center `ṽ_{k-1}`.
    pub v_tilde: Vector,
    /// `φ(w_k)`.
    pub phi_w: f64,
    /// Outer sequences.
    pub scalars: OuterScalars,
    /// Outer iteration `k`.
    pub outer_iter: usize,
    /// Cumulative proximal evaluations.
    pub prox_count: usize,
    /// Cumulative smooth-oracle evaluations.
    pub grad_count: usize,
    /// Last inner call, if any.
    pub last_inner: Option<InnerSummary>,
}

/// Starts the outer loop at `w0`: `B_0 = 0`, `τ_0 = 1`, `v_0 = w_0`.
pub fn racg_init(f: &dyn SmoothOracle, h: &dyn ProxOracle, w0: &Vector, params: &RacgParams) -> Result<RestartState> {
    params.validate()?;
    let phi_w = h
        .value(w0)
        .plus(f.value(w0))
        .finite()
        .ok_or_else(|| OptError::Domain("initial point has h(w0) = +inf".into()))?;
    Ok(RestartState {
        w: w0.clone(),
        v: w0.clone(),
        v_tilde: w0.clone(),
        phi_w,
        scalars: OuterScalars::new(params.lambda, params.mu_f)?,
        outer_iter: 0,
        prox_count: 0,
        grad_count: 1,
        last_inner: None,
    })
}

/// One outer iteration: extrapolate, solve the subproblem by ACG, update `w` and `v`.
pub fn racg_outer_step(
    state: &mut RestartState,
    f: &dyn SmoothOracle,
    h: &dyn ProxOracle,
    params: &RacgParams,
) -> Result<RunStatus> {
    let RacgParams { l_f, mu_f, lambda, sigma, inner_budget } = *params;
    let (big_b, tau) = (state.scalars.big_b, state.scalars.tau);
    let b = state.scalars.next_b();
    let big_b_next = big_b + b;
    let mut v_tilde = &state.w * (big_b / big_b_next);
    v_tilde.scaled_add(b / big_b_next, &state.v);

    let g = ProximalTerm::new(f, 1.0 / lambda, v_tilde.clone())?;
    let termination = Termination::Restart { lambda, sigma, max_iters: inner_budget };
    let run = run_acg(&g, h, &v_tilde, l_f - mu_f, mu_f + 1.0 / lambda, termination)?;
    let inner: AcgState = run.state;
    state.prox_count += inner.prox_count;
    state.grad_count += inner.grad_count;

    let phi_y = inner.psi_y - dist_sq(&inner.y, &v_tilde) / (2.0 * lambda);
    if phi_y <= state.phi_w {
        state.w.assign(&inner.y);
        state.phi_w = phi_y;
    }
    state.scalars.advance();
    let mut v_next = &state.v * tau;
    v_next.scaled_add(b * mu_f, &inner.x);
    v_next.scaled_add(-b * (inner.scalars.big_a + lambda) / lambda, &inner.s);
    state.v = v_next / state.scalars.tau;
    state.v_tilde = v_tilde.clone();
    state.outer_iter += 1;
    state.last_inner = Some(InnerSummary {
        center: v_tilde,
        y: inner.y,
        x: inner.x,
        s: inner.s,
        big_a: inner.scalars.big_a,
        iters: inner.iter,
        psi_y: inner.psi_y,
        phi_y,
        model: inner.model,
        status: run.status,
    });
    Ok(run.status)
}

/// Upper bound on ACG iterations per subproblem for `λ ≥ 1/(L_f − μ_f)`.
pub fn inner_iteration_bound(lambda: f64, l_f: f64, mu_f: f64, sigma: f64) -> usize {
    let q = 10.0 / sigma * lambda * (l_f - mu_f);
    let sublinear = 2.0 * q.sqrt();
    let linear = (0.25 + 0.5 * (2.0 * lambda * (l_f - mu_f) / (1.0 + lambda * mu_f)).sqrt()) * q.ln();
    1 + sublinear.min(linear).ceil() as usize
}

/// `min{2R₀²/(λk²), (R₀²/(2λ))(1 + √(λμ_f)/2)^{-2(k-1)}}` for `k ≥ 1`.
pub fn outer_rate_bound(k: usize, r0: f64, lambda: f64, mu_f: f64) -> f64 {
    let kf = k as f64;
    let sublinear = 2.0 * r0 * r0 / (lambda * kf * kf);
    let linear = r0 * r0 / (2.0 * lambda) * (1.0 + (lambda * mu_f).sqrt() / 2.0).powf(-2.0 * (kf - 1.0));
    sublinear.min(linear)
}

/// Stopping rule shared by the unconstrained solvers.
///
/// With a reference value the run stops once `φ − reference ≤ eps`; otherwise
/// once the gradient-mapping norm at the logged iterate is at most `eps`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GapStop {
    /// Known or best-found optimal value.
    pub reference: Option<f64>,
    /// Target accuracy.
    pub eps: f64,
}

/// Runs the restarted method for at most `max_outer` outer iterations.
pub fn run_restarted_acg(
    f: &dyn SmoothOracle,
    h: &dyn ProxOracle,
    w0: &Vector,
    params: &RacgParams,
    stop: GapStop,
    max_outer: usize,
) -> Result<SolverOutput> {
    let clock = Stopwatch::start();
    let mut state = racg_init(f, h, w0, params)?;
    let mut trace = RunTrace::default();
    let row = |state: &RestartState, inner: usize, gm: f64, clock: &Stopwatch| TraceRow {
        outer_iter: state.outer_iter,
        inner_iters: inner,
        prox_evals: state.prox_count,
        grad_evals: state.grad_count,
        wall_time_s: clock.seconds(),
        objective: state.phi_w,
        gap_estimate: gap(state.phi_w, stop.reference),
        feasibility: 0.0,
        grad_map_norm: gm,
        dual_norm: 0.0,
    };
    trace.rows.push(row(&state, 0, f64::NAN, &clock));
    let mut status = RunStatus::BudgetExhausted;
    if stop.reference.is_some_and(|r| state.phi_w - r <= stop.eps) {
        status = RunStatus::Converged;
    }
    while status != RunStatus::Converged && state.outer_iter < max_outer {
        let inner_status = racg_outer_step(&mut state, f, h, params)?;
        let inner_iters = state.last_inner.as_ref().map_or(0, |s| s.iters);
        let (done, gm) = match stop.reference {
            Some(r) => (state.phi_w - r <= stop.eps, f64::NAN),
            None => {
                let (g, _) = gradient_mapping(f, h, &state.w, 1.0 / params.l_f)?;
                state.prox_count += 1;
                state.grad_count += 1;
                let gm = norm(&g);
                (gm <= stop.eps, gm)
            }
        };
        trace.rows.push(row(&state, inner_iters, gm, &clock));
        if done {
            status = RunStatus::Converged;
        } else if inner_status == RunStatus::BudgetExhausted {
            break;
        }
    }
    Ok(SolverOutput { x: state.w, objective: state.phi_w, status, trace })
}

/// Momentum reset rule for plain ACG.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RestartScheme {
    /// Never reset.
    None,
    /// Reset when `⟨x̃_k − y_{k+1}, y_{k+1} − y_k⟩ > 0`.
    Gradient,
    /// Reset when `‖y_{k+1} − y_k‖ < ‖y_k − y_{k−1}‖` and at least `k_min` steps passed.
    Speed {
        /// Minimum number of steps between resets.
        k_min: usize,
    },
}

/// Default minimum spacing of speed restarts.
pub const DEFAULT_K_MIN: usize = 10;

/// Plain ACG (`μ = 0`, `L = L_f`) with an optional heuristic momentum reset.
///
/// Trace rows are logged at every reset and at the final iterate. Returns the
/// output and the number of resets performed.
pub fn run_heuristic(
    f: &dyn SmoothOracle,
    h: &dyn ProxOracle,
    x0: &Vector,
    l_f: f64,
    scheme: RestartScheme,
    stop: GapStop,
    max_prox: usize,
) -> Result<(SolverOutput, usize)> {
    let clock = Stopwatch::start();
    let mut state = acg_init(f, h, x0, l_f, 0.0)?;
    let mut trace = RunTrace::default();
    let row = |state: &AcgState, restarts: usize, inner: usize, clock: &Stopwatch| TraceRow {
        outer_iter: restarts,
        inner_iters: inner,
        prox_evals: state.prox_count,
        grad_evals: state.grad_count,
        wall_time_s: clock.seconds(),
        objective: state.psi_y,
        gap_estimate: gap(state.psi_y, stop.reference),
        feasibility: 0.0,
        grad_map_norm: state.grad_map_norm(),
        dual_norm: 0.0,
    };
    trace.rows.push(row(&state, 0, 0, &clock));
    let converged = |state: &AcgState| match stop.reference {
        Some(r) => state.psi_y - r <= stop.eps,
        None => state.iter > 0 && state.grad_map_norm() <= stop.eps,
    };
    let mut status = if converged(&state) { RunStatus::Converged } else { RunStatus::BudgetExhausted };
    let mut restarts = 0;
    let mut since_reset = 0;
    let mut prev_len: Option<f64> = None;
    while status != RunStatus::Converged && state.prox_count < max_prox {
        let y_old = state.y.clone();
        acg_step(&mut state, f, h)?;
        since_reset += 1;
        let step = &state.y - &y_old;
        let step_len = norm(&step);
        if converged(&state) {
            status = RunStatus::Converged;
            break;
        }
        let fire = match scheme {
            RestartScheme::None => false,
            RestartScheme::Gradient => (&state.x_tilde - &state.y).dot(&step) > 0.0,
            RestartScheme::Speed { k_min } => {
                since_reset >= k_min && prev_len.is_some_and(|p| step_len < p)
            }
        };
        prev_len = Some(step_len);
        if fire {
            restarts += 1;
            trace.rows.push(row(&state, restarts, since_reset, &clock));
            state.reset();
            since_reset = 0;
        }
    }
    if trace.rows.last().is_some_and(|r| r.prox_evals != state.prox_count) {
        trace.rows.push(row(&state, restarts, since_reset, &clock));
    }
    let out = SolverOutput { x: state.y.clone(), objective: state.psi_y, status, trace };
    Ok((out, restarts))
}

/// Plain ACG without resets.
pub fn plain_acg_run(
    f: &dyn SmoothOracle,
    h: &dyn ProxOracle,
    x0: &Vector,
    l_f: f64,
    stop: GapStop,
    max_prox: usize,
) -> Result<SolverOutput> {
    run_heuristic(f, h, x0, l_f, RestartScheme::None, stop, max_prox).map(|r| r.0)
}

/// ACG with gradient-based resets.
pub fn gradient_restart_run(
    f: &dyn SmoothOracle,
    h: &dyn ProxOracle,
    x0: &Vector,
    l_f: f64,
    stop: GapStop,
    max_prox: usize,
) -> Result<SolverOutput> {
    run_heuristic(f, h, x0, l_f, RestartScheme::Gradient, stop, max_prox).map(|r| r.0)
}

/// ACG with speed-based resets spaced at least `k_min` steps apart.
pub fn speed_restart_run(
    f: &dyn SmoothOracle,
    h: &dyn ProxOracle,
    x0: &Vector,
    l_f: f64,
    k_min: usize,
    stop: GapStop,
    max_prox: usize,
) -> Result<SolverOutput> {
    run_heuristic(f, h, x0, l_f, RestartScheme::Speed { k_min }, stop, max_prox).map(|r| r.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::Matrix;
    use crate::problem::Quadratic;
    use crate::prox::ProxKind;
    use ndarray::array;

    #[test]
    fn outer_scalars_by_hand() {
        let mut s = OuterScalars::new(1.0, 0.0).unwrap();
        s.advance();
        assert_eq!((s.b, s.big_b), (1.0, 1.0));
        s.advance();
        assert!((s.b - (1.0 + 5f64.sqrt()) / 2.0).abs() < 1e-15);
    }

    #[test]
    fn scalar_quadratic_inner_loops_respect_bound() {
        let f = Quadratic::with_moduli(array![[1.0]], array![0.0], 1.0, 0.0).unwrap();
        let params = RacgParams { l_f: 1.0, mu_f: 0.0, lambda: 1.0, sigma: 0.5, inner_budget: 1000 };
        let bound = inner_iteration_bound(1.0, 1.0, 0.0, 0.5);
        let mut st = racg_init(&f, &ProxKind::Zero, &array![1.0], &params).unwrap();
        for _ in 0..20 {
            assert_eq!(racg_outer_step(&mut st, &f, &ProxKind::Zero, &params).unwrap(), RunStatus::Converged);
            assert!(st.last_inner.as_ref().unwrap().iters <= bound);
        }
        assert!(st.phi_w < 1e-6);
    }

    #[test]
    fn zero_outer_budget_returns_start() {
        let f = Quadratic::with_moduli(Matrix::eye(2), Vector::zeros(2), 1.0, 1.0).unwrap();
        let params = RacgParams { l_f: 2.0, mu_f: 1.0, lambda: 1.0, sigma: 0.5, inner_budget: 10 };
        let stop = GapStop { reference: Some(0.0), eps: 1e-9 };
        let out = run_restarted_acg(&f, &ProxKind::Zero, &array![1.0, 1.0], &params, stop, 0).unwrap();
        assert_eq!(out.x, array![1.0, 1.0]);
        assert_eq!(out.trace.rows.len(), 1);
    }

    #[test]
    fn lambda_below_range_is_rejected() {
        let p = RacgParams { l_f: 2.0, mu_f: 0.0, lambda: 0.1, sigma: 0.5, inner_budget: 10 };
        assert!(p.validate().is_err());
    }

    #[test]
    fn disabled_schemes_never_reset() {
        let f = Quadratic::with_moduli(array![[1.0]], array![0.0], 1.0, 0.0).unwrap();
        let stop = GapStop { reference: Some(0.0), eps: 1e-30 };
        let (_, restarts) =
            run_heuristic(&f, &ProxKind::Zero, &array![1.0], 1.0, RestartScheme::None, stop, 200).unwrap();
        assert_eq!(restarts, 0);
        let (_, restarts) = run_heuristic(
            &f,
            &ProxKind::Zero,
            &array![1.0],
            1.0,
            RestartScheme::Speed { k_min: usize::MAX },
            stop,
            200,
        )
        .unwrap();
        assert_eq!(restarts, 0);
    }
}
