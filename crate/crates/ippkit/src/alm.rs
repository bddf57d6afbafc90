//! Inexact augmented Lagrangian method with perturbed inner subproblems, and the
//! linearized proximal ALM baseline.
//!
//! Each outer step approximately minimizes `L_ρ(·, λ_k) + (ε_k/(8D²))‖· − x_k‖²`
//! with ACG until the gradient mapping of the unperturbed `L_ρ(·, λ_k)` is small,
//! then takes the multiplier step `λ_{k+1} = λ_k + ρ(Ax_{k+1} − b)`.

use crate::acg::{AcgState, acg_init, acg_step, run_acg, Termination};
use crate::error::{OptError, Result, check_positive};
use crate::linalg::{Vector, dist_sq, norm};
use crate::problem::{
    AugmentedLagrangian, ConstrainedProblem, KktCertificate, ProximalTerm, SmoothOracle, augmented_lagrangian_oracle,
    certificate_from_step, composite_value, gradient_mapping_from_grad,
};
use crate::prox::ProxOracle;
use crate::trace::{RunStatus, RunTrace, Stopwatch, TraceRow, gap};

/// Which inner stopping test decides that an ACG call is accurate enough.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum InnerCheck {
    /// `‖G_{L_ρ(·,λ)}(x̃)‖ ≤ ε_k/(2D)`, one extra prox per check.
    #[default]
    Direct,
    /// `‖G_ψ(x̃)‖ ≤ ε_k/(4D)` on the perturbed subproblem, free to evaluate.
    Surrogate,
}

/// Parameters of the inexact ALM.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct IalmConfig {
    /// Penalty `ρ`.
    pub rho: f64,
    /// Target accuracy `ε`.
    pub eps: f64,
    /// Initial inner tolerance scale `ε_0`.
    pub eps0: f64,
    /// Decay `α ∈ (0,1)` of the inner tolerances.
    pub alpha: f64,
    /// Relative error `σ ∈ (0,1)` with `2σρε ≤ D`.
    pub sigma: f64,
    /// Maximum outer iterations.
    pub max_outer: usize,
    /// Maximum ACG iterations per outer iteration.
    pub inner_budget: usize,
    /// Inner stopping test.
    pub inner_check: InnerCheck,
    /// Whether to evaluate the dual certificate at each outer step.
    pub verify: bool,
}

/// Decay used when only `ε` is given.
pub const DEFAULT_ALPHA: f64 = 0.7;

impl IalmConfig {
    /// `ε_0 = ε`, `σ = 1/2`, `ρ = 1/ε`.
    pub fn theorem_defaults(eps: f64) -> Self {
        Self {
            rho: 1.0 / eps,
            eps,
            eps0: eps,
            alpha: DEFAULT_ALPHA,
            sigma: 0.5,
            max_outer: 10_000,
            inner_budget: 1_000_000,
            inner_check: InnerCheck::Direct,
            verify: false,
        }
    }

    /// `ρ = 1`, `α = 0.7`, `ε_0 = 100`, `σ = 1/2`.
    pub fn experiment_defaults(eps: f64) -> Self {
        Self { rho: 1.0, eps0: 100.0, ..Self::theorem_defaults(eps) }
    }

    /// Checks parameter ranges and `2σρε ≤ D`.
    pub fn validate(&self, diameter: f64) -> Result<()> {
        check_positive("rho", self.rho)?;
        check_positive("eps", self.eps)?;
        check_positive("eps0", self.eps0)?;
        open_unit("alpha", self.alpha)?;
        open_unit("sigma", self.sigma)?;
        if 2.0 * self.sigma * self.rho * self.eps > diameter * (1.0 + 1e-12) {
            return Err(OptError::Parameter(format!(
                "2 sigma rho eps = {} exceeds D = {diameter}",
                2.0 * self.sigma * self.rho * self.eps
            )));
        }
        if self.inner_budget == 0 {
            return Err(OptError::Parameter("inner budget must be positive".into()));
        }
        Ok(())
    }

    /// `ε_k = (ε_0αᵏ + σρε²)/2`.
    pub fn tolerance(&self, k: usize) -> f64 {
        (self.eps0 * self.alpha.powi(k as i32) + self.sigma * self.rho * self.eps * self.eps) / 2.0
    }
}

pub(crate) fn open_unit(name: &str, value: f64) -> Result<()> {
    if value > 0.0 && value < 1.0 {
        Ok(())
    } else {
        Err(OptError::Parameter(format!("{name} must lie in (0,1), got {value}")))
    }
}

/// Outer state of the inexact ALM (also used by the linearized baseline).
#[derive(Clone, Debug)]
pub struct IalmState {
    /// Primal iterate `x_k`.
    pub x: Vector,
    /// Multiplier `λ_k`.
    pub lambda: Vector,
    /// Current inner tolerance `ε_k`.
    pub eps_k: f64,
    /// Outer iteration `k`.
    pub outer_iter: usize,
    /// Cumulative proximal evaluations.
    pub prox_count: usize,
    /// Cumulative smooth-oracle evaluations.
    pub grad_count: usize,
}

impl IalmState {
    /// `x_0` given, `λ_0 = 0`.
    pub fn new(problem: &ConstrainedProblem, x0: &Vector) -> Result<Self> {
        if x0.len() != problem.base().dim() {
            return Err(OptError::Dimension(format!("x0 has length {}, expected {}", x0.len(), problem.base().dim())));
        }
        if !problem.base().h().value(x0).is_finite() {
            return Err(OptError::Domain("x0 lies outside dom h".into()));
        }
        Ok(Self {
            x: x0.clone(),
            lambda: Vector::zeros(problem.num_constraints()),
            eps_k: f64::NAN,
            outer_iter: 0,
            prox_count: 0,
            grad_count: 0,
        })
    }
}

/// Perturbed augmented-Lagrangian subproblem handed to ACG.
pub struct AlSubproblem<'a> {
    /// `g = Ψ_λ + (μ/2)‖· − x_k‖²`.
    pub g: ProximalTerm<AugmentedLagrangian<'a>>,
    /// `L = M_ρ`.
    pub l: f64,
    /// `μ = ε_k/(4D²)`.
    pub mu: f64,
}

/// Builds the subproblem of the current outer step (uses `state.eps_k`).
pub fn build_al_subproblem<'a>(
    state: &IalmState,
    config: &IalmConfig,
    problem: &'a ConstrainedProblem,
) -> Result<AlSubproblem<'a>> {
    check_positive("eps_k", state.eps_k)?;
    let d = problem.diameter();
    let mu = state.eps_k / (4.0 * d * d);
    let psi = augmented_lagrangian_oracle(problem, &state.lambda, config.rho)?;
    Ok(AlSubproblem { g: ProximalTerm::new(psi, mu, state.x.clone())?, l: problem.m_rho(config.rho), mu })
}

/// Result of an inner ACG solve with a gradient-mapping stop on an unperturbed objective.
pub(crate) struct InnerSolve {
    pub cert_inputs: (Vector, Vector, Vector, Vector),
    pub grad_map_norm: f64,
    pub iters: usize,
    pub status: RunStatus,
    pub prox_count: usize,
    pub grad_count: usize,
}

/// Runs ACG on `g` and stops once the gradient mapping of `g − (pert/2)‖· − center‖²`
/// at `x̃` with step `1/(2L + μ)` has norm at most `tol` (or, in surrogate mode,
/// once ACG's own mapping is at most `tol/2`). Returns `(x̃, ∇(g − pert term)(x̃), G, x⁺)`.
#[allow(clippy::too_many_arguments)]
pub(crate) fn solve_inner(
    g: &dyn SmoothOracle,
    h: &dyn ProxOracle,
    x0: &Vector,
    l: f64,
    mu: f64,
    pert: f64,
    center: &Vector,
    tol: f64,
    budget: usize,
    check: InnerCheck,
) -> Result<InnerSolve> {
    let mut state: AcgState = acg_init(g, h, x0, l, mu)?;
    let eta = 1.0 / state.inv_step();
    let unperturbed_grad = |st: &AcgState| {
        let mut grad = st.grad_x_tilde.clone();
        grad.scaled_add(-pert, &(&st.x_tilde - center));
        grad
    };
    let mut extra_prox = 0;
    loop {
        acg_step(&mut state, g, h)?;
        let done_surrogate = check == InnerCheck::Surrogate && state.grad_map_norm() <= tol / 2.0;
        let out_of_budget = state.iter >= budget;
        if check == InnerCheck::Direct || done_surrogate || out_of_budget {
            let grad = unperturbed_grad(&state);
            let (gm, x_plus) = gradient_mapping_from_grad(h, &state.x_tilde, &grad, eta);
            extra_prox += 1;
            let gm_norm = norm(&gm);
            let converged = match check {
                InnerCheck::Direct => gm_norm <= tol,
                InnerCheck::Surrogate => done_surrogate,
            };
            if converged || out_of_budget {
                return Ok(InnerSolve {
                    cert_inputs: (state.x_tilde.clone(), grad, gm, x_plus),
                    grad_map_norm: gm_norm,
                    iters: state.iter,
                    status: if converged { RunStatus::Converged } else { RunStatus::BudgetExhausted },
                    prox_count: state.prox_count + extra_prox,
                    grad_count: state.grad_count,
                });
            }
        }
    }
}

/// Outcome of one outer step.
#[derive(Clone, Debug)]
pub struct AlmStep {
    /// Certificate for `(x_{k+1}, λ_{k+1})`.
    pub certificate: KktCertificate,
    /// `‖G‖` at `x̃_k`.
    pub grad_map_norm: f64,
    /// Whether the outer stopping test fired.
    pub terminated: bool,
    /// Whether the inner solve met its tolerance.
    pub inner_status: RunStatus,
    /// ACG iterations used.
    pub inner_iters: usize,
    /// Dual certificate evaluation (verify mode, non-terminal steps only).
    pub dual_check: Option<DualCheck>,
}

/// Dual-side certificate `L(x⁺, λ⁺) − d(λ⁺) ≤ rhs`, evaluated with a certified
/// lower bound on `d(λ⁺)` so that `holds` is conservative.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DualCheck {
    /// Outer iteration `k`.
    pub iter: usize,
    /// `L(x⁺, λ⁺) − d_lower(λ⁺)`.
    pub lhs: f64,
    /// Right-hand side.
    pub rhs: f64,
    /// Width `d_upper − d_lower` of the dual-value bracket.
    pub bracket: f64,
    /// `lhs ≤ rhs`.
    pub holds: bool,
}

/// `f + ⟨λ, A· − b⟩`, the smooth part of the ordinary Lagrangian.
pub struct LagrangianSmoothPart<'a> {
    problem: &'a ConstrainedProblem,
    lambda: Vector,
}

impl<'a> LagrangianSmoothPart<'a> {
    /// Builds the smooth part at multiplier `λ`.
    pub fn new(problem: &'a ConstrainedProblem, lambda: &Vector) -> Self {
        Self { problem, lambda: lambda.clone() }
    }
}

impl SmoothOracle for LagrangianSmoothPart<'_> {
    fn dim(&self) -> usize {
        self.problem.base().dim()
    }
    fn eval(&self, x: &Vector) -> (f64, Vector) {
        let (fv, fg) = self.problem.base().f().eval(x);
        let value = fv + self.lambda.dot(&self.problem.residual(x));
        (value, fg + &self.problem.a().t().dot(&self.lambda))
    }
    fn lipschitz(&self) -> f64 {
        self.problem.base().f().lipschitz()
    }
    fn strong_convexity(&self) -> f64 {
        self.problem.base().f().strong_convexity()
    }
}

/// Certified bracket `[lower, upper]` on `min (s + h)` over `dom h`.
#[derive(Clone, Debug)]
pub struct ValueBracket {
    /// Lower bound.
    pub lower: f64,
    /// Upper bound (an attained value).
    pub upper: f64,
    /// Point attaining `upper`.
    pub argmin: Vector,
}

/// Iterations of the auxiliary solve behind [`min_value_bracket`].
pub const BRACKET_MAX_ITERS: usize = 200_000;

/// Brackets `min s + h` by a long ACG run. The lower bound uses a subgradient
/// `v` at the final prox point and the diameter: `ψ(x⁺) − ‖v‖D`, or the
/// minimum of ACG's lower model when it is strongly convex.
pub fn min_value_bracket(
    s: &dyn SmoothOracle,
    h: &dyn ProxOracle,
    x0: &Vector,
    diameter: f64,
    tol: f64,
) -> Result<ValueBracket> {
    let (l, mu) = (s.lipschitz().max(f64::MIN_POSITIVE), s.strong_convexity());
    let run = run_acg(s, h, x0, l, mu, Termination::GradMapTol { eps: tol, max_iters: BRACKET_MAX_ITERS })?;
    let st = run.state;
    let eta = 1.0 / l;
    let grad = s.gradient(&st.y);
    let (gm, x_plus) = gradient_mapping_from_grad(h, &st.y, &grad, eta);
    let v = gm - &grad + &s.gradient(&x_plus);
    let upper_plus = composite_value(s, h, &x_plus).finite().unwrap_or(f64::INFINITY);
    let (upper, argmin) = if upper_plus <= st.psi_y { (upper_plus, x_plus) } else { (st.psi_y, st.y.clone()) };
    let mut lower = upper_plus - norm(&v) * diameter;
    if let Some(m) = st.model.min_value() {
        lower = lower.max(m);
    }
    Ok(ValueBracket { lower: lower.min(upper), upper, argmin })
}

/// Gradient-mapping tolerance of the auxiliary dual solve.
pub const DUAL_SOLVE_TOL: f64 = 1e-11;

fn dual_check(
    problem: &ConstrainedProblem,
    cert: &KktCertificate,
    lambda_prev: &Vector,
    config: &IalmConfig,
    k: usize,
) -> Result<DualCheck> {
    let smooth = LagrangianSmoothPart::new(problem, &cert.lambda);
    let bracket = min_value_bracket(&smooth, problem.base().h(), &cert.x, problem.diameter(), DUAL_SOLVE_TOL)?;
    let lag = problem.lagrangian(&cert.x, &cert.lambda).finite().unwrap_or(f64::INFINITY);
    let lhs = lag - bracket.lower;
    let rhs = config.eps0 * config.alpha.powi(k as i32)
        + config.sigma / (2.0 * config.rho) * dist_sq(&cert.lambda, lambda_prev);
    Ok(DualCheck { iter: k, lhs, rhs, bracket: bracket.upper - bracket.lower, holds: lhs <= rhs })
}

/// One outer step: sets `ε_k`, solves the subproblem, updates `x` and `λ`.
pub fn ialm_step(state: &mut IalmState, config: &IalmConfig, problem: &ConstrainedProblem) -> Result<AlmStep> {
    let k = state.outer_iter;
    state.eps_k = config.tolerance(k);
    let sub = build_al_subproblem(state, config, problem)?;
    let d = problem.diameter();
    let h = problem.base().h();
    let inner = solve_inner(
        &sub.g,
        h,
        &state.x,
        sub.l,
        sub.mu,
        sub.mu,
        &state.x,
        state.eps_k / (2.0 * d),
        config.inner_budget,
        config.inner_check,
    )?;
    state.prox_count += inner.prox_count;
    state.grad_count += inner.grad_count + 1;
    let eta = 1.0 / (2.0 * sub.l + sub.mu);
    let (x_tilde, grad, gm, x_plus) = inner.cert_inputs;
    let (certificate, lambda_plus) =
        certificate_from_step(problem, &x_tilde, &state.lambda, eta, config.rho, &grad, gm, x_plus);
    let terminated = inner.grad_map_norm <= config.eps / 2.0 && certificate.feas <= config.eps;
    let dual_check = if config.verify && !terminated {
        Some(dual_check(problem, &certificate, &state.lambda, config, k)?)
    } else {
        None
    };
    state.x.assign(&certificate.x);
    state.lambda = lambda_plus;
    state.outer_iter += 1;
    Ok(AlmStep {
        certificate,
        grad_map_norm: inner.grad_map_norm,
        terminated,
        inner_status: inner.status,
        inner_iters: inner.iters,
        dual_check,
    })
}

/// Result of a constrained solve.
#[derive(Clone, Debug)]
pub struct AlmOutput {
    /// Final primal point.
    pub x: Vector,
    /// Final multiplier.
    pub lambda: Vector,
    /// Certificate of the last step, if any step ran.
    pub certificate: Option<KktCertificate>,
    /// Whether the method's own stopping test fired.
    pub status: RunStatus,
    /// One row for the start and one per outer step.
    pub trace: RunTrace,
    /// Dual certificate checks (verify mode).
    pub dual_checks: Vec<DualCheck>,
    /// ACG iterations of each outer step.
    pub inner_iters: Vec<usize>,
}

#[allow(clippy::too_many_arguments)]
pub(crate) fn constrained_row(
    problem: &ConstrainedProblem,
    x: &Vector,
    lambda: &Vector,
    outer: usize,
    inner: usize,
    counts: (usize, usize),
    clock: &Stopwatch,
    grad_map_norm: f64,
    reference: Option<f64>,
) -> TraceRow {
    let objective = problem.objective(x).finite().unwrap_or(f64::INFINITY);
    TraceRow {
        outer_iter: outer,
        inner_iters: inner,
        prox_evals: counts.0,
        grad_evals: counts.1,
        wall_time_s: clock.seconds(),
        objective,
        gap_estimate: gap(objective, reference),
        feasibility: problem.feasibility(x),
        grad_map_norm,
        dual_norm: norm(lambda),
    }
}

/// Runs the inexact ALM from `x0 ∈ dom h` with `λ_0 = 0`.
pub fn run_ialm(
    problem: &ConstrainedProblem,
    x0: &Vector,
    config: &IalmConfig,
    reference: Option<f64>,
) -> Result<AlmOutput> {
    config.validate(problem.diameter())?;
    let clock = Stopwatch::start();
    let mut state = IalmState::new(problem, x0)?;
    let mut trace = RunTrace::default();
    trace.rows.push(constrained_row(problem, &state.x, &state.lambda, 0, 0, (0, 0), &clock, f64::NAN, reference));
    let mut out = AlmOutput {
        x: state.x.clone(),
        lambda: state.lambda.clone(),
        certificate: None,
        status: RunStatus::BudgetExhausted,
        trace,
        dual_checks: Vec::new(),
        inner_iters: Vec::new(),
    };
    while state.outer_iter < config.max_outer {
        let step = ialm_step(&mut state, config, problem)?;
        out.trace.rows.push(constrained_row(
            problem,
            &state.x,
            &state.lambda,
            state.outer_iter,
            step.inner_iters,
            (state.prox_count, state.grad_count),
            &clock,
            step.grad_map_norm,
            reference,
        ));
        out.inner_iters.push(step.inner_iters);
        out.dual_checks.extend(step.dual_check);
        out.certificate = Some(step.certificate);
        if step.terminated {
            out.status = RunStatus::Converged;
            break;
        }
        if step.inner_status == RunStatus::BudgetExhausted {
            break;
        }
    }
    out.x = state.x;
    out.lambda = state.lambda;
    Ok(out)
}

/// `ρ = max{√L_f/‖A‖, L_f/‖A‖²}`.
pub fn lpalm_default_rho(problem: &ConstrainedProblem) -> f64 {
    let l_f = problem.base().f().lipschitz();
    let a = problem.op_norm_a();
    (l_f.sqrt() / a).max(l_f / (a * a))
}

/// Largest admissible linearized step `1/(L_f + ρ‖A‖²)`.
pub fn lpalm_max_step(problem: &ConstrainedProblem, rho: f64) -> f64 {
    1.0 / problem.m_rho(rho)
}

/// One linearized proximal ALM step; returns the certificate of the new pair.
pub fn lpalm_step(state: &mut IalmState, problem: &ConstrainedProblem, rho: f64, eta: f64) -> Result<KktCertificate> {
    check_positive("rho", rho)?;
    check_positive("eta", eta)?;
    if eta > lpalm_max_step(problem, rho) * (1.0 + 1e-12) {
        return Err(OptError::Parameter(format!("step {eta} exceeds 1/(L_f + rho |A|^2)")));
    }
    let psi = augmented_lagrangian_oracle(problem, &state.lambda, rho)?;
    let grad = psi.gradient(&state.x);
    let (gm, x_plus) = gradient_mapping_from_grad(problem.base().h(), &state.x, &grad, eta);
    let (cert, lambda_plus) = certificate_from_step(problem, &state.x, &state.lambda, eta, rho, &grad, gm, x_plus);
    state.x.assign(&cert.x);
    state.lambda = lambda_plus;
    state.outer_iter += 1;
    state.prox_count += 1;
    state.grad_count += 2;
    Ok(cert)
}

/// Linearized proximal ALM with step `1/(L_f + ρ‖A‖²)`, stopped once the
/// certificate is ε-primal-dual. Logs a row every 100 steps and at the end.
pub fn run_lpalm(
    problem: &ConstrainedProblem,
    x0: &Vector,
    rho: f64,
    eps: f64,
    max_iters: usize,
    reference: Option<f64>,
) -> Result<AlmOutput> {
    check_positive("eps", eps)?;
    let clock = Stopwatch::start();
    let eta = lpalm_max_step(problem, rho);
    let mut state = IalmState::new(problem, x0)?;
    let mut trace = RunTrace::default();
    trace.rows.push(constrained_row(problem, &state.x, &state.lambda, 0, 0, (0, 0), &clock, f64::NAN, reference));
    let mut out = AlmOutput {
        x: state.x.clone(),
        lambda: state.lambda.clone(),
        certificate: None,
        status: RunStatus::BudgetExhausted,
        trace,
        dual_checks: Vec::new(),
        inner_iters: Vec::new(),
    };
    let log_every = 100;
    while state.outer_iter < max_iters {
        let cert = lpalm_step(&mut state, problem, rho, eta)?;
        let done = cert.is_eps_primal_dual(eps);
        if done || state.outer_iter % log_every == 0 || state.outer_iter == max_iters {
            out.trace.rows.push(constrained_row(
                problem,
                &state.x,
                &state.lambda,
                state.outer_iter,
                1,
                (state.prox_count, state.grad_count),
                &clock,
                cert.grad_map_norm,
                reference,
            ));
        }
        out.certificate = Some(cert);
        if done {
            out.status = RunStatus::Converged;
            break;
        }
    }
    out.x = state.x;
    out.lambda = state.lambda;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::Matrix;
    use crate::problem::{CompositeProblem, Quadratic};
    use crate::prox::ProxKind;
    use ndarray::array;
    use std::sync::Arc;

    pub(crate) fn tiny_lcqp() -> ConstrainedProblem {
        let f = Quadratic::with_moduli(Matrix::eye(2), Vector::zeros(2), 1.0, 1.0).unwrap();
        let h = ProxKind::uniform_box(2, -10.0, 10.0).unwrap();
        let base = CompositeProblem::new(Arc::new(f), Arc::new(h)).unwrap();
        ConstrainedProblem::new(base, array![[1.0, 1.0]], array![1.0], 20.0 * 2f64.sqrt()).unwrap()
    }

    #[test]
    fn tolerance_schedule_by_hand() {
        let c = IalmConfig { eps0: 1.0, alpha: 0.5, sigma: 0.5, rho: 1000.0, eps: 1e-3, ..IalmConfig::theorem_defaults(1e-3) };
        assert!((c.tolerance(0) - (1.0 + 5e-4) / 2.0).abs() < 1e-15);
    }

    #[test]
    fn subproblem_modulus() {
        let p = tiny_lcqp();
        let c = IalmConfig::theorem_defaults(1e-3);
        let mut s = IalmState::new(&p, &array![0.0, 0.0]).unwrap();
        s.eps_k = p.diameter().powi(2);
        let sub = build_al_subproblem(&s, &c, &p).unwrap();
        assert!((sub.mu - 0.25).abs() < 1e-12);
        assert!((sub.l - p.m_rho(1e3)).abs() < 1e-9);
    }

    #[test]
    fn stationary_start_terminates_immediately() {
        let p = tiny_lcqp();
        let c = IalmConfig::theorem_defaults(1e-6);
        let mut s = IalmState::new(&p, &array![0.5, 0.5]).unwrap();
        s.lambda = array![-0.5];
        let step = ialm_step(&mut s, &c, &p).unwrap();
        assert!(step.terminated);
    }

    #[test]
    fn sigma_rho_constraint_enforced() {
        let c = IalmConfig { sigma: 0.9, rho: 1e6, ..IalmConfig::theorem_defaults(1e-3) };
        assert!(c.validate(1.0).is_err());
    }

    #[test]
    fn lpalm_fixed_point_and_convergence() {
        let p = tiny_lcqp();
        let rho = lpalm_default_rho(&p);
        let mut s = IalmState::new(&p, &array![0.5, 0.5]).unwrap();
        s.lambda = array![-0.5];
        lpalm_step(&mut s, &p, rho, lpalm_max_step(&p, rho)).unwrap();
        assert!((&s.x - &array![0.5, 0.5]).iter().all(|d| d.abs() < 1e-15));
        assert!(lpalm_step(&mut s, &p, rho, 1.0).is_err());
        let out = run_lpalm(&p, &array![0.0, 0.0], rho, 1e-8, 10_000, None).unwrap();
        assert_eq!(out.status, RunStatus::Converged);
        assert!((&out.x - &array![0.5, 0.5]).iter().all(|d| d.abs() < 1e-4));
    }
}
