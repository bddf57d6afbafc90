//! Inexact fast augmented Lagrangian method with primal and dual perturbations.
//!
//! The outer loop accelerates dual ascent on the perturbed dual
//! `d̃(λ) = min_x L^{γ_p}(x, λ) − (γ_d/2)‖λ‖²`; each step solves a perturbed
//! augmented-Lagrangian subproblem at the extrapolated multiplier `ν̃_k` by ACG.

use crate::alm::{AlmOutput, InnerCheck, LagrangianSmoothPart, constrained_row, min_value_bracket, open_unit, solve_inner};
use crate::error::{OptError, Result, check_positive};
use crate::frameworks::c_f_sum;
use crate::linalg::{Vector, dist, dist_sq};
use crate::problem::{ConstrainedProblem, KktCertificate, ProximalTerm, augmented_lagrangian_oracle, certificate_from_step};
use crate::restarted_acg::OuterScalars;
use crate::trace::{RunStatus, RunTrace, Stopwatch};

/// Dual radius estimate used by the experiment defaults.
pub const DEFAULT_DUAL_RADIUS: f64 = 1000.0;
/// Requested decay of the experiment defaults.
pub const EXPERIMENT_ALPHA: f64 = 0.85;
/// Cap applied to the decay rate.
pub const ALPHA_CAP: f64 = 0.99;
const FIXED_POINT_MAX_ITERS: usize = 100;
const FIXED_POINT_REL_TOL: f64 = 1e-12;

/// Parameters of the fast inexact ALM.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FalmConfig {
    /// Penalty `ρ` (also the outer prox weight).
    pub rho: f64,
    /// Target accuracy `ε`.
    pub eps: f64,
    /// Initial absolute error scale `ε_0 ≥ ε`.
    pub eps0: f64,
    /// Relative error `σ ∈ (0,1)` with `4σρε ≤ 1`.
    pub sigma: f64,
    /// Decay `α < (1 + √(γ_dρ))^{-2}`.
    pub alpha: f64,
    /// Primal perturbation `γ_p = ε/(2D)`.
    pub gamma_p: f64,
    /// Dual perturbation `γ_d > 0`.
    pub gamma_d: f64,
    /// Dual radius estimate `R̂ ≥ 1`.
    pub dual_radius: f64,
    /// Maximum outer iterations.
    pub max_outer: usize,
    /// Maximum ACG iterations per outer iteration.
    pub inner_budget: usize,
    /// Inner stopping test.
    pub inner_check: InnerCheck,
    /// Whether to evaluate the dual certificate at each outer step.
    pub verify: bool,
}

/// Result of the `γ_d` ↔ `C` fixed-point computation.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DualPerturbation {
    /// `γ_d = σ^{3/2}ε/(√3·𝓡)`.
    pub gamma_d: f64,
    /// Decay rate after the admissibility rule.
    pub alpha: f64,
    /// `C = Σ B_{i+1}αⁱ` at the fixed point.
    pub c: f64,
    /// Fixed-point iterations used.
    pub iterations: usize,
}

/// `min{requested, 0.9(1 + √(ργ_d))^{-2}, (15Dε/(28ε_0))^{√(ρε/D)}, 0.99}`.
pub fn admissible_alpha(requested: f64, rho: f64, gamma_d: f64, diameter: f64, eps: f64, eps0: f64) -> f64 {
    let first = 0.9 / (1.0 + (rho * gamma_d).sqrt()).powi(2);
    let second = (15.0 * diameter * eps / (28.0 * eps0)).powf((rho * eps / diameter).sqrt());
    requested.min(first).min(second).min(ALPHA_CAP)
}

/// Solves `γ_d = σ^{3/2}ε/(√3𝓡(C))`, `C = C(γ_d, α(γ_d))` by iteration from `C = 0`,
/// with `𝓡 = max{1,R̂}(1 + √(2ε_0C))(2/√(1−σ) + 1)`.
pub fn dual_perturbation(
    rho: f64,
    eps: f64,
    eps0: f64,
    sigma: f64,
    dual_radius: f64,
    diameter: f64,
    requested_alpha: f64,
) -> Result<DualPerturbation> {
    let radius_factor = dual_radius.max(1.0) * (2.0 / (1.0 - sigma).sqrt() + 1.0);
    let mut c = 0.0;
    for it in 1..=FIXED_POINT_MAX_ITERS {
        let script_r = radius_factor * (1.0 + (2.0 * eps0 * c).sqrt());
        let gamma_d = sigma.powf(1.5) * eps / (3f64.sqrt() * script_r);
        let alpha = admissible_alpha(requested_alpha, rho, gamma_d, diameter, eps, eps0);
        let c_next = c_f_sum(rho, gamma_d, alpha)?;
        if (c_next - c).abs() <= FIXED_POINT_REL_TOL * c_next || it == FIXED_POINT_MAX_ITERS {
            let script_r = radius_factor * (1.0 + (2.0 * eps0 * c_next).sqrt());
            let gamma_d = sigma.powf(1.5) * eps / (3f64.sqrt() * script_r);
            let alpha = admissible_alpha(requested_alpha, rho, gamma_d, diameter, eps, eps0);
            return Ok(DualPerturbation { gamma_d, alpha, c: c_f_sum(rho, gamma_d, alpha)?, iterations: it });
        }
        c = c_next;
    }
    unreachable!("loop returns on its final iteration")
}

/// User-facing inputs from which a [`FalmConfig`] is derived.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FalmSettings {
    /// Penalty `ρ`.
    pub rho: f64,
    /// Target accuracy `ε`.
    pub eps: f64,
    /// Initial absolute error scale `ε_0`.
    pub eps0: f64,
    /// Relative error `σ`.
    pub sigma: f64,
    /// Requested decay, capped by [`admissible_alpha`].
    pub requested_alpha: f64,
    /// Dual radius estimate `R̂`.
    pub dual_radius: f64,
}

impl FalmSettings {
    /// `ρ = L_f/‖A‖²`, `ε_0 = 1/ρ`, `σ = 1/4`.
    pub fn theorem(problem: &ConstrainedProblem, eps: f64, dual_radius: f64, requested_alpha: f64) -> Self {
        let a = problem.op_norm_a();
        let rho = problem.base().f().lipschitz() / (a * a);
        Self { rho, eps, eps0: 1.0 / rho, sigma: 0.25, requested_alpha, dual_radius }
    }

    /// `ρ = √m·L_f/‖A‖²`, `ε_0 = 1/ρ`, `σ = 1/4`, `α = 0.85`, `R̂ = 1000`.
    pub fn experiment(problem: &ConstrainedProblem, eps: f64) -> Self {
        let a = problem.op_norm_a();
        let rho = (problem.num_constraints() as f64).sqrt() * problem.base().f().lipschitz() / (a * a);
        Self { rho, eps, eps0: 1.0 / rho, sigma: 0.25, requested_alpha: EXPERIMENT_ALPHA, dual_radius: DEFAULT_DUAL_RADIUS }
    }
}

impl FalmConfig {
    /// Derives `γ_p = ε/(2D)` and, by [`dual_perturbation`], `γ_d` and `α`.
    pub fn from_settings(problem: &ConstrainedProblem, s: &FalmSettings) -> Result<Self> {
        check_positive("eps", s.eps)?;
        check_positive("rho", s.rho)?;
        open_unit("sigma", s.sigma)?;
        let d = problem.diameter();
        let dp = dual_perturbation(s.rho, s.eps, s.eps0, s.sigma, s.dual_radius, d, s.requested_alpha)?;
        Ok(Self {
            rho: s.rho,
            eps: s.eps,
            eps0: s.eps0,
            sigma: s.sigma,
            alpha: dp.alpha,
            gamma_p: s.eps / (2.0 * d),
            gamma_d: dp.gamma_d,
            dual_radius: s.dual_radius,
            max_outer: 10_000,
            inner_budget: 1_000_000,
            inner_check: InnerCheck::Direct,
            verify: false,
        })
    }

    /// Theorem parameters (see [`FalmSettings::theorem`]).
    pub fn theorem_defaults(problem: &ConstrainedProblem, eps: f64, dual_radius: f64, requested_alpha: f64) -> Result<Self> {
        Self::from_settings(problem, &FalmSettings::theorem(problem, eps, dual_radius, requested_alpha))
    }

    /// Experiment parameters (see [`FalmSettings::experiment`]).
    pub fn experiment_defaults(problem: &ConstrainedProblem, eps: f64) -> Result<Self> {
        Self::from_settings(problem, &FalmSettings::experiment(problem, eps))
    }

    /// Checks `4σρε ≤ 1`, `ε_0 ≥ ε`, `0 ≤ α < (1 + √(γ_dρ))^{-2}`, `γ_p = ε/(2D)`.
    pub fn validate(&self, diameter: f64) -> Result<()> {
        check_positive("rho", self.rho)?;
        check_positive("eps", self.eps)?;
        check_positive("gamma_d", self.gamma_d)?;
        open_unit("sigma", self.sigma)?;
        if 4.0 * self.sigma * self.rho * self.eps > 1.0 + 1e-12 {
            return Err(OptError::Parameter(format!("4 sigma rho eps = {} exceeds 1", 4.0 * self.sigma * self.rho * self.eps)));
        }
        if self.eps0 < self.eps {
            return Err(OptError::Parameter(format!("eps0 = {} is below eps = {}", self.eps0, self.eps)));
        }
        let alpha_max = 1.0 / (1.0 + (self.gamma_d * self.rho).sqrt()).powi(2);
        if !(self.alpha >= 0.0 && self.alpha < alpha_max) {
            return Err(OptError::Parameter(format!("alpha = {} must lie in [0, {alpha_max})", self.alpha)));
        }
        let gp = self.eps / (2.0 * diameter);
        if (self.gamma_p - gp).abs() > 1e-12 * gp {
            return Err(OptError::Parameter(format!("gamma_p = {} differs from eps/(2D) = {gp}", self.gamma_p)));
        }
        if self.inner_budget == 0 {
            return Err(OptError::Parameter("inner budget must be positive".into()));
        }
        Ok(())
    }

    /// `ε_k = (7ε_0αᵏ + σρε²)/8`.
    pub fn tolerance(&self, k: usize) -> f64 {
        (7.0 * self.eps0 * self.alpha.powi(k as i32) + self.sigma * self.rho * self.eps * self.eps) / 8.0
    }
}

/// Outer state of the fast inexact ALM.
#[derive(Clone, Debug)]
pub struct FalmState {
    /// Anchor `x_0` of the primal perturbation.
    pub anchor: Vector,
    /// Primal iterate `x_k`.
    pub x: Vector,
    /// Multiplier `λ_k`.
    pub lambda: Vector,
    /// Auxiliary multiplier `ν_k`.
    pub nu: Vector,
    /// Latest extrapolated multiplier `ν̃_{k-1}`.
    pub nu_tilde: Vector,
    /// Latest shrunk multiplier `λ̂_k = λ_k/(1 + γ_dρ)`.
    pub lambda_hat: Vector,
    /// Outer sequences with weight `ρ` and modulus `γ_d`.
    pub scalars: OuterScalars,
    /// Current inner tolerance `ε_k`.
    pub eps_k: f64,
    /// Outer iteration `k`.
    pub outer_iter: usize,
    /// Cumulative proximal evaluations.
    pub prox_count: usize,
    /// Cumulative smooth-oracle evaluations.
    pub grad_count: usize,
}

impl FalmState {
    /// `x_0` given, `λ_0 = ν_0 = 0`, `B_0 = 0`, `τ_0 = 1`.
    pub fn new(problem: &ConstrainedProblem, x0: &Vector, config: &FalmConfig) -> Result<Self> {
        if x0.len() != problem.base().dim() {
            return Err(OptError::Dimension(format!("x0 has length {}, expected {}", x0.len(), problem.base().dim())));
        }
        if !problem.base().h().value(x0).is_finite() {
            return Err(OptError::Domain("x0 lies outside dom h".into()));
        }
        let m = problem.num_constraints();
        Ok(Self {
            anchor: x0.clone(),
            x: x0.clone(),
            lambda: Vector::zeros(m),
            nu: Vector::zeros(m),
            nu_tilde: Vector::zeros(m),
            lambda_hat: Vector::zeros(m),
            scalars: OuterScalars::new(config.rho, config.gamma_d)?,
            eps_k: f64::NAN,
            outer_iter: 0,
            prox_count: 0,
            grad_count: 0,
        })
    }
}

/// Perturbed subproblem: `g = Ψ^{γ_p}_{ν̃} + (ε_k/(8D²))‖· − x_k‖²`.
pub struct FalmSubproblem<'a> {
    /// Smooth part handed to ACG.
    pub g: ProximalTerm<ProximalTerm<crate::problem::AugmentedLagrangian<'a>>>,
    /// `L = M_ρ`.
    pub l: f64,
    /// `μ = γ_p + ε_k/(4D²)`.
    pub mu: f64,
    /// `ε_k/(4D²)`, the part of `μ` excluded from the stopping test.
    pub tolerance_weight: f64,
}

/// Builds the subproblem at multiplier `nu_tilde` (uses `state.eps_k`).
pub fn build_perturbed_subproblem<'a>(
    state: &FalmState,
    nu_tilde: &Vector,
    config: &FalmConfig,
    problem: &'a ConstrainedProblem,
) -> Result<FalmSubproblem<'a>> {
    check_positive("eps_k", state.eps_k)?;
    let d = problem.diameter();
    let w = state.eps_k / (4.0 * d * d);
    let al = augmented_lagrangian_oracle(problem, nu_tilde, config.rho)?;
    let perturbed = ProximalTerm::new(al, config.gamma_p, state.anchor.clone())?;
    Ok(FalmSubproblem {
        g: ProximalTerm::new(perturbed, w, state.x.clone())?,
        l: problem.m_rho(config.rho),
        mu: config.gamma_p + w,
        tolerance_weight: w,
    })
}

/// Perturbed dual certificate at a non-terminal step, with a certified lower
/// bound on `min_x L^{γ_p}(x, λ⁺)` so that `holds` is conservative.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PerturbedDualCheck {
    /// Outer iteration `k`.
    pub iter: usize,
    /// `L^{γ_p}(x⁺,λ⁺) − lower + γ_d²ρ‖λ⁺‖²/(2(1+γ_dρ))`.
    pub lhs: f64,
    /// `(σ/2ρ)‖λ⁺ − ν̃‖² + ε_0αᵏ`.
    pub rhs: f64,
    /// Width of the bracket on the inner minimum.
    pub bracket: f64,
    /// `lhs ≤ rhs`.
    pub holds: bool,
}

/// Quantities recorded at every outer step.
#[derive(Clone, Debug, PartialEq)]
pub struct FalmHistory {
    /// `‖Ax_{k+1} − b‖`.
    pub feasibility: f64,
    /// `‖λ_{k+1} − ν̃_k‖`.
    pub multiplier_step: f64,
    /// Sequences after the step.
    pub scalars: OuterScalars,
    /// `τ_k` before the step.
    pub tau_prev: f64,
}

/// Outcome of one outer step.
#[derive(Clone, Debug)]
pub struct FalmStep {
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
    /// Recorded identities.
    pub history: FalmHistory,
    /// Perturbed dual certificate (verify mode, non-terminal steps only).
    pub dual_check: Option<PerturbedDualCheck>,
}

/// Gradient-mapping tolerance of the auxiliary solve in verify mode.
pub const DUAL_SOLVE_TOL: f64 = 1e-11;

fn perturbed_dual_check(
    problem: &ConstrainedProblem,
    state: &FalmState,
    cert: &KktCertificate,
    nu_tilde: &Vector,
    config: &FalmConfig,
    k: usize,
) -> Result<PerturbedDualCheck> {
    let smooth = ProximalTerm::new(LagrangianSmoothPart::new(problem, &cert.lambda), config.gamma_p, state.anchor.clone())?;
    let bracket = min_value_bracket(&smooth, problem.base().h(), &cert.x, problem.diameter(), DUAL_SOLVE_TOL)?;
    let lag = problem.lagrangian(&cert.x, &cert.lambda).finite().unwrap_or(f64::INFINITY)
        + 0.5 * config.gamma_p * dist_sq(&cert.x, &state.anchor);
    let gr = config.gamma_d * config.rho;
    let lhs = lag - bracket.lower + config.gamma_d * gr * cert.lambda.dot(&cert.lambda) / (2.0 * (1.0 + gr));
    let rhs = config.sigma / (2.0 * config.rho) * dist_sq(&cert.lambda, nu_tilde) + config.eps0 * config.alpha.powi(k as i32);
    Ok(PerturbedDualCheck { iter: k, lhs, rhs, bracket: bracket.upper - bracket.lower, holds: lhs <= rhs })
}

/// One outer step: extrapolate the multiplier, solve the perturbed subproblem,
/// take the dual step, and update the auxiliary multiplier unless terminated.
pub fn falm_step(state: &mut FalmState, config: &FalmConfig, problem: &ConstrainedProblem) -> Result<FalmStep> {
    let k = state.outer_iter;
    state.eps_k = config.tolerance(k);
    let (big_b, tau) = (state.scalars.big_b, state.scalars.tau);
    let b = state.scalars.next_b();
    let big_b_next = big_b + b;
    let mut nu_tilde = &state.lambda * (big_b / big_b_next);
    nu_tilde.scaled_add(b / big_b_next, &state.nu);

    let sub = build_perturbed_subproblem(state, &nu_tilde, config, problem)?;
    let d = problem.diameter();
    let inner = solve_inner(
        &sub.g,
        problem.base().h(),
        &state.x,
        sub.l,
        sub.mu,
        sub.tolerance_weight,
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
        certificate_from_step(problem, &x_tilde, &nu_tilde, eta, config.rho, &grad, gm, x_plus);
    let terminated = inner.grad_map_norm <= config.eps / 4.0 && certificate.feas <= config.eps;
    let dual_check = if config.verify && !terminated {
        Some(perturbed_dual_check(problem, state, &certificate, &nu_tilde, config, k)?)
    } else {
        None
    };

    state.scalars.advance();
    let lambda_hat = &lambda_plus / (1.0 + config.gamma_d * config.rho);
    if !terminated {
        let mut nu_next = &state.nu * tau;
        nu_next.scaled_add(b * config.gamma_d, &lambda_hat);
        nu_next.scaled_add(-b / config.rho, &(&nu_tilde - &lambda_hat));
        state.nu = nu_next / state.scalars.tau;
    }
    let history = FalmHistory {
        feasibility: certificate.feas,
        multiplier_step: dist(&lambda_plus, &nu_tilde),
        scalars: state.scalars,
        tau_prev: tau,
    };
    state.x.assign(&certificate.x);
    state.lambda = lambda_plus;
    state.lambda_hat = lambda_hat;
    state.nu_tilde = nu_tilde;
    state.outer_iter += 1;
    Ok(FalmStep {
        certificate,
        grad_map_norm: inner.grad_map_norm,
        terminated,
        inner_status: inner.status,
        inner_iters: inner.iters,
        history,
        dual_check,
    })
}

/// Result of [`run_ifalm`].
#[derive(Clone, Debug)]
pub struct FalmOutput {
    /// Common constrained-solver output (dual checks are left empty).
    pub run: AlmOutput,
    /// Per-step identities.
    pub history: Vec<FalmHistory>,
    /// Perturbed dual certificate checks (verify mode).
    pub dual_checks: Vec<PerturbedDualCheck>,
}

/// Runs the fast inexact ALM from `x0 ∈ dom h`.
pub fn run_ifalm(
    problem: &ConstrainedProblem,
    x0: &Vector,
    config: &FalmConfig,
    reference: Option<f64>,
) -> Result<FalmOutput> {
    config.validate(problem.diameter())?;
    let clock = Stopwatch::start();
    let mut state = FalmState::new(problem, x0, config)?;
    let mut trace = RunTrace::default();
    trace.rows.push(constrained_row(problem, &state.x, &state.lambda, 0, 0, (0, 0), &clock, f64::NAN, reference));
    let mut run = AlmOutput {
        x: state.x.clone(),
        lambda: state.lambda.clone(),
        certificate: None,
        status: RunStatus::BudgetExhausted,
        trace,
        dual_checks: Vec::new(),
        inner_iters: Vec::new(),
    };
    let (mut history, mut dual_checks) = (Vec::new(), Vec::new());
    while state.outer_iter < config.max_outer {
        let step = falm_step(&mut state, config, problem)?;
        run.trace.rows.push(constrained_row(
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
        run.inner_iters.push(step.inner_iters);
        history.push(step.history);
        dual_checks.extend(step.dual_check);
        run.certificate = Some(step.certificate);
        if step.terminated {
            run.status = RunStatus::Converged;
            break;
        }
        if step.inner_status == RunStatus::BudgetExhausted {
            break;
        }
    }
    run.x = state.x;
    run.lambda = state.lambda;
    Ok(FalmOutput { run, history, dual_checks })
}
