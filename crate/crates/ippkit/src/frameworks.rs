//! Inexact proximal-point certificate checkers (unaccelerated and accelerated),
//! the proximal gradient method as an instance, and bound monitors.
//!
//! The unaccelerated framework asks for `y_{k+1}` and a `1/λ`-strongly convex
//! lower model `Γ_k ≤ Φ + ‖· − x_k‖²/(2λ)` with
//! `‖λû‖² + 2λ[Φ(y) + ‖y − x_k‖²/(2λ) − Γ_k(x_{k+1})] ≤ σ‖y − x_k‖² + 2λδ_k`.
//! The accelerated framework applies the same test at an extrapolated point.

use std::sync::Arc;

use crate::acg::{AcgState, QuadraticLowerModel};
use crate::error::{OptError, Result, check_nonnegative, check_positive};
use crate::linalg::{Vector, dist, dist_sq};
use crate::problem::{CompositeProblem, SmoothOracle, gradient_mapping_from_grad};
use crate::prox::{ExtValue, ProxOracle};
use crate::restarted_acg::{GapStop, InnerSummary, OuterScalars};
use crate::trace::{RunStatus, RunTrace, SolverOutput, Stopwatch, TraceRow, gap};

/// Relative slack used when a certificate holds with equality in exact arithmetic.
pub const CERTIFICATE_REL_TOL: f64 = 1e-9;

/// Lower model `Γ_k`, evaluable at arbitrary points.
pub type ModelFn = Arc<dyn Fn(&Vector) -> ExtValue + Send + Sync>;

/// Weight `𝒜_k` of the auxiliary update `x_{k+1} = argmin Γ_k + ‖· − x_k‖²/(2𝒜_k)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ProxWeight {
    /// Finite weight `𝒜_k > 0`.
    Finite(f64),
    /// `𝒜_k = ∞`: `x_{k+1}` minimizes `Γ_k` itself and `û = 0`.
    Unregularized,
}

/// One step of the unaccelerated framework.
#[derive(Clone)]
pub struct LoraRecord {
    /// Prox center `x_k`.
    pub x_prev: Vector,
    /// Approximate prox point `y_{k+1}`.
    pub y: Vector,
    /// Model minimizer `x_{k+1}`.
    pub x_next: Vector,
    /// `û_{k+1} = (x_k − x_{k+1})/𝒜_k`.
    pub u_hat: Vector,
    /// Lower model `Γ_k`.
    pub model: ModelFn,
    /// Prox weight `λ`.
    pub lambda: f64,
    /// Relative error `σ`.
    pub sigma: f64,
    /// Absolute error `δ_k`.
    pub delta: f64,
    /// Auxiliary weight `𝒜_k`.
    pub weight: ProxWeight,
}

/// One step of the accelerated framework.
#[derive(Clone)]
pub struct FloraRecord {
    /// Extrapolated prox center `x̃_k`.
    pub x_tilde: Vector,
    /// Approximate prox point `ỹ_{k+1}`.
    pub y_tilde: Vector,
    /// Model point `z_{k+1}`.
    pub z: Vector,
    /// `û_{k+1}`.
    pub u_hat: Vector,
    /// `u_{k+1}`, expected to equal `û_{k+1} + (x̃_k − z_{k+1})/λ`.
    pub u: Vector,
    /// Lower model `Γ_k`.
    pub model: ModelFn,
    /// Prox weight `λ`.
    pub lambda: f64,
    /// Relative error `σ`.
    pub sigma: f64,
    /// Absolute error `δ_k = δ_0 α^k`.
    pub delta: f64,
    /// Sequences after the step: `(b_k, B_{k+1}, τ_{k+1})`.
    pub scalars: OuterScalars,
    /// Auxiliary weight `𝒜_k`.
    pub weight: ProxWeight,
}

fn certificate_sides(
    lambda: f64,
    u_hat: &Vector,
    phi_y: ExtValue,
    gamma_z: ExtValue,
    step_sq: f64,
    sigma: f64,
    delta: f64,
) -> (f64, f64, f64) {
    let (phi, gamma) = match (phi_y, gamma_z) {
        (ExtValue::Infinite, _) => return (f64::INFINITY, 0.0, 1.0),
        (_, ExtValue::Infinite) => return (f64::NEG_INFINITY, 0.0, 1.0),
        (ExtValue::Finite(p), ExtValue::Finite(g)) => (p, g),
    };
    let lhs = lambda * lambda * u_hat.dot(u_hat) + 2.0 * lambda * (phi - gamma) + step_sq;
    let rhs = sigma * step_sq + 2.0 * lambda * delta;
    let scale = 1f64.max(2.0 * lambda * phi.abs()).max(2.0 * lambda * gamma.abs()).max(step_sq);
    (lhs, rhs, scale)
}

/// Left and right sides of the unaccelerated certificate.
pub fn lora_certificate_sides(rec: &LoraRecord, phi: &dyn Fn(&Vector) -> ExtValue) -> (f64, f64) {
    let (lhs, rhs, _) = lora_parts(rec, phi);
    (lhs, rhs)
}

fn lora_parts(rec: &LoraRecord, phi: &dyn Fn(&Vector) -> ExtValue) -> (f64, f64, f64) {
    certificate_sides(
        rec.lambda,
        &rec.u_hat,
        phi(&rec.y),
        (rec.model)(&rec.x_next),
        dist_sq(&rec.y, &rec.x_prev),
        rec.sigma,
        rec.delta,
    )
}

/// True iff the unaccelerated certificate holds up to [`CERTIFICATE_REL_TOL`].
pub fn lora_certificate(rec: &LoraRecord, phi: &dyn Fn(&Vector) -> ExtValue) -> bool {
    let (lhs, rhs, scale) = lora_parts(rec, phi);
    lhs <= rhs + CERTIFICATE_REL_TOL * scale
}

fn flora_parts(rec: &FloraRecord, phi: &dyn Fn(&Vector) -> ExtValue) -> (f64, f64, f64) {
    certificate_sides(
        rec.lambda,
        &rec.u_hat,
        phi(&rec.y_tilde),
        (rec.model)(&rec.z),
        dist_sq(&rec.y_tilde, &rec.x_tilde),
        rec.sigma,
        rec.delta,
    )
}

/// Left and right sides of the accelerated certificate.
pub fn flora_certificate_sides(rec: &FloraRecord, phi: &dyn Fn(&Vector) -> ExtValue) -> (f64, f64) {
    let (lhs, rhs, _) = flora_parts(rec, phi);
    (lhs, rhs)
}

/// True iff the accelerated certificate holds up to [`CERTIFICATE_REL_TOL`].
pub fn flora_certificate(rec: &FloraRecord, phi: &dyn Fn(&Vector) -> ExtValue) -> bool {
    let (lhs, rhs, scale) = flora_parts(rec, phi);
    lhs <= rhs + CERTIFICATE_REL_TOL * scale
}

/// `‖u − û − (x̃ − z)/λ‖`, zero when the record is internally consistent.
pub fn flora_consistency_residual(rec: &FloraRecord) -> f64 {
    let mut r = &rec.u - &rec.u_hat;
    r.scaled_add(-1.0 / rec.lambda, &(&rec.x_tilde - &rec.z));
    r.dot(&r).sqrt()
}

/// Midpoint test of `modulus`-strong convexity of `model` on the given pairs.
pub fn model_is_strongly_convex(model: &ModelFn, modulus: f64, pairs: &[(Vector, Vector)]) -> bool {
    pairs.iter().all(|(p, q)| {
        let mid = (p + q) * 0.5;
        match (model(p), model(q), model(&mid)) {
            (ExtValue::Finite(a), ExtValue::Finite(b), ExtValue::Finite(m)) => {
                let bound = 0.5 * (a + b) - modulus / 8.0 * dist_sq(p, q);
                m <= bound + CERTIFICATE_REL_TOL * (1.0 + a.abs().max(b.abs()))
            }
            (ExtValue::Finite(_), ExtValue::Finite(_), ExtValue::Infinite) => false,
            _ => true,
        }
    })
}

/// Sides of the prox-subproblem inequality
/// `Φ(y) + ‖y − x_k‖²/(2λ) − [Φ(x̂) + ‖x̂ − x_k‖²/(2λ)] ≤ σ‖y − x_k‖²/(2λ) + δ_k`.
pub fn prox_point_sides(rec: &LoraRecord, phi: &dyn Fn(&Vector) -> ExtValue, x_hat: &Vector) -> (f64, f64) {
    let two_l = 2.0 * rec.lambda;
    let sub = |x: &Vector| phi(x).plus(dist_sq(x, &rec.x_prev) / two_l);
    let lhs = match (sub(&rec.y), sub(x_hat)) {
        (ExtValue::Finite(a), ExtValue::Finite(b)) => a - b,
        (ExtValue::Infinite, _) => f64::INFINITY,
        (_, ExtValue::Infinite) => f64::NEG_INFINITY,
    };
    let rhs = rec.sigma * dist_sq(&rec.y, &rec.x_prev) / two_l + rec.delta;
    (lhs, rhs)
}

/// Runs `k` proximal gradient steps with step `η ≤ 1/L_f` and records each as an
/// unaccelerated-framework step with `Γ_k = ℓ_f(·; x_k) + h + ‖· − x_k‖²/(2η)`,
/// `λ = η`, `σ = ηL_f`, `δ = 0`, `û = 0`, `y_{k+1} = x_{k+1}`.
pub fn pgm_run_as_lora(problem: &CompositeProblem, x0: &Vector, eta: f64, k: usize) -> Result<Vec<LoraRecord>> {
    check_positive("eta", eta)?;
    let l_f = problem.f().lipschitz();
    if eta > (1.0 + 1e-12) / l_f {
        return Err(OptError::Parameter(format!("step {eta} exceeds 1/L_f = {}", 1.0 / l_f)));
    }
    if x0.len() != problem.dim() {
        return Err(OptError::Dimension(format!("x0 has length {}, expected {}", x0.len(), problem.dim())));
    }
    let h: Arc<dyn ProxOracle> = problem.h_arc();
    let mut records = Vec::with_capacity(k);
    let mut x = x0.clone();
    for _ in 0..k {
        let (f_x, grad) = problem.f().eval(&x);
        let (_, x_next) = gradient_mapping_from_grad(problem.h(), &x, &grad, eta);
        let (center, h_model) = (x.clone(), Arc::clone(&h));
        let model: ModelFn = Arc::new(move |p: &Vector| {
            let d = p - &center;
            h_model.value(p).plus(f_x + grad.dot(&d) + d.dot(&d) / (2.0 * eta))
        });
        records.push(LoraRecord {
            x_prev: x.clone(),
            y: x_next.clone(),
            x_next: x_next.clone(),
            u_hat: Vector::zeros(x.len()),
            model,
            lambda: eta,
            sigma: eta * l_f,
            delta: 0.0,
            weight: ProxWeight::Unregularized,
        });
        x = x_next;
    }
    Ok(records)
}

/// Accelerated-framework record of one outer step of the restarted method:
/// `Γ = Θ_j`, `𝒜 = A_j`, `z = x_j`, `û = s_j`, `u = ((A_j + λ)/λ)s_j`, `δ = 0`.
pub fn restart_flora_record(inner: &InnerSummary, lambda: f64, sigma: f64, scalars: OuterScalars) -> FloraRecord {
    let model = inner.model.clone();
    FloraRecord {
        x_tilde: inner.center.clone(),
        y_tilde: inner.y.clone(),
        z: inner.x.clone(),
        u_hat: inner.s.clone(),
        u: &inner.s * ((inner.big_a + lambda) / lambda),
        model: Arc::new(move |p: &Vector| ExtValue::Finite(model.value(p))),
        lambda,
        sigma,
        delta: 0.0,
        scalars,
        weight: ProxWeight::Finite(inner.big_a),
    }
}

/// Accelerated-framework record of the latest ACG step: `λ = 1/(2L)`, `σ = 1/2`,
/// `Γ = ℓ_g(·; x̃) + h + ((2L + μ)/2)‖· − x̃‖²`, `z = ỹ`, `û = 0`, `𝒜 = ∞`.
///
/// Must be called after at least one step.
pub fn acg_flora_record(state: &AcgState, h: Arc<dyn ProxOracle>) -> Result<FloraRecord> {
    if state.iter == 0 {
        return Err(OptError::Precondition("ACG record needs at least one step".into()));
    }
    let l = state.scalars.l;
    let (g_x, grad, center, inv_step) =
        (state.g_x_tilde, state.grad_x_tilde.clone(), state.x_tilde.clone(), state.inv_step());
    let model: ModelFn = Arc::new(move |p: &Vector| {
        let d = p - &center;
        h.value(p).plus(g_x + grad.dot(&d) + 0.5 * inv_step * d.dot(&d))
    });
    let scalars = OuterScalars {
        b: state.scalars.a,
        big_b: state.scalars.big_a,
        tau: state.scalars.tau,
        lambda: 1.0 / (2.0 * l),
        mu: state.scalars.mu,
    };
    Ok(FloraRecord {
        x_tilde: state.x_tilde.clone(),
        y_tilde: state.y_tilde.clone(),
        z: state.y_tilde.clone(),
        u_hat: Vector::zeros(state.x.len()),
        u: state.u.clone(),
        model,
        lambda: 1.0 / (2.0 * l),
        sigma: 0.5,
        delta: 0.0,
        scalars,
        weight: ProxWeight::Unregularized,
    })
}

/// Relative increment below which the series for `C_F` is considered summed.
pub const SERIES_REL_TOL: f64 = 1e-14;
const SERIES_MAX_TERMS: usize = 10_000_000;

/// `β = √α(1 + √(λμ))`.
pub fn beta(lambda: f64, mu: f64, alpha: f64) -> f64 {
    alpha.sqrt() * (1.0 + (lambda * mu).sqrt())
}

/// `C_F = Σ_{i≥0} B_{i+1} αⁱ`, summed until the relative increment drops below
/// [`SERIES_REL_TOL`]. Requires `β < 1`.
pub fn c_f_sum(lambda: f64, mu: f64, alpha: f64) -> Result<f64> {
    check_nonnegative("alpha", alpha)?;
    let b = beta(lambda, mu, alpha);
    if b >= 1.0 {
        return Err(OptError::Parameter(format!("series diverges: beta = {b} >= 1")));
    }
    let mut s = OuterScalars::new(lambda, mu)?;
    let mut sum = 0.0;
    let mut power = 1.0;
    for _ in 0..SERIES_MAX_TERMS {
        s.advance();
        let term = s.big_b * power;
        sum += term;
        if term <= SERIES_REL_TOL * sum {
            return Ok(sum);
        }
        power *= alpha;
    }
    Err(OptError::Numerical("C_F series did not converge".into()))
}

/// `λ/(1 − β)⁴`, the closed-form upper bound on `C_F`.
pub fn c_f_bound(lambda: f64, mu: f64, alpha: f64) -> Result<f64> {
    let b = beta(lambda, mu, alpha);
    if b >= 1.0 {
        return Err(OptError::Parameter(format!("bound undefined: beta = {b} >= 1")));
    }
    Ok(lambda / (1.0 - b).powi(4))
}

/// `Δ_0..Δ_{k}` from `Δ_{-1} = 0`, `Δ_i = (B_i/B_{i+1})Δ_{i-1} + δ_0 αⁱ`.
pub fn delta_recursion(lambda: f64, mu: f64, alpha: f64, delta0: f64, k: usize) -> Result<Vec<f64>> {
    let mut s = OuterScalars::new(lambda, mu)?;
    let mut out = Vec::with_capacity(k + 1);
    let (mut prev, mut power) = (0.0, 1.0);
    for _ in 0..=k {
        let b_i = s.big_b;
        s.advance();
        prev = b_i / s.big_b * prev + delta0 * power;
        out.push(prev);
        power *= alpha;
    }
    Ok(out)
}

/// `Δ_i = δ_0 Σ_{l≤i} B_{l+1} αˡ / B_{i+1}` for `i = 0..=k`.
pub fn delta_closed_form(lambda: f64, mu: f64, alpha: f64, delta0: f64, k: usize) -> Result<Vec<f64>> {
    let mut s = OuterScalars::new(lambda, mu)?;
    let mut out = Vec::with_capacity(k + 1);
    let (mut partial, mut power) = (0.0, 1.0);
    for _ in 0..=k {
        s.advance();
        partial += s.big_b * power;
        out.push(delta0 * partial / s.big_b);
        power *= alpha;
    }
    Ok(out)
}

/// Unaccelerated bounds after `k ≥ 1` steps with maximal absolute error `δ̄`:
/// `(R₀/√((1−σ)k) + √(2λδ̄/(1−σ)), R₀²/(2λk) + δ̄)`.
pub fn lora_bounds(k: usize, r0: f64, lambda: f64, sigma: f64, delta_bar: f64) -> (f64, f64) {
    let kf = k as f64;
    let step = r0 / ((1.0 - sigma) * kf).sqrt() + (2.0 * lambda * delta_bar / (1.0 - sigma)).sqrt();
    let gap = r0 * r0 / (2.0 * lambda * kf) + delta_bar;
    (step, gap)
}

/// Accelerated bounds given `B_{k+1}` and `δ_0C_F`:
/// `(R₀²/(2B) + δ_0C_F/B, (√λR₀ + √(2λδ_0C_F))/√((1−σ)B))`.
pub fn flora_bounds(big_b: f64, r0: f64, lambda: f64, sigma: f64, delta0_c_f: f64) -> (f64, f64) {
    let gap = r0 * r0 / (2.0 * big_b) + delta0_c_f / big_b;
    let step = (lambda.sqrt() * r0 + (2.0 * lambda * delta0_c_f).sqrt()) / ((1.0 - sigma) * big_b).sqrt();
    (gap, step)
}

/// Framework parameters for [`theorem_monitors`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum MonitorParams {
    /// Unaccelerated framework with maximal absolute error `delta_bar`.
    Lora {
        /// Prox weight.
        lambda: f64,
        /// Relative error.
        sigma: f64,
        /// `max_i δ_i`.
        delta_bar: f64,
    },
    /// Accelerated framework with `δ_k = δ_0 αᵏ`.
    Flora {
        /// Prox weight.
        lambda: f64,
        /// Strong convexity modulus.
        mu: f64,
        /// Relative error.
        sigma: f64,
        /// Decay rate of the absolute error.
        alpha: f64,
        /// Initial absolute error.
        delta0: f64,
    },
}

/// Per-step quantities fed to [`theorem_monitors`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MonitorSample {
    /// `Φ(y_{k+1})`.
    pub phi_y: f64,
    /// `‖y_{k+1} − x_k‖` (or `‖ỹ_{k+1} − x̃_k‖`).
    pub step: f64,
    /// `B_{k+1}` (ignored by the unaccelerated monitor).
    pub big_b: f64,
}

/// Outcome of the bound checks at one step.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MonitorRow {
    /// Step index `k` (1-based count of completed steps).
    pub iter: usize,
    /// Monitored gap (running minimum for the unaccelerated framework).
    pub gap: f64,
    /// Bound on the gap.
    pub gap_bound: f64,
    /// Monitored step length (running minimum for the unaccelerated framework).
    pub step: f64,
    /// Bound on the step length, `NaN` when `σ = 1`.
    pub step_bound: f64,
    /// `gap ≤ gap_bound + slack`.
    pub gap_ok: bool,
    /// `step ≤ step_bound + slack` (true when no bound applies).
    pub step_ok: bool,
}

/// Checks the framework bounds at every recorded step with absolute slack `slack`.
pub fn theorem_monitors(
    samples: &[MonitorSample],
    r0: f64,
    phi_star: f64,
    params: MonitorParams,
    slack: f64,
) -> Result<Vec<MonitorRow>> {
    let mut rows = Vec::with_capacity(samples.len());
    match params {
        MonitorParams::Lora { lambda, sigma, delta_bar } => {
            let (mut best_gap, mut best_step) = (f64::INFINITY, f64::INFINITY);
            for (i, s) in samples.iter().enumerate() {
                best_gap = best_gap.min(s.phi_y - phi_star);
                best_step = best_step.min(s.step);
                let (step_bound, gap_bound) = lora_bounds(i + 1, r0, lambda, sigma, delta_bar);
                rows.push(MonitorRow {
                    iter: i + 1,
                    gap: best_gap,
                    gap_bound,
                    step: best_step,
                    step_bound,
                    gap_ok: best_gap <= gap_bound + slack,
                    step_ok: best_step <= step_bound + slack,
                });
            }
        }
        MonitorParams::Flora { lambda, mu, sigma, alpha, delta0 } => {
            let c_f = if delta0 > 0.0 { c_f_sum(lambda, mu, alpha)? } else { 0.0 };
            for (i, s) in samples.iter().enumerate() {
                let (gap_bound, step_bound) = flora_bounds(s.big_b, r0, lambda, sigma, delta0 * c_f);
                let step_bound = if sigma < 1.0 { step_bound } else { f64::NAN };
                let gap = s.phi_y - phi_star;
                rows.push(MonitorRow {
                    iter: i + 1,
                    gap,
                    gap_bound,
                    step: s.step,
                    step_bound,
                    gap_ok: gap <= gap_bound + slack,
                    step_ok: step_bound.is_nan() || s.step <= step_bound + slack,
                });
            }
        }
    }
    Ok(rows)
}

/// `‖y − x‖` helper for building [`MonitorSample`]s.
pub fn step_length(y: &Vector, x: &Vector) -> f64 {
    dist(y, x)
}

/// Wraps a lower model as a [`ModelFn`].
pub fn quadratic_model(model: QuadraticLowerModel) -> ModelFn {
    Arc::new(move |p: &Vector| ExtValue::Finite(model.value(p)))
}

/// Proximal gradient method `x_{k+1} = prox_{ηh}(x_k − η∇f(x_k))` with the
/// shared gap (or gradient-mapping) stopping rule. Logs a row every 100 steps.
pub fn run_pgm(
    f: &dyn SmoothOracle,
    h: &dyn ProxOracle,
    x0: &Vector,
    eta: f64,
    stop: GapStop,
    max_iters: usize,
) -> Result<SolverOutput> {
    check_positive("eta", eta)?;
    let clock = Stopwatch::start();
    let mut x = x0.clone();
    let (mut f_x, mut grad) = f.eval(&x);
    let mut phi = h
        .value(&x)
        .plus(f_x)
        .finite()
        .ok_or_else(|| OptError::Domain("initial point has h(x0) = +inf".into()))?;
    let (mut prox_count, mut grad_count) = (0, 1);
    let row = |k: usize, prox: usize, grads: usize, phi: f64, gm: f64| TraceRow {
        outer_iter: k,
        inner_iters: 1,
        prox_evals: prox,
        grad_evals: grads,
        wall_time_s: clock.seconds(),
        objective: phi,
        gap_estimate: gap(phi, stop.reference),
        feasibility: 0.0,
        grad_map_norm: gm,
        dual_norm: 0.0,
    };
    let mut trace = RunTrace { rows: vec![row(0, 0, 1, phi, f64::NAN)] };
    let mut status = match stop.reference {
        Some(r) if phi - r <= stop.eps => RunStatus::Converged,
        _ => RunStatus::BudgetExhausted,
    };
    let mut k = 0;
    while status != RunStatus::Converged && k < max_iters {
        let (g, x_next) = gradient_mapping_from_grad(h, &x, &grad, eta);
        prox_count += 1;
        k += 1;
        x = x_next;
        (f_x, grad) = f.eval(&x);
        grad_count += 1;
        phi = h.value(&x).plus(f_x).finite().unwrap_or(f64::INFINITY);
        let gm = crate::linalg::norm(&g);
        let done = match stop.reference {
            Some(r) => phi - r <= stop.eps,
            None => gm <= stop.eps,
        };
        if done {
            status = RunStatus::Converged;
        }
        if done || k % 100 == 0 || k == max_iters {
            trace.rows.push(row(k, prox_count, grad_count, phi, gm));
        }
    }
    Ok(SolverOutput { x, objective: phi, status, trace })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problem::{Quadratic, composite_value};
    use crate::prox::ProxKind;
    use ndarray::array;

    fn scalar_problem(shift: f64, h: ProxKind) -> CompositeProblem {
        let f = Quadratic::with_moduli(array![[1.0]], array![-shift], 1.0, 1.0).unwrap();
        CompositeProblem::new(Arc::new(f), Arc::new(h)).unwrap()
    }

    #[test]
    fn degenerate_record_passes() {
        let rec = LoraRecord {
            x_prev: array![1.0],
            y: array![1.0],
            x_next: array![1.0],
            u_hat: array![0.0],
            model: Arc::new(|_: &Vector| ExtValue::Finite(2.0)),
            lambda: 1.0,
            sigma: 0.5,
            delta: 0.0,
            weight: ProxWeight::Unregularized,
        };
        assert!(lora_certificate(&rec, &|_| ExtValue::Finite(2.0)));
        let bad = LoraRecord { model: Arc::new(|_: &Vector| ExtValue::Finite(0.0)), ..rec.clone() };
        assert!(!lora_certificate(&bad, &|_| ExtValue::Finite(2.0)));
        let loose = LoraRecord { delta: 10.0, ..bad };
        assert!(lora_certificate(&loose, &|_| ExtValue::Finite(2.0)));
    }

    #[test]
    fn pgm_one_step_examples() {
        let p = scalar_problem(0.0, ProxKind::Zero);
        let recs = pgm_run_as_lora(&p, &array![1.0], 1.0, 1).unwrap();
        assert_eq!(recs[0].x_next, array![0.0]);
        let phi = |x: &Vector| composite_value(p.f(), p.h(), x);
        let (lhs, rhs) = lora_certificate_sides(&recs[0], &phi);
        assert!((lhs - rhs).abs() < 1e-15);

        let p = scalar_problem(3.0, ProxKind::l1(1.0).unwrap());
        let recs = pgm_run_as_lora(&p, &array![0.0], 1.0, 1).unwrap();
        assert_eq!(recs[0].x_next, array![2.0]);
    }

    #[test]
    fn pgm_step_too_large() {
        let p = scalar_problem(0.0, ProxKind::Zero);
        assert!(pgm_run_as_lora(&p, &array![1.0], 1.5, 1).is_err());
    }

    #[test]
    fn c_f_single_term_and_bound() {
        assert_eq!(c_f_sum(2.0, 0.3, 0.0).unwrap(), 2.0);
        let c = c_f_sum(1.0, 0.0, 0.25).unwrap();
        assert!(c <= 16.0 && c > 1.0);
    }

    #[test]
    fn delta_forms_agree() {
        let r = delta_recursion(1.0, 0.1, 0.5, 2.0, 50).unwrap();
        let c = delta_closed_form(1.0, 0.1, 0.5, 2.0, 50).unwrap();
        for (a, b) in r.iter().zip(&c) {
            assert!((a - b).abs() <= 1e-12 * b.abs());
        }
    }
}
