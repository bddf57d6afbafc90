//! Dispatch of (problem, algorithm) pairs to the solvers.

use std::fmt;
use std::str::FromStr;

use super::io::ProblemInstance;
use crate::alm::{IalmConfig, run_ialm, run_lpalm, lpalm_default_rho};
use crate::error::{OptError, Result};
use crate::falm::{FalmConfig, FalmSettings, run_ifalm};
use crate::frameworks::run_pgm;
use crate::linalg::Vector;
use crate::problem::KktCertificate;
use crate::restarted_acg::{
    DEFAULT_K_MIN, GapStop, RacgParams, gradient_restart_run, plain_acg_run, run_restarted_acg, speed_restart_run,
};
use crate::trace::{RunStatus, RunTrace};

/// Solvers available to the runner.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Algo {
    /// Plain accelerated composite gradient.
    Acg,
    /// Doubly accelerated restarted ACG.
    Racg,
    /// ACG with gradient-based resets.
    GradRestart,
    /// ACG with speed-based resets.
    SpeedRestart,
    /// Proximal gradient method.
    Pgm,
    /// Inexact augmented Lagrangian method.
    Ialm,
    /// Inexact fast augmented Lagrangian method.
    Ifalm,
    /// Linearized proximal augmented Lagrangian method.
    Lpalm,
}

impl Algo {
    /// Every solver, in CLI order.
    pub const ALL: [Algo; 8] =
        [Algo::Acg, Algo::Racg, Algo::GradRestart, Algo::SpeedRestart, Algo::Pgm, Algo::Ialm, Algo::Ifalm, Algo::Lpalm];

    /// CLI name.
    pub fn name(self) -> &'static str {
        match self {
            Algo::Acg => "acg",
            Algo::Racg => "racg",
            Algo::GradRestart => "grad_restart",
            Algo::SpeedRestart => "speed_restart",
            Algo::Pgm => "pgm",
            Algo::Ialm => "ialm",
            Algo::Ifalm => "ifalm",
            Algo::Lpalm => "lpalm",
        }
    }

    /// True for the solvers that need linear constraints.
    pub fn is_constrained(self) -> bool {
        matches!(self, Algo::Ialm | Algo::Ifalm | Algo::Lpalm)
    }
}

impl fmt::Display for Algo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algo {
    type Err = OptError;
    fn from_str(s: &str) -> Result<Self> {
        Algo::ALL
            .into_iter()
            .find(|a| a.name() == s)
            .ok_or_else(|| OptError::Usage(format!("unknown algorithm {s:?}")))
    }
}

/// Prox weight of the restarted method on LASSO when none is given.
pub const DEFAULT_RACG_LAMBDA: f64 = 0.2;
/// Relative error of the restarted method when none is given.
pub const DEFAULT_RACG_SIGMA: f64 = 0.5;

/// Parameters and budgets of one run. `None` selects the solver's default.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RunParams {
    /// Target accuracy.
    pub eps: f64,
    /// Outer iterations; for single-loop solvers, total iterations.
    pub max_outer: usize,
    /// Inner iterations per outer iteration.
    pub inner_budget: usize,
    /// Penalty `ρ`.
    pub rho: Option<f64>,
    /// Relative error `σ`.
    pub sigma: Option<f64>,
    /// Tolerance decay `α`.
    pub alpha: Option<f64>,
    /// Initial tolerance scale `ε_0`.
    pub eps0: Option<f64>,
    /// Prox weight `λ` of the restarted method.
    pub lambda: Option<f64>,
    /// Dual radius estimate `R̂`.
    pub dual_radius: Option<f64>,
    /// Evaluate dual certificates along the run.
    pub verify: bool,
    /// Known optimal value for gap-based stopping.
    pub reference: Option<f64>,
}

impl RunParams {
    /// Defaults for accuracy `eps`: 10 000 outer and 100 000 inner iterations.
    pub fn new(eps: f64) -> Self {
        Self {
            eps,
            max_outer: 10_000,
            inner_budget: 100_000,
            rho: None,
            sigma: None,
            alpha: None,
            eps0: None,
            lambda: None,
            dual_radius: None,
            verify: false,
            reference: None,
        }
    }
}

/// Outcome of [`run_experiment`].
#[derive(Clone, Debug)]
pub struct ExperimentResult {
    /// Whether the solver's stopping rule fired.
    pub status: RunStatus,
    /// Logged rows.
    pub trace: RunTrace,
    /// Final iterate.
    pub x: Vector,
    /// Final multiplier (constrained solvers).
    pub lambda: Option<Vector>,
    /// Final certificate (constrained solvers).
    pub certificate: Option<KktCertificate>,
    /// Whether every dual certificate check passed (verify mode).
    pub certificates_ok: Option<bool>,
}

/// Runs `algo` on `problem` from the generator's start point.
pub fn run_experiment(problem: &ProblemInstance, algo: Algo, params: &RunParams) -> Result<ExperimentResult> {
    match (problem, algo.is_constrained()) {
        (ProblemInstance::Lasso(inst), false) => {
            let cp = inst.problem()?;
            let (f, h) = (cp.f(), cp.h());
            let x0 = inst.start();
            let l_f = f.lipschitz();
            let stop = GapStop { reference: params.reference, eps: params.eps };
            let out = match algo {
                Algo::Acg => plain_acg_run(f, h, &x0, l_f, stop, params.max_outer)?,
                Algo::GradRestart => gradient_restart_run(f, h, &x0, l_f, stop, params.max_outer)?,
                Algo::SpeedRestart => speed_restart_run(f, h, &x0, l_f, DEFAULT_K_MIN, stop, params.max_outer)?,
                Algo::Pgm => run_pgm(f, h, &x0, 1.0 / l_f, stop, params.max_outer)?,
                Algo::Racg => {
                    let rp = RacgParams {
                        l_f,
                        mu_f: 0.0,
                        lambda: params.lambda.unwrap_or(DEFAULT_RACG_LAMBDA.max(1.0 / l_f)),
                        sigma: params.sigma.unwrap_or(DEFAULT_RACG_SIGMA),
                        inner_budget: params.inner_budget,
                    };
                    run_restarted_acg(f, h, &x0, &rp, stop, params.max_outer)?
                }
                _ => unreachable!("constrained solvers are matched below"),
            };
            Ok(ExperimentResult {
                status: out.status,
                trace: out.trace,
                x: out.x,
                lambda: None,
                certificate: None,
                certificates_ok: None,
            })
        }
        (ProblemInstance::Lcqp(inst), true) => {
            let cp = inst.problem()?;
            let x0 = inst.start();
            let (run, certificates_ok) = match algo {
                Algo::Ialm => {
                    let base = IalmConfig::experiment_defaults(params.eps);
                    let config = IalmConfig {
                        rho: params.rho.unwrap_or(base.rho),
                        sigma: params.sigma.unwrap_or(base.sigma),
                        alpha: params.alpha.unwrap_or(base.alpha),
                        eps0: params.eps0.unwrap_or(base.eps0),
                        max_outer: params.max_outer,
                        inner_budget: params.inner_budget,
                        verify: params.verify,
                        ..base
                    };
                    let out = run_ialm(&cp, &x0, &config, params.reference)?;
                    let ok = params.verify.then(|| out.dual_checks.iter().all(|c| c.holds));
                    (out, ok)
                }
                Algo::Ifalm => {
                    let base = FalmSettings::experiment(&cp, params.eps);
                    let rho = params.rho.unwrap_or(base.rho);
                    let settings = FalmSettings {
                        rho,
                        eps0: params.eps0.unwrap_or(if params.rho.is_some() { 1.0 / rho } else { base.eps0 }),
                        sigma: params.sigma.unwrap_or(base.sigma),
                        requested_alpha: params.alpha.unwrap_or(base.requested_alpha),
                        dual_radius: params.dual_radius.unwrap_or(base.dual_radius),
                        ..base
                    };
                    let config = FalmConfig {
                        max_outer: params.max_outer,
                        inner_budget: params.inner_budget,
                        verify: params.verify,
                        ..FalmConfig::from_settings(&cp, &settings)?
                    };
                    let out = run_ifalm(&cp, &x0, &config, params.reference)?;
                    let ok = params.verify.then(|| out.dual_checks.iter().all(|c| c.holds));
                    (out.run, ok)
                }
                Algo::Lpalm => {
                    let rho = params.rho.unwrap_or_else(|| lpalm_default_rho(&cp));
                    (run_lpalm(&cp, &x0, rho, params.eps, params.max_outer, params.reference)?, None)
                }
                _ => unreachable!("unconstrained solvers are matched above"),
            };
            Ok(ExperimentResult {
                status: run.status,
                trace: run.trace,
                x: run.x,
                lambda: Some(run.lambda),
                certificate: run.certificate,
                certificates_ok,
            })
        }
        (ProblemInstance::Lasso(_), true) => {
            Err(OptError::Usage(format!("{algo} needs a linearly constrained problem (LCQP)")))
        }
        (ProblemInstance::Lcqp(_), false) => {
            Err(OptError::Usage(format!("{algo} solves unconstrained problems; LCQP files need ialm, ifalm, or lpalm")))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bench::generators::{gen_lasso, gen_lcqp};

    #[test]
    fn names_round_trip() {
        for a in Algo::ALL {
            assert_eq!(a.name().parse::<Algo>().unwrap(), a);
        }
        assert!("fista".parse::<Algo>().is_err());
    }

    #[test]
    fn incompatible_pairs_are_usage_errors() {
        let lasso = ProblemInstance::Lasso(gen_lasso(6, 3, 0.5, 0.5, 1).unwrap());
        let lcqp = ProblemInstance::Lcqp(gen_lcqp(6, 3, 2, 0.5, 1).unwrap());
        let p = RunParams::new(1e-3);
        assert!(matches!(run_experiment(&lasso, Algo::Ialm, &p), Err(OptError::Usage(_))));
        assert!(matches!(run_experiment(&lcqp, Algo::Acg, &p), Err(OptError::Usage(_))));
    }

    #[test]
    fn empty_budget_gives_single_row() {
        let lasso = ProblemInstance::Lasso(gen_lasso(6, 3, 0.5, 0.5, 1).unwrap());
        let lcqp = ProblemInstance::Lcqp(gen_lcqp(6, 3, 2, 0.5, 1).unwrap());
        let p = RunParams { max_outer: 0, ..RunParams::new(1e-3) };
        for a in Algo::ALL {
            let prob = if a.is_constrained() { &lcqp } else { &lasso };
            let r = run_experiment(prob, a, &p).unwrap();
            assert_eq!(r.trace.rows.len(), 1, "{a}");
            assert_eq!(r.status, RunStatus::BudgetExhausted, "{a}");
        }
    }
}
