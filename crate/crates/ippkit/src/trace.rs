//! Per-run trace rows shared by all solvers.

use std::time::Instant;

use crate::linalg::Vector;

/// Outcome of an iterative run.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RunStatus {
    /// The stopping criterion was met.
    Converged,
    /// The iteration or evaluation budget ran out first.
    BudgetExhausted,
}

/// Final iterate and log of an unconstrained solver run.
#[derive(Clone, Debug)]
pub struct SolverOutput {
    /// Final (best) iterate.
    pub x: Vector,
    /// Objective value at `x`.
    pub objective: f64,
    /// Whether the stopping rule fired.
    pub status: RunStatus,
    /// Logged rows.
    pub trace: RunTrace,
}

/// One logged row of a solver run.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TraceRow {
    /// Outer iteration (or restart) index.
    pub outer_iter: usize,
    /// Inner iterations spent since the previous row.
    pub inner_iters: usize,
    /// Cumulative proximal evaluations.
    pub prox_evals: usize,
    /// Cumulative smooth-oracle evaluations.
    pub grad_evals: usize,
    /// Seconds since the start of the run.
    pub wall_time_s: f64,
    /// Objective value at the logged iterate.
    pub objective: f64,
    /// Objective minus reference value, `NaN` when no reference is known.
    pub gap_estimate: f64,
    /// `‖Ax − b‖`, zero for unconstrained problems.
    pub feasibility: f64,
    /// Gradient-mapping norm at the logged iterate, `NaN` when not computed.
    pub grad_map_norm: f64,
    /// Norm of the multiplier, zero for unconstrained problems.
    pub dual_norm: f64,
}

/// Ordered rows of one run.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct RunTrace {
    /// Logged rows in chronological order.
    pub rows: Vec<TraceRow>,
}

impl RunTrace {
    /// Final row, if any.
    pub fn last(&self) -> Option<&TraceRow> {
        self.rows.last()
    }

    /// True when prox counts and wall times never decrease.
    pub fn is_monotone(&self) -> bool {
        self.rows
            .windows(2)
            .all(|w| w[0].prox_evals <= w[1].prox_evals && w[0].wall_time_s <= w[1].wall_time_s)
    }
}

/// Wall-clock reference for a run.
#[derive(Clone, Copy, Debug)]
pub struct Stopwatch(Instant);

impl Stopwatch {
    /// Starts timing now.
    pub fn start() -> Self {
        Stopwatch(Instant::now())
    }

    /// Seconds elapsed.
    pub fn seconds(&self) -> f64 {
        self.0.elapsed().as_secs_f64()
    }
}

pub(crate) fn gap(objective: f64, reference: Option<f64>) -> f64 {
    reference.map_or(f64::NAN, |r| objective - r)
}
