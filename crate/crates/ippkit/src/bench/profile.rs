//! Performance profiles: for each solver, the fraction of problems solved
//! within a factor `τ` of the best solver on that problem.

use std::collections::BTreeMap;
use std::path::Path;

use super::io::{read_status, read_trace};
use crate::error::{OptError, Result};
use crate::trace::RunStatus;

/// Profile curves over the breakpoints of the ratio distribution.
#[derive(Clone, Debug, PartialEq)]
pub struct Profile {
    /// Performance ratios `t_ps / min_s t_ps` (`+∞` for failures), one row per kept problem.
    pub ratios: Vec<Vec<f64>>,
    /// Indices of input problems excluded because every solver failed.
    pub excluded: Vec<usize>,
    /// Sorted distinct finite ratios (the curve breakpoints).
    pub taus: Vec<f64>,
    /// `curves[s][i]` is the fraction of problems with ratio `≤ taus[i]` for solver `s`.
    pub curves: Vec<Vec<f64>>,
}

impl Profile {
    /// Fraction of kept problems that solver `s` solves within factor `tau`.
    pub fn fraction_at(&self, s: usize, tau: f64) -> f64 {
        if self.ratios.is_empty() {
            return 0.0;
        }
        let hits = self.ratios.iter().filter(|row| row[s] <= tau).count();
        hits as f64 / self.ratios.len() as f64
    }

    /// True when every curve is nondecreasing.
    pub fn is_monotone(&self) -> bool {
        self.curves.iter().all(|c| c.windows(2).all(|w| w[0] <= w[1]))
    }
}

/// Builds the profile from a `problems × solvers` table of costs and failure flags.
///
/// Problems on which every solver failed are excluded and reported in
/// [`Profile::excluded`].
pub fn performance_profile(times: &[Vec<f64>], failed: &[Vec<bool>]) -> Result<Profile> {
    if times.len() != failed.len() {
        return Err(OptError::Dimension("times and failure flags differ in length".into()));
    }
    let solvers = times.first().map_or(0, Vec::len);
    let mut ratios = Vec::new();
    let mut excluded = Vec::new();
    for (p, (row, fails)) in times.iter().zip(failed).enumerate() {
        if row.len() != solvers || fails.len() != solvers {
            return Err(OptError::Dimension(format!("row {p} does not have {solvers} entries")));
        }
        if row.iter().zip(fails).any(|(t, f)| !f && !(*t > 0.0 && t.is_finite())) {
            return Err(OptError::Parameter(format!("row {p} has a nonpositive or non-finite cost")));
        }
        let best = row.iter().zip(fails).filter(|(_, f)| !**f).map(|(t, _)| *t).fold(f64::INFINITY, f64::min);
        if best.is_infinite() {
            excluded.push(p);
            continue;
        }
        ratios.push(row.iter().zip(fails).map(|(t, f)| if *f { f64::INFINITY } else { t / best }).collect::<Vec<_>>());
    }
    let mut taus: Vec<f64> = ratios.iter().flatten().copied().filter(|r| r.is_finite()).collect();
    taus.sort_by(f64::total_cmp);
    taus.dedup();
    let mut profile = Profile { ratios, excluded, taus, curves: Vec::new() };
    profile.curves =
        (0..solvers).map(|s| profile.taus.iter().map(|&t| profile.fraction_at(s, t)).collect()).collect();
    Ok(profile)
}

/// Cost measured from a trace.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Metric {
    /// Final wall time in seconds.
    Time,
    /// Final proximal evaluation count.
    Prox,
}

/// Profile built from a directory of `<problem>__<solver>.csv` traces.
#[derive(Clone, Debug, PartialEq)]
pub struct DirectoryProfile {
    /// Problem names (rows of the table).
    pub problems: Vec<String>,
    /// Solver names (columns of the table).
    pub solvers: Vec<String>,
    /// The profile.
    pub profile: Profile,
}

/// Reads every `<problem>__<solver>.csv` in `dir` and profiles the chosen metric.
///
/// A run counts as failed when its status file says the budget was exhausted
/// or when the pair is missing.
pub fn profile_directory(dir: &Path, metric: Metric) -> Result<DirectoryProfile> {
    let mut table: BTreeMap<String, BTreeMap<String, Option<f64>>> = BTreeMap::new();
    let mut solver_names = std::collections::BTreeSet::new();
    for entry in std::fs::read_dir(dir)? {
        let path = entry?.path();
        if path.extension().and_then(|e| e.to_str()) != Some("csv") {
            continue;
        }
        let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or_default();
        let Some((problem, solver)) = stem.rsplit_once("__") else { continue };
        let trace = read_trace(std::fs::File::open(&path)?)?;
        let last = trace.last().ok_or_else(|| OptError::Usage(format!("empty trace {}", path.display())))?;
        let cost = match metric {
            Metric::Time => last.wall_time_s,
            Metric::Prox => last.prox_evals as f64,
        };
        let ok = read_status(&path)? == RunStatus::Converged && cost > 0.0;
        table.entry(problem.to_string()).or_default().insert(solver.to_string(), ok.then_some(cost));
        solver_names.insert(solver.to_string());
    }
    let solvers: Vec<String> = solver_names.into_iter().collect();
    let mut times = Vec::new();
    let mut failed = Vec::new();
    for row in table.values() {
        let cells: Vec<Option<f64>> = solvers.iter().map(|s| row.get(s).copied().flatten()).collect();
        times.push(cells.iter().map(|c| c.unwrap_or(1.0)).collect());
        failed.push(cells.iter().map(Option::is_none).collect());
    }
    let profile = performance_profile(&times, &failed)?;
    Ok(DirectoryProfile { problems: table.into_keys().collect(), solvers, profile })
}

/// Writes `tau,<solver>...` rows, one per breakpoint.
pub fn write_profile<W: std::io::Write>(writer: W, solvers: &[String], profile: &Profile) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    let mut header = vec!["tau".to_string()];
    header.extend(solvers.iter().cloned());
    w.write_record(&header)?;
    for (i, tau) in profile.taus.iter().enumerate() {
        let mut rec = vec![tau.to_string()];
        rec.extend(profile.curves.iter().map(|c| c[i].to_string()));
        w.write_record(&rec)?;
    }
    w.flush()?;
    Ok(())
}
