//! Runs three constrained solvers on a few random QPs, writes their traces, and
//! profiles them by prox evaluations.

use std::fs::File;

use ippkit::bench::generators::gen_lcqp;
use ippkit::bench::io::{ProblemInstance, write_status, write_trace};
use ippkit::bench::profile::{Metric, profile_directory, write_profile};
use ippkit::bench::runner::{Algo, RunParams, run_experiment};

fn main() -> ippkit::Result<()> {
    let dir = tempfile::tempdir()?;
    let algos = [Algo::Ialm, Algo::Ifalm, Algo::Lpalm];
    for seed in 0..4 {
        let problem = ProblemInstance::Lcqp(gen_lcqp(60, 30, 30, 0.2, seed)?);
        for algo in algos {
            let result = run_experiment(&problem, algo, &RunParams::new(1e-3))?;
            let path = dir.path().join(format!("lcqp{seed}__{algo}.csv"));
            write_trace(File::create(&path)?, &result.trace)?;
            write_status(&path, result.status)?;
            let prox = result.trace.last().map_or(0, |r| r.prox_evals);
            println!("lcqp{seed} {algo:6} {:?} after {prox} prox evaluations", result.status);
        }
    }
    let table = profile_directory(dir.path(), Metric::Prox)?;
    for s in 0..table.solvers.len() {
        println!("{}: best on {:.0}% of problems", table.solvers[s], 100.0 * table.profile.fraction_at(s, 1.0));
    }
    write_profile(std::io::stdout().lock(), &table.solvers, &table.profile)
}
