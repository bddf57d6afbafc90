//! Fast inexact ALM against the plain inexact ALM and linearized proximal ALM.

use ippkit::alm::{IalmConfig, lpalm_default_rho, run_ialm, run_lpalm};
use ippkit::bench::generators::gen_lcqp;
use ippkit::falm::{FalmConfig, run_ifalm};
use ippkit::trace::RunTrace;

fn summary(name: &str, trace: &RunTrace) {
    let last = trace.last().expect("trace starts with the initial row");
    println!(
        "{name:7} outer {:5}  prox {:6}  objective {:.8}  |Ax-b| {:.2e}  {:.2}s",
        last.outer_iter, last.prox_evals, last.objective, last.feasibility, last.wall_time_s
    );
}

fn main() -> ippkit::Result<()> {
    let eps = 1e-3;
    let inst = gen_lcqp(200, 100, 100, 0.1, 1)?;
    let p = inst.problem()?;
    let x0 = inst.start();

    let config = FalmConfig::experiment_defaults(&p, eps)?;
    println!("rho = {:.4e}, alpha = {}, gamma_d = {:.3e}", config.rho, config.alpha, config.gamma_d);
    let falm = run_ifalm(&p, &x0, &config, None)?;
    summary("I-FALM", &falm.run.trace);
    let ialm = run_ialm(&p, &x0, &IalmConfig::experiment_defaults(eps), None)?;
    summary("I-ALM", &ialm.trace);
    let lpalm = run_lpalm(&p, &x0, lpalm_default_rho(&p), eps, 1_000_000, None)?;
    summary("LPALM", &lpalm.trace);
    Ok(())
}
