//! Prox evaluations needed by plain, gradient-restart, speed-restart and restarted ACG.

use ippkit::bench::generators::gen_lasso;
use ippkit::restarted_acg::{
    DEFAULT_K_MIN, GapStop, RacgParams, gradient_restart_run, plain_acg_run, run_restarted_acg, speed_restart_run,
};
use ippkit::trace::SolverOutput;

fn prox_used(out: &SolverOutput) -> String {
    let prox = out.trace.last().map_or(0, |r| r.prox_evals);
    format!("{prox:6} ({:?})", out.status)
}

fn main() -> ippkit::Result<()> {
    let budget = 200_000;
    for seed in 0..3 {
        let inst = gen_lasso(300, 150, 0.2, 0.5, seed)?;
        let p = inst.problem()?;
        let (f, h, l_f, x0) = (p.f(), p.h(), p.f().lipschitz(), inst.start());
        let reference = gradient_restart_run(f, h, &x0, l_f, GapStop { reference: None, eps: 1e-12 }, budget)?.objective;
        println!("seed {seed}: reference {reference:.12}");
        for eps in [1e-4, 1e-6, 1e-8] {
            let stop = GapStop { reference: Some(reference), eps };
            let params = RacgParams { l_f, mu_f: 0.0, lambda: 0.2f64.max(1.0 / l_f), sigma: 0.5, inner_budget: budget };
            println!(
                "  gap {eps:.0e}: plain {}  gradient {}  speed {}  restarted {}",
                prox_used(&plain_acg_run(f, h, &x0, l_f, stop, budget)?),
                prox_used(&gradient_restart_run(f, h, &x0, l_f, stop, budget)?),
                prox_used(&speed_restart_run(f, h, &x0, l_f, DEFAULT_K_MIN, stop, budget)?),
                prox_used(&run_restarted_acg(f, h, &x0, &params, stop, budget)?),
            );
        }
    }
    Ok(())
}
