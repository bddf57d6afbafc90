//! Restarted ACG on a random LASSO instance, with per-restart inner loop lengths.

use ippkit::bench::generators::gen_lasso;
use ippkit::restarted_acg::{
    GapStop, RacgParams, gradient_restart_run, inner_iteration_bound, run_restarted_acg,
};

fn main() -> ippkit::Result<()> {
    let inst = gen_lasso(400, 200, 0.2, 0.5, 7)?;
    let p = inst.problem()?;
    let l_f = p.f().lipschitz();
    let x0 = inst.start();

    let reference = gradient_restart_run(p.f(), p.h(), &x0, l_f, GapStop { reference: None, eps: 1e-12 }, 200_000)?;
    println!("reference objective {:.12}", reference.objective);

    let params = RacgParams { l_f, mu_f: 0.0, lambda: 0.2f64.max(1.0 / l_f), sigma: 0.5, inner_budget: 100_000 };
    let stop = GapStop { reference: Some(reference.objective), eps: 1e-8 };
    let out = run_restarted_acg(p.f(), p.h(), &x0, &params, stop, 10_000)?;
    let bound = inner_iteration_bound(params.lambda, l_f, 0.0, params.sigma);
    for row in out.trace.rows.iter().skip(1) {
        println!(
            "restart {:3}  inner {:3} (bound {bound})  prox {:5}  gap {:.3e}",
            row.outer_iter, row.inner_iters, row.prox_evals, row.gap_estimate
        );
    }
    println!("{:?}, objective {:.12}", out.status, out.objective);
    Ok(())
}
