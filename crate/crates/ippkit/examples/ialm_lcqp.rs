//! Inexact ALM on a random linearly constrained QP, with its primal-dual certificate.

use ippkit::alm::{IalmConfig, run_ialm};
use ippkit::bench::generators::gen_lcqp;
use ippkit::linalg::norm;
use ippkit::problem::primal_gap_bound;

fn main() -> ippkit::Result<()> {
    let eps = 1e-4;
    let inst = gen_lcqp(100, 50, 50, 0.1, 3)?;
    let p = inst.problem()?;
    let out = run_ialm(&p, &inst.start(), &IalmConfig::experiment_defaults(eps), None)?;
    for row in &out.trace.rows {
        println!(
            "outer {:3}  inner {:5}  objective {:.8}  |Ax-b| {:.3e}  |lambda| {:.4}",
            row.outer_iter, row.inner_iters, row.objective, row.feasibility, row.dual_norm
        );
    }
    let cert = out.certificate.expect("at least one outer step ran");
    println!("{:?}: |v| = {:.3e}, |Ax-b| = {:.3e}", out.status, cert.v_norm, cert.feas);
    let bound = primal_gap_bound(eps, norm(&cert.lambda), p.diameter(), None);
    println!("objective {:.10}, at most {:.3e} above the optimum", p.objective(&cert.x).finite().unwrap_or(f64::NAN), bound.upper);
    Ok(())
}
