//! Proximal gradient steps viewed as inexact proximal point steps: each step's
//! error certificate and the running bounds on gap and step length.

use ippkit::bench::generators::gen_lasso;
use ippkit::frameworks::{MonitorParams, MonitorSample, lora_certificate_sides, pgm_run_as_lora, step_length, theorem_monitors};
use ippkit::linalg::dist;
use ippkit::restarted_acg::{GapStop, gradient_restart_run};

fn main() -> ippkit::Result<()> {
    let inst = gen_lasso(120, 60, 0.3, 0.5, 11)?;
    let p = inst.problem()?;
    let l_f = p.f().lipschitz();
    let x0 = inst.start();
    let best = gradient_restart_run(p.f(), p.h(), &x0, l_f, GapStop { reference: None, eps: 1e-12 }, 100_000)?;

    let eta = 0.5 / l_f;
    let records = pgm_run_as_lora(&p, &x0, eta, 40)?;
    let phi = |x: &ippkit::linalg::Vector| p.value(x);
    let mut samples = Vec::new();
    for (k, rec) in records.iter().enumerate() {
        let (lhs, rhs) = lora_certificate_sides(rec, &phi);
        let phi_y = p.value(&rec.y).finite().unwrap_or(f64::INFINITY);
        samples.push(MonitorSample { phi_y, step: step_length(&rec.y, &rec.x_prev), big_b: 0.0 });
        if k % 5 == 0 {
            println!("step {k:2}: certificate {lhs:.4e} <= {rhs:.4e}");
        }
    }
    let r0 = dist(&x0, &best.x);
    let params = MonitorParams::Lora { lambda: eta, sigma: eta * l_f, delta_bar: 0.0 };
    for row in theorem_monitors(&samples, r0, best.objective, params, 1e-12)?.iter().step_by(5) {
        println!(
            "k = {:2}: min gap {:.3e} <= {:.3e} ({}), min step {:.3e} <= {:.3e} ({})",
            row.iter, row.gap, row.gap_bound, row.gap_ok, row.step, row.step_bound, row.step_ok
        );
    }
    Ok(())
}
