//! Monotone ACG on a box-constrained strongly convex quadratic.

use ippkit::acg::{Termination, run_acg};
use ippkit::linalg::{Matrix, Vector};
use ippkit::problem::{Quadratic, SmoothOracle};
use ippkit::prox::ProxKind;

fn main() -> ippkit::Result<()> {
    let n = 50;
    let q = Matrix::from_shape_fn((n, n), |(i, j)| match i.abs_diff(j) {
        0 => 2.0 + i as f64 / n as f64,
        1 => -0.9,
        _ => 0.0,
    });
    let c = Vector::from_shape_fn(n, |i| if i % 3 == 0 { -4.0 } else { 1.0 });
    let f = Quadratic::new(q, c)?;
    let h = ProxKind::uniform_box(n, -1.0, 1.0)?;
    let (l, mu) = (f.lipschitz() - f.strong_convexity(), f.strong_convexity());
    println!("L = {:.4}, mu = {:.4}", f.lipschitz(), mu);

    let run = run_acg(&f, &h, &Vector::zeros(n), l, mu, Termination::GradMapTol { eps: 1e-8, max_iters: 10_000 })?;
    for row in run.trace.iter().filter(|r| r.iter % 10 == 0) {
        println!("iter {:4}  A = {:10.3e}  psi(y) = {:.12}  |G| = {:.3e}", row.iter, row.big_a, row.psi_y, row.grad_map_norm);
    }
    let last = run.trace.last().expect("trace starts with the initial row");
    println!("{:?} after {} iterations, psi(y) = {:.12}", run.status, last.iter, last.psi_y);
    Ok(())
}
