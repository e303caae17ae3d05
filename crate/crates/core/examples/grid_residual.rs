//! Evaluate the equation with finite differences on a grid and observe the
//! second-order decay of the discrete residual.
//!
//! `cargo run --release --example grid_residual`

use kpbbm::expr::rint;
use kpbbm::kpbbm::Params;
use kpbbm::numerics::{convergence_order, ResidualGrid};
use kpbbm::solutions::tanh_solve;

fn main() {
    let s = tanh_solve(&rint(1), &Params::ints(-1, 1, 1)).unwrap().spec;
    for h in [0.1, 0.05] {
        let c = convergence_order(&s.expression, &s.params, &ResidualGrid::default(), h).unwrap();
        println!(
            "h = {h}: max |R| {:.3e}, h/2: {:.3e}, observed order {:.3}",
            c.coarse.max_abs, c.fine.max_abs, c.order
        );
    }
}
