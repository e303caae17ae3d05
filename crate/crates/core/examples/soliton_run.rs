//! Propagate the tanh soliton with the pseudo-spectral integrator and compare
//! with the exact traveling wave.
//!
//! `cargo run --release --example soliton_run`

use kpbbm::expr::rint;
use kpbbm::kpbbm::Params;
use kpbbm::numerics::{soliton_run, SolitonRunConfig};
use kpbbm::solutions::tanh_solve;

fn main() {
    let s = tanh_solve(&rint(1), &Params::ints(-1, 1, 1)).unwrap().spec;
    let cfg = SolitonRunConfig { t_end: 4.0, ..Default::default() };
    let run = soliton_run(&s, &cfg).expect("stable run");
    let m = &run.manifest;
    println!("{}×{} grid, dt {}, {:?}, {} steps", m.nx, m.ny, m.dt, m.scheme, m.steps);
    println!("max |u − exact| = {:.3e}", m.max_error);
    println!("speed {:.5} (exact {:.5}, relative error {:.2e})", m.measured_speed, m.expected_speed, m.speed_relative_error);
}
