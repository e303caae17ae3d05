//! The sech² reduction families, checked symbolically; where a quoted closed
//! form differs from the verified wave both are shown.
//!
//! `cargo run --example closed_forms`

use kpbbm::expr::{rint, ZeroTestConfig};
use kpbbm::kpbbm::Params;
use kpbbm::solutions::{build_sr_solution, diagnostics, Family};

fn main() {
    let cfg = ZeroTestConfig::default();
    for (f, lambda, p) in [
        (Family::Sr1, 3, Params::ints(1, 1, 2)),
        (Family::Sr2, 2, Params::ints(1, 1, 1)),
        (Family::Sr3, 2, Params::ints(1, 1, 1)),
    ] {
        let s = build_sr_solution(f, &rint(lambda), &p).expect("valid parameters");
        let d = diagnostics(&s).unwrap();
        println!("{f} (λ = {lambda}): u = {}", s.expression);
        println!("    amplitude {}, velocity {:.4}, residual zero: {}", d.amplitude, d.velocity, s.verdict(&cfg).is_zero());
        if let Some(q) = &s.discrepancy {
            if let Some(e) = &q.printed_expression {
                println!("    quoted form {e} does not solve the equation");
            }
        }
    }
}
