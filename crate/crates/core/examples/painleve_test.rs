//! Singular-manifold expansion: leading order, resonances and the
//! compatibility conditions at the positive resonances.
//!
//! `cargo run --example painleve_test`

use kpbbm::expr::ZeroTestConfig;
use kpbbm::kpbbm::Params;
use kpbbm::painleve::{analyze, Compatibility};

fn main() {
    let report = analyze(&Params::ints(1, 1, 1), &ZeroTestConfig::default()).expect("analysis");
    println!("leading order: u ~ {} φ^{}", report.u0, report.alpha);
    println!("resonances: {:?}", report.resonances);
    for (j, c) in &report.compatibility {
        match c {
            Compatibility::Satisfied { .. } => println!("  j = {j}: satisfied"),
            Compatibility::Violated { value, witness } => {
                println!("  j = {j}: violated (value {value:.4} at {witness:?})")
            }
        }
    }
    println!("passes the test: {}", report.passes);
}
