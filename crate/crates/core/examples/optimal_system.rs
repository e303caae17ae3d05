//! Classify algebra elements into optimal-system representatives and report
//! how closely the claimed group element maps each one onto it.
//!
//! `cargo run --example optimal_system`

use kpbbm::expr::{fmt_rational, rat, Rational};
use kpbbm::liealg::classify;

fn main() {
    let elements: [[Rational; 4]; 5] = [
        [rat(1, 1), rat(5, 1), rat(-3, 1), rat(2, 1)],
        [rat(0, 1), rat(1, 1), rat(1, 1), rat(1, 1)],
        [rat(0, 1), rat(0, 1), rat(1, 1), rat(1, 1)],
        [rat(0, 1), rat(-2, 1), rat(0, 1), rat(0, 1)],
        // the sign of a4/|a2| is invariant here, so no listed representative is reached
        [rat(0, 1), rat(1, 1), rat(1, 1), rat(-1, 1)],
    ];
    for a in &elements {
        let r = classify(a).expect("nonzero element");
        let a: Vec<String> = a.iter().map(fmt_rational).collect();
        println!(
            "({:>12}) → {:<18} case {:<10} residual {:.2e}",
            a.join(","),
            r.branch_representative,
            r.case,
            r.orbit_residual
        );
    }
}
