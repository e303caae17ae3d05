//! Solve the determining equations for point symmetries with a polynomial
//! ansatz and verify each generator.
//!
//! `cargo run --example symmetries`

use kpbbm::expr::{zero_test, ZeroTestConfig};
use kpbbm::kpbbm::Params;
use kpbbm::symmetry::{solve_determining, symmetry_condition, SymmetryAnsatz};

fn main() {
    let p = Params::ints(1, 1, 1);
    let basis = solve_determining(&p, &SymmetryAnsatz::new(1).unwrap()).expect("solvable");
    println!("{} generators:", basis.len());
    for (i, v) in basis.iter().enumerate() {
        let verdict = zero_test(&symmetry_condition(v, &p).unwrap(), &ZeroTestConfig::default());
        println!("  V{} = {v}   invariance: {}", i + 1, if verdict.is_zero() { "verified" } else { "FAILS" });
    }
}
