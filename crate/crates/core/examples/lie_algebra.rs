//! Commutator table, adjoint representation, derived series and invariants
//! of the four-dimensional symmetry algebra.
//!
//! `cargo run --example lie_algebra`

use kpbbm::expr::{rat, Expr};
use kpbbm::liealg::{adjoint_matrix, derived_series, global_adjoint, invariants, reference_algebra, BASIS_NAMES};

fn main() {
    let sc = reference_algebra();
    println!("commutator table [Gi, Gj]:");
    for row in sc.table(&BASIS_NAMES) {
        println!("  {}", row.iter().map(|s| format!("{s:>6}")).collect::<String>());
    }
    let eps = Expr::sym("eps");
    for i in 1..=4 {
        println!("A{i}(eps) = {:?}", adjoint_matrix(&sc, i, &eps).unwrap().rows_text());
    }
    println!("global adjoint = {:?}", global_adjoint(&sc).unwrap().rows_text());
    let (dims, solvable) = derived_series(&sc);
    println!("derived series {dims:?} → {}", if solvable { "solvable" } else { "not solvable" });
    let show = |v: &[Expr]| v.iter().map(|e| e.to_string()).collect::<Vec<_>>();
    println!("invariants: {:?}", show(&invariants(&sc, None, 4).basic));
    println!("invariants with a1 = 0: {:?}", show(&invariants(&sc, Some(rat(0, 1)), 4).basic));
}
