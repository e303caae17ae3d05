//! The tanh method and the homogeneous-balance method, with the balance
//! orders that fix their ansätze.
//!
//! `cargo run --example constructive_solvers`

use kpbbm::expr::rint;
use kpbbm::kpbbm::Params;
use kpbbm::solutions::{balance_order, hb_solve, tanh_solve, BalanceKind};

fn main() {
    println!("balance orders: tanh {:?}, homogeneous balance {:?}", balance_order(BalanceKind::Tanh), balance_order(BalanceKind::Hb));

    let t = tanh_solve(&rint(1), &Params::ints(-1, 1, 1)).expect("solvable");
    println!("tanh: d0 = {}, d1 = {}, ω = {}", t.d0, t.d1, t.omega);
    println!("      u = {}", t.spec.expression);

    let hb = hb_solve(&rint(1), &rint(-1), &rint(0), &Params::ints(6, 1, 1)).expect("solvable");
    println!("homogeneous balance: β² = {}", hb.beta_squared);
    println!("      u+ = {}", hb.plus.expression);
    println!("      u- = {}", hb.minus.expression);
}
