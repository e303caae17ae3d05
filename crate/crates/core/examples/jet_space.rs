//! Total derivatives in the jet space of `u(x, y, t)` and the equation as a
//! jet expression.
//!
//! `cargo run --example jet_space`

use kpbbm::expr::{expand, Expr};
use kpbbm::jet::{total_derivative, u, Dir};
use kpbbm::kpbbm::{residual, residual_jet, Params};

fn main() {
    let e = &u("") * &u("x");
    println!("D_x (u u_x) = {}", expand(&total_derivative(&e, Dir::X).unwrap()));
    println!("D_t (u_xx)  = {}", total_derivative(&u("xx"), Dir::T).unwrap());

    let p = Params::ints(1, 1, 1);
    println!("equation at a = b = k = 1: {} = 0", residual_jet(&p));

    // A constant state solves the equation trivially.
    let r = residual(&Expr::int(7), &p);
    println!("residual of u = 7: {}", expand(&r));
}
