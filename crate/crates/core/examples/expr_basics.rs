//! Build, simplify, differentiate and zero-test symbolic expressions.
//!
//! `cargo run --example expr_basics`

use kpbbm::expr::{differentiate, expand, is_identically_zero, parse, zero_test, Expr, ZeroTestConfig};

fn main() {
    let x = Expr::sym("x");
    let e = (&x + &Expr::int(1)).powi(3);
    println!("e            = {e}");
    println!("expand(e)    = {}", expand(&e));
    println!("de/dx        = {}", expand(&differentiate(&e, "x")));

    let parsed = parse("(+ (pow (sech x) 2) (pow (tanh x) 2))").expect("valid prefix syntax");
    println!("parsed       = {parsed}  (prefix: {})", parsed.to_prefix());
    let identity = &parsed - &Expr::int(1);
    println!("sech² + tanh² − 1 ≡ 0 ? {}", is_identically_zero(&identity));

    let not_zero = parse("(+ (tanh x) (* -1 x))").unwrap();
    let verdict = zero_test(&not_zero, &ZeroTestConfig::default());
    println!("tanh x − x: {}", serde_json::to_string(&verdict).unwrap());
}
