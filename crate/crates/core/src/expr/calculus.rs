//! Differentiation and substitution.

use std::collections::HashMap;

use super::{Expr, Node};

/// Partial derivative of `e` with respect to the symbol `v`.
///
/// Chain rule through the elementary functions with `tanh' = 1 − tanh²`,
/// `sech' = −sech·tanh`, `cosh' = tanh·cosh`, `sqrt' = 1/(2 sqrt)`.
pub fn differentiate(e: &Expr, v: &str) -> Expr {
    if !e.contains_symbol(v) {
        return Expr::zero();
    }
    match e.node() {
        Node::Num(_) => Expr::zero(),
        Node::Sym(s) => {
            if &**s == v {
                Expr::one()
            } else {
                Expr::zero()
            }
        }
        Node::Add(ts) => Expr::add(ts.iter().map(|t| differentiate(t, v)).collect()),
        Node::Mul(fs) => {
            let mut terms = Vec::new();
            for (i, f) in fs.iter().enumerate() {
                let df = differentiate(f, v);
                if df.is_zero() {
                    continue;
                }
                let mut prod: Vec<Expr> = Vec::with_capacity(fs.len());
                for (j, g) in fs.iter().enumerate() {
                    if i == j {
                        prod.push(df.clone());
                    } else {
                        prod.push(g.clone());
                    }
                }
                terms.push(Expr::mul(prod));
            }
            Expr::add(terms)
        }
        Node::Pow(b, n) => {
            let db = differentiate(b, v);
            Expr::mul(vec![Expr::int(*n), Expr::pow(b.clone(), n - 1), db])
        }
        Node::Exp(a) => Expr::mul(vec![e.clone(), differentiate(a, v)]),
        Node::Tanh(a) => {
            let t2 = Expr::pow(e.clone(), 2);
            Expr::mul(vec![Expr::one() - t2, differentiate(a, v)])
        }
        Node::Sech(a) => Expr::mul(vec![
            Expr::int(-1),
            e.clone(),
            Expr::tanh(a.clone()),
            differentiate(a, v),
        ]),
        Node::Cosh(a) => Expr::mul(vec![e.clone(), Expr::tanh(a.clone()), differentiate(a, v)]),
        Node::Sqrt(a) => Expr::mul(vec![
            Expr::frac(1, 2),
            Expr::pow(e.clone(), -1),
            differentiate(a, v),
        ]),
    }
}

/// Simultaneous substitution of symbols by expressions.
pub fn substitute(e: &Expr, bindings: &HashMap<String, Expr>) -> Expr {
    if bindings.is_empty() {
        return e.clone();
    }
    subst_rec(e, &|name| bindings.get(name).cloned())
}

/// Substitute a single symbol.
pub fn substitute_one(e: &Expr, name: &str, value: &Expr) -> Expr {
    subst_rec(e, &|n| if n == name { Some(value.clone()) } else { None })
}

fn subst_rec(e: &Expr, look: &dyn Fn(&str) -> Option<Expr>) -> Expr {
    match e.node() {
        Node::Num(_) => e.clone(),
        Node::Sym(s) => look(s).unwrap_or_else(|| e.clone()),
        Node::Add(ts) => Expr::add(ts.iter().map(|t| subst_rec(t, look)).collect()),
        Node::Mul(fs) => Expr::mul(fs.iter().map(|t| subst_rec(t, look)).collect()),
        Node::Pow(b, n) => Expr::pow(subst_rec(b, look), *n),
        Node::Exp(a) => Expr::exp(subst_rec(a, look)),
        Node::Tanh(a) => Expr::tanh(subst_rec(a, look)),
        Node::Sech(a) => Expr::sech(subst_rec(a, look)),
        Node::Cosh(a) => Expr::cosh(subst_rec(a, look)),
        Node::Sqrt(a) => Expr::sqrt(subst_rec(a, look)),
    }
}
