use super::{Expr, Node};

/// Fully distribute products over sums and positive integer powers of sums,
/// recursively (including inside function arguments).
pub fn expand(e: &Expr) -> Expr {
    match e.node() {
        Node::Num(_) | Node::Sym(_) => e.clone(),
        Node::Add(ts) => Expr::add(ts.iter().map(expand).collect()),
        Node::Mul(fs) => distribute(fs.iter().map(expand).collect()),
        Node::Pow(b, n) => {
            let b = expand(b);
            if *n > 0 && matches!(b.node(), Node::Add(_)) {
                distribute(vec![b; *n as usize])
            } else {
                Expr::pow(b, *n)
            }
        }
        Node::Exp(a) => Expr::exp(expand(a)),
        Node::Tanh(a) => Expr::tanh(expand(a)),
        Node::Sech(a) => Expr::sech(expand(a)),
        Node::Cosh(a) => Expr::cosh(expand(a)),
        Node::Sqrt(a) => Expr::sqrt(expand(a)),
    }
}

/// Canonical simplification: expansion into a sum of monomials over atoms.
/// Idempotent.
pub fn simplify(e: &Expr) -> Expr {
    expand(e)
}

pub(crate) fn terms_of(e: &Expr) -> Vec<Expr> {
    match e.node() {
        Node::Add(ts) => ts.clone(),
        _ if e.is_zero() => vec![],
        _ => vec![e.clone()],
    }
}

pub(crate) fn distribute(parts: Vec<Expr>) -> Expr {
    let mut acc: Vec<Expr> = vec![Expr::one()];
    for p in parts {
        let ps = terms_of(&p);
        if ps.is_empty() {
            return Expr::zero();
        }
        let mut next = Vec::with_capacity(acc.len() * ps.len());
        for a in &acc {
            for s in &ps {
                next.push(Expr::mul(vec![a.clone(), s.clone()]));
            }
        }
        // merge like terms early to keep the working set small
        acc = terms_of(&Expr::add(next));
        if acc.is_empty() {
            return Expr::zero();
        }
    }
    Expr::add(acc)
}
