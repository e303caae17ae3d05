//! Canonicalizing constructors.

use std::collections::BTreeMap;

use num_bigint::BigInt;

use num_traits::{One, Signed, Zero};

use super::{Expr, Node, Rational};

pub(super) fn split_coeff(e: &Expr) -> (Rational, Expr) {
    match e.node() {
        Node::Num(r) => (r.clone(), Expr::one()),
        Node::Mul(fs) => match fs[0].node() {
            Node::Num(c) => {
                let rest = if fs.len() == 2 {
                    fs[1].clone()
                } else {
                    Expr::from_node(Node::Mul(fs[1..].to_vec()))
                };
                (c.clone(), rest)
            }
            _ => (Rational::one(), e.clone()),
        },
        _ => (Rational::one(), e.clone()),
    }
}

fn make_term(c: Rational, rest: Expr) -> Expr {
    if rest.is_one() {
        return Expr::num(c);
    }
    if c.is_one() {
        return rest;
    }
    match rest.node() {
        Node::Mul(fs) => {
            let mut v = Vec::with_capacity(fs.len() + 1);
            v.push(Expr::num(c));
            v.extend(fs.iter().cloned());
            Expr::from_node(Node::Mul(v))
        }
        Node::Add(ts) => add(ts.iter().map(|t| {
            let (tc, tr) = split_coeff(t);
            make_term(tc * &c, tr)
        })
        .collect()),
        _ => Expr::from_node(Node::Mul(vec![Expr::num(c), rest])),
    }
}

pub(super) fn add(terms: Vec<Expr>) -> Expr {
    fn acc(t: &Expr, constant: &mut Rational, map: &mut BTreeMap<Expr, Rational>) {
        match t.node() {
            Node::Num(r) => *constant += r,
            Node::Add(v) => {
                for s in v {
                    acc(s, constant, map);
                }
            }
            _ => {
                let (c, rest) = split_coeff(t);
                *map.entry(rest).or_insert_with(Rational::zero) += c;
            }
        }
    }
    if terms.len() == 1 {
        return terms.into_iter().next().unwrap();
    }
    let mut constant = Rational::zero();
    let mut map = BTreeMap::new();
    for t in &terms {
        acc(t, &mut constant, &mut map);
    }
    let mut out = Vec::with_capacity(map.len() + 1);
    if !constant.is_zero() {
        out.push(Expr::num(constant));
    }
    for (rest, c) in map {
        if !c.is_zero() {
            out.push(make_term(c, rest));
        }
    }
    match out.len() {
        0 => Expr::zero(),
        1 => out.pop().unwrap(),
        _ => Expr::from_node(Node::Add(out)),
    }
}

fn base_key(e: &Expr) -> &Expr {
    match e.node() {
        Node::Pow(b, _) => b,
        _ => e,
    }
}

fn raw_pow(base: Expr, e: i64) -> Expr {
    if e == 1 {
        base
    } else {
        Expr::from_node(Node::Pow(base, e))
    }
}

pub(super) fn mul(factors: Vec<Expr>) -> Expr {
    fn acc(f: &Expr, coeff: &mut Rational, powers: &mut BTreeMap<Expr, i64>, exps: &mut Vec<Expr>) {
        match f.node() {
            Node::Num(r) => *coeff *= r,
            Node::Mul(v) => {
                for g in v {
                    acc(g, coeff, powers, exps);
                }
            }
            Node::Pow(b, e) => *powers.entry(b.clone()).or_insert(0) += e,
            Node::Exp(a) => exps.push(a.clone()),
            _ => *powers.entry(f.clone()).or_insert(0) += 1,
        }
    }
    if factors.len() == 1 {
        if let Node::Pow(b, _) = factors[0].node() {
            if !matches!(b.node(), Node::Sqrt(_) | Node::Sech(_) | Node::Cosh(_)) {
                return factors.into_iter().next().unwrap();
            }
        } else {
            return factors.into_iter().next().unwrap();
        }
    }
    let mut coeff = Rational::one();
    let mut powers: BTreeMap<Expr, i64> = BTreeMap::new();
    let mut exps = Vec::new();
    for f in &factors {
        acc(f, &mut coeff, &mut powers, &mut exps);
    }
    if coeff.is_zero() {
        return Expr::zero();
    }

    let mut out: Vec<Expr> = Vec::new();
    let mut redo: Vec<Expr> = Vec::new();
    if !exps.is_empty() {
        let s = add(exps);
        if !s.is_zero() {
            out.push(Expr::from_node(Node::Exp(s)));
        }
    }

    // net sech/cosh exponent per argument
    let mut hyper: BTreeMap<Expr, i64> = BTreeMap::new();
    let mut sqrt_num = BigInt::one();
    let mut sqrt_num_count = 0usize;
    for (base, e) in powers {
        if e == 0 {
            continue;
        }
        match base.node() {
            Node::Sech(a) => *hyper.entry(a.clone()).or_insert(0) += e,
            Node::Cosh(a) => *hyper.entry(a.clone()).or_insert(0) -= e,
            Node::Sqrt(x) => {
                let q = e.div_euclid(2);
                let r = e.rem_euclid(2);
                if let Node::Num(m) = x.node() {
                    if m.is_positive() && m.is_integer() {
                        let mq = num_traits::pow::pow(m.clone(), q.unsigned_abs() as usize);
                        if q < 0 {
                            coeff /= mq;
                        } else {
                            coeff *= mq;
                        }
                        if r == 1 {
                            sqrt_num *= m.numer();
                            sqrt_num_count += 1;
                        }
                        continue;
                    }
                }
                if q != 0 {
                    redo.push(pow(x.clone(), q));
                }
                if r == 1 {
                    out.push(base.clone());
                }
            }
            _ => out.push(raw_pow(base, e)),
        }
    }
    for (a, net) in hyper {
        if net > 0 {
            out.push(raw_pow(Expr::from_node(Node::Sech(a)), net));
        } else if net < 0 {
            out.push(raw_pow(Expr::from_node(Node::Cosh(a)), -net));
        }
    }
    if sqrt_num_count >= 2 {
        redo.push(sqrt(Expr::num(Rational::from_integer(sqrt_num))));
    } else if sqrt_num_count == 1 {
        out.push(Expr::from_node(Node::Sqrt(Expr::num(Rational::from_integer(sqrt_num)))));
    }
    if !redo.is_empty() {
        out.extend(redo);
        out.push(Expr::num(coeff));
        return mul(out);
    }
    if out.is_empty() {
        return Expr::num(coeff);
    }
    if out.len() == 1 {
        if coeff.is_one() {
            return out.pop().unwrap();
        }
        if let Node::Add(_) = out[0].node() {
            return make_term(coeff, out.pop().unwrap());
        }
    }
    out.sort_by(|x, y| base_key(x).cmp(base_key(y)).then_with(|| x.cmp(y)));
    if !coeff.is_one() {
        out.insert(0, Expr::num(coeff));
    }
    Expr::from_node(Node::Mul(out))
}

pub(super) fn pow(base: Expr, e: i64) -> Expr {
    if e == 0 {
        return Expr::one();
    }
    if e == 1 {
        return base;
    }
    match base.node() {
        Node::Num(r) => {
            if r.is_zero() {
                if e < 0 {
                    return Expr::from_node(Node::Pow(base, e));
                }
                return Expr::zero();
            }
            let m = num_traits::pow::pow(r.clone(), e.unsigned_abs() as usize);
            Expr::num(if e < 0 { m.recip() } else { m })
        }
        Node::Pow(b, f) => pow(b.clone(), f * e),
        Node::Mul(fs) => mul(fs.iter().map(|f| pow(f.clone(), e)).collect()),
        Node::Exp(a) => exp(mul(vec![Expr::int(e), a.clone()])),
        Node::Sqrt(_) | Node::Sech(_) | Node::Cosh(_) => mul(vec![Expr::from_node(Node::Pow(base, e))]),
        _ => Expr::from_node(Node::Pow(base, e)),
    }
}

pub(super) fn is_negative_form(e: &Expr) -> bool {
    match e.node() {
        Node::Num(r) => r.is_negative(),
        Node::Mul(fs) => matches!(fs[0].node(), Node::Num(c) if c.is_negative()),
        Node::Add(ts) => is_negative_form(&ts[0]),
        _ => false,
    }
}

fn neg(e: Expr) -> Expr {
    mul(vec![Expr::int(-1), e])
}

pub(super) fn exp(arg: Expr) -> Expr {
    if arg.is_zero() {
        Expr::one()
    } else {
        Expr::from_node(Node::Exp(arg))
    }
}

pub(super) fn tanh(arg: Expr) -> Expr {
    if arg.is_zero() {
        Expr::zero()
    } else if is_negative_form(&arg) {
        neg(Expr::from_node(Node::Tanh(neg(arg))))
    } else {
        Expr::from_node(Node::Tanh(arg))
    }
}

pub(super) fn sech(arg: Expr) -> Expr {
    if arg.is_zero() {
        Expr::one()
    } else if is_negative_form(&arg) {
        Expr::from_node(Node::Sech(neg(arg)))
    } else {
        Expr::from_node(Node::Sech(arg))
    }
}

pub(super) fn cosh(arg: Expr) -> Expr {
    if arg.is_zero() {
        Expr::one()
    } else if is_negative_form(&arg) {
        Expr::from_node(Node::Cosh(neg(arg)))
    } else {
        Expr::from_node(Node::Cosh(arg))
    }
}

/// Write `n = s²·m` with `m` square-free (up to a trial-division bound).
pub(crate) fn square_part(n: &BigInt) -> (BigInt, BigInt) {
    let r = n.sqrt();
    if &(&r * &r) == n {
        return (r, BigInt::one());
    }
    let mut rest = n.clone();
    let mut s = BigInt::one();
    let mut m = BigInt::one();
    let mut p = BigInt::from(2u32);
    let bound = BigInt::from(100_000u32);
    while &p * &p <= rest && p < bound {
        let mut e = 0u32;
        while (&rest % &p).is_zero() {
            rest /= &p;
            e += 1;
        }
        for _ in 0..e / 2 {
            s *= &p;
        }
        if e % 2 == 1 {
            m *= &p;
        }
        p += 1u32;
    }
    let r = rest.sqrt();
    if &r * &r == rest {
        s *= r;
    } else {
        m *= rest;
    }
    (s, m)
}

pub(super) fn sqrt(arg: Expr) -> Expr {
    match arg.node() {
        Node::Num(r) => {
            if r.is_zero() {
                return Expr::zero();
            }
            if r.is_negative() {
                return Expr::from_node(Node::Sqrt(arg));
            }
            // sqrt(p/q) = sqrt(p q)/q
            let n = r.numer() * r.denom();
            let (s, m) = square_part(&n);
            let c = Rational::new(s, r.denom().clone());
            if m.is_one() {
                Expr::num(c)
            } else {
                let root = Expr::from_node(Node::Sqrt(Expr::num(Rational::from_integer(m))));
                if c.is_one() {
                    root
                } else {
                    Expr::from_node(Node::Mul(vec![Expr::num(c), root]))
                }
            }
        }
        Node::Mul(fs) => match fs[0].node() {
            Node::Num(c) if c.is_positive() => {
                let (c, rest) = split_coeff(&arg);
                mul(vec![sqrt(Expr::num(c)), Expr::from_node(Node::Sqrt(rest))])
            }
            _ => Expr::from_node(Node::Sqrt(arg)),
        },
        _ => Expr::from_node(Node::Sqrt(arg)),
    }
}
