//! Two-tier zero testing.
//!
//! Tier 1 is a proof: hyperbolic functions are rewritten into exponentials
//! (`tanh A = (e^{2A}−1)/(e^{2A}+1)`, `sech A = 2e^{A}/(e^{2A}+1)`,
//! `cosh A = (e^{A}+e^{−A})/2`), exponentials are folded, and the result is
//! brought over a common denominator whose factors are kept separately; the
//! expression is zero iff the expanded numerator (a Laurent polynomial in
//! the remaining atoms) is zero. This also subsumes `sech² = 1 − tanh²` and
//! `cosh² − sinh² = 1`.
//!
//! Tier 2 runs when tier 1 cannot certify zero: the expression is evaluated at
//! random rational points. Either every value is below the tolerance
//! ("numerically zero") or a witness point is reported.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::eval::{eval_numeric, Point};
use super::expand::{distribute, expand, terms_of};
use super::{Expr, Node};

#[derive(Clone, Debug)]
pub struct ZeroTestConfig {
    pub seed: u64,
    pub points: usize,
    pub tol: f64,
    /// Give up on the rewrite tier when a numerator exceeds this many terms.
    pub max_terms: usize,
}

impl Default for ZeroTestConfig {
    fn default() -> Self {
        ZeroTestConfig { seed: 0x5eed, points: 20, tol: 1e-9, max_terms: 20_000 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum ZeroVerdict {
    /// Canonicalization reduced the expression to 0.
    Proven,
    /// Rewriting was inconclusive; all sampled values were below tolerance.
    NumericallyZero { points: usize, max_abs: f64 },
    /// A point where the expression is (numerically) nonzero.
    Nonzero { witness: BTreeMap<String, f64>, value: f64 },
}

impl ZeroVerdict {
    pub fn is_zero(&self) -> bool {
        !matches!(self, ZeroVerdict::Nonzero { .. })
    }

    pub fn label(&self) -> &'static str {
        match self {
            ZeroVerdict::Proven => "proven zero",
            ZeroVerdict::NumericallyZero { .. } => "numerically zero",
            ZeroVerdict::Nonzero { .. } => "nonzero",
        }
    }
}

/// Decide whether `e` vanishes identically, with the default configuration.
pub fn is_identically_zero(e: &Expr) -> bool {
    zero_test(e, &ZeroTestConfig::default()).is_zero()
}

/// Full two-tier verdict.
pub fn zero_test(e: &Expr, cfg: &ZeroTestConfig) -> ZeroVerdict {
    if e.is_zero() {
        return ZeroVerdict::Proven;
    }
    if let Some(true) = rewrite_proves_zero(e, cfg.max_terms) {
        return ZeroVerdict::Proven;
    }
    numeric_tier(e, cfg)
}

/// Tier 1 alone: `Some(true)` when proven zero, `Some(false)` when the normal
/// form is a nonzero numerator, `None` when the budget was exceeded.
pub fn rewrite_proves_zero(e: &Expr, max_terms: usize) -> Option<bool> {
    if expand(e).is_zero() {
        return Some(true);
    }
    let rewritten = to_exp_form(e);
    let f = normal(&rewritten, max_terms)?;
    Some(f.num.is_zero())
}

/// Replace tanh, sech and cosh by exponentials (recursively).
pub fn to_exp_form(e: &Expr) -> Expr {
    e.map_bottom_up(&mut |n: &Expr| match n.node() {
        Node::Tanh(a) => {
            let e2 = Expr::exp(Expr::int(2) * a);
            Some((&e2 - 1) * Expr::pow(e2 + 1, -1))
        }
        Node::Sech(a) => {
            let e2 = Expr::exp(Expr::int(2) * a);
            Some(Expr::int(2) * Expr::exp(a.clone()) * Expr::pow(e2 + 1, -1))
        }
        Node::Cosh(a) => Some(Expr::frac(1, 2) * (Expr::exp(a.clone()) + Expr::exp(-a))),
        _ => None,
    })
}

/// Numerator over a product of (primitive, expanded) denominator factors.
struct Frac {
    num: Expr,
    den: BTreeMap<Expr, u32>,
}

impl Frac {
    fn atom(e: Expr) -> Frac {
        Frac { num: e, den: BTreeMap::new() }
    }
}

fn too_big(e: &Expr, max_terms: usize) -> bool {
    matches!(e.node(), Node::Add(ts) if ts.len() > max_terms)
}

fn mul_fracs(a: Frac, b: Frac, max_terms: usize) -> Option<Frac> {
    let num = distribute(vec![a.num, b.num]);
    if too_big(&num, max_terms) {
        return None;
    }
    let mut den = a.den;
    for (k, m) in b.den {
        *den.entry(k).or_insert(0) += m;
    }
    Some(Frac { num, den })
}

fn add_fracs(parts: Vec<Frac>, max_terms: usize) -> Option<Frac> {
    let mut common: BTreeMap<Expr, u32> = BTreeMap::new();
    for p in &parts {
        for (k, m) in &p.den {
            let e = common.entry(k.clone()).or_insert(0);
            *e = (*e).max(*m);
        }
    }
    let mut terms = Vec::new();
    for p in parts {
        if p.num.is_zero() {
            continue;
        }
        let mut factors = vec![p.num];
        for (k, m) in &common {
            let have = p.den.get(k).copied().unwrap_or(0);
            for _ in have..*m {
                factors.push(k.clone());
            }
        }
        let t = distribute(factors);
        if too_big(&t, max_terms) {
            return None;
        }
        terms.push(t);
    }
    let num = Expr::add(terms);
    if too_big(&num, max_terms) {
        return None;
    }
    if num.is_zero() {
        return Some(Frac { num, den: BTreeMap::new() });
    }
    Some(Frac { num, den: common })
}

/// Split an expanded polynomial `p` as `unit · key` where `unit` is its first
/// term (a Laurent monomial) so that equal factors share a key.
fn primitive(p: &Expr) -> (Expr, Expr) {
    let ts = terms_of(p);
    let unit = ts[0].clone();
    let inv = expand(&Expr::pow(unit.clone(), -1));
    (unit, distribute(vec![p.clone(), inv]))
}

fn invert(f: Frac, max_terms: usize) -> Option<Frac> {
    // 1/(N/D) = D/N
    let mut dfactors: Vec<Expr> = Vec::new();
    for (k, m) in &f.den {
        for _ in 0..*m {
            dfactors.push(k.clone());
        }
    }
    let dprod = distribute(dfactors);
    if too_big(&dprod, max_terms) {
        return None;
    }
    match f.num.node() {
        Node::Add(_) => {
            let (unit, key) = primitive(&f.num);
            let uinv = expand(&Expr::pow(unit, -1));
            let mut den = BTreeMap::new();
            den.insert(key, 1);
            Some(Frac { num: distribute(vec![dprod, uinv]), den })
        }
        _ => {
            // a monomial (possibly zero: leave it as an explicit pole)
            let inv = expand(&Expr::pow(f.num, -1));
            Some(Frac { num: distribute(vec![dprod, inv]), den: BTreeMap::new() })
        }
    }
}

fn normal(e: &Expr, max_terms: usize) -> Option<Frac> {
    match e.node() {
        Node::Num(_) | Node::Sym(_) => Some(Frac::atom(e.clone())),
        Node::Exp(a) => Some(Frac::atom(Expr::exp(expand(a)))),
        Node::Sqrt(a) => Some(Frac::atom(Expr::sqrt(expand(a)))),
        Node::Tanh(_) | Node::Sech(_) | Node::Cosh(_) => Some(Frac::atom(expand(e))),
        Node::Add(ts) => {
            let parts = ts.iter().map(|t| normal(t, max_terms)).collect::<Option<Vec<_>>>()?;
            add_fracs(parts, max_terms)
        }
        Node::Mul(fs) => {
            let mut acc = Frac::atom(Expr::one());
            for f in fs {
                acc = mul_fracs(acc, normal(f, max_terms)?, max_terms)?;
            }
            Some(acc)
        }
        Node::Pow(b, n) => {
            let base = normal(b, max_terms)?;
            let base = if *n < 0 { invert(base, max_terms)? } else { base };
            let mut acc = Frac::atom(Expr::one());
            for _ in 0..n.unsigned_abs() {
                acc = mul_fracs(acc, Frac { num: base.num.clone(), den: base.den.clone() }, max_terms)?;
            }
            Some(acc)
        }
    }
}

fn sample_value(rng: &mut ChaCha8Rng) -> f64 {
    // rational m/64 with |m/64| in [0.25, 1.75]
    let m: i64 = rng.gen_range(16..=112);
    let s = if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
    s * (m as f64) / 64.0
}

fn numeric_tier(e: &Expr, cfg: &ZeroTestConfig) -> ZeroVerdict {
    let syms: Vec<String> = e.free_symbols().into_iter().collect();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let wanted = if syms.is_empty() { 1 } else { cfg.points.max(20) };
    let mut done = 0usize;
    let mut attempts = 0usize;
    let mut max_abs: f64 = 0.0;
    while done < wanted && attempts < wanted * 50 {
        attempts += 1;
        let point: Point = syms.iter().map(|s| (s.clone(), sample_value(&mut rng))).collect();
        match eval_numeric(e, &point) {
            Ok(v) => {
                done += 1;
                if v.abs() > cfg.tol {
                    return ZeroVerdict::Nonzero { witness: point.into_iter().collect(), value: v };
                }
                max_abs = max_abs.max(v.abs());
            }
            Err(_) => continue,
        }
    }
    if done == 0 {
        // nowhere evaluable: report the failure as a witness-free nonzero
        return ZeroVerdict::Nonzero { witness: BTreeMap::new(), value: f64::NAN };
    }
    ZeroVerdict::NumericallyZero { points: done, max_abs }
}
