//! A small computer-algebra kernel.
//!
//! Expressions are immutable, reference-counted trees over exact rationals,
//! symbols, sums, products, integer powers and the closed set of elementary
//! functions `exp`, `tanh`, `sech`, `cosh`, `sqrt`.  Every constructor returns
//! a *canonical* tree:
//!
//! * sums and products are flattened, constants are folded and like terms /
//!   like factors are merged;
//! * sum terms are ordered by their non-numeric part (coefficient-independent),
//!   product factors by base, with the numeric coefficient first;
//! * no sum or product has fewer than two operands and no power has exponent
//!   0 or 1;
//! * `exp(A)·exp(B)` folds to `exp(A+B)`, `sqrt` of a rational is made
//!   square-free, `sqrt(X)^2 = X`, and `tanh`/`sech`/`cosh` pull out the sign of
//!   their argument so that `f(-A)` and `f(A)` share a representation.
//!
//! `sinh` has no node of its own: [`Expr::sinh`] builds `tanh·cosh`.
//!
//! Zero testing, expansion, differentiation, evaluation and the text syntax
//! live in the submodules.

mod calculus;
mod canon;
mod eval;
mod expand;
mod parse;
mod poly;
mod zero;

use std::collections::BTreeSet;
use std::fmt;
use std::ops;
use std::sync::Arc;

pub use calculus::{differentiate, substitute, substitute_one};
pub use eval::{eval_numeric, CompiledExpr, EvalError, Point};
pub use expand::{expand, simplify};
pub use parse::{parse, ParseError};
pub use poly::{coefficients_in, degree_in, Collected};
pub use zero::{is_identically_zero, rewrite_proves_zero, to_exp_form, zero_test, ZeroTestConfig, ZeroVerdict};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Exact rational numbers (always reduced, positive denominator).
pub type Rational = BigRational;

/// Build a rational `n/d`. Panics if `d == 0`.
pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Build the integer rational `n`.
pub fn rint(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Parse `p`, `p/q` or a terminating decimal such as `-0.25` into an exact rational.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    if s.is_empty() {
        return None;
    }
    if let Some((p, q)) = s.split_once('/') {
        let p: BigInt = p.trim().parse().ok()?;
        let q: BigInt = q.trim().parse().ok()?;
        if q.is_zero() {
            return None;
        }
        return Some(Rational::new(p, q));
    }
    if let Some((ip, fp)) = s.split_once('.') {
        let neg = ip.trim_start().starts_with('-');
        let ip_digits = ip.trim().trim_start_matches(['-', '+']);
        if !fp.chars().all(|c| c.is_ascii_digit()) {
            return None;
        }
        let whole: BigInt = if ip_digits.is_empty() { BigInt::zero() } else { ip_digits.parse().ok()? };
        let frac: BigInt = if fp.is_empty() { BigInt::zero() } else { fp.parse().ok()? };
        let scale = num_traits::pow(BigInt::from(10), fp.len());
        let mag = Rational::new(whole * &scale + frac, scale);
        return Some(if neg { -mag } else { mag });
    }
    let n: BigInt = s.parse().ok()?;
    Some(Rational::from_integer(n))
}

/// Lossy conversion used only at the numeric boundary.
pub fn rat_to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// Symbol names are shared strings.
pub type Symbol = Arc<str>;

/// A node of the expression tree. Construct through [`Expr`]'s associated
/// functions so that the canonical-form invariants hold.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Node {
    Num(Rational),
    Sym(Symbol),
    Add(Vec<Expr>),
    Mul(Vec<Expr>),
    Pow(Expr, i64),
    Exp(Expr),
    Tanh(Expr),
    Sech(Expr),
    Cosh(Expr),
    Sqrt(Expr),
}

/// Immutable canonical expression.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Expr(Arc<Node>);

impl Expr {
    pub(crate) fn from_node(n: Node) -> Expr {
        Expr(Arc::new(n))
    }

    pub fn node(&self) -> &Node {
        &self.0
    }

    pub fn num(r: Rational) -> Expr {
        Expr::from_node(Node::Num(r))
    }

    pub fn int(n: i64) -> Expr {
        Expr::num(rint(n))
    }

    pub fn frac(n: i64, d: i64) -> Expr {
        Expr::num(rat(n, d))
    }

    pub fn zero() -> Expr {
        Expr::int(0)
    }

    pub fn one() -> Expr {
        Expr::int(1)
    }

    pub fn sym(name: &str) -> Expr {
        Expr::from_node(Node::Sym(Arc::from(name)))
    }

    pub fn add(terms: Vec<Expr>) -> Expr {
        canon::add(terms)
    }

    pub fn mul(factors: Vec<Expr>) -> Expr {
        canon::mul(factors)
    }

    pub fn pow(base: Expr, e: i64) -> Expr {
        canon::pow(base, e)
    }

    pub fn exp(arg: Expr) -> Expr {
        canon::exp(arg)
    }

    pub fn tanh(arg: Expr) -> Expr {
        canon::tanh(arg)
    }

    pub fn sech(arg: Expr) -> Expr {
        canon::sech(arg)
    }

    pub fn cosh(arg: Expr) -> Expr {
        canon::cosh(arg)
    }

    /// `sinh A = tanh A · cosh A`.
    pub fn sinh(arg: Expr) -> Expr {
        Expr::mul(vec![canon::tanh(arg.clone()), canon::cosh(arg)])
    }

    pub fn sqrt(arg: Expr) -> Expr {
        canon::sqrt(arg)
    }

    pub fn recip(&self) -> Expr {
        Expr::pow(self.clone(), -1)
    }

    pub fn powi(&self, e: i64) -> Expr {
        Expr::pow(self.clone(), e)
    }

    pub fn scale(&self, r: &Rational) -> Expr {
        Expr::mul(vec![Expr::num(r.clone()), self.clone()])
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        match self.node() {
            Node::Num(r) => Some(r),
            _ => None,
        }
    }

    pub fn as_symbol(&self) -> Option<&str> {
        match self.node() {
            Node::Sym(s) => Some(s),
            _ => None,
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self.node(), Node::Num(r) if r.is_zero())
    }

    pub fn is_one(&self) -> bool {
        matches!(self.node(), Node::Num(r) if r.is_one())
    }

    /// Immediate operands of the node (empty for atoms).
    pub fn children(&self) -> Vec<&Expr> {
        match self.node() {
            Node::Num(_) | Node::Sym(_) => vec![],
            Node::Add(v) | Node::Mul(v) => v.iter().collect(),
            Node::Pow(b, _) => vec![b],
            Node::Exp(a) | Node::Tanh(a) | Node::Sech(a) | Node::Cosh(a) | Node::Sqrt(a) => vec![a],
        }
    }

    /// Split a term into numeric coefficient and the remaining factor.
    pub fn split_coeff(&self) -> (Rational, Expr) {
        canon::split_coeff(self)
    }

    /// Collect every symbol name occurring in the expression.
    pub fn free_symbols(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_symbols(&mut out);
        out
    }

    fn collect_symbols(&self, out: &mut BTreeSet<String>) {
        match self.node() {
            Node::Sym(s) => {
                out.insert(s.to_string());
            }
            _ => {
                for c in self.children() {
                    c.collect_symbols(out);
                }
            }
        }
    }

    pub fn contains_symbol(&self, name: &str) -> bool {
        match self.node() {
            Node::Sym(s) => &**s == name,
            Node::Num(_) => false,
            _ => self.children().into_iter().any(|c| c.contains_symbol(name)),
        }
    }

    /// Number of nodes in the tree (shared subtrees counted once per occurrence).
    pub fn size(&self) -> usize {
        1 + self.children().into_iter().map(|c| c.size()).sum::<usize>()
    }

    /// Rebuild the tree bottom-up through the canonical constructors, applying
    /// `f` to each rebuilt node; `f` returns `None` to keep the node.
    pub fn map_bottom_up(&self, f: &mut dyn FnMut(&Expr) -> Option<Expr>) -> Expr {
        let rebuilt = match self.node() {
            Node::Num(_) | Node::Sym(_) => self.clone(),
            Node::Add(v) => Expr::add(v.iter().map(|c| c.map_bottom_up(f)).collect()),
            Node::Mul(v) => Expr::mul(v.iter().map(|c| c.map_bottom_up(f)).collect()),
            Node::Pow(b, e) => Expr::pow(b.map_bottom_up(f), *e),
            Node::Exp(a) => Expr::exp(a.map_bottom_up(f)),
            Node::Tanh(a) => Expr::tanh(a.map_bottom_up(f)),
            Node::Sech(a) => Expr::sech(a.map_bottom_up(f)),
            Node::Cosh(a) => Expr::cosh(a.map_bottom_up(f)),
            Node::Sqrt(a) => Expr::sqrt(a.map_bottom_up(f)),
        };
        f(&rebuilt).unwrap_or(rebuilt)
    }

    /// True if the expression is "negative looking": a negative number, a
    /// product with negative coefficient, or a sum whose first term is negative.
    pub fn is_negative_form(&self) -> bool {
        canon::is_negative_form(self)
    }

    /// Prefix-syntax rendering, e.g. `(+ (pow x 2) (tanh t))`.
    pub fn to_prefix(&self) -> String {
        let mut s = String::new();
        parse::write_prefix(self, &mut s);
        s
    }
}

impl fmt::Debug for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_prefix())
    }
}

/// Infix rendering intended for humans (reports, examples).
impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_infix(self, f, 0)
    }
}

/// Expressions serialize as their infix text.
impl serde::Serialize for Expr {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

fn write_rational(r: &Rational, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if r.is_integer() {
        write!(f, "{}", r.numer())
    } else {
        write!(f, "{}/{}", r.numer(), r.denom())
    }
}

// precedence: 0 = top / sum context, 1 = product operand, 2 = power base
fn write_infix(e: &Expr, f: &mut fmt::Formatter<'_>, prec: u8) -> fmt::Result {
    match e.node() {
        Node::Num(r) => {
            let needs = (prec >= 1 && r.is_negative()) || (prec >= 2 && !r.is_integer());
            if needs {
                write!(f, "(")?;
            }
            write_rational(r, f)?;
            if needs {
                write!(f, ")")?;
            }
            Ok(())
        }
        Node::Sym(s) => write!(f, "{}", s),
        Node::Add(terms) => {
            if prec >= 1 {
                write!(f, "(")?;
            }
            for (i, t) in terms.iter().enumerate() {
                let (c, rest) = t.split_coeff();
                if i == 0 {
                    if c.is_negative() {
                        write!(f, "-")?;
                    }
                } else if c.is_negative() {
                    write!(f, " - ")?;
                } else {
                    write!(f, " + ")?;
                }
                let mag = c.abs();
                if rest.is_one() {
                    write_rational(&mag, f)?;
                } else if mag.is_one() {
                    write_infix(&rest, f, 1)?;
                } else {
                    write_rational(&mag, f)?;
                    write!(f, "*")?;
                    write_infix(&rest, f, 1)?;
                }
            }
            if prec >= 1 {
                write!(f, ")")?;
            }
            Ok(())
        }
        Node::Mul(fs) => {
            if prec >= 2 {
                write!(f, "(")?;
            }
            let mut first = true;
            for x in fs {
                if !first {
                    write!(f, "*")?;
                }
                if first && x.as_rational().map(|r| r == &rint(-1)).unwrap_or(false) && fs.len() > 1 {
                    write!(f, "-")?;
                    continue;
                }
                write_infix(x, f, 2)?;
                first = false;
            }
            if prec >= 2 {
                write!(f, ")")?;
            }
            Ok(())
        }
        Node::Pow(b, n) => {
            write_infix(b, f, 2)?;
            if *n < 0 {
                write!(f, "^({})", n)
            } else {
                write!(f, "^{}", n)
            }
        }
        Node::Exp(a) => {
            write!(f, "exp(")?;
            write_infix(a, f, 0)?;
            write!(f, ")")
        }
        Node::Tanh(a) => {
            write!(f, "tanh(")?;
            write_infix(a, f, 0)?;
            write!(f, ")")
        }
        Node::Sech(a) => {
            write!(f, "sech(")?;
            write_infix(a, f, 0)?;
            write!(f, ")")
        }
        Node::Cosh(a) => {
            write!(f, "cosh(")?;
            write_infix(a, f, 0)?;
            write!(f, ")")
        }
        Node::Sqrt(a) => {
            write!(f, "sqrt(")?;
            write_infix(a, f, 0)?;
            write!(f, ")")
        }
    }
}

impl From<i64> for Expr {
    fn from(n: i64) -> Expr {
        Expr::int(n)
    }
}

impl From<Rational> for Expr {
    fn from(r: Rational) -> Expr {
        Expr::num(r)
    }
}

impl From<&Rational> for Expr {
    fn from(r: &Rational) -> Expr {
        Expr::num(r.clone())
    }
}

impl From<&str> for Expr {
    fn from(s: &str) -> Expr {
        Expr::sym(s)
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident, $body:expr) => {
        impl ops::$tr<Expr> for Expr {
            type Output = Expr;
            fn $m(self, rhs: Expr) -> Expr {
                let f: fn(Expr, Expr) -> Expr = $body;
                f(self, rhs)
            }
        }
        impl ops::$tr<&Expr> for Expr {
            type Output = Expr;
            fn $m(self, rhs: &Expr) -> Expr {
                let f: fn(Expr, Expr) -> Expr = $body;
                f(self, rhs.clone())
            }
        }
        impl ops::$tr<Expr> for &Expr {
            type Output = Expr;
            fn $m(self, rhs: Expr) -> Expr {
                let f: fn(Expr, Expr) -> Expr = $body;
                f(self.clone(), rhs)
            }
        }
        impl ops::$tr<&Expr> for &Expr {
            type Output = Expr;
            fn $m(self, rhs: &Expr) -> Expr {
                let f: fn(Expr, Expr) -> Expr = $body;
                f(self.clone(), rhs.clone())
            }
        }
        impl ops::$tr<i64> for Expr {
            type Output = Expr;
            fn $m(self, rhs: i64) -> Expr {
                let f: fn(Expr, Expr) -> Expr = $body;
                f(self, Expr::int(rhs))
            }
        }
        impl ops::$tr<i64> for &Expr {
            type Output = Expr;
            fn $m(self, rhs: i64) -> Expr {
                let f: fn(Expr, Expr) -> Expr = $body;
                f(self.clone(), Expr::int(rhs))
            }
        }
    };
}

binop!(Add, add, |a, b| Expr::add(vec![a, b]));
binop!(Sub, sub, |a, b| Expr::add(vec![a, Expr::mul(vec![Expr::int(-1), b])]));
binop!(Mul, mul, |a, b| Expr::mul(vec![a, b]));
binop!(Div, div, |a, b| Expr::mul(vec![a, Expr::pow(b, -1)]));

impl ops::Neg for Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        Expr::mul(vec![Expr::int(-1), self])
    }
}

impl ops::Neg for &Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        Expr::mul(vec![Expr::int(-1), self.clone()])
    }
}

impl std::iter::Sum for Expr {
    fn sum<I: Iterator<Item = Expr>>(iter: I) -> Expr {
        Expr::add(iter.collect())
    }
}

impl std::iter::Product for Expr {
    fn product<I: Iterator<Item = Expr>>(iter: I) -> Expr {
        Expr::mul(iter.collect())
    }
}


/// Render a rational as `p` or `p/q`.
pub fn fmt_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Serde adapter storing rationals as `"p/q"` strings.
pub mod rational_serde {
    use super::{fmt_rational, parse_rational, Rational};
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&fmt_rational(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let s = String::deserialize(d)?;
        parse_rational(&s).ok_or_else(|| D::Error::custom(format!("invalid rational `{s}`")))
    }
}
