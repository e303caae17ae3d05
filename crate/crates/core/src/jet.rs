//! Jet space over the independent variables `(x, y, t)`.
//!
//! A jet coordinate is a symbol `base_J` where `J` is a canonical multi-index
//! written as a sorted word over `x < y < t` (`u_xxt`, never `u_txx`); the
//! zeroth-order coordinate is the bare base name (`u`).  Derivative order is
//! capped at [`MAX_ORDER`].
//!
//! Point vector fields and their prolongation coefficients are computed by
//! the recursive total-derivative formula
//!
//! ```text
//! η^{J,i} = D_i η^J − Σ_j u_{J,j} D_i ξ^j
//! ```

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::expr::{differentiate, Expr};

/// Hard cap on the order of jet coordinates.
pub const MAX_ORDER: usize = 6;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum JetError {
    #[error("total derivative would produce {base} of order {order} > {max}", max = MAX_ORDER)]
    OrderOverflow { base: String, order: usize },
    #[error("invalid multi-index `{0}`")]
    BadIndex(String),
}

/// An independent variable.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Dir {
    X,
    Y,
    T,
}

impl Dir {
    pub const ALL: [Dir; 3] = [Dir::X, Dir::Y, Dir::T];

    pub fn index(self) -> usize {
        match self {
            Dir::X => 0,
            Dir::Y => 1,
            Dir::T => 2,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Dir::X => "x",
            Dir::Y => "y",
            Dir::T => "t",
        }
    }

    pub fn from_char(c: char) -> Option<Dir> {
        match c {
            'x' => Some(Dir::X),
            'y' => Some(Dir::Y),
            't' => Some(Dir::T),
            _ => None,
        }
    }

    pub fn var(self) -> Expr {
        Expr::sym(self.name())
    }
}

/// Multi-index as derivative counts in `(x, y, t)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct MultiIndex(pub [u8; 3]);

impl MultiIndex {
    pub const ZERO: MultiIndex = MultiIndex([0, 0, 0]);

    pub fn order(&self) -> usize {
        self.0.iter().map(|&c| c as usize).sum()
    }

    pub fn plus(&self, d: Dir) -> MultiIndex {
        let mut m = *self;
        m.0[d.index()] += 1;
        m
    }

    pub fn count(&self, d: Dir) -> u8 {
        self.0[d.index()]
    }

    /// Parse a word such as `xxt` (any letter order is accepted and sorted).
    pub fn parse(word: &str) -> Result<MultiIndex, JetError> {
        let mut m = MultiIndex::ZERO;
        for c in word.chars() {
            let d = Dir::from_char(c).ok_or_else(|| JetError::BadIndex(word.to_string()))?;
            m.0[d.index()] += 1;
        }
        if m.order() > MAX_ORDER {
            return Err(JetError::BadIndex(word.to_string()));
        }
        Ok(m)
    }

    /// Canonical word (`x`s, then `y`s, then `t`s).
    pub fn word(&self) -> String {
        let mut s = String::new();
        for d in Dir::ALL {
            for _ in 0..self.count(d) {
                s.push_str(d.name());
            }
        }
        s
    }

    /// The last direction of the canonical word and the remaining index.
    pub fn split_last(&self) -> Option<(MultiIndex, Dir)> {
        for d in [Dir::T, Dir::Y, Dir::X] {
            if self.count(d) > 0 {
                let mut m = *self;
                m.0[d.index()] -= 1;
                return Some((m, d));
            }
        }
        None
    }

    /// All multi-indices of exact order `n`.
    pub fn of_order(n: usize) -> Vec<MultiIndex> {
        let mut out = Vec::new();
        for i in 0..=n {
            for j in 0..=n - i {
                out.push(MultiIndex([i as u8, j as u8, (n - i - j) as u8]));
            }
        }
        out.sort_by_key(|m| std::cmp::Reverse(m.0));
        out
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.word())
    }
}

/// Name of the jet coordinate `base_J`.
pub fn jet_name(base: &str, idx: &MultiIndex) -> String {
    if idx.order() == 0 {
        base.to_string()
    } else {
        format!("{base}_{}", idx.word())
    }
}

/// The jet coordinate `base_J` as an expression.
pub fn jet(base: &str, idx: &MultiIndex) -> Expr {
    Expr::sym(&jet_name(base, idx))
}

/// `u_J` for the word `J`, e.g. `u("xxt")`; `u("")` is `u` itself.
pub fn u(word: &str) -> Expr {
    jet("u", &MultiIndex::parse(word).expect("valid multi-index"))
}

/// The dependent variables of a jet space and the independent variables each
/// one depends on.
#[derive(Debug, Clone, PartialEq)]
pub struct JetSpace {
    bases: Vec<(String, [bool; 3])>,
}

impl JetSpace {
    pub fn new() -> JetSpace {
        JetSpace { bases: Vec::new() }
    }

    /// The jet space of a single function `u(x, y, t)`.
    pub fn standard() -> JetSpace {
        JetSpace::new().with("u", &Dir::ALL)
    }

    pub fn with(mut self, base: &str, deps: &[Dir]) -> JetSpace {
        let mut mask = [false; 3];
        for d in deps {
            mask[d.index()] = true;
        }
        self.bases.push((base.to_string(), mask));
        self
    }

    pub fn depends(&self, base: &str, d: Dir) -> Option<bool> {
        self.bases.iter().find(|(b, _)| b == base).map(|(_, m)| m[d.index()])
    }

    /// Decompose a symbol name into a registered base and multi-index.
    pub fn parse_jet(&self, name: &str) -> Option<(String, MultiIndex)> {
        if self.bases.iter().any(|(b, _)| b == name) {
            return Some((name.to_string(), MultiIndex::ZERO));
        }
        let (base, word) = name.rsplit_once('_')?;
        if !self.bases.iter().any(|(b, _)| b == base) || word.is_empty() {
            return None;
        }
        let idx = MultiIndex::parse(word).ok()?;
        if idx.word() != word {
            return None;
        }
        Some((base.to_string(), idx))
    }

    /// `D_d e`: explicit dependence plus the chain over every jet coordinate.
    pub fn total_derivative(&self, e: &Expr, d: Dir) -> Result<Expr, JetError> {
        let mut terms = vec![differentiate(e, d.name())];
        for s in e.free_symbols() {
            let Some((base, idx)) = self.parse_jet(&s) else { continue };
            if self.depends(&base, d) != Some(true) {
                continue;
            }
            let next = idx.plus(d);
            if next.order() > MAX_ORDER {
                return Err(JetError::OrderOverflow { base, order: next.order() });
            }
            let ds = differentiate(e, &s);
            if !ds.is_zero() {
                terms.push(ds * jet(&base, &next));
            }
        }
        Ok(Expr::add(terms))
    }

    /// Apply total derivatives along a multi-index.
    pub fn total_derivative_multi(&self, e: &Expr, idx: &MultiIndex) -> Result<Expr, JetError> {
        let mut out = e.clone();
        for d in Dir::ALL {
            for _ in 0..idx.count(d) {
                out = self.total_derivative(&out, d)?;
            }
        }
        Ok(out)
    }

    /// Highest jet order of any coordinate of `base` occurring in `e`.
    pub fn max_order(&self, e: &Expr, base: &str) -> usize {
        e.free_symbols()
            .iter()
            .filter_map(|s| self.parse_jet(s))
            .filter(|(b, _)| b == base)
            .map(|(_, m)| m.order())
            .max()
            .unwrap_or(0)
    }
}

impl Default for JetSpace {
    fn default() -> Self {
        JetSpace::standard()
    }
}

/// `D_d e` in the standard jet space of `u(x, y, t)`.
pub fn total_derivative(e: &Expr, d: Dir) -> Result<Expr, JetError> {
    JetSpace::standard().total_derivative(e, d)
}

/// Infinitesimal point transformation `ξ∂x + γ∂y + τ∂t + η∂u`.
#[derive(Clone, Debug, PartialEq)]
pub struct VectorField {
    pub xi: Expr,
    pub gamma: Expr,
    pub tau: Expr,
    pub eta: Expr,
}

impl VectorField {
    pub fn new(xi: Expr, gamma: Expr, tau: Expr, eta: Expr) -> VectorField {
        VectorField { xi, gamma, tau, eta }
    }

    pub fn zero() -> VectorField {
        VectorField::new(Expr::zero(), Expr::zero(), Expr::zero(), Expr::zero())
    }

    pub fn components(&self) -> [&Expr; 4] {
        [&self.xi, &self.gamma, &self.tau, &self.eta]
    }

    /// Independent-variable component along `d`.
    pub fn component(&self, d: Dir) -> &Expr {
        match d {
            Dir::X => &self.xi,
            Dir::Y => &self.gamma,
            Dir::T => &self.tau,
        }
    }

    pub fn scale(&self, c: &Expr) -> VectorField {
        VectorField::new(c * &self.xi, c * &self.gamma, c * &self.tau, c * &self.eta)
    }

    pub fn add(&self, o: &VectorField) -> VectorField {
        VectorField::new(&self.xi + &o.xi, &self.gamma + &o.gamma, &self.tau + &o.tau, &self.eta + &o.eta)
    }

    /// A point field must not depend on derivative coordinates.
    pub fn is_point_field(&self) -> bool {
        let space = JetSpace::standard();
        self.components().iter().all(|c| {
            c.free_symbols()
                .iter()
                .all(|s| space.parse_jet(s).map(|(_, m)| m.order() == 0).unwrap_or(true))
        })
    }

    /// Apply the field as a derivation to a function of `(x, y, t, u)`.
    pub fn apply(&self, f: &Expr) -> Expr {
        Expr::add(vec![
            &self.xi * differentiate(f, "x"),
            &self.gamma * differentiate(f, "y"),
            &self.tau * differentiate(f, "t"),
            &self.eta * differentiate(f, "u"),
        ])
    }
}

impl fmt::Display for VectorField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for (c, v) in [(&self.xi, "x"), (&self.gamma, "y"), (&self.tau, "t"), (&self.eta, "u")] {
            if !c.is_zero() {
                parts.push(format!("({c})∂{v}"));
            }
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

/// Prolongation coefficient `η^J` of a point field (any `J` with |J| ≤ 6).
pub fn prolongation(v: &VectorField, idx: &MultiIndex) -> Result<Expr, JetError> {
    let space = JetSpace::standard();
    prolong_rec(&space, v, idx)
}

fn prolong_rec(space: &JetSpace, v: &VectorField, idx: &MultiIndex) -> Result<Expr, JetError> {
    let Some((parent, d)) = idx.split_last() else {
        return Ok(v.eta.clone());
    };
    let eta_parent = prolong_rec(space, v, &parent)?;
    let mut terms = vec![space.total_derivative(&eta_parent, d)?];
    for j in Dir::ALL {
        let dc = space.total_derivative(v.component(j), d)?;
        if dc.is_zero() {
            continue;
        }
        terms.push(-(u(&parent.plus(j).word()) * dc));
    }
    Ok(Expr::add(terms))
}

/// Coefficient for one of the words used by the symmetry condition
/// (`x`, `xx`, `y`, `yy`, `xt`, `xxxt`, or any other canonical word).
pub fn prolongation_coefficient(v: &VectorField, word: &str) -> Result<Expr, JetError> {
    prolongation(v, &MultiIndex::parse(word)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::{eval_numeric, expand, is_identically_zero, parse, substitute, Point};
    use std::collections::HashMap;

    fn gamma1() -> VectorField {
        // x∂x + y∂y − 2t∂t + (u + 1/(2a))∂u
        VectorField::new(
            Expr::sym("x"),
            Expr::sym("y"),
            Expr::int(-2) * Expr::sym("t"),
            Expr::sym("u") + (Expr::int(2) * Expr::sym("a")).recip(),
        )
    }

    #[test]
    fn total_derivative_examples() {
        assert_eq!(total_derivative(&u(""), Dir::X).unwrap(), u("x"));
        let e = u("") * u("x");
        assert_eq!(
            expand(&total_derivative(&e, Dir::X).unwrap()),
            expand(&(u("x").powi(2) + u("") * u("xx")))
        );
        let e = Expr::sym("x") * u("t");
        assert_eq!(total_derivative(&e, Dir::T).unwrap(), Expr::sym("x") * u("tt"));
    }

    #[test]
    fn order_cap() {
        assert!(total_derivative(&u("xxxxx"), Dir::T).is_ok());
        assert_eq!(
            total_derivative(&u("xxxxxt"), Dir::X),
            Err(JetError::OrderOverflow { base: "u".into(), order: 7 })
        );
    }

    #[test]
    fn jet_names_are_canonical() {
        let sp = JetSpace::standard();
        assert_eq!(sp.parse_jet("u_xt"), Some(("u".into(), MultiIndex([1, 0, 1]))));
        assert_eq!(sp.parse_jet("u_tx"), None);
        assert_eq!(sp.parse_jet("a"), None);
        assert_eq!(MultiIndex::parse("txx").unwrap().word(), "xxt");
        assert_eq!(MultiIndex::of_order(2).len(), 6);
    }

    #[test]
    fn total_derivatives_commute() {
        let e = parse("(+ (* x (pow u 2) u_y) (tanh (+ t u_x)) (* y u_xt))").unwrap();
        let xy = total_derivative(&total_derivative(&e, Dir::X).unwrap(), Dir::Y).unwrap();
        let yx = total_derivative(&total_derivative(&e, Dir::Y).unwrap(), Dir::X).unwrap();
        assert!(is_identically_zero(&(xy - yx)));
    }

    #[test]
    fn constant_fields_have_trivial_prolongation() {
        let v = VectorField::new(Expr::int(1), Expr::int(-3), Expr::frac(1, 2), Expr::int(7));
        for w in ["x", "xx", "y", "yy", "xt", "xxxt", "xxx"] {
            assert!(prolongation_coefficient(&v, w).unwrap().is_zero(), "{w}");
        }
        let g2 = VectorField::new(Expr::one(), Expr::zero(), Expr::zero(), Expr::zero());
        assert!(prolongation_coefficient(&g2, "x").unwrap().is_zero());
    }

    #[test]
    fn scaling_field_coefficients() {
        // hand expansion: η^x = 0, η^xx = −u_xx, η^xt = 2u_xt, η^y = 0,
        // η^yy = −u_yy, η^xxx = −2u_xxx, η^xxxt = 0
        let v = gamma1();
        let expect = [
            ("x", Expr::zero()),
            ("xx", -u("xx")),
            ("xt", Expr::int(2) * u("xt")),
            ("y", Expr::zero()),
            ("yy", -u("yy")),
            ("xxx", Expr::int(-2) * u("xxx")),
            ("xxxt", Expr::zero()),
        ];
        for (w, e) in expect {
            assert_eq!(expand(&prolongation_coefficient(&v, w).unwrap()), e, "η^{w}");
        }
    }

    /// Differentiating the ε-transformed graph by the chain rule must agree
    /// with `u_x + ε η^x` to O(ε²).
    #[test]
    fn first_order_prolongation_matches_transformed_graph() {
        let f = parse("(+ (* 1/3 (pow x 2) y) (tanh (+ x (* 1/2 t))) (* 1/5 (exp (* 1/3 y))))").unwrap();
        let v = VectorField::new(
            parse("(+ x (* 1/2 u))").unwrap(),
            parse("(* y t)").unwrap(),
            parse("(+ 1 (* 1/4 (pow x 2)))").unwrap(),
            parse("(+ (* u t) x)").unwrap(),
        );
        let eta_x = prolongation_coefficient(&v, "x").unwrap();
        // restrict everything to the graph u = f
        let mut on_graph = HashMap::new();
        on_graph.insert("u".to_string(), f.clone());
        for w in ["x", "y", "t"] {
            on_graph.insert(format!("u_{w}"), differentiate(&f, w));
        }
        let g = |e: &Expr| substitute(e, &on_graph);
        let comps: Vec<Expr> = [&v.xi, &v.gamma, &v.tau].iter().map(|c| g(c)).collect();
        let eta = g(&v.eta);
        let p0: Point = [("x", 0.3), ("y", -0.4), ("t", 0.7)].iter().map(|(k, x)| (k.to_string(), *x)).collect();
        let ev = |e: &Expr| eval_numeric(e, &p0).unwrap();
        let grad = |e: &Expr| ["x", "y", "t"].map(|w| ev(&differentiate(e, w)));

        let linear = ev(&g(&u("x"))) ;
        let linear_eta = ev(&g(&eta_x));
        let mut errs = Vec::new();
        for eps in [1e-3, 5e-4] {
            // Jacobian of (x,y,t) ↦ (x,y,t) + ε(ξ,γ,τ) and gradient of u + εη
            let mut jac = [[0.0f64; 3]; 3];
            for (i, c) in comps.iter().enumerate() {
                let gr = grad(c);
                for j in 0..3 {
                    jac[i][j] = if i == j { 1.0 } else { 0.0 } + eps * gr[j];
                }
            }
            let gf = grad(&f);
            let ge = grad(&eta);
            let rhs: Vec<f64> = (0..3).map(|j| gf[j] + eps * ge[j]).collect();
            // solve J^T w = rhs, w = ∇_{x̂} û
            let jt = [[jac[0][0], jac[1][0], jac[2][0]], [jac[0][1], jac[1][1], jac[2][1]], [jac[0][2], jac[1][2], jac[2][2]]];
            let w = solve3(jt, [rhs[0], rhs[1], rhs[2]]);
            errs.push((w[0] - (linear + eps * linear_eta)).abs());
        }
        let ratio = errs[0] / errs[1];
        assert!(errs[0] < 1e-4, "{errs:?}");
        assert!((ratio - 4.0).abs() < 0.5, "error ratio {ratio} should be ≈ 4 (O(ε²))");
    }

    fn solve3(m: [[f64; 3]; 3], b: [f64; 3]) -> [f64; 3] {
        let det = |m: [[f64; 3]; 3]| {
            m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
                + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
        };
        let d = det(m);
        let mut out = [0.0; 3];
        for (k, o) in out.iter_mut().enumerate() {
            let mut mk = m;
            for i in 0..3 {
                mk[i][k] = b[i];
            }
            *o = det(mk) / d;
        }
        out
    }
}
