//! Dominant balance: the order of the polynomial (tanh) or derivative
//! (homogeneous balance) ansatz, computed from the shapes of the equation's
//! terms.
//!
//! A term with `n` factors of `u` carrying `d` derivatives in total has weight
//! `n·J + d` when `u` behaves like `Y^J` (tanh method, each `d/dz` raising the
//! degree in `Y = tanh z` by one) or like `φ^{−J}` (homogeneous balance, each
//! derivative raising the pole order by one). The order is fixed by equating
//! the weight of the highest-derivative linear term with a nonlinear one.

use serde::Serialize;

use crate::expr::{coefficients_in, degree_in, differentiate, expand, Expr, Rational};
use crate::kpbbm::{equation_terms, Params};

use super::SolutionError;

/// `n` factors of `u` with `d` derivatives in total.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct TermShape {
    pub factors: usize,
    pub derivatives: usize,
}

impl TermShape {
    pub fn new(factors: usize, derivatives: usize) -> TermShape {
        TermShape { factors, derivatives }
    }

    pub fn weight(&self, j: i64) -> i64 {
        self.factors as i64 * j + self.derivatives as i64
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum BalanceKind {
    /// Degree of the polynomial in `Y = tanh z` (twice-integrated profile equation).
    Tanh,
    /// Number of x-derivatives `p` in `u = ∂ₓᵖ f(φ) + u₁`.
    Hb,
}

/// Shapes of the terms of the equation itself.
pub fn equation_shapes() -> Vec<TermShape> {
    // the shapes do not depend on the coefficient values
    let p = Params::ints(1, 1, 1);
    equation_terms(&p)
        .iter()
        .map(|t| TermShape::new(t.factors.len(), t.factors.iter().map(|m| m.order()).sum()))
        .collect()
}

/// Shapes of the traveling-wave profile equation after integrating twice:
/// every term of the equation carries at least two derivatives, all of which
/// integrate away in the same way, so the weights shift uniformly.
pub fn profile_shapes() -> Vec<TermShape> {
    equation_shapes().into_iter().map(|s| TermShape::new(s.factors, s.derivatives - 2)).collect()
}

/// The positive integer `J` at which a nonlinear term balances the linear
/// term with the most derivatives and no other term outweighs the pair.
pub fn dominant_balance(shapes: &[TermShape]) -> Result<i64, SolutionError> {
    let lin = shapes
        .iter()
        .filter(|s| s.factors == 1)
        .max_by_key(|s| s.derivatives)
        .ok_or_else(|| SolutionError::NoBalance("no linear term".into()))?;
    let mut found: Vec<i64> = Vec::new();
    for nl in shapes.iter().filter(|s| s.factors >= 2) {
        let (num, den) = (lin.derivatives as i64 - nl.derivatives as i64, nl.factors as i64 - 1);
        if num <= 0 || num % den != 0 {
            continue;
        }
        let j = num / den;
        let top = lin.weight(j);
        if shapes.iter().all(|s| s.weight(j) <= top) && !found.contains(&j) {
            found.push(j);
        }
    }
    match found.as_slice() {
        [j] => Ok(*j),
        [] => Err(SolutionError::NoBalance("no nonlinear term balances the dispersion at a positive integer order".into())),
        _ => Err(SolutionError::NoBalance(format!("ambiguous orders {found:?}"))),
    }
}

/// Leading degree in `Y` of `D^d (Y^J)^n`, with `D = (1 − Y²) d/dY`.
pub fn tanh_leading_degrees(j: i64, shape: TermShape) -> i64 {
    let y = Expr::sym("Y");
    let mut g = y.powi(j * shape.factors as i64);
    for _ in 0..shape.derivatives {
        g = expand(&((Expr::one() - y.powi(2)) * differentiate(&g, "Y")));
    }
    degree_in(&g, "Y").unwrap_or(0)
}

/// Balance order for the equation; the tanh order is confirmed by explicit
/// degree counting in `Y`.
pub fn balance_order(kind: BalanceKind) -> Result<i64, SolutionError> {
    match kind {
        BalanceKind::Hb => dominant_balance(&equation_shapes()),
        BalanceKind::Tanh => {
            let shapes = profile_shapes();
            let j = dominant_balance(&shapes)?;
            let degrees: Vec<i64> = shapes.iter().map(|s| tanh_leading_degrees(j, *s)).collect();
            let top = *degrees.iter().max().unwrap();
            let nonlinear_hits = shapes.iter().zip(&degrees).any(|(s, d)| s.factors >= 2 && *d == top);
            let dispersive_hits = shapes.iter().zip(&degrees).any(|(s, d)| s.factors == 1 && s.derivatives > 0 && *d == top);
            if nonlinear_hits && dispersive_hits {
                Ok(j)
            } else {
                Err(SolutionError::NoBalance(format!("degree count {degrees:?} does not confirm J = {j}")))
            }
        }
    }
}

/// Coefficient `c` in `f = c ln φ` from the leading order of the
/// homogeneous-balance substitution with `p` from [`balance_order`].
///
/// With `u = ∂ₓᵖ f(φ)` the highest derivatives of `φ` come from the terms of
/// maximal weight; each factor `∂^J u` contributes `f^{(p+|J|)}(φ)` times
/// `|J|+p` first derivatives of `φ`. The ansatz has `φ_t = φ_x`, so all those
/// derivatives collapse to one power of `φ_x`. With `f' = c/φ` the leading
/// coefficient is a polynomial in `c` whose nonzero root is returned.
pub fn hb_log_coefficient(p: &Params) -> Result<Rational, SolutionError> {
    let order = balance_order(BalanceKind::Hb)?;
    let terms = equation_terms(p);
    let shapes = equation_shapes();
    let top = shapes.iter().map(|s| s.weight(order)).max().unwrap();
    let phi = Expr::sym("phi");
    // f^{(m)} for m ≥ 1 with f' = c/φ
    let fder = |m: i64| -> Expr {
        let mut g = Expr::sym("c") * phi.powi(-1);
        for _ in 1..m {
            g = differentiate(&g, "phi");
        }
        g
    };
    let leading = Expr::add(
        terms
            .iter()
            .zip(&shapes)
            .filter(|(_, s)| s.weight(order) == top)
            .map(|(t, _)| {
                let mut f = vec![t.coeff.clone()];
                f.extend(t.factors.iter().map(|m| fder(order + m.order() as i64)));
                Expr::mul(f)
            })
            .collect(),
    );
    let scaled = expand(&(leading * phi.powi(top)));
    let coll = coefficients_in(&scaled, &["c"]).ok_or_else(|| SolutionError::NoBalance("non-polynomial".into()))?;
    if coll.terms.keys().any(|k| k[0] < 1 || k[0] > 2) {
        return Err(SolutionError::NoBalance(format!("unexpected leading polynomial {scaled}")));
    }
    let c1 = coll.coefficient(&[1]).as_rational().cloned().unwrap_or_default();
    let c2 = coll.coefficient(&[2]).as_rational().cloned().unwrap_or_default();
    if c2 == Rational::default() {
        return Err(SolutionError::NoBalance("no quadratic leading term".into()));
    }
    Ok(-c1 / c2)
}
