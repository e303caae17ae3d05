//! Homogeneous balance: `u = ∂²ₓ ln φ + u₁`, `φ = 1 + exp(θ)`,
//! `θ = αx + βy + αt + θ₀`.
//!
//! With `Y = tanh(θ/2)` one has `∂_θ ln φ = (1 + Y)/2` and `∂_θ = ½(1 − Y²) d/dY`,
//! so the substituted equation is a polynomial in `Y` whose coefficients are
//! linear in `β²`. Requiring all of them to vanish determines `β²`; the
//! logarithmic form itself needs `a = 6b` ([`hb_log_coefficient`]).

use std::collections::BTreeMap;

use serde::Serialize;

use crate::expr::{coefficients_in, differentiate, expand, rat, rational_serde, Expr, Rational};
use crate::kpbbm::Params;
use crate::linalg::QMatrix;

use super::{hb_log_coefficient, phase_ode, rtext, SolutionError, SolutionSpec, WaveShape};
use super::Family;

/// Output of [`hb_solve`]: both branches `β = ±√β²`.
#[derive(Debug, Clone, Serialize)]
pub struct HbSolution {
    pub plus: SolutionSpec,
    pub minus: SolutionSpec,
    #[serde(with = "rational_serde")]
    pub beta_squared: Rational,
    /// `β² = −(2α² + 12bα²u₁ + bα⁴)/k`, the closed formula, for comparison.
    #[serde(with = "rational_serde")]
    pub formula_beta_squared: Rational,
    #[serde(with = "rational_serde")]
    pub log_coefficient: Rational,
    /// The five algebraic conditions evaluated at the solution (constant `u₁`).
    pub conditions: Vec<String>,
    /// The coefficient equations in `Y` that fixed `β²`.
    pub derived_equations: Vec<String>,
}

/// The five algebraic conditions of the construction with `u₁` constant
/// (`u₁ₓ = u₁ₓₓ = 0`), in the order they are usually listed.
pub fn hb_conditions(alpha: &Rational, beta2: &Rational, u1: &Rational, p: &Params) -> [Rational; 5] {
    let (a2, b, k) = (alpha * alpha, &p.b, &p.k);
    let a4 = &a2 * &a2;
    let a6 = &a4 * &a2;
    let base = |m: i64| -> Rational {
        let m = rat(m, 1);
        &m * rat(2, 1) * &a4 + &m * rat(12, 1) * b * &a4 * u1 + &m * b * &a6 + &m * k * &a2 * beta2
    };
    // the u₁ₓ, u₁ₓₓ terms and the equation for u₁ itself vanish for constant u₁
    [base(1), base(6), base(7), base(1), Rational::from_integer(0.into())]
}

pub(super) fn derive_beta_squared(alpha: &Rational, u1: &Rational, p: &Params) -> Result<(Rational, Vec<String>), SolutionError> {
    let y = Expr::sym("Y");
    let al = Expr::num(alpha.clone());
    let c = [al.clone(), Expr::sym("beta"), al.clone()];
    let ode = phase_ode(&c, p)?;
    let d = |g: &Expr| expand(&(Expr::frac(1, 2) * (Expr::one() - y.powi(2)) * differentiate(g, "Y")));
    // u = α ∂_θ(α ∂_θ ln φ) + u₁
    let g = expand(&(&al * d(&(&al * Expr::frac(1, 2) * (Expr::one() + &y))) + Expr::num(u1.clone())));
    let g2 = d(&d(&g));
    let res = expand(&(&ode.second * &g2 + &ode.quadratic * d(&d(&expand(&g.powi(2)))) + &ode.fourth * d(&d(&g2))));
    let coll = coefficients_in(&res, &["Y", "beta"]).ok_or_else(|| SolutionError::TermStructure("non-polynomial".into()))?;
    let mut rows: BTreeMap<i64, (Rational, Rational)> = BTreeMap::new();
    for (key, v) in &coll.terms {
        let v = v.as_rational().cloned().ok_or_else(|| SolutionError::TermStructure(format!("coefficient {v}")))?;
        let e = rows.entry(key[0]).or_default();
        match key[1] {
            0 => e.0 = v,
            2 => e.1 = v,
            other => return Err(SolutionError::TermStructure(format!("β^{other} in the balance equations"))),
        }
    }
    let text = rows
        .iter()
        .map(|(n, (c0, c2))| format!("Y^{n}: {} + ({})·β² = 0", rtext(c0), rtext(c2)))
        .collect();
    let m = QMatrix::from_rows(rows.values().map(|(_, c2)| vec![c2.clone()]).collect());
    let rhs: Vec<Rational> = rows.values().map(|(c0, _)| -c0.clone()).collect();
    if m.rank() == 0 {
        return Err(SolutionError::NoSolution);
    }
    let sol = m.solve(&rhs).ok_or(SolutionError::NoSolution)?;
    Ok((sol[0].clone(), text))
}

fn branch(alpha: &Rational, u1: &Rational, theta0: &Rational, beta: Expr, p: &Params, sign: &str) -> SolutionSpec {
    let al = Expr::num(alpha.clone());
    let th = Expr::num(theta0.clone());
    let theta = &al * Expr::sym("x") + &beta * Expr::sym("y") + &al * Expr::sym("t") + &th;
    let expression = al.powi(2) * (Expr::int(2) + Expr::int(2) * Expr::cosh(theta)).recip() + Expr::num(u1.clone());
    let half = Expr::frac(1, 2);
    let wave = WaveShape {
        background: Expr::num(u1.clone()),
        amplitude: expand(&(al.powi(2) * Expr::frac(1, 4))),
        phase: [expand(&(&half * &al)), expand(&(&half * &beta)), expand(&(&half * &al))],
        offset: expand(&(&half * &th)),
    };
    let mut free = BTreeMap::new();
    free.insert("alpha".into(), rtext(alpha));
    free.insert("u1".into(), rtext(u1));
    free.insert("theta0".into(), rtext(theta0));
    free.insert("beta".into(), beta.to_string());
    SolutionSpec {
        family: Family::Hb,
        params: p.clone(),
        free,
        expression,
        wave: Some(wave),
        discrepancy: None,
        notes: vec![format!("branch β = {sign}√β²")],
    }
}

/// Construct the homogeneous-balance wave, returning both `β` branches.
pub fn hb_solve(alpha: &Rational, u1: &Rational, theta0: &Rational, p: &Params) -> Result<HbSolution, SolutionError> {
    let zero = Rational::from_integer(0.into());
    if p.b == zero {
        return Err(SolutionError::ZeroDispersion);
    }
    if p.k == zero {
        return Err(SolutionError::ZeroTransverse);
    }
    if *alpha == zero {
        return Err(SolutionError::TermStructure("α = 0 gives the constant state only".into()));
    }
    let log_coefficient = hb_log_coefficient(p)?;
    if log_coefficient != rat(1, 1) {
        return Err(SolutionError::BalanceViolation { a: rtext(&p.a), b: rtext(&p.b) });
    }
    let (beta_squared, derived_equations) = derive_beta_squared(alpha, u1, p)?;
    let a2 = alpha * alpha;
    let formula_beta_squared = -(rat(2, 1) * &a2 + rat(12, 1) * &p.b * &a2 * u1 + &p.b * &a2 * &a2) / &p.k;
    if beta_squared < zero {
        return Err(SolutionError::ComplexBeta(rtext(&beta_squared)));
    }
    let beta = Expr::sqrt(Expr::num(beta_squared.clone()));
    let conditions = hb_conditions(alpha, &beta_squared, u1, p).iter().map(rtext).collect();
    Ok(HbSolution {
        plus: branch(alpha, u1, theta0, beta.clone(), p, "+"),
        minus: branch(alpha, u1, theta0, -beta, p, "−"),
        beta_squared,
        formula_beta_squared,
        log_coefficient,
        conditions,
        derived_equations,
    })
}
