//! Closed-form solitary waves and the constructive solvers that produce them.
//!
//! Every wave in the catalog has the shape
//!
//! ```text
//! u = u₁ + A · sech²(c_x x + c_y y + c_t t + θ)
//! ```
//!
//! and is produced by a solver rather than typed in:
//!
//! * [`build_sr_solution`] — plane waves of the three similarity reductions;
//! * [`hb_solve`] — the homogeneous-balance construction `u = ∂²ₓ ln φ + u₁`;
//! * [`tanh_solve`] — the tanh method with exact elimination and a numeric
//!   multi-start cross-check;
//! * [`balance_order`] — the pole/degree balance that fixes the ansatz order.
//!
//! For a profile `g(ζ)` of one phase `ζ = c·(x, y, t)` the equation becomes
//! `L g'' + N (g²)'' + Q g'''' = 0` ([`phase_ode`]); the coefficients are
//! computed from the equation's term list, so no reduced equation is typed
//! twice.

mod balance;
mod hb;
mod sr;
mod tanh;


use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::expr::{eval_numeric, expand, fmt_rational, CompiledExpr, EvalError, Expr, Point, Rational, ZeroTestConfig, ZeroVerdict};
use crate::jet::Dir;
use crate::kpbbm::{equation_terms, residual, residual_report, Params};

pub use balance::{balance_order, dominant_balance, hb_log_coefficient, tanh_leading_degrees, BalanceKind, TermShape};
pub use hb::{hb_conditions, hb_solve, HbSolution};
pub use sr::{build_sr_solution, printed_sr};
pub use tanh::{tanh_solve, tanh_solve_seeded, tanh_system, TanhSolution, TanhSystem, TANH_SEED};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SolutionError {
    #[error("invalid λ = {lambda}: {reason}")]
    InvalidLambda { lambda: String, reason: String },
    #[error("width radicand {0} is not positive: no real sech² soliton in this regime")]
    ComplexWidth(String),
    #[error("homogeneous balance with f = ln φ requires a = 6b (got a = {a}, b = {b})")]
    BalanceViolation { a: String, b: String },
    #[error("β² = {0} is negative: no real wave number")]
    ComplexBeta(String),
    #[error("b = -1/4 makes the traveling-wave dispersion degenerate")]
    DegenerateDispersion,
    #[error("the dispersion coefficient b must be nonzero")]
    ZeroDispersion,
    #[error("the transverse coefficient k must be nonzero")]
    ZeroTransverse,
    #[error("no dominant balance: {0}")]
    NoBalance(String),
    #[error("the algebraic system has no admissible solution")]
    NoSolution,
    #[error("unexpected term structure: {0}")]
    TermStructure(String),
    #[error(transparent)]
    Eval(#[from] EvalError),
}

/// Which closed form.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Family {
    #[serde(rename = "SR1")]
    Sr1,
    #[serde(rename = "SR2")]
    Sr2,
    #[serde(rename = "SR3")]
    Sr3,
    #[serde(rename = "HB")]
    Hb,
    #[serde(rename = "TANH")]
    Tanh,
}

impl Family {
    pub const ALL: [Family; 5] = [Family::Sr1, Family::Sr2, Family::Sr3, Family::Hb, Family::Tanh];
    pub const SR: [Family; 3] = [Family::Sr1, Family::Sr2, Family::Sr3];

    pub fn name(self) -> &'static str {
        match self {
            Family::Sr1 => "SR1",
            Family::Sr2 => "SR2",
            Family::Sr3 => "SR3",
            Family::Hb => "HB",
            Family::Tanh => "TANH",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = String;
    fn from_str(s: &str) -> Result<Family, String> {
        match s.to_ascii_lowercase().as_str() {
            "sr1" => Ok(Family::Sr1),
            "sr2" => Ok(Family::Sr2),
            "sr3" => Ok(Family::Sr3),
            "hb" => Ok(Family::Hb),
            "tanh" => Ok(Family::Tanh),
            _ => Err(format!("unknown family `{s}` (expected sr1, sr2, sr3, hb or tanh)")),
        }
    }
}

/// `u₁ + A sech²(phase·(x, y, t) + offset)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WaveShape {
    pub background: Expr,
    pub amplitude: Expr,
    /// Coefficients of `x, y, t` inside `sech²`.
    pub phase: [Expr; 3],
    pub offset: Expr,
}

impl WaveShape {
    /// The expression `u₁ + A sech²(…)`.
    pub fn expression(&self) -> Expr {
        let arg = Expr::add(
            Dir::ALL.iter().map(|d| &self.phase[d.index()] * d.var()).chain([self.offset.clone()]).collect(),
        );
        &self.background + &self.amplitude * Expr::sech(arg).powi(2)
    }
}

/// The printed form of a closed solution whose residual does not vanish.
#[derive(Debug, Clone, Serialize)]
pub struct Discrepancy {
    /// `None` when the printed formula is not even real (negative radicand).
    pub printed_expression: Option<Expr>,
    pub printed_amplitude: Expr,
    pub printed_verdict: Option<ZeroVerdict>,
    pub note: String,
}

/// A closed-form solution with everything needed to re-check it.
#[derive(Debug, Clone, Serialize)]
pub struct SolutionSpec {
    pub family: Family,
    pub params: Params,
    /// Free constants (`lambda`, `alpha`, `u1`, `theta0`, `omega`, …) as text.
    pub free: BTreeMap<String, String>,
    pub expression: Expr,
    /// `None` for the identically zero solution.
    pub wave: Option<WaveShape>,
    pub discrepancy: Option<Discrepancy>,
    pub notes: Vec<String>,
}

impl SolutionSpec {
    /// The PDE residual of [`SolutionSpec::expression`].
    pub fn residual(&self) -> Expr {
        residual(&self.expression, &self.params)
    }

    /// Two-tier zero test of the residual.
    pub fn verdict(&self, cfg: &ZeroTestConfig) -> ZeroVerdict {
        crate::expr::zero_test(&self.residual(), cfg)
    }
}

/// `L g'' + N (g²)'' + Q g''''` for `u = g(c·(x, y, t))`.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseOde {
    pub second: Expr,
    pub quadratic: Expr,
    pub fourth: Expr,
}

/// Reduce the equation to a profile equation along the phase `c`.
///
/// A term with factors `∂^{J₁}u ⋯ ∂^{J_n}u` becomes `Π c^{J_i} · g^{(|J₁|)} ⋯`;
/// the two quadratic terms must combine into a multiple of `(g²)''`.
pub fn phase_ode(c: &[Expr; 3], p: &Params) -> Result<PhaseOde, SolutionError> {
    let (mut second, mut fourth) = (Vec::new(), Vec::new());
    let (mut gx2, mut ggxx) = (Vec::new(), Vec::new());
    for t in equation_terms(p) {
        let weight = Expr::mul(
            std::iter::once(t.coeff.clone())
                .chain(t.factors.iter().flat_map(|m| Dir::ALL.iter().map(move |d| c[d.index()].powi(m.count(*d) as i64))))
                .collect(),
        );
        let orders: Vec<usize> = t.factors.iter().map(|m| m.order()).collect();
        match orders.as_slice() {
            [2] => second.push(weight),
            [4] => fourth.push(weight),
            [1, 1] => gx2.push(weight),
            [0, 2] | [2, 0] => ggxx.push(weight),
            other => return Err(SolutionError::TermStructure(format!("factor orders {other:?}"))),
        }
    }
    let (gx2, ggxx) = (expand(&Expr::add(gx2)), expand(&Expr::add(ggxx)));
    if gx2 != ggxx {
        return Err(SolutionError::TermStructure(format!("g'² coefficient {gx2} differs from g·g'' coefficient {ggxx}")));
    }
    Ok(PhaseOde {
        second: expand(&Expr::add(second)),
        quadratic: expand(&(gx2 * Expr::frac(1, 2))),
        fourth: expand(&Expr::add(fourth)),
    })
}

/// Amplitude and squared wave number of `A sech²(κζ)` solving the twice
/// integrated profile equation `L g + N g² + Q g'' = 0`:
/// `κ² = −L/(4Q)`, `A = −3L/(2N)`.
pub fn sech2_constants(ode: &PhaseOde) -> (Expr, Expr) {
    let kappa2 = expand(&(-&ode.second * (Expr::int(4) * &ode.fourth).recip()));
    let amp = expand(&(Expr::int(-3) * &ode.second * (Expr::int(2) * &ode.quadratic).recip()));
    (amp, kappa2)
}

/// Amplitude, width and speed of a wave.
#[derive(Debug, Clone, Serialize)]
pub struct WaveDiagnostics {
    pub amplitude: Expr,
    pub amplitude_value: f64,
    /// `1 / c_x`, the reciprocal x-coefficient inside `sech`.
    pub width_scale: f64,
    /// `−c_t / c_x`, the speed along `x` at fixed `y`.
    pub velocity: f64,
    pub background: f64,
    /// Numeric peak displacement from the background, `u(peak) − u₁`.
    pub peak_displacement: f64,
}

fn value(e: &Expr) -> Result<f64, SolutionError> {
    Ok(eval_numeric(e, &Point::new())?)
}

/// Diagnostics of a solution; the zero solution has amplitude 0 and no width.
pub fn diagnostics(s: &SolutionSpec) -> Result<WaveDiagnostics, SolutionError> {
    let Some(w) = &s.wave else {
        return Ok(WaveDiagnostics {
            amplitude: Expr::zero(),
            amplitude_value: 0.0,
            width_scale: f64::INFINITY,
            velocity: 0.0,
            background: 0.0,
            peak_displacement: 0.0,
        });
    };
    let (cx, ct) = (value(&w.phase[0])?, value(&w.phase[2])?);
    let background = value(&w.background)?;
    // the crest passes x = −offset / c_x at y = t = 0
    let x0 = -value(&w.offset)? / cx;
    let pt: Point = [("x".to_string(), x0), ("y".to_string(), 0.0), ("t".to_string(), 0.0)].into();
    let peak = eval_numeric(&s.expression, &pt)?;
    Ok(WaveDiagnostics {
        amplitude: w.amplitude.clone(),
        amplitude_value: value(&w.amplitude)?,
        width_scale: 1.0 / cx,
        velocity: -ct / cx,
        background,
        peak_displacement: peak - background,
    })
}

/// Symbolic verdict plus a numeric sweep of the exact residual.
#[derive(Debug, Clone, Serialize)]
pub struct ResidualCheck {
    pub verdict: ZeroVerdict,
    pub max_abs_sampled: f64,
    /// Max |residual| on an `n × n` grid over `[−10, 10]²` at `t = 0.3`.
    pub grid_max_abs: f64,
    pub grid_points: usize,
}

impl ResidualCheck {
    pub fn passes(&self) -> bool {
        self.verdict.is_zero()
    }
}

/// Check a solution symbolically (rewrite tier, then sampling tier) and on a grid.
pub fn check_solution(s: &SolutionSpec, cfg: &ZeroTestConfig, n: usize) -> Result<ResidualCheck, SolutionError> {
    let res = s.residual();
    let report = residual_report(&res, cfg);
    let grid_max_abs = grid_max_abs(&res, n, 0.3)?;
    Ok(ResidualCheck { verdict: report.verdict, max_abs_sampled: report.max_abs_sampled, grid_max_abs, grid_points: n * n })
}

fn grid_max_abs(res: &Expr, n: usize, t: f64) -> Result<f64, SolutionError> {
    let f = CompiledExpr::new(res, &["x", "y", "t"])?;
    let mut worst: f64 = 0.0;
    for i in 0..n {
        for j in 0..n {
            let x = -10.0 + 20.0 * i as f64 / (n - 1) as f64;
            let y = -10.0 + 20.0 * j as f64 / (n - 1) as f64;
            worst = worst.max(f.eval(&[x, y, t])?.abs());
        }
    }
    Ok(worst)
}

/// Samples `(x, u(x, y, t))` of a solution on `n` equispaced points.
pub fn profile(s: &SolutionSpec, y: f64, t: f64, xmin: f64, xmax: f64, n: usize) -> Result<Vec<(f64, f64)>, SolutionError> {
    let f = CompiledExpr::new(&s.expression, &["x", "y", "t"])?;
    let step = if n > 1 { (xmax - xmin) / (n - 1) as f64 } else { 0.0 };
    (0..n)
        .map(|i| {
            let x = xmin + step * i as f64;
            Ok((x, f.eval(&[x, y, t])?))
        })
        .collect()
}

/// Random valid parameters for property checks: `a ≠ 0`, `b > 0`, `k ≠ 0`.
pub fn random_params(rng: &mut ChaCha8Rng) -> Params {
    let r = |rng: &mut ChaCha8Rng, lo: i64, hi: i64| crate::expr::rat(rng.gen_range(lo..=hi), rng.gen_range(1..=4));
    loop {
        let (a, b, k) = (r(rng, -8, 8), r(rng, 1, 8), r(rng, -8, 8));
        if a != Rational::from_integer(0.into()) && k != Rational::from_integer(0.into()) {
            return Params::new(a, b, k).expect("a is nonzero");
        }
    }
}

/// A seeded generator for solver cross-checks.
pub fn seeded(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub(crate) fn rtext(r: &Rational) -> String {
    fmt_rational(r)
}
