//! Finite-difference residual of a closed-form solution.
//!
//! Spatial derivatives use second-order central stencils; the time
//! derivative is taken exactly from the closed form (it is analytic in `t`),
//! and the mixed terms `u_xt`, `u_xxxt` apply the spatial stencils to that
//! exact `u_t`.

use serde::Serialize;

use crate::expr::{differentiate, CompiledExpr, Expr};
use crate::kpbbm::Params;

use super::{NumericsError, SimParams};

/// Sample rectangle `[x.0, x.1] × [y.0, y.1]` at time `t`; a degenerate `y`
/// range gives a single row.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ResidualGrid {
    pub x: (f64, f64),
    pub y: (f64, f64),
    pub t: f64,
}

impl Default for ResidualGrid {
    fn default() -> Self {
        ResidualGrid { x: (-20.0, 20.0), y: (-1.0, 1.0), t: 0.0 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GridResidual {
    pub h: f64,
    pub max_abs: f64,
    /// Discrete `L²` norm `(Σ r² · cell area)^{1/2}`.
    pub l2: f64,
    pub points: usize,
}

/// Residuals at `h` and `h/2` and the observed order `log₂(max_h / max_{h/2})`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Convergence {
    pub coarse: GridResidual,
    pub fine: GridResidual,
    pub ratio: f64,
    pub order: f64,
}

fn nodes(range: (f64, f64), h: f64) -> Vec<f64> {
    let n = ((range.1 - range.0) / h).round().max(0.0) as usize;
    (0..=n).map(|i| range.0 + h * i as f64).collect()
}

/// Evaluate the equation on `u` with central differences of spacing `h`.
pub fn grid_residual(u: &Expr, p: &Params, g: &ResidualGrid, h: f64) -> Result<GridResidual, NumericsError> {
    if !(h > 0.0 && h.is_finite()) {
        return Err(NumericsError::InvalidInput(format!("spacing must be positive, got {h}")));
    }
    let SimParams { a, b, k } = p.into();
    let vars = ["x", "y", "t"];
    let f = CompiledExpr::new(u, &vars)?;
    let ft = CompiledExpr::new(&differentiate(u, "t"), &vars)?;
    let t = g.t;
    let xs = nodes(g.x, h);
    let ys = nodes(g.y, h);
    let (mut worst, mut sq) = (0.0f64, 0.0f64);
    for &y in &ys {
        for &x in &xs {
            let u = |dx: f64, dy: f64| f.eval(&[x + dx * h, y + dy * h, t]);
            let ut = |dx: f64| ft.eval(&[x + dx * h, y, t]);
            let (u0, ue, uw, un, us) = (u(0.0, 0.0)?, u(1.0, 0.0)?, u(-1.0, 0.0)?, u(0.0, 1.0)?, u(0.0, -1.0)?);
            let ux = (ue - uw) / (2.0 * h);
            let uxx = (ue - 2.0 * u0 + uw) / (h * h);
            let uyy = (un - 2.0 * u0 + us) / (h * h);
            let (te, tw, tee, tww) = (ut(1.0)?, ut(-1.0)?, ut(2.0)?, ut(-2.0)?);
            let uxt = (te - tw) / (2.0 * h);
            let uxxxt = (tee - 2.0 * te + 2.0 * tw - tww) / (2.0 * h * h * h);
            let r = uxt + uxx + 2.0 * a * (ux * ux + u0 * uxx) + b * uxxxt + k * uyy;
            worst = worst.max(r.abs());
            sq += r * r;
        }
    }
    let cell = h * if ys.len() > 1 { h } else { 1.0 };
    Ok(GridResidual { h, max_abs: worst, l2: (sq * cell).sqrt(), points: xs.len() * ys.len() })
}

/// Residual at `h` and `h/2` with the measured convergence order.
pub fn convergence_order(u: &Expr, p: &Params, g: &ResidualGrid, h: f64) -> Result<Convergence, NumericsError> {
    let coarse = grid_residual(u, p, g, h)?;
    let fine = grid_residual(u, p, g, h / 2.0)?;
    let ratio = coarse.max_abs / fine.max_abs;
    Ok(Convergence { coarse, fine, ratio, order: ratio.log2() })
}
