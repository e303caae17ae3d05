//! Floating-point verification layer.
//!
//! * [`grid_residual`] — the equation evaluated on a closed-form solution with
//!   second-order central differences, plus convergence-order estimation;
//! * [`integrate`] — a pseudo-spectral method-of-lines integrator on a doubly
//!   periodic box;
//! * [`measure_speed`] — sub-grid peak tracking over a list of snapshots;
//! * [`soliton_run`] — an exact plane wave evolved by the integrator and
//!   compared with its own translate.
//!
//! Boundary conditions are periodic throughout; solitary waves are periodized
//! by summing their images, which is exact up to the (exponentially small)
//! overlap of the tails.

mod fd;
mod run;
mod spectral;
mod tracking;

use std::fmt::Write as _;

use serde::Serialize;
use thiserror::Error;

use crate::expr::{CompiledExpr, EvalError, Expr};
use crate::kpbbm::Params;

pub use fd::{convergence_order, grid_residual, Convergence, GridResidual, ResidualGrid};
pub use run::{analytic_history, periodized, soliton_run, RunManifest, SolitonRun, SolitonRunConfig};
pub use spectral::{integrate, integrate_with, rk4_step_difference, IntegrateConfig, SimRun, Stability, TimeScheme};
pub use tracking::{measure_speed, peak_position};

/// Smallest admissible number of grid points per direction.
pub const MIN_POINTS: usize = 16;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum NumericsError {
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error("grid needs at least {MIN_POINTS} points per direction, got {nx} × {ny}")]
    GridTooSmall { nx: usize, ny: usize },
    #[error("grid has {got} values, expected {expected}")]
    GridShape { expected: usize, got: usize },
    #[error("invalid parameter: {0}")]
    InvalidInput(String),
    #[error("symbol 1 − bξ² = {symbol:e} nearly vanishes at resolved wavenumber ξ = {xi}")]
    SingularSymbol { xi: f64, symbol: f64 },
    #[error("solution norm {norm:e} exceeded the blow-up threshold at t = {time}")]
    Instability { time: f64, norm: f64 },
    #[error("no dominant peak: {0}")]
    NoPeak(String),
    #[error("speed measurement needs at least 5 snapshots, got {0}")]
    TooFewSnapshots(usize),
    #[error("solution has no plane-wave shape: {0}")]
    NotAWave(String),
}

/// The equation's coefficients as doubles.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SimParams {
    pub a: f64,
    pub b: f64,
    pub k: f64,
}

impl From<&Params> for SimParams {
    fn from(p: &Params) -> SimParams {
        let (a, b, k) = p.to_f64();
        SimParams { a, b, k }
    }
}

/// Doubly periodic samples on `[−lx/2, lx/2) × [−ly/2, ly/2)`, stored row by
/// row (`values[j·nx + i]` at `(xᵢ, yⱼ)`).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Grid2D {
    pub nx: usize,
    pub ny: usize,
    pub lx: f64,
    pub ly: f64,
    pub values: Vec<f64>,
}

impl Grid2D {
    pub fn new(nx: usize, ny: usize, lx: f64, ly: f64, values: Vec<f64>) -> Result<Grid2D, NumericsError> {
        if nx < MIN_POINTS || ny < MIN_POINTS {
            return Err(NumericsError::GridTooSmall { nx, ny });
        }
        if !(lx > 0.0 && ly > 0.0 && lx.is_finite() && ly.is_finite()) {
            return Err(NumericsError::InvalidInput(format!("domain lengths must be positive, got {lx} × {ly}")));
        }
        if values.len() != nx * ny {
            return Err(NumericsError::GridShape { expected: nx * ny, got: values.len() });
        }
        Ok(Grid2D { nx, ny, lx, ly, values })
    }

    pub fn constant(nx: usize, ny: usize, lx: f64, ly: f64, c: f64) -> Result<Grid2D, NumericsError> {
        Grid2D::new(nx, ny, lx, ly, vec![c; nx * ny])
    }

    /// Samples `f(x, y)` at the grid nodes.
    pub fn from_fn(
        nx: usize,
        ny: usize,
        lx: f64,
        ly: f64,
        mut f: impl FnMut(f64, f64) -> Result<f64, NumericsError>,
    ) -> Result<Grid2D, NumericsError> {
        let mut values = Vec::with_capacity(nx * ny);
        for j in 0..ny {
            for i in 0..nx {
                values.push(f(-lx / 2.0 + lx * i as f64 / nx as f64, -ly / 2.0 + ly * j as f64 / ny as f64)?);
            }
        }
        Grid2D::new(nx, ny, lx, ly, values)
    }

    /// Samples a closed-form `u(x, y, t)` at time `t`.
    pub fn sample(expr: &Expr, nx: usize, ny: usize, lx: f64, ly: f64, t: f64) -> Result<Grid2D, NumericsError> {
        let f = CompiledExpr::new(expr, &["x", "y", "t"])?;
        Grid2D::from_fn(nx, ny, lx, ly, |x, y| Ok(f.eval(&[x, y, t])?))
    }

    pub fn dx(&self) -> f64 {
        self.lx / self.nx as f64
    }

    pub fn dy(&self) -> f64 {
        self.ly / self.ny as f64
    }

    pub fn x(&self, i: usize) -> f64 {
        -self.lx / 2.0 + self.dx() * i as f64
    }

    pub fn y(&self, j: usize) -> f64 {
        -self.ly / 2.0 + self.dy() * j as f64
    }

    pub fn at(&self, i: usize, j: usize) -> f64 {
        self.values[j * self.nx + i]
    }

    pub fn row(&self, j: usize) -> &[f64] {
        &self.values[j * self.nx..(j + 1) * self.nx]
    }

    /// The row through `y = 0`.
    pub fn center_row(&self) -> usize {
        self.ny / 2
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Mean over `x` of each row.
    pub fn row_means(&self) -> Vec<f64> {
        (0..self.ny).map(|j| self.row(j).iter().sum::<f64>() / self.nx as f64).collect()
    }

    /// Max |self − other| over the grid.
    pub fn max_diff(&self, other: &Grid2D) -> Result<f64, NumericsError> {
        if self.values.len() != other.values.len() {
            return Err(NumericsError::GridShape { expected: self.values.len(), got: other.values.len() });
        }
        Ok(self.values.iter().zip(&other.values).fold(0.0, |m, (a, b)| m.max((a - b).abs())))
    }
}

/// One snapshot of a run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimState {
    pub grid: Grid2D,
    pub time: f64,
    pub params: SimParams,
    pub dt: f64,
}

/// CSV with header `t,x,y,u`, one line per grid node and snapshot; with
/// `center_only` just the row through `y = 0` is written.
pub fn snapshots_csv(history: &[SimState], center_only: bool) -> String {
    let mut out = String::from("t,x,y,u\n");
    for s in history {
        let g = &s.grid;
        let rows = if center_only { g.center_row()..g.center_row() + 1 } else { 0..g.ny };
        for j in rows {
            for i in 0..g.nx {
                let _ = writeln!(out, "{},{},{},{}", s.time, g.x(i), g.y(j), g.at(i, j));
            }
        }
    }
    out
}
