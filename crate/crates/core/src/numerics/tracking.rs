//! Peak tracking along the row through `y = 0`.
//!
//! The crest is the node of largest deviation from the row median (so that
//! depressions are tracked as well as elevations), refined by the vertex of
//! the parabola through it and its two periodic neighbours.

use super::{NumericsError, SimState};

/// Deviations smaller than this are treated as a flat field.
const FLAT: f64 = 1e-10;

fn median(v: &[f64]) -> f64 {
    let mut s = v.to_vec();
    s.sort_by(|a, b| a.total_cmp(b));
    let n = s.len();
    if n % 2 == 1 {
        s[n / 2]
    } else {
        0.5 * (s[n / 2 - 1] + s[n / 2])
    }
}

/// Sub-grid crest position on the center row of `s`.
pub fn peak_position(s: &SimState) -> Result<f64, NumericsError> {
    let g = &s.grid;
    let row = g.row(g.center_row());
    let base = median(row);
    let (imax, dev) = row
        .iter()
        .enumerate()
        .map(|(i, v)| (i, v - base))
        .max_by(|a, b| a.1.abs().total_cmp(&b.1.abs()))
        .expect("rows are non-empty");
    if !(dev.abs() > FLAT) {
        return Err(NumericsError::NoPeak(format!("largest deviation {dev:e} at t = {}", s.time)));
    }
    let n = g.nx;
    let (um, u0, up) = (row[(imax + n - 1) % n], row[imax], row[(imax + 1) % n]);
    let curv = um - 2.0 * u0 + up;
    let shift = if curv != 0.0 { (0.5 * (um - up) / curv).clamp(-0.5, 0.5) } else { 0.0 };
    Ok(g.x(imax) + shift * g.dx())
}

/// Least-squares slope of the crest position against time, with periodic
/// unwrapping between consecutive snapshots.
pub fn measure_speed(history: &[SimState]) -> Result<f64, NumericsError> {
    if history.len() < 5 {
        return Err(NumericsError::TooFewSnapshots(history.len()));
    }
    let lx = history[0].grid.lx;
    let mut xs: Vec<f64> = Vec::with_capacity(history.len());
    for s in history {
        let mut x = peak_position(s)?;
        if let Some(&prev) = xs.last() {
            x -= lx * ((x - prev) / lx).round();
        }
        xs.push(x);
    }
    let ts: Vec<f64> = history.iter().map(|s| s.time).collect();
    let n = ts.len() as f64;
    let (mt, mx) = (ts.iter().sum::<f64>() / n, xs.iter().sum::<f64>() / n);
    let (mut sxy, mut sxx) = (0.0, 0.0);
    for (t, x) in ts.iter().zip(&xs) {
        sxy += (t - mt) * (x - mx);
        sxx += (t - mt) * (t - mt);
    }
    if sxx == 0.0 {
        return Err(NumericsError::InvalidInput("snapshots share a single time".into()));
    }
    Ok(sxy / sxx)
}
