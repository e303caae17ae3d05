//! Pseudo-spectral method of lines on a doubly periodic box.
//!
//! In Fourier variables `(ξ, η)` the equation
//! `(u_t + u_x + a(u²)_x + b u_xxt)_x + k u_yy = 0` reads
//!
//! ```text
//! iξ(1 − bξ²) û_t = ξ² û + aξ² (u²)^ + kη² û ,
//! ```
//!
//! i.e. `û_t = L û + N(u)` with `L = −i(ξ² + kη²)/(ξ(1 − bξ²))` and
//! `N = −i aξ (u²)^ / (1 − bξ²)`. Modes with `ξ = 0` are not determined by
//! the equation and are held fixed; the Nyquist column is treated the same
//! way because `∂ₓ` has no real symbol there. `L` is purely imaginary and can
//! be arbitrarily large for small `ξ` and large `η`, so the default scheme is
//! exponential time differencing RK4, which integrates the linear part
//! exactly; RK4 on the integrating-factor variable `e^{−Lt} û` and plain RK4
//! are available for comparison.

use std::sync::Arc;

use rustfft::num_complex::Complex64;
use rustfft::{Fft, FftPlanner};
use serde::Serialize;

use super::{Grid2D, NumericsError, SimParams, SimState};

/// Symbol magnitude below which a resolved wavenumber counts as singular.
pub const SYMBOL_FLOOR: f64 = 1e-8;
/// RMS norm beyond which a run is declared unstable.
pub const BLOW_UP: f64 = 1e6;
/// Stability interval of classical RK4 along the imaginary axis (≈ 2√2).
const RK4_IMAG_LIMIT: f64 = 2.8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum TimeScheme {
    /// Classical RK4 on `û_t = L û + N(u)`.
    Rk4,
    /// Classical RK4 on `e^{−Lt} û` (Lawson's integrating-factor RK4).
    IntegratingFactorRk4,
    /// Exponential time differencing RK4 (Cox–Matthews), with the
    /// `φ`-functions evaluated by contour averaging.
    Etdrk4,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IntegrateConfig {
    pub t_end: f64,
    pub dt: f64,
    pub scheme: TimeScheme,
    /// Number of equal intervals between recorded snapshots (0 records only
    /// the initial and final states).
    pub snapshots: usize,
}

impl IntegrateConfig {
    pub fn new(t_end: f64, dt: f64) -> IntegrateConfig {
        IntegrateConfig { t_end, dt, scheme: TimeScheme::Etdrk4, snapshots: 0 }
    }
}

/// Stiffness estimate recorded with every run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Stability {
    /// `max |L|` over the resolved modes.
    pub linear_rate: f64,
    /// `max |aξ/(1 − bξ²)| · 2 max|u₀|`, the frozen-coefficient rate of `N`.
    pub nonlinear_rate: f64,
    /// Step size below which the chosen scheme is linearly stable.
    pub dt_limit: f64,
    /// `min |1 − bξ²|` over the resolved `ξ ≠ 0`.
    pub min_symbol: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct SimRun {
    /// Initial state, intermediate snapshots and final state, in time order.
    pub history: Vec<SimState>,
    pub stability: Stability,
    pub steps: usize,
    /// The step actually used (`t_end / steps`).
    pub dt: f64,
    pub scheme: TimeScheme,
}

impl SimRun {
    pub fn final_state(&self) -> &SimState {
        self.history.last().expect("history holds at least the initial state")
    }
}

fn wavenumbers(n: usize, l: f64) -> Vec<f64> {
    (0..n)
        .map(|m| {
            let m = if m < n / 2 { m as f64 } else { m as f64 - n as f64 };
            2.0 * std::f64::consts::PI * m / l
        })
        .collect()
}

/// Per-mode ETDRK4 coefficients for one step size.
struct EtdCoefficients {
    e: Vec<Complex64>,
    e2: Vec<Complex64>,
    /// `(e^{z/2} − 1)/L`.
    q: Vec<Complex64>,
    f1: Vec<Complex64>,
    f2: Vec<Complex64>,
    f3: Vec<Complex64>,
}

/// Points on the unit circle used to evaluate the `φ`-functions without
/// cancellation near `z = 0`.
const CONTOUR_POINTS: usize = 32;

impl EtdCoefficients {
    fn new(lin: &[f64], h: f64) -> EtdCoefficients {
        let n = lin.len();
        let mut c = EtdCoefficients {
            e: Vec::with_capacity(n),
            e2: Vec::with_capacity(n),
            q: Vec::with_capacity(n),
            f1: Vec::with_capacity(n),
            f2: Vec::with_capacity(n),
            f3: Vec::with_capacity(n),
        };
        let roots: Vec<Complex64> = (0..CONTOUR_POINTS)
            .map(|j| Complex64::new(0.0, std::f64::consts::PI * (j as f64 + 0.5) / CONTOUR_POINTS as f64).exp())
            .collect();
        for &l in lin {
            let z = Complex64::new(0.0, l * h);
            let (mut q, mut f1, mut f2, mut f3) = (Complex64::default(), Complex64::default(), Complex64::default(), Complex64::default());
            // nodes placed symmetrically about the real axis around z
            for r in &roots {
                for w in [z + r, z + r.conj()] {
                    let ew = w.exp();
                    let (w2, w3) = (w * w, w * w * w);
                    q += ((w / 2.0).exp() - 1.0) / w;
                    f1 += (-4.0 - w + ew * (4.0 - 3.0 * w + w2)) / w3;
                    f2 += (2.0 + w + ew * (w - 2.0)) / w3;
                    f3 += (-4.0 - 3.0 * w - w2 + ew * (4.0 - w)) / w3;
                }
            }
            let m = (2 * CONTOUR_POINTS) as f64;
            c.e.push(z.exp());
            c.e2.push((z / 2.0).exp());
            c.q.push(q * (h / m));
            c.f1.push(f1 * (h / m));
            c.f2.push(f2 * (h / m));
            c.f3.push(f3 * (h / m));
        }
        c
    }
}

struct Spectral {
    nx: usize,
    ny: usize,
    fx: Arc<dyn Fft<f64>>,
    ix: Arc<dyn Fft<f64>>,
    fy: Arc<dyn Fft<f64>>,
    iy: Arc<dyn Fft<f64>>,
    /// `L = i · lin`.
    lin: Vec<f64>,
    /// `N = i · nl · (u²)^`.
    nl: Vec<f64>,
    stability_base: (f64, f64, f64),
}

impl Spectral {
    fn new(g: &Grid2D, p: SimParams) -> Result<Spectral, NumericsError> {
        let (nx, ny) = (g.nx, g.ny);
        let xi = wavenumbers(nx, g.lx);
        let eta = wavenumbers(ny, g.ly);
        let mut min_symbol = f64::INFINITY;
        for (m, &x) in xi.iter().enumerate() {
            if m == 0 {
                continue;
            }
            let s = 1.0 - p.b * x * x;
            if s.abs() < SYMBOL_FLOOR {
                return Err(NumericsError::SingularSymbol { xi: x.abs(), symbol: s });
            }
            min_symbol = min_symbol.min(s.abs());
        }
        let frozen = |m: usize| m == 0 || (nx % 2 == 0 && m == nx / 2);
        let mut lin = vec![0.0; nx * ny];
        let mut nl = vec![0.0; nx * ny];
        for j in 0..ny {
            for m in 0..nx {
                if frozen(m) {
                    continue;
                }
                let (x, e) = (xi[m], eta[j]);
                let s = 1.0 - p.b * x * x;
                lin[j * nx + m] = -(x * x + p.k * e * e) / (x * s);
                nl[j * nx + m] = -p.a * x / s;
            }
        }
        let lin_rate = lin.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let nl_rate = nl.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let mut planner = FftPlanner::new();
        Ok(Spectral {
            nx,
            ny,
            fx: planner.plan_fft_forward(nx),
            ix: planner.plan_fft_inverse(nx),
            fy: planner.plan_fft_forward(ny),
            iy: planner.plan_fft_inverse(ny),
            lin,
            nl,
            stability_base: (lin_rate, nl_rate, min_symbol),
        })
    }

    fn stability(&self, scheme: TimeScheme, max_u: f64) -> Stability {
        let (linear_rate, nl, min_symbol) = self.stability_base;
        let nonlinear_rate = 2.0 * nl * max_u;
        let rate = match scheme {
            TimeScheme::Rk4 => linear_rate + nonlinear_rate,
            TimeScheme::IntegratingFactorRk4 | TimeScheme::Etdrk4 => nonlinear_rate,
        };
        let dt_limit = if rate > 0.0 { RK4_IMAG_LIMIT / rate } else { f64::INFINITY };
        Stability { linear_rate, nonlinear_rate, dt_limit, min_symbol }
    }

    fn fft2(&self, data: &mut [Complex64], inverse: bool) {
        let (nx, ny) = (self.nx, self.ny);
        let (row, col) = if inverse { (&self.ix, &self.iy) } else { (&self.fx, &self.fy) };
        row.process(data);
        let mut t = vec![Complex64::default(); nx * ny];
        for j in 0..ny {
            for i in 0..nx {
                t[i * ny + j] = data[j * nx + i];
            }
        }
        col.process(&mut t);
        let scale = if inverse { 1.0 / (nx * ny) as f64 } else { 1.0 };
        for j in 0..ny {
            for i in 0..nx {
                data[j * nx + i] = t[i * ny + j] * scale;
            }
        }
    }

    fn forward(&self, u: &[f64]) -> Vec<Complex64> {
        let mut d: Vec<Complex64> = u.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        self.fft2(&mut d, false);
        d
    }

    fn physical(&self, uh: &[Complex64]) -> Vec<f64> {
        let mut d = uh.to_vec();
        self.fft2(&mut d, true);
        d.into_iter().map(|c| c.re).collect()
    }

    fn nonlinear(&self, uh: &[Complex64]) -> Vec<Complex64> {
        let u = self.physical(uh);
        let sq: Vec<f64> = u.iter().map(|v| v * v).collect();
        let w = self.forward(&sq);
        w.iter().zip(&self.nl).map(|(w, &c)| Complex64::new(0.0, c) * w).collect()
    }

    fn full_rhs(&self, uh: &[Complex64]) -> Vec<Complex64> {
        let mut r = self.nonlinear(uh);
        for ((r, u), &l) in r.iter_mut().zip(uh).zip(&self.lin) {
            *r += Complex64::new(0.0, l) * u;
        }
        r
    }

    fn etd_step(&self, uh: &[Complex64], c: &EtdCoefficients) -> Vec<Complex64> {
        let n = uh.len();
        let nu = self.nonlinear(uh);
        let a: Vec<Complex64> = (0..n).map(|i| c.e2[i] * uh[i] + c.q[i] * nu[i]).collect();
        let na = self.nonlinear(&a);
        let b: Vec<Complex64> = (0..n).map(|i| c.e2[i] * uh[i] + c.q[i] * na[i]).collect();
        let nb = self.nonlinear(&b);
        let cc: Vec<Complex64> = (0..n).map(|i| c.e2[i] * a[i] + c.q[i] * (nb[i] * 2.0 - nu[i])).collect();
        let nc = self.nonlinear(&cc);
        (0..n)
            .map(|i| c.e[i] * uh[i] + c.f1[i] * nu[i] + c.f2[i] * (na[i] + nb[i]) * 2.0 + c.f3[i] * nc[i])
            .collect()
    }

    fn step(&self, uh: &[Complex64], dt: f64, scheme: TimeScheme) -> Vec<Complex64> {
        let axpy = |x: &[Complex64], a: f64, y: &[Complex64]| -> Vec<Complex64> {
            x.iter().zip(y).map(|(x, y)| x + y * a).collect()
        };
        match scheme {
            TimeScheme::Rk4 => {
                let k1 = self.full_rhs(uh);
                let k2 = self.full_rhs(&axpy(uh, dt / 2.0, &k1));
                let k3 = self.full_rhs(&axpy(uh, dt / 2.0, &k2));
                let k4 = self.full_rhs(&axpy(uh, dt, &k3));
                (0..uh.len()).map(|i| uh[i] + (k1[i] + (k2[i] + k3[i]) * 2.0 + k4[i]) * (dt / 6.0)).collect()
            }
            TimeScheme::Etdrk4 => self.etd_step(uh, &EtdCoefficients::new(&self.lin, dt)),
            TimeScheme::IntegratingFactorRk4 => {
                let e2: Vec<Complex64> = self.lin.iter().map(|&l| Complex64::new(0.0, l * dt / 2.0).exp()).collect();
                let mul = |e: &[Complex64], v: &[Complex64]| -> Vec<Complex64> { e.iter().zip(v).map(|(e, v)| e * v).collect() };
                let k1 = self.nonlinear(uh);
                let k2 = self.nonlinear(&mul(&e2, &axpy(uh, dt / 2.0, &k1)));
                let e2u = mul(&e2, uh);
                let k3 = self.nonlinear(&axpy(&e2u, dt / 2.0, &k2));
                let eu = mul(&e2, &e2u);
                let k4 = self.nonlinear(&axpy(&eu, dt, &mul(&e2, &k3)));
                (0..uh.len())
                    .map(|i| {
                        let e = e2[i] * e2[i];
                        eu[i] + (e * k1[i] + e2[i] * (k2[i] + k3[i]) * 2.0 + k4[i]) * (dt / 6.0)
                    })
                    .collect()
            }
        }
    }

    fn rms(&self, uh: &[Complex64]) -> f64 {
        let n = (self.nx * self.ny) as f64;
        (uh.iter().map(|c| c.norm_sqr()).sum::<f64>()).sqrt() / n
    }
}

fn check_inputs(t_end: f64, dt: f64) -> Result<(), NumericsError> {
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(NumericsError::InvalidInput(format!("time step must be positive, got {dt}")));
    }
    if !(t_end >= 0.0 && t_end.is_finite()) {
        return Err(NumericsError::InvalidInput(format!("end time must be non-negative, got {t_end}")));
    }
    Ok(())
}

/// Evolve `initial` to `cfg.t_end`, recording snapshots.
pub fn integrate_with(initial: &Grid2D, p: SimParams, cfg: &IntegrateConfig) -> Result<SimRun, NumericsError> {
    check_inputs(cfg.t_end, cfg.dt)?;
    let sp = Spectral::new(initial, p)?;
    let stability = sp.stability(cfg.scheme, initial.max_abs());
    let steps = ((cfg.t_end / cfg.dt) - 1e-9).ceil().max(1.0) as usize;
    let dt = cfg.t_end / steps as f64;
    let snap_dt = if dt > 0.0 { dt } else { cfg.dt };
    let state = |values: Vec<f64>, time: f64| SimState {
        grid: Grid2D { values, ..initial.clone() },
        time,
        params: p,
        dt: snap_dt,
    };
    let intervals = cfg.snapshots.clamp(1, steps);
    let mut marks: Vec<usize> = (1..=intervals).map(|i| (i * steps) / intervals).collect();
    marks.dedup();
    let mut history = vec![state(initial.values.clone(), 0.0)];
    let mut uh = sp.forward(&initial.values);
    let mut next = 0;
    let etd = (cfg.scheme == TimeScheme::Etdrk4 && dt > 0.0).then(|| EtdCoefficients::new(&sp.lin, dt));
    for n in 1..=steps {
        if let Some(c) = &etd {
            uh = sp.etd_step(&uh, c);
        } else if dt > 0.0 {
            uh = sp.step(&uh, dt, cfg.scheme);
        }
        let time = n as f64 * dt;
        let norm = sp.rms(&uh);
        if !norm.is_finite() || norm > BLOW_UP {
            return Err(NumericsError::Instability { time, norm });
        }
        if next < marks.len() && marks[next] == n {
            history.push(state(sp.physical(&uh), time));
            next += 1;
        }
    }
    Ok(SimRun { history, stability, steps, dt: snap_dt, scheme: cfg.scheme })
}

/// Evolve `initial` to `t_end` with step `dt` (integrating-factor RK4) and
/// return the final state.
pub fn integrate(initial: &Grid2D, p: SimParams, t_end: f64, dt: f64) -> Result<SimState, NumericsError> {
    let run = integrate_with(initial, p, &IntegrateConfig::new(t_end, dt))?;
    Ok(run.history.into_iter().last().expect("non-empty history"))
}

/// Max difference between one step of size `dt` and two of size `dt/2`.
pub fn rk4_step_difference(initial: &Grid2D, p: SimParams, dt: f64, scheme: TimeScheme) -> Result<f64, NumericsError> {
    check_inputs(dt, dt)?;
    let sp = Spectral::new(initial, p)?;
    let uh = sp.forward(&initial.values);
    let one = sp.physical(&sp.step(&uh, dt, scheme));
    let two = sp.physical(&sp.step(&sp.step(&uh, dt / 2.0, scheme), dt / 2.0, scheme));
    Ok(one.iter().zip(&two).fold(0.0, |m, (a, b)| m.max((a - b).abs())))
}
